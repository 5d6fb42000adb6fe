#!/usr/bin/env python3
"""Compare the analytic excitation gap against exact diagonalization.

Prints the relative deviation across both phases at moderate Omega/omega,
where the closed forms hold only to leading order in omega/Omega.  In the
superradiant phase the physical gap is the second excitation energy because
the lowest pair collapses into a parity doublet.
"""

import argparse

import numpy as np

from rabikzm import ModelParams, analytics, solver


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--lam", type=float, default=1.0)
    ap.add_argument("--Omega", type=float, default=50.0)
    ap.add_argument("--eps", type=float, nargs="+",
                    default=[0.5, 0.3, 0.2, 0.1])
    args = ap.parse_args()

    g_c = analytics.critical_coupling(args.lam)
    print(f"lambda={args.lam:g}  Omega={args.Omega:g}")
    print(f"{'side':>6} {'eps':>6} {'analytic':>10} {'ED':>10} {'rel dev':>9}")
    for side, sign in (("below", -1.0), ("above", +1.0)):
        for eps in args.eps:
            params = ModelParams(lam=args.lam, g_tilde=(1.0 + sign * eps) * g_c,
                                 Omega=args.Omega)
            analytic = analytics.excitation_gap(params)
            ed = solver.spectrum(params).gap_physical
            dev = abs(ed - analytic) / analytic
            print(f"{side:>6} {eps:6.3f} {analytic:10.5f} {ed:10.5f} {dev:9.2%}")


if __name__ == "__main__":
    main()
