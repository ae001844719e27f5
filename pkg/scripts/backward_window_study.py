#!/usr/bin/env python3
"""Backward-dual window statistics against their asymptotic brackets.

For a grid of window constants C, runs an ensemble of genealogy replicates,
evaluates the rescaled counts G/k and H/k at k = C n^beta, and prints them
next to the bracket [2z/C^z (1 - xi/(8z C^z)), 2z/C^z] plus the source-hit
total against its upper estimate.
"""

import argparse

import numpy as np

from pacsim.core import SimConfig, run_forward
from pacsim.distributions import RDistribution, model_constants
from pacsim.genealogy import backward_dual


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--r", type=int, default=3, help="deterministic candidate count")
    ap.add_argument("--windows", type=float, nargs="+", default=[13.0, 16.0, 20.0])
    args = ap.parse_args()

    R = RDistribution.deterministic(args.r)
    consts = model_constants(R)
    if consts.xi is None:
        raise SystemExit("window study needs E[R] > 2")
    z, xi, beta = consts.zeta, consts.xi, consts.beta

    duals = []
    for rep in range(args.reps):
        tr = run_forward(SimConfig(n=args.n, R=R, seed=args.seed + rep,
                                   record_genealogy=True))
        duals.append(backward_dual(tr, args.n))

    print(f"n={args.n} reps={args.reps} zeta={z} xi={xi} beta={beta:.4f}")
    print("C, k, mean G/k, mean H/k, bracket_lo, bracket_hi, "
          "mean N[k:n], N_bound")
    for C in args.windows:
        k = round(C * args.n**beta)
        gk = np.array([d.G[k] / k for d in duals])
        hk = np.array([d.H[k] / k for d in duals])
        ns = np.array([d.N[k:].sum() for d in duals], dtype=float)
        hi = 2 * z / C**z
        lo = hi * (1 - xi / (8 * z * C**z))
        nb = args.n**beta / (beta * C ** (z - 1))
        print(f"{C:5.1f}, {k:6d}, {gk.mean():.4f}, {hk.mean():.4f}, "
              f"{lo:.4f}, {hi:.4f}, {ns.mean():8.1f}, {nb:8.1f}")


if __name__ == "__main__":
    main()
