#!/usr/bin/env python3
"""Fit the n-exponent of bound-driven Trotter numbers at t = n.

Covers the scalable bound modes: the cluster bound for nearest-neighbor
orderings and the k-local counting bound for power-law chains.  Prints one
line per curve with the fitted slope.
"""

import argparse
import sys
import time

import numpy as np

from trotterkit.bounds import (
    CLUSTER,
    bound_trotter_number,
    comm_trotter_number,
    counting_bound_klocal,
    fourth_order_bound,
)
from trotterkit.hamiltonians import group_terms, heisenberg_chain, power_law_heisenberg, term_tensor


def cluster_r(h, t, eps):
    k = fourth_order_bound(h, 1.0, CLUSTER).value
    return bound_trotter_number(lambda dt: k * dt**5, t, eps)


def counting_r(n, alpha, eps):
    tensor = term_tensor(power_law_heisenberg(n, alpha=alpha, seed=1), k=2)
    return comm_trotter_number(counting_bound_klocal(tensor, 4), 4, float(n), eps)


def fit(ns, rs):
    return float(np.polyfit(np.log(ns), np.log(rs), 1)[0])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eps", type=float, default=1e-3)
    ap.add_argument("--nn-grid", default="10,16,23,32,45,64,91,128,181,256")
    ap.add_argument("--xyz-grid", default="10,23,52,115,256")
    args = ap.parse_args()
    eps = args.eps

    nn_grid = [int(v) for v in args.nn_grid.split(",")]
    t0 = time.time()
    rs = [cluster_r(group_terms(heisenberg_chain(n, seed=1), "even-odd"), float(n), eps) for n in nn_grid]
    print(f"even-odd cluster bound: slope {fit(nn_grid, rs):.3f} over {nn_grid} ({time.time()-t0:.0f}s)")

    xyz_grid = [int(v) for v in args.xyz_grid.split(",")]
    t0 = time.time()
    rs = [cluster_r(group_terms(heisenberg_chain(n, seed=1), "x-y-z"), float(n), eps) for n in xyz_grid]
    print(f"x-y-z cluster bound:    slope {fit(xyz_grid, rs):.3f} over {xyz_grid} ({time.time()-t0:.0f}s)")

    for alpha in (0.0, 4.0):
        t0 = time.time()
        rs = [counting_r(n, alpha, eps) for n in nn_grid]
        print(
            f"alpha={alpha:g} counting bound: slope {fit(nn_grid, rs):.3f} "
            f"over {nn_grid} ({time.time()-t0:.0f}s)"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
