#!/usr/bin/env python3
"""Reproduce the benchmark tables: empirical Trotter numbers against the
fourth-order bound for the Heisenberg chain (both orderings) and the
power-law chain (alpha = 0 and 4), five seeded instances each at n = 10,
t = n, eps = 1e-3.

Writes one CSV per case into --outdir (default ./benchmarks).  Expect a
couple of minutes for the nearest-neighbor cases and tens of minutes for
the power-law ones on a laptop.
"""

import argparse
import pathlib
import subprocess
import sys

CASES = [
    # (name, extra CLI flags)
    ("heisenberg_nn_even_odd", ["--model", "heisenberg-nn", "--ordering", "even-odd",
                                "--bound-mode", "cluster"]),
    ("heisenberg_nn_x_y_z", ["--model", "heisenberg-nn", "--ordering", "x-y-z",
                             "--bound-mode", "cluster"]),
    ("heisenberg_pl_alpha0", ["--model", "heisenberg-pl", "--alpha", "0", "--ordering", "x-y-z",
                              "--bound-mode", "dense"]),
    ("heisenberg_pl_alpha4", ["--model", "heisenberg-pl", "--alpha", "4", "--ordering", "x-y-z",
                              "--bound-mode", "dense"]),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", default="10")
    ap.add_argument("--instances", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--eps", type=float, default=1e-3)
    ap.add_argument("--outdir", default="benchmarks")
    ap.add_argument("--quantities", default="empirical,bound")
    args = ap.parse_args()

    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, flags in CASES:
        out = outdir / f"{name}.csv"
        cmd = [
            sys.executable, "-m", "trotterkit.cli", "bench",
            "--n", args.n, "--t-rule", "t=n", "--eps", str(args.eps),
            "--instances", str(args.instances), "--seed", str(args.seed),
            "--order", "4", "--quantities", args.quantities,
            "--out", str(out), *flags,
        ]
        print("+", " ".join(cmd), flush=True)
        subprocess.run(cmd, check=True)
        print(out.read_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
