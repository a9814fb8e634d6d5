"""Perturb an orthonormal basis and summarise classical versus pair radii.

The classical radius grows with the perturbation, while the pair built from
the same perturbation keeps the radius of the unperturbed basis.
"""

import argparse
from collections import defaultdict

import numpy as np

from kaczmarz import io
from kaczmarz.cli import sweep_rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=4)
    ap.add_argument("--deltas", default="0,0.05,0.1,0.2,0.4,0.8")
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", default=None, help="optional path for the raw rows")
    args = ap.parse_args()

    cfg = io.parse_config({"dimension": args.dim, "e": np.eye(args.dim).tolist(), "seed": args.seed})
    rows = sweep_rows(cfg, io.parse_grid(args.deltas), args.trials)
    if args.csv:
        io.write_sweep_csv(rows, args.csv)

    by_delta = defaultdict(list)
    for delta, _, classic, pair in rows:
        by_delta[delta].append((classic, pair))
    print(f"{'delta':>6} {'classic mean':>13} {'classic max':>12} {'pair max':>10}")
    for delta in sorted(by_delta):
        c = np.array(by_delta[delta])
        print(f"{delta:6.2f} {c[:, 0].mean():13.4f} {c[:, 0].max():12.4f} {c[:, 1].max():10.2e}")


if __name__ == "__main__":
    main()
