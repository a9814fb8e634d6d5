"""Classical versus augmented iteration on a sequence that is only almost effective."""

import argparse

import numpy as np

from kaczmarz.classic import almost_effective_bound
from kaczmarz.constructors import run_augmented, synthesis_dual_from_almost_effective
from kaczmarz.fixtures import plane_sequence


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=np.pi / 4, help="tilt of the missed direction")
    ap.add_argument("--periods", type=int, default=60)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    e = plane_sequence(args.alpha, args.periods)
    K = len(e)
    bound = almost_effective_bound(e, K)
    print(f"lower frame bound of the auxiliary section: A = {bound.A:.6f} (cos^2 alpha = {np.cos(args.alpha) ** 2:.6f})")

    x = np.random.default_rng(args.seed).standard_normal(3)
    run = run_augmented(e, synthesis_dual_from_almost_effective(e, K), x, K)
    classic = run.classic_trace.error_norms
    augmented = run.augmented_trace.error_norms
    print(f"{'step':>5} {'classic':>12} {'augmented':>12}")
    for n in sorted({0, 1, 2, 3, 10, 30, K // 2, K - 1}):
        print(f"{n:5d} {classic[n]:12.4e} {augmented[n]:12.4e}")
    print(f"identity defect {run.identity_defect:.1e}")


if __name__ == "__main__":
    main()
