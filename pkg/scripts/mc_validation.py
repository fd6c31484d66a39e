"""Monte Carlo check of the twinned-pair closed forms on random direction pairs.

    python scripts/mc_validation.py --pairs 20 --shots 1000000 --seed 0
"""
import argparse

import numpy as np

from noclone.geometry import unit
from noclone.montecarlo import SIGMA_BAND, SampleConfig, estimate_joint


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=20)
    ap.add_argument("--shots", type=int, default=10**6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--sigma-band", type=float, default=SIGMA_BAND)
    args = ap.parse_args()

    directions = np.random.default_rng(args.seed)
    flagged = 0
    print(f"{'pair':>4} {'u.v':>8} " + " ".join(f"{'z' + c:>8}" for c in ("00", "01", "10", "11")))
    for k in range(args.pairs):
        u = unit(*directions.normal(size=3))
        v = unit(*directions.normal(size=3))
        est = estimate_joint(u, v, SampleConfig(seed=args.seed * 1000 + k, shots=args.shots))
        zs = [est.z_scores[c] for c in ("00", "01", "10", "11")]
        ok = est.within_band(args.sigma_band)
        flagged += not ok
        print(f"{k:>4} {u.dot(v):>8.4f} " + " ".join(f"{z:>8.3f}" for z in zs) + ("" if ok else "  <-"))
    print(f"{flagged} of {args.pairs} pairs outside {args.sigma_band} sigma")


if __name__ == "__main__":
    main()
