"""Monte Carlo of the one-validator verifier equilibrium against the oracle."""

import argparse
import time

from announcegame import REFERENCE, compare_to_theory, simulate, single_validator_equilibria


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rounds", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    eq = single_validator_equilibria(REFERENCE)[0]
    t0 = time.perf_counter()
    rep = simulate(REFERENCE, eq.profile, args.rounds, args.seed, workers=args.workers)
    dt = time.perf_counter() - t0
    cmp = compare_to_theory(rep, REFERENCE, eq.profile)
    for k, z in cmp.z_scores.items():
        print(f"{k:<30} target={cmp.targets[k]:>10.5f} z={z:+.2f}")
    print(f"{args.rounds} rounds in {dt:.2f}s: {'pass' if cmp.passed else 'FAIL'}")


if __name__ == "__main__":
    main()
