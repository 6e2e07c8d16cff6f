"""Worst-case loss against one parameter at a time (S, B, n and the rest).

Each sweep is a 20-point grid around the suggestion regime; prints the
direction of each column and writes loss_<param>.csv.
"""

import argparse
from pathlib import Path

import numpy as np

from announcegame import SUGGESTION_REGIME
from announcegame.io import write_csv
from announcegame.sweep import COLUMNS, SweepSpec, run_sweep

SWEEPS = {
    "S": (100.0, 400.0),
    "B": (10.0, 200.0),
    "n": (2, 21),
    "C": (0.5, 4.0),
    "delta": (0.3, 1.0),
    "V": (100.0, 1000.0),
    "f_p": (0.1, 1.0),
    "T": (1.0, 20.0),
}


def direction(y):
    d = np.diff(y)
    if (d > 0).all():
        return "increasing"
    if (d < 0).all():
        return "decreasing"
    return "not monotone"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--steps", type=int, default=20)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, (lo, hi) in SWEEPS.items():
        rows = run_sweep(SUGGESTION_REGIME, SweepSpec(name, lo, hi, args.steps))
        write_csv(out / f"loss_{name}.csv", COLUMNS, rows)
        y = np.array([r["y"] for r in rows])
        flagged = sum(1 for r in rows if r["violates_assumptions"])
        print(f"{name:>6}: {direction(y):<13} L from {y[0]:.6f} to {y[-1]:.6f}"
              + (f"  ({flagged} flagged)" if flagged else ""))


if __name__ == "__main__":
    main()
