"""beta, alpha1, alpha2 of the asymmetric roots against R, one curve per k.

Writes asym_m10.csv and asym_m11.csv (n = 15) into --out-dir.
"""

import argparse
from pathlib import Path

import numpy as np

from announcegame import REFERENCE
from announcegame.asymmetric import SWEEP_COLUMNS, sweep_k
from announcegame.io import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--n", type=int, default=15)
    ap.add_argument("--R-from", type=float, default=0.64)
    ap.add_argument("--R-to", type=float, default=0.68)
    ap.add_argument("--steps", type=int, default=81)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(args.R_from, args.R_to, args.steps)
    for m in (10, 11):
        rows, _ = sweep_k(REFERENCE, args.n, m, grid)
        write_csv(out / f"asym_m{m}.csv", SWEEP_COLUMNS, rows)
        for k in sorted({r["k"] for r in rows}):
            ks = [r for r in rows if r["k"] == k]
            print(f"m={m} k={k}: {len(ks):3d} roots, R in [{ks[0]['R']:.4f}, {ks[-1]['R']:.4f}], "
                  f"beta in [{min(r['beta'] for r in ks):.5f}, {max(r['beta'] for r in ks):.5f}]")


if __name__ == "__main__":
    main()
