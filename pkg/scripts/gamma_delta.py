"""Gamma_m and Delta_m for m = 1..M at fixed A (default 0.7)."""

import argparse
from pathlib import Path

from announcegame import Delta_m, Gamma_m
from announcegame.io import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--A", type=float, default=0.7)
    ap.add_argument("--m-max", type=int, default=20)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()
    rows = [{"m": m, "Gamma_m": Gamma_m(args.A, m), "Delta_m": Delta_m(args.A, m)}
            for m in range(1, args.m_max + 1)]
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / f"gamma_delta_A{args.A:g}.csv", ("m", "Gamma_m", "Delta_m"), rows)
    for r in rows:
        print(f"m={r['m']:>3}  Gamma={r['Gamma_m']:.6f}  Delta={r['Delta_m']:.6f}  "
              f"gap={r['Delta_m'] - r['Gamma_m']:+.2e}")


if __name__ == "__main__":
    main()
