#!/usr/bin/env python3
"""Run a full-ensemble scan and write the CSV plus its manifest.

Example:
    python scripts/run_ensemble_scan.py --q 3 --d 5 --out h5_scan.csv
    HYPERELL_THREADS=8 python scripts/run_ensemble_scan.py --q 3 --d 7 --out h7_scan.csv
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hyperell.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--q", type=int, default=3)
    parser.add_argument("--d", type=int, default=5)
    parser.add_argument("--sample", type=str, default="all")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--grid", type=int, default=2**14)
    parser.add_argument("--out", type=str, default="scan.csv")
    args = parser.parse_args()
    return cli_main(
        [
            "scan",
            "--q", str(args.q),
            "--d", str(args.d),
            "--sample", args.sample,
            "--seed", str(args.seed),
            "--grid", str(args.grid),
            "--out", args.out,
        ]
    )


if __name__ == "__main__":
    sys.exit(main())
