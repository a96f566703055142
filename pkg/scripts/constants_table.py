#!/usr/bin/env python3
"""Print the envelope-constant table (Bernoulli extrema vs zeta values).

Example:
    python scripts/constants_table.py --nmax 10
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from hyperell.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nmax", type=int, default=10)
    args = parser.parse_args()
    return cli_main(["constants", "--nmax", str(args.nmax)])


if __name__ == "__main__":
    sys.exit(main())
