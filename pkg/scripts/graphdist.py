"""Run the graphdist command line from a source checkout.

Usage:
    python scripts/graphdist.py compare er.txt sbm.txt --undirected
    python scripts/graphdist.py reproduce t2 --seed 7 --out results/t2.csv
"""

import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())
