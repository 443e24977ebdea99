"""Optimal polarizer angle beta (delta = pi - beta) versus tilt for all four Bell states, mod pi."""
import argparse
import math
import sys

import numpy as np

from multimode_bell import chsh
from multimode_bell._io import csv_text
from multimode_bell.twophoton import bell_density


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=15)
    ap.add_argument("--theta-max", type=float, default=1.4)
    ap.add_argument("--numeric", action="store_true", help="also run the optimizer at every point")
    ap.add_argument("--out")
    args = ap.parse_args()
    header = ["theta"] + [f"beta{i}" for i in (1, 2, 3, 4)]
    if args.numeric:
        header += [f"beta{i}_numeric" for i in (1, 2, 3, 4)]
    rows = []
    for t in np.linspace(0.0, args.theta_max, args.n):
        row = [t] + [chsh._wrap(chsh.beta_optimal(t, i)) for i in (1, 2, 3, 4)]
        if args.numeric:
            row += [chsh.best_extremum(chsh.optimize_settings(bell_density(i), t), sign=+1).beta for i in (1, 2, 3, 4)]
        rows.append(row)
    text = csv_text(header, rows)
    (open(args.out, "w", newline="\n") if args.out else sys.stdout).write(text)


if __name__ == "__main__":
    main()
