"""Maximal-violation points (beta, delta) of the singlet for a sweep of tilts.

Each row is one extremum; the + and - series both lie on delta = pi - beta (mod pi).
"""
import argparse
import math
import sys

import numpy as np

from multimode_bell import chsh
from multimode_bell._io import csv_text
from multimode_bell.twophoton import bell_density


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--state", type=int, default=4)
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--theta-max", type=float, default=1.4)
    ap.add_argument("--out")
    args = ap.parse_args()
    rows = []
    for t in np.linspace(0.0, args.theta_max, args.n):
        for e in chsh.optimize_settings(bell_density(args.state), t):
            rows.append([t, e.beta, e.delta, e.value, chsh._circ_dist(e.beta + e.delta, math.pi)])
    text = csv_text(["theta", "beta", "delta", "value", "locus_offset"], rows)
    (open(args.out, "w", newline="\n") if args.out else sys.stdout).write(text)


if __name__ == "__main__":
    main()
