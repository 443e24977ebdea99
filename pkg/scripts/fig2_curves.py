"""CHSH value versus tilt with analyzers fixed at their normal-incidence optimum.

Writes theta,B1,B2,B3,B4 (closed form) and the numeric Tr(rho B) for the even states.
"""
import argparse
import math
import sys

import numpy as np

from multimode_bell import chsh
from multimode_bell._io import csv_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--out")
    args = ap.parse_args()
    rows = []
    for t in np.linspace(0.0, math.pi / 2, args.n):
        closed = [chsh.closed_form_b(t, i) for i in (1, 2, 3, 4)]
        rows.append([t, *closed, chsh.fixed_angle_value(2, t), chsh.fixed_angle_value(4, t)])
    text = csv_text(["theta", "B1", "B2", "B3", "B4", "B2_numeric", "B4_numeric"], rows)
    (open(args.out, "w", newline="\n") if args.out else sys.stdout).write(text)


if __name__ == "__main__":
    main()
