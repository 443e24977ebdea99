"""Best CHSH value of the singlet when photon B is detected over several tilts at once.

Row k uses the first k tilts with equal weights; the last column shows the
gap to the Tsirelson bound.
"""
import argparse
import math
import sys

from multimode_bell import chsh
from multimode_bell._io import csv_text


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--tilts-deg", default="0,20,40,60,80", help="comma separated tilts in degrees")
    ap.add_argument("--state", type=int, default=4)
    ap.add_argument("--out")
    args = ap.parse_args()
    tilts = [math.radians(float(x)) for x in args.tilts_deg.split(",")]
    rows = []
    for k in range(1, len(tilts) + 1):
        best, (beta, delta) = chsh.degradation_curve(args.state, tilts[:k])
        rows.append([k, math.degrees(tilts[k - 1]), best, beta, delta, chsh.TSIRELSON - best])
    text = csv_text(["n_tilts", "last_tilt_deg", "max_abs_B", "beta", "delta", "gap"], rows)
    (open(args.out, "w", newline="\n") if args.out else sys.stdout).write(text)


if __name__ == "__main__":
    main()
