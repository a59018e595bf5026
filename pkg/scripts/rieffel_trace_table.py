"""Trace and projection defect of the represented Rieffel projection over p/q.

    python3 scripts/rieffel_trace_table.py --q-max 12 --degrees 8 16 32 64 [--ramp linear]

Writes CSV to stdout: one row per (p/q, degree).
"""

import argparse
import csv
import math
import sys
from fractions import Fraction

import numpy as np

from nctbundles.nctorus import RAMPS, normalized_trace, projection_defect, represent, rieffel_projection


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q-max", type=int, default=12)
    ap.add_argument("--degrees", type=int, nargs="+", default=[8, 16, 32, 64])
    ap.add_argument("--ramp", choices=RAMPS, default="smooth")
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["theta", "degree", "trace_error", "projection_defect", "max_eig_distance"])
    for q in range(2, args.q_max + 1):
        for p in range(1, q):
            if math.gcd(p, q) != 1:
                continue
            theta = Fraction(p, q)
            for deg in args.degrees:
                mat = represent(rieffel_projection(theta, degree=deg, ramp=args.ramp))
                ev = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
                dist = np.max(np.minimum(np.abs(ev), np.abs(ev - 1)))
                out.writerow([str(theta), deg, f"{abs(normalized_trace(mat) - p / q):.3e}",
                              f"{projection_defect(mat):.3e}", f"{dist:.3e}"])


if __name__ == "__main__":
    main()
