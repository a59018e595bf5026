"""Print the rank-2 and rank-3 monodromy blocks and compare with the closed forms.

    python3 scripts/golden_matrices.py [--range 3]
"""

import argparse
import itertools

from nctbundles.cli import GOLDEN_N2_EVEN, golden_n3
from nctbundles.exterior import BasisOrder
from nctbundles.monodromy import basic_generator, from_exponents


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--range", type=int, default=3, help="exponents run over [-R, R]^3")
    args = ap.parse_args()

    g = basic_generator(2, (1, 2))
    print("rank 2, even block on ([1], e1^e2):", g.even.tolist(), "expected", GOLDEN_N2_EVEN)
    print("rank 2, odd block:", g.odd.tolist())

    r = range(-args.range, args.range + 1)
    mismatches = 0
    for w12, w23, w13 in itertools.product(r, repeat=3):
        m = from_exponents(3, [w12, w13, w23], BasisOrder.GRADED_DIM3)
        even, odd = golden_n3(w12, w23, w13)
        mismatches += (m.even.tolist() != even) + (m.odd.tolist() != odd)
    m = from_exponents(3, [1, 2, 3], BasisOrder.GRADED_DIM3)
    print("rank 3, (w12, w13, w23) = (1, 2, 3):")
    print("  even basis (1, e12, e23, e13):", m.even.tolist())
    print("  odd basis (e1, e2, e3, e123): ", m.odd.tolist())
    print(f"{len(r) ** 3} exponent triples checked, {mismatches} mismatched blocks")


if __name__ == "__main__":
    main()
