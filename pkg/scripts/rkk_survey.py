"""Tally compare_rkk verdicts over random pairs of winding matrices.

    python3 scripts/rkk_survey.py --n 3 --base 3 --bound 2 --samples 2000 --seed 0

For n = 3 this measures how often two random winding matrices land in the same
GL_3(Z) orbit but different SL_3(Z) orbits (the IsomorphicKBundlesOnly gap).
"""

import argparse
import collections
import random

from nctbundles.bundles import BundleDescriptor, compare_rkk, twist
from nctbundles.intmat import IntMatrix
from nctbundles.monodromy import num_pairs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--base", type=int, default=3)
    ap.add_argument("--bound", type=int, default=2)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    rows = num_pairs(args.n)

    def draw() -> BundleDescriptor:
        data = [[rng.randint(-args.bound, args.bound) for _ in range(args.base)] for _ in range(rows)]
        return BundleDescriptor.make(args.n, IntMatrix.from_rows(data, args.base))

    tally = collections.Counter()
    for _ in range(args.samples):
        d1 = draw()
        # half the pairs are related by a sign flip on one coordinate of the pair lattice
        if rng.random() < 0.5:
            flip = IntMatrix.diag([1] * (rows - 1) + [-1])
            d2 = BundleDescriptor.make(args.n, flip @ d1.winding)
            if rng.random() < 0.5:
                d2 = twist(d2, IntMatrix.elementary(args.n, 1, 2, rng.choice([-1, 1])))
        else:
            d2 = draw()
        tally[compare_rkk(d1, d2).verdict.value] += 1
    for verdict, count in sorted(tally.items()):
        print(f"{verdict:24s} {count:6d}  ({count / args.samples:.1%})")


if __name__ == "__main__":
    main()
