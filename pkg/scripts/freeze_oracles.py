"""Run the brute-force oracles in tests/oracles.py and freeze their outputs.

    python3 scripts/freeze_oracles.py   # rewrites tests/data/frozen_oracles.json

The frozen file is committed; tests compare both the library and the oracles to it,
so a drift in either side shows up as a failure.
"""

from __future__ import annotations

import itertools
import json
import math
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
import oracles as O  # noqa: E402

OUT = ROOT / "tests" / "data" / "frozen_oracles.json"


def random_unimodular(rng: np.random.Generator, n: int, steps: int = 8) -> list[list[int]]:
    m = np.eye(n, dtype=np.int64)
    for _ in range(steps):
        k, l = rng.choice(n, size=2, replace=False)
        m[k] += int(rng.integers(-2, 3)) * m[l]
    if rng.random() < 0.5:
        m[[0, 1]] = m[[1, 0]]
    return m.tolist()


def random_letters(rng: np.random.Generator, n: int, length: int):
    out = []
    for _ in range(length):
        power = int(rng.choice([-3, -2, -1, 1, 2, 3]))
        if rng.random() < 0.7:
            out.append(("U", (int(rng.integers(1, n + 1)),), power))
        else:
            i, j = sorted(rng.choice(np.arange(1, n + 1), size=2, replace=False).tolist())
            out.append(("V", (i, j), power))
    return out


def main() -> None:
    rng = np.random.default_rng(20240611)
    frozen: dict = {}

    gl = O.bounded_unimodular(2, 4)
    sl = gl[np.rint(np.linalg.det(gl)) == 1]
    frozen["orbit_classes"] = {
        f"2x{c}": {"gl": int(len(set(O.orbit_labels(2, c, 2, gl)))),
                   "sl": int(len(set(O.orbit_labels(2, c, 2, sl))))}
        for c in (2, 3)
    }

    cases = []
    for _ in range(25):
        r, c = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        rows = rng.integers(-6, 7, size=(r, c))
        if rng.random() < 0.3 and r > 1:
            rows[-1] = 2 * rows[0]
        rows = rows.tolist()
        case = {"rows": rows, "invariant_factors": O.invariant_factors(rows)}
        if r == c:
            case["det"] = O.leibniz_det(rows)
        cases.append(case)
    frozen["snf"] = cases

    sub4 = O.subsets(4)
    frozen["wedge4"] = [[list(j), list(k), *(lambda s, u: [s, list(u)])(*O.wedge_basis(j, k))]
                        for j in sub4 for k in sub4]

    words = []
    for _ in range(30):
        n = int(rng.integers(2, 6))
        letters = random_letters(rng, n, int(rng.integers(0, 13)))
        m, v = O.heis_fold(n, letters)
        words.append({"n": n, "word": O.word_text(letters),
                      "central": [[i + 1, j + 1, int(m[i, j])] for i in range(n) for j in range(i + 1, n)
                                  if m[i, j]],
                      "vector": v.tolist()})
    frozen["heisenberg_words"] = words

    mono = []
    for _ in range(8):
        e = rng.integers(-3, 4, size=6).tolist()
        mono.append({"n": 4, "exponents": e, "matrix": O.monodromy_exp(4, e).astype(int).tolist()})
    frozen["monodromy4"] = mono

    lam = []
    for n in (3, 4):
        for _ in range(5):
            twist_mat = random_unimodular(rng, n)
            lam.append({"twist_mat": twist_mat, "lambda2": O.lambda2_minors(twist_mat)})
    frozen["lambda2"] = lam

    loops = []
    for k, num in [(0, 16), (1, 64), (-2, 128), (3, 50), (5, 31)]:
        t = np.arange(num) / num
        z = np.exp(2j * math.pi * k * t)
        loops.append({"k": k, "num": num, "winding": O.unwrap_winding(z)})
    frozen["loops"] = loops

    OUT.write_text(json.dumps(frozen, sort_keys=True, indent=1) + "\n")
    print(f"wrote {OUT.relative_to(ROOT)}")


if __name__ == "__main__":
    main()
