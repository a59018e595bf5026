"""Exact arithmetic in the representation group H_n = Z_n x Z^n of Z^n.

Z_n, the strictly upper-triangular integer matrices, is stored as a vector over
pairs (i, j), i < j, in lexicographic order.  The product is

    (M, m) . (K, l) = (M + K + pair_product(m, l), m + l),    pair_product(m, l)_{ij} = l_i m_j  (i < j only)

Generators: x_i = U(i) = (0, f_i) and y_{i,j} = V(i,j) = (e_{i,j}, 0).  With this
law, x_j x_i = y_{i,j} x_i x_j for i < j (see ``COMMUTATION_RELATION``).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .intmat import (Elementary, IntMatrix, Permutation, UnimodularFactorization,
                     factor_unimodular, inverse)
from .monodromy import num_pairs, pairs

COMMUTATION_RELATION = "x_j x_i = y_ij x_i x_j  (i < j)"


class RankMismatch(ValueError):
    pass


def _pair_pos(n: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(pairs(n))}


def pair_product(m: Sequence[int], l: Sequence[int]) -> tuple[int, ...]:
    """pair_product(m, l)_{ij} = l_i m_j restricted to i < j, as a pair vector."""
    n = len(m)
    return tuple(l[i - 1] * m[j - 1] for i, j in pairs(n))


@dataclass(frozen=True)
class HeisenbergElement:
    n: int
    central: tuple[int, ...]
    vector: tuple[int, ...]

    def __post_init__(self):
        if len(self.central) != num_pairs(self.n) or len(self.vector) != self.n:
            raise ValueError(f"malformed element of H_{self.n}")

    @classmethod
    def identity(cls, n: int) -> HeisenbergElement:
        return cls(n, (0,) * num_pairs(n), (0,) * n)

    @classmethod
    def x(cls, n: int, i: int) -> HeisenbergElement:
        if not 1 <= i <= n:
            raise IndexError(f"U{i} out of range for n={n}")
        return cls(n, (0,) * num_pairs(n), tuple(int(k == i - 1) for k in range(n)))

    @classmethod
    def y(cls, n: int, i: int, j: int) -> HeisenbergElement:
        if not 1 <= i < j <= n:
            raise IndexError(f"V{i},{j} out of range for n={n}")
        pos = _pair_pos(n)[(i, j)]
        return cls(n, tuple(int(k == pos) for k in range(num_pairs(n))), (0,) * n)

    @classmethod
    def from_upper(cls, m: Sequence[Sequence[int]], vector: Sequence[int]) -> HeisenbergElement:
        n = len(vector)
        if any(m[i][j] for i in range(n) for j in range(i + 1)):
            raise ValueError("central part must be strictly upper triangular")
        return cls(n, tuple(m[i - 1][j - 1] for i, j in pairs(n)), tuple(vector))

    def central_matrix(self) -> list[list[int]]:
        out = [[0] * self.n for _ in range(self.n)]
        for (i, j), c in zip(pairs(self.n), self.central):
            out[i - 1][j - 1] = c
        return out

    def is_central(self) -> bool:
        return not any(self.vector)

    def __mul__(self, other: HeisenbergElement) -> HeisenbergElement:
        return multiply(self, other)

    def inverse(self) -> HeisenbergElement:
        # (M, m)^-1 = (-M + pair_product(m, m), -m)
        e = pair_product(self.vector, self.vector)
        return HeisenbergElement(self.n, tuple(-c + d for c, d in zip(self.central, e)),
                                 tuple(-v for v in self.vector))

    def __pow__(self, k: int) -> HeisenbergElement:
        base = self if k >= 0 else self.inverse()
        out = HeisenbergElement.identity(self.n)
        for _ in range(abs(k)):
            out = out * base
        return out

    def to_json(self) -> dict:
        return {"n": self.n,
                "central": [[i, j, c] for (i, j), c in zip(pairs(self.n), self.central) if c],
                "vector": list(self.vector)}

    @classmethod
    def from_json(cls, obj: dict) -> HeisenbergElement:
        n = int(obj["n"])
        pos = _pair_pos(n)
        central = [0] * num_pairs(n)
        for i, j, c in obj["central"]:
            if (i, j) not in pos:
                raise ValueError(f"central entry ({i}, {j}) is not above the diagonal")
            central[pos[(i, j)]] += c
        return cls(n, tuple(central), tuple(int(v) for v in obj["vector"]))


def multiply(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    if a.n != b.n:
        raise RankMismatch(f"H_{a.n} vs H_{b.n}")
    e = pair_product(a.vector, b.vector)
    return HeisenbergElement(a.n,
                             tuple(p + q + r for p, q, r in zip(a.central, b.central, e)),
                             tuple(p + q for p, q in zip(a.vector, b.vector)))


def commutator(a: HeisenbergElement, b: HeisenbergElement) -> HeisenbergElement:
    """a b a^-1 b^-1."""
    return a * b * a.inverse() * b.inverse()


# --- words ---------------------------------------------------------------------

@dataclass(frozen=True)
class Letter:
    kind: str          # "U" or "V"
    index: tuple[int, ...]
    power: int = 1

    def __str__(self) -> str:
        idx = ",".join(map(str, self.index))
        return f"{self.kind}{idx}" + (f"^{self.power}" if self.power != 1 else "")


@dataclass(frozen=True)
class GeneratorWord:
    letters: tuple[Letter, ...] = field(default=())

    def __str__(self) -> str:
        return " ".join(map(str, self.letters))

    def max_index(self) -> int:
        return max((max(l.index) for l in self.letters), default=1)

    def check(self, n: int) -> None:
        for l in self.letters:
            if l.kind == "U" and not 1 <= l.index[0] <= n:
                raise IndexError(f"{l} out of range for n={n}")
            if l.kind == "V" and not 1 <= l.index[0] < l.index[1] <= n:
                raise IndexError(f"{l} needs 1 <= i < j <= {n}")


_TOKEN = re.compile(r"^(?:U(\d+)|V(\d+),(\d+))(?:\^(-?\d+))?$")


def parse_word(text: str) -> GeneratorWord:
    """Parse ``"U1 U2 U1^-1 V1,2^3"``."""
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"cannot parse generator token {tok!r}")
        power = int(m.group(4)) if m.group(4) is not None else 1
        if m.group(1) is not None:
            letters.append(Letter("U", (int(m.group(1)),), power))
        else:
            letters.append(Letter("V", (int(m.group(2)), int(m.group(3))), power))
    return GeneratorWord(tuple(letters))


def letter_element(n: int, letter: Letter) -> HeisenbergElement:
    g = HeisenbergElement.x(n, *letter.index) if letter.kind == "U" else HeisenbergElement.y(n, *letter.index)
    return g ** letter.power


def normal_form(word: GeneratorWord, n: int | None = None) -> HeisenbergElement:
    """Evaluate a word as y^C x_1^{k_1} ... x_n^{k_n}.

    Since pair_product is bilinear, a product of x-letters with degree vectors a_1, ..., a_r
    has central part sum_{s<t} pair_product(a_s, a_t); V-letters are central and just add.
    """
    n = word.max_index() if n is None else n
    word.check(n)
    central = [0] * num_pairs(n)
    pos = _pair_pos(n)
    degrees: list[list[int]] = []
    for l in word.letters:
        if l.kind == "V":
            central[pos[l.index]] += l.power
        else:
            a = [0] * n
            a[l.index[0] - 1] = l.power
            degrees.append(a)
    running = [0] * n
    for a in degrees:
        for k, c in enumerate(pair_product(running, a)):
            central[k] += c
        running = [r + x for r, x in zip(running, a)]
    # x_i^k itself is (0, k f_i): pair_product(f_i, f_i) vanishes above the diagonal
    return HeisenbergElement(n, tuple(central), tuple(running))


def to_word(g: HeisenbergElement) -> GeneratorWord:
    """Normal-ordered word y^C x_1^{k_1} ... x_n^{k_n} representing g."""
    letters = [Letter("V", p, c) for p, c in zip(pairs(g.n), g.central) if c]
    letters += [Letter("U", (i + 1,), k) for i, k in enumerate(g.vector) if k]
    return GeneratorWord(tuple(letters))


# --- transgression cocycle ------------------------------------------------------

def cocycle_exponent(theta: Sequence[Sequence], a: Sequence[int], b: Sequence[int]):
    """<Theta a, b> = sum_{i<j} Theta_{ij} a_j b_i.  Exact for Fraction/int entries."""
    n = len(a)
    return sum((theta[i - 1][j - 1] * a[j - 1] * b[i - 1] for i, j in pairs(n)), Fraction(0))


def character_exponent(theta: Sequence[Sequence], central: Sequence[int]):
    """chi_Theta(M) = exp(2 pi i sum_{i<j} Theta_{ij} M_{ij}); returns the exponent."""
    n = len(theta)
    return sum((theta[i - 1][j - 1] * c for (i, j), c in zip(pairs(n), central)), Fraction(0))


def unit_phase(x) -> complex:
    """exp(2 pi i x), reducing rationals mod 1 first so exact exponents stay exact."""
    if isinstance(x, Fraction):
        x = x - math.floor(x)
    return cmath.exp(2j * math.pi * float(x))


def transgression_cocycle(theta: Sequence[Sequence], a: Sequence[int], b: Sequence[int]) -> complex:
    """omega_Theta(a, b) = exp(2 pi i <Theta a, b>) = chi_Theta(pair_product(a, b))."""
    return unit_phase(cocycle_exponent(theta, a, b))


def check_strictly_upper(theta: Sequence[Sequence]) -> None:
    n = len(theta)
    if any(len(r) != n for r in theta) or any(theta[i][j] != 0 for i in range(n) for j in range(i + 1)):
        raise ValueError("Theta must be a strictly upper-triangular square matrix")


# --- automorphisms Upsilon_Psi ----------------------------------------------------

def _pair_vector(n: int, i: int, j: int, c: int = 1) -> list[int]:
    # antisymmetric extension: y_{j,i} = y_{i,j}^-1
    v = [0] * num_pairs(n)
    if i != j:
        p = (min(i, j), max(i, j))
        v[_pair_pos(n)[p]] = c if i < j else -c
    return v


def _generator_tables(n: int, g) -> tuple[list[HeisenbergElement], list[HeisenbergElement]]:
    """Images of (x_1..x_n) and of (y_p for p in pair order) under one generator token."""
    ps = pairs(n)
    if isinstance(g, Elementary):
        k, l, m = g.k, g.l, g.m
        xs = [HeisenbergElement.x(n, i) for i in range(1, n + 1)]
        # U_k -> U_l^{-m} U_k
        xs[k - 1] = HeisenbergElement.x(n, l) ** (-m) * HeisenbergElement.x(n, k)
        ys = []
        for i, j in ps:
            img = [1 if q == (i, j) else 0 for q in ps]
            if k in (i, j) and l not in (i, j):
                # V_{o,k} -> V_{o,k} V_{o,l}^{-m}, o the other index, with V_{j,i} = V_{i,j}^-1
                o = j if i == k else i
                sign = 1 if o < k else -1  # y_{i,j} = sign * y_{o,k}
                extra = _pair_vector(n, o, l, -m)
                img = [a + sign * b for a, b in zip(img, extra)]
            ys.append(HeisenbergElement(n, tuple(img), (0,) * n))
        return xs, ys
    sigma = g.sigma
    xs = [HeisenbergElement.x(n, sigma[i - 1]) for i in range(1, n + 1)]
    ys = [HeisenbergElement(n, tuple(_pair_vector(n, sigma[i - 1], sigma[j - 1])), (0,) * n) for i, j in ps]
    return xs, ys


@dataclass(frozen=True)
class TwistAutomorphism:
    twist_mat: IntMatrix
    x_images: tuple[HeisenbergElement, ...]
    y_images: tuple[HeisenbergElement, ...]
    factorization: UnimodularFactorization | None = None

    @property
    def n(self) -> int:
        return self.twist_mat.rows

    def __call__(self, g: HeisenbergElement) -> HeisenbergElement:
        return self.apply(g)

    def apply(self, g: HeisenbergElement) -> HeisenbergElement:
        """Image of y^C x_1^{k_1} ... x_n^{k_n}."""
        out = HeisenbergElement.identity(self.n)
        for y, c in zip(self.y_images, g.central):
            if c:
                out = out * y ** c
        for x, k in zip(self.x_images, g.vector):
            if k:
                out = out * x ** k
        return out

    def apply_word(self, word: GeneratorWord) -> HeisenbergElement:
        out = HeisenbergElement.identity(self.n)
        for l in word.letters:
            out = out * self.apply(letter_element(self.n, l))
        return out

    def compose(self, inner: TwistAutomorphism) -> TwistAutomorphism:
        """self o inner, attached to the matrix product self.twist_mat @ inner.twist_mat."""
        return TwistAutomorphism(self.twist_mat @ inner.twist_mat,
                                   tuple(self.apply(g) for g in inner.x_images),
                                   tuple(self.apply(g) for g in inner.y_images))

    def respects_relations(self) -> bool:
        """Images of y are central and x_j x_i = y_ij x_i x_j holds on images."""
        n = self.n
        for y in self.y_images:
            if not y.is_central():
                return False
        for (i, j), y in zip(pairs(n), self.y_images):
            left, xj = self.x_images[i - 1], self.x_images[j - 1]
            if xj * left != y * left * xj:
                return False
        return True

    def central_matrix(self) -> IntMatrix:
        """Action on Z_n in pair coordinates (column p = image of y_p)."""
        return IntMatrix.from_rows(list(zip(*(y.central for y in self.y_images))), len(self.y_images))

    def degree_matrix(self) -> IntMatrix:
        """Action on the abelianization Z^n (column i = degree of the image of x_i)."""
        return IntMatrix.from_rows(list(zip(*(x.vector for x in self.x_images))), self.n)


def identity_automorphism(n: int) -> TwistAutomorphism:
    return TwistAutomorphism(IntMatrix.identity(n),
                               tuple(HeisenbergElement.x(n, i) for i in range(1, n + 1)),
                               tuple(HeisenbergElement.y(n, i, j) for i, j in pairs(n)))


def generator_automorphism(n: int, g) -> TwistAutomorphism:
    xs, ys = _generator_tables(n, g)
    return TwistAutomorphism(g.matrix(n), tuple(xs), tuple(ys))


def twist_automorphism(twist_mat: IntMatrix) -> TwistAutomorphism:
    """Upsilon_Psi = Upsilon_{F_1} o ... o Upsilon_{F_t} for Psi = F_1 ... F_t."""
    fac = factor_unimodular(twist_mat)
    n = twist_mat.rows
    out = identity_automorphism(n)
    for g in fac.factors:
        out = out.compose(generator_automorphism(n, g))
    assert out.twist_mat == twist_mat
    return TwistAutomorphism(twist_mat, out.x_images, out.y_images, fac)


def equivariance_matrix(twist_mat: IntMatrix) -> IntMatrix:
    """^t Psi^{-1}: the matrix the degrees of Upsilon_Psi(x_i) must follow."""
    return inverse(twist_mat).T
