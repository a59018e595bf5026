"""The exterior algebra over the integers, the model of K*(C(T^n)).

Elements are sparse maps from strictly increasing index tuples J (1-based) to
nonzero integer coefficients.  ``e(3, 1, 2)`` is e_1 ^ e_2 in rank 3 and
``unit(3)`` is e_{} = [1].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .intmat import IntMatrix, det

Subset = tuple[int, ...]


class RankMismatch(ValueError):
    """Operands live in exterior algebras of different rank."""


class BasisOrder(enum.Enum):
    LEX = "lex"
    GRADED_DIM3 = "graded-dim3"


# Even and odd bases for rank 3 in the order used by the classical 4x4 monodromy matrices.
GRADED_DIM3_EVEN: tuple[Subset, ...] = ((), (1, 2), (2, 3), (1, 3))
GRADED_DIM3_ODD: tuple[Subset, ...] = ((1,), (2,), (3,), (1, 2, 3))


def merge_sign(j: Sequence[int], k: Sequence[int]) -> int:
    """Sign of the permutation sorting the concatenation j + k; 0 if they overlap."""
    if set(j) & set(k):
        return 0
    inversions = sum(1 for a in j for b in k if a > b)
    return -1 if inversions % 2 else 1


def _check_subset(n: int, j: Iterable[int]) -> Subset:
    j = tuple(int(x) for x in j)
    if any(a >= b for a, b in zip(j, j[1:])) or any(not 1 <= x <= n for x in j):
        raise ValueError(f"{j} is not a strictly increasing subset of 1..{n}")
    return j


@dataclass(frozen=True)
class ExteriorElement:
    rank: int
    terms: tuple[tuple[Subset, int], ...] = field(default=())

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("rank must be >= 1")

    @classmethod
    def from_dict(cls, rank: int, coeffs: Mapping[Iterable[int], int]) -> ExteriorElement:
        acc: dict[Subset, int] = {}
        for j, c in coeffs.items():
            j = _check_subset(rank, j)
            acc[j] = acc.get(j, 0) + int(c)
        return cls(rank, _canonical(acc))

    @property
    def coeffs(self) -> dict[Subset, int]:
        return dict(self.terms)

    def coeff(self, j: Iterable[int]) -> int:
        return self.coeffs.get(tuple(j), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def _same_rank(self, other: ExteriorElement) -> None:
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")

    def __add__(self, other: ExteriorElement) -> ExteriorElement:
        self._same_rank(other)
        acc = self.coeffs
        for j, c in other.terms:
            acc[j] = acc.get(j, 0) + c
        return ExteriorElement(self.rank, _canonical(acc))

    def __neg__(self) -> ExteriorElement:
        return ExteriorElement(self.rank, tuple((j, -c) for j, c in self.terms))

    def __sub__(self, other: ExteriorElement) -> ExteriorElement:
        return self + (-other)

    def __rmul__(self, c: int) -> ExteriorElement:
        if not isinstance(c, int):
            return NotImplemented
        return ExteriorElement(self.rank, _canonical({j: c * a for j, a in self.terms}))

    def __xor__(self, other: ExteriorElement) -> ExteriorElement:
        return wedge(self, other)

    def to_vector(self, order: Sequence[Subset]) -> tuple[int, ...]:
        acc = self.coeffs
        missing = set(acc) - set(order)
        if missing:
            raise ValueError(f"terms {sorted(missing)} not in the requested basis")
        return tuple(acc.get(j, 0) for j in order)

    @classmethod
    def from_vector(cls, rank: int, order: Sequence[Subset], values: Sequence[int]) -> ExteriorElement:
        return cls.from_dict(rank, dict(zip(order, values)))

    def to_json(self) -> dict:
        return {"n": self.rank, "terms": [{"J": list(j), "c": c} for j, c in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> ExteriorElement:
        n = int(obj["n"])
        coeffs: dict[Subset, int] = {}
        for t in obj["terms"]:
            j = _check_subset(n, t["J"])
            if j in coeffs:
                raise ValueError(f"duplicate term {j}")
            if not isinstance(t["c"], int) or t["c"] == 0:
                raise ValueError("coefficients must be nonzero integers")
            coeffs[j] = t["c"]
        return cls.from_dict(n, coeffs)


def _sort_key(j: Subset) -> tuple[int, Subset]:
    return (len(j), j)


def _canonical(acc: Mapping[Subset, int]) -> tuple[tuple[Subset, int], ...]:
    return tuple(sorted(((j, c) for j, c in acc.items() if c), key=lambda t: _sort_key(t[0])))


def e(rank: int, *indices: int) -> ExteriorElement:
    """The basis element e_J for J = indices (must be strictly increasing)."""
    return ExteriorElement(rank, ((_check_subset(rank, indices), 1),))


def unit(rank: int) -> ExteriorElement:
    return ExteriorElement(rank, (((), 1),))


def zero(rank: int) -> ExteriorElement:
    return ExteriorElement(rank)


def wedge(a: ExteriorElement, b: ExteriorElement) -> ExteriorElement:
    a._same_rank(b)
    acc: dict[Subset, int] = {}
    for j, c in a.terms:
        for k, d in b.terms:
            s = merge_sign(j, k)
            if s:
                jk = tuple(sorted(j + k))
                acc[jk] = acc.get(jk, 0) + s * c * d
    return ExteriorElement(a.rank, _canonical(acc))


def grade_split(a: ExteriorElement) -> tuple[ExteriorElement, ExteriorElement]:
    even = tuple(t for t in a.terms if len(t[0]) % 2 == 0)
    odd = tuple(t for t in a.terms if len(t[0]) % 2 == 1)
    return ExteriorElement(a.rank, even), ExteriorElement(a.rank, odd)


def basis(rank: int, order: BasisOrder = BasisOrder.LEX) -> list[Subset]:
    """All 2^rank subsets; GRADED_DIM3 lists the even part then the odd part."""
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if order is BasisOrder.GRADED_DIM3:
        if rank != 3:
            raise ValueError("the GRADED_DIM3 basis only exists for rank 3")
        return list(GRADED_DIM3_EVEN + GRADED_DIM3_ODD)
    return [j for k in range(rank + 1) for j in combinations(range(1, rank + 1), k)]


def even_odd_bases(rank: int, order: BasisOrder = BasisOrder.LEX) -> tuple[list[Subset], list[Subset]]:
    full = basis(rank, order)
    return [j for j in full if len(j) % 2 == 0], [j for j in full if len(j) % 2 == 1]


def induced_matrix(l: IntMatrix, order: BasisOrder = BasisOrder.LEX) -> IntMatrix:
    """Matrix of the algebra automorphism Lambda*(L) on the full basis.

    Entry (I, J) is the minor det L[I, J]; degree-0 maps to itself.
    """
    if not l.is_square():
        raise ValueError("L must be square")
    n = l.rows
    full = basis(n, order)
    rows = []
    for i in full:
        row = []
        for j in full:
            if len(i) != len(j):
                row.append(0)
            elif not i:
                row.append(1)
            else:
                row.append(det(IntMatrix.from_rows([[l[a - 1, b - 1] for b in j] for a in i])))
        rows.append(row)
    return IntMatrix.from_rows(rows, len(full))
