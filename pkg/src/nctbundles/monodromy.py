"""Monodromy of pi_1 on Lambda*(Z^n) = K*(C(T^n)) induced by winding data.

The basic generator M_{i,j} contracts e_J along the pair {i, j}:

    M_{i,j} e_J = e_J + (-1)^m e_{J - {i,j}}   if {i, j} is a subset of J
    M_{i,j} e_J = e_J                           otherwise

where m counts the elements of J strictly between i and j.  Matrices act on
column vectors, so column c of a matrix is the image of the c-th basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .exterior import BasisOrder, ExteriorElement, Subset, basis
from .intmat import IntMatrix, ShapeError, det

Pair = tuple[int, int]


def pairs(n: int) -> list[Pair]:
    """Pair indices (i, j), i < j, in lexicographic order: the only order used for pair coordinates."""
    return list(combinations(range(1, n + 1), 2))


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class MonodromyMatrix:
    n: int
    matrix: IntMatrix
    order: BasisOrder = BasisOrder.LEX

    @property
    def basis(self) -> list[Subset]:
        return basis(self.n, self.order)

    def _block(self, parity: int) -> IntMatrix:
        idx = [k for k, j in enumerate(self.basis) if len(j) % 2 == parity]
        return IntMatrix.from_rows([[self.matrix[r, c] for c in idx] for r in idx], len(idx))

    @property
    def even(self) -> IntMatrix:
        return self._block(0)

    @property
    def odd(self) -> IntMatrix:
        return self._block(1)

    def __matmul__(self, other: MonodromyMatrix) -> MonodromyMatrix:
        self._compatible(other)
        return MonodromyMatrix(self.n, self.matrix @ other.matrix, self.order)

    def __pow__(self, k: int) -> MonodromyMatrix:
        return MonodromyMatrix(self.n, self.matrix ** k, self.order)

    def _compatible(self, other: MonodromyMatrix) -> None:
        if (self.n, self.order) != (other.n, other.order):
            raise ShapeError("monodromy matrices over different bases")

    def is_identity(self) -> bool:
        return self.matrix == IntMatrix.identity(self.matrix.rows)

    def preserves_grading(self) -> bool:
        b = self.basis
        return all(self.matrix[r, c] == 0 for r, jr in enumerate(b) for c, jc in enumerate(b)
                   if (len(jr) - len(jc)) % 2)

    def is_unipotent(self) -> bool:
        """(M - I)^(n+1) == 0."""
        eye = IntMatrix.identity(self.matrix.rows)
        return ((self.matrix - eye) ** (self.n + 1)).is_zero()

    def act(self, x: ExteriorElement) -> ExteriorElement:
        b = self.basis
        return ExteriorElement.from_vector(self.n, b, self.matrix.apply(x.to_vector(b)))

    def reorder(self, order: BasisOrder) -> MonodromyMatrix:
        src, dst = self.basis, basis(self.n, order)
        pos = {j: k for k, j in enumerate(src)}
        perm = [pos[j] for j in dst]
        m = IntMatrix.from_rows([[self.matrix[r, c] for c in perm] for r in perm], len(perm))
        return MonodromyMatrix(self.n, m, order)

    def to_json(self) -> dict:
        out = self.matrix.to_json()
        out["basis"] = self.order.value
        out["n"] = self.n
        return out

    @classmethod
    def from_json(cls, obj: dict) -> MonodromyMatrix:
        return cls(int(obj["n"]), IntMatrix.from_json(obj), BasisOrder(obj["basis"]))


def _between(j: Subset, i: int, k: int) -> int:
    return sum(1 for x in j if i < x < k)


@lru_cache(maxsize=None)
def _generator_matrix(n: int, p: Pair, order: BasisOrder) -> IntMatrix:
    i, k = p
    b = basis(n, order)
    pos = {j: idx for idx, j in enumerate(b)}
    rows = [[int(r == c) for c in range(len(b))] for r in range(len(b))]
    for c, j in enumerate(b):
        if i in j and k in j:
            target = tuple(x for x in j if x not in (i, k))
            rows[pos[target]][c] += -1 if _between(j, i, k) % 2 else 1
    return IntMatrix.from_rows(rows, len(b))


def basic_generator(n: int, p: Pair, order: BasisOrder = BasisOrder.LEX) -> MonodromyMatrix:
    i, j = p
    if not (1 <= i < j <= n):
        raise IndexError(f"pair {p} out of range for n={n}")
    return MonodromyMatrix(n, _generator_matrix(n, (i, j), order), order)


def _as_winding(n: int, w) -> IntMatrix:
    w = w if isinstance(w, IntMatrix) else IntMatrix.from_rows(w)
    if w.rows != num_pairs(n):
        raise ShapeError(f"winding matrix needs {num_pairs(n)} rows for n={n}, got {w.rows}")
    return w


def from_exponents(n: int, exponents: Sequence[int], order: BasisOrder = BasisOrder.LEX) -> MonodromyMatrix:
    """prod_p M_p^{exponents[p]} over pairs in lexicographic order."""
    ps = pairs(n)
    if len(exponents) != len(ps):
        raise ShapeError(f"expected {len(ps)} exponents for n={n}, got {len(exponents)}")
    size = 2 ** n
    out = IntMatrix.identity(size)
    for p, k in zip(ps, exponents):
        if k:
            out = out @ basic_generator(n, p, order).matrix ** k
    return MonodromyMatrix(n, out, order)


def representation(n: int, w, loop: Sequence[int], order: BasisOrder = BasisOrder.LEX) -> MonodromyMatrix:
    """M(loop) = prod_{i<j} M_{i,j}^{(W loop)_{ij}} for a loop class loop in Z^b."""
    w = _as_winding(n, w)
    if len(loop) != w.cols:
        raise ShapeError(f"loop vector of length {len(loop)} for {w.cols} base generators")
    return from_exponents(n, w.apply(loop), order)


def is_trivial(n: int, w) -> bool:
    return _as_winding(n, w).is_zero()


def is_trivial_by_action(n: int, w) -> bool:
    """Triviality decided from the matrices themselves, on every standard basis loop."""
    w = _as_winding(n, w)
    return all(representation(n, w, [int(k == c) for k in range(w.cols)]).is_identity()
               for c in range(w.cols))


def additivity_check(n: int, w1, w2, loop: Sequence[int]) -> bool:
    w1, w2 = _as_winding(n, w1), _as_winding(n, w2)
    lhs = representation(n, w1 + w2, loop)
    return lhs == representation(n, w1, loop) @ representation(n, w2, loop)


def pair_readout(m: MonodromyMatrix, p: Pair) -> int:
    """Coefficient of e_{} in M (e_k ^ e_l) - e_k ^ e_l, which equals the exponent of the pair."""
    b = m.basis
    col = b.index(p)
    return m.matrix[b.index(()), col]


def determinant(m: MonodromyMatrix) -> int:
    return det(m.matrix)
