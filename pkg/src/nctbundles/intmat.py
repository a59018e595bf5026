"""Exact integer matrices: Hermite/Smith normal forms, unimodular factorization,
and left GL/SL orbit decisions.

Matrices are :class:`IntMatrix` values backed by tuples of Python ints, so all
arithmetic is exact and unbounded.  Row-style conventions are used throughout:
``hnf(M)`` returns ``(H, U)`` with ``H == U @ M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class NotUnimodular(ValueError):
    """Raised when a matrix expected in GL_n(Z) is not square or has |det| != 1."""


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    data: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ShapeError(f"entry count does not match {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, entries: Sequence[int]) -> IntMatrix:
        n = len(entries)
        return cls(n, n, tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def elementary(cls, n: int, k: int, l: int, m: int) -> IntMatrix:
        """E_{k,l}(m) = I + m e_{k,l}; indices are 1-based, k != l."""
        if k == l or not (1 <= k <= n and 1 <= l <= n):
            raise ValueError(f"bad elementary indices ({k}, {l}) for n={n}")
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        rows[k - 1][l - 1] = m
        return cls.from_rows(rows, n)

    @classmethod
    def permutation(cls, sigma: Sequence[int]) -> IntMatrix:
        """Psi_sigma = (delta_{i, sigma(j)}); ``sigma`` is 1-based (sigma(1), ..., sigma(n))."""
        n = len(sigma)
        if sorted(sigma) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {sigma}")
        return cls.from_rows([[int(i + 1 == sigma[j]) for j in range(n)] for i in range(n)], n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def row(self, i: int) -> tuple[int, ...]:
        return self.data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.data)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else tuple(() for _ in range(self.cols)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.T.data
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self.data))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ShapeError(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def __neg__(self) -> IntMatrix:
        return self.scale(-1)

    def scale(self, c: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(tuple(c * a for a in r) for r in self.data))

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.data)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.data for a in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __pow__(self, k: int) -> IntMatrix:
        if not self.is_square():
            raise ShapeError("power of a non-square matrix")
        base = self if k >= 0 else inverse(self)
        k = abs(k)
        out = IntMatrix.identity(self.rows)
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "data": self.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> IntMatrix:
        try:
            rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"malformed matrix JSON: {exc}") from exc
        if any(not isinstance(x, int) or isinstance(x, bool) for r in data for x in r):
            raise ShapeError("matrix entries must be integers")
        return cls(rows, cols, tuple(tuple(r) for r in data))


def as_matrix(m) -> IntMatrix:
    if isinstance(m, IntMatrix):
        return m
    return IntMatrix.from_rows(m)


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if not m.is_square():
        raise ShapeError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(m: IntMatrix) -> int:
    h, _ = hnf(m)
    return sum(1 for r in h.data if any(r))


def is_unimodular(m: IntMatrix) -> bool:
    return m.is_square() and abs(det(m)) == 1


def _check_unimodular(m: IntMatrix) -> None:
    if not m.is_square():
        raise NotUnimodular(f"matrix of shape {m.shape} is not square")
    d = det(m)
    if abs(d) != 1:
        raise NotUnimodular(f"determinant {d} is not +-1")


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # returns (g, x, y) with a*x + b*y == g >= 0
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _reducer(x: int, y: int) -> tuple[int, int, int, int]:
    """(p, q, r, s) with ps - qr = 1 sending (x, y) to (gcd-ish, 0); x | y keeps x unchanged."""
    if x != 0 and y % x == 0:
        return 1, 0, -(y // x), 1
    g, s, t = _xgcd(x, y)
    # [[s, t], [-y/g, x/g]] has determinant (s*x + t*y)/g = 1
    return s, t, -y // g, x // g


def hnf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``H = U @ m`` in row echelon
    form, pivots positive, entries above each pivot reduced into ``[0, pivot)``.
    """
    a = m.tolist()
    rows, cols = m.rows, m.cols
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]

    def combine(i, k, p, q, r, s):
        # rows (i, k) <- (p*row_i + q*row_k, r*row_i + s*row_k), ps - qr = +-1
        for mat in (a, u):
            ri, rk = mat[i], mat[k]
            mat[i] = [p * x + q * y for x, y in zip(ri, rk)]
            mat[k] = [r * x + s * y for x, y in zip(ri, rk)]

    pr = 0
    for c in range(cols):
        if pr == rows:
            break
        for k in range(pr + 1, rows):
            if a[k][c] == 0:
                continue
            combine(pr, k, *_reducer(a[pr][c], a[k][c]))
        if a[pr][c] == 0:
            continue
        if a[pr][c] < 0:
            a[pr] = [-x for x in a[pr]]
            u[pr] = [-x for x in u[pr]]
        piv = a[pr][c]
        for i in range(pr):
            q = a[i][c] // piv
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pr])]
        pr += 1
    return IntMatrix.from_rows(a, cols), IntMatrix.from_rows(u, rows)


def is_hnf(h: IntMatrix) -> bool:
    last = -1
    seen_zero = False
    for i, r in enumerate(h.data):
        nz = [j for j, x in enumerate(r) if x != 0]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        p = nz[0]
        if p <= last or r[p] <= 0:
            return False
        if any(not (0 <= h[k, p] < r[p]) for k in range(i)):
            return False
        last = p
    return True


def inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix (the HNF of m is I, so U = m^-1)."""
    _check_unimodular(m)
    h, u = hnf(m)
    assert h == IntMatrix.identity(m.rows)
    return u


def snf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(S, U, V)`` with ``S = U @ m @ V`` diagonal, d_i | d_{i+1}, d_i >= 0."""
    rows, cols = m.rows, m.cols
    a = m.tolist()
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, k, p, q, r, s):
        for mat in (a, u):
            ri, rk = mat[i], mat[k]
            mat[i] = [p * x + q * y for x, y in zip(ri, rk)]
            mat[k] = [r * x + s * y for x, y in zip(ri, rk)]

    def col_op(j, k, p, q, r, s):
        # columns (j, k) <- (p*col_j + q*col_k, r*col_j + s*col_k)
        for mat in (a, v):
            for row in mat:
                x, y = row[j], row[k]
                row[j], row[k] = p * x + q * y, r * x + s * y

    for t in range(min(rows, cols)):
        # move a nonzero entry of the remaining block to (t, t)
        piv = next(((i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j] != 0), None)
        if piv is None:
            break
        i, j = piv
        if i != t:
            row_op(t, i, 0, 1, 1, 0)
        if j != t:
            col_op(t, j, 0, 1, 1, 0)
        while True:
            done = True
            for k in range(t + 1, rows):
                if a[k][t] != 0:
                    row_op(t, k, *_reducer(a[t][t], a[k][t]))
            for k in range(t + 1, cols):
                if a[t][k] != 0:
                    if a[t][k] % a[t][t] != 0:
                        done = False
                    col_op(t, k, *_reducer(a[t][t], a[t][k]))
            if not done:
                continue
            d = a[t][t]
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % d != 0), None)
            if bad is None:
                break
            # fold the offending row into row t; the next pass lowers the pivot to a gcd
            row_op(t, bad[0], 1, 1, 0, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return (IntMatrix.from_rows(a, cols), IntMatrix.from_rows(u, rows), IntMatrix.from_rows(v, cols))


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    s, _, _ = snf(m)
    return tuple(s[i, i] for i in range(min(m.rows, m.cols)))


# --- unimodular factorization -------------------------------------------------

@dataclass(frozen=True)
class Elementary:
    k: int
    l: int
    m: int

    def matrix(self, n: int) -> IntMatrix:
        return IntMatrix.elementary(n, self.k, self.l, self.m)


@dataclass(frozen=True)
class Permutation:
    sigma: tuple[int, ...]

    def matrix(self, n: int) -> IntMatrix:
        if len(self.sigma) != n:
            raise ShapeError(f"permutation of length {len(self.sigma)} for n={n}")
        return IntMatrix.permutation(self.sigma)


Generator = Elementary | Permutation


@dataclass(frozen=True)
class UnimodularFactorization:
    n: int
    factors: tuple[Generator, ...]

    def product(self) -> IntMatrix:
        out = IntMatrix.identity(self.n)
        for f in self.factors:
            out = out @ f.matrix(self.n)
        return out

    def __len__(self) -> int:
        return len(self.factors)


def factor_unimodular(twist_mat: IntMatrix) -> UnimodularFactorization:
    """Write ``twist_mat`` in GL_n(Z) as an ordered product of E_{k,l}(m) and permutation matrices.

    Row reduction uses only elementary operations; a single transposition is
    prepended when det twist_mat = -1.
    """
    _check_unimodular(twist_mat)
    n = twist_mat.rows
    prefix: list[Generator] = []
    work = twist_mat
    if n >= 2 and det(twist_mat) == -1:
        swap = tuple([2, 1] + list(range(3, n + 1)))
        prefix.append(Permutation(swap))
        work = IntMatrix.permutation(swap) @ twist_mat  # swap is its own inverse
    elif n == 1 and twist_mat[0, 0] == -1:
        raise ValueError("[-1] in GL_1(Z) is not a product of elementary and permutation matrices")

    a = work.tolist()
    ops: list[Elementary] = []  # row operations applied to a, in order

    def add_row(k, l, m):
        # row k += m * row l, i.e. left multiplication by E_{k,l}(m)
        if m == 0:
            return
        a[k] = [x + m * y for x, y in zip(a[k], a[l])]
        ops.append(Elementary(k + 1, l + 1, m))

    for c in range(n):
        while True:
            nz = [i for i in range(c, n) if a[i][c] != 0]
            if len(nz) == 1:
                break
            # Euclid step: reduce every other entry by the smallest one
            piv = min(nz, key=lambda i: abs(a[i][c]))
            for i in nz:
                if i != piv:
                    add_row(i, piv, -(a[i][c] // a[piv][c]))
        r = nz[0]
        if r != c:
            # move the pivot to row c without a swap: row_c += row_r, row_r -= row_c
            add_row(c, r, 1)
            add_row(r, c, -1)
        # the pivot is a unit since det = 1 is preserved and the matrix is triangularizing
        for i in range(c):
            add_row(i, c, -a[i][c] * a[c][c])
    # a is now diagonal with entries +-1 and an even number of -1s
    negs = [i for i in range(n) if a[i][i] == -1]
    for i, j in zip(negs[::2], negs[1::2]):
        # diag(-1, -1) on the (i, j) plane = R^2, R = E_ij(-1) E_ji(1) E_ij(-1)
        for _ in range(2):
            add_row(i, j, -1)
            add_row(j, i, 1)
            add_row(i, j, -1)
    assert a == IntMatrix.identity(n).tolist(), a
    # L_t ... L_1 work = I  =>  work = L_1^-1 ... L_t^-1
    factors: list[Generator] = list(prefix)
    for op in ops:
        last = factors[-1] if factors else None
        if isinstance(last, Elementary) and (last.k, last.l) == (op.k, op.l):
            # E_{k,l}(a) E_{k,l}(b) = E_{k,l}(a + b)
            factors.pop()
            if last.m - op.m:
                factors.append(Elementary(op.k, op.l, last.m - op.m))
        else:
            factors.append(Elementary(op.k, op.l, -op.m))
    result = UnimodularFactorization(n, tuple(factors))
    assert result.product() == twist_mat
    return result


# --- orbit decisions ----------------------------------------------------------

def _same_shape(a: IntMatrix, b: IntMatrix) -> None:
    if a.shape != b.shape:
        raise ShapeError(f"shape mismatch: {a.shape} vs {b.shape}")


def gl_orbit_witness(a: IntMatrix, b: IntMatrix) -> IntMatrix | None:
    """A unimodular G with ``b == G @ a``, or None when none exists."""
    _same_shape(a, b)
    ha, ua = hnf(a)
    hb, ub = hnf(b)
    if ha != hb:
        return None
    g = inverse(ub) @ ua
    assert g @ a == b
    return g


def gl_orbit_equal(a: IntMatrix, b: IntMatrix) -> bool:
    _same_shape(a, b)
    return hnf(a)[0] == hnf(b)[0]


def sl_orbit_witness(a: IntMatrix, b: IntMatrix) -> IntMatrix | None:
    """A G with det G = +1 and ``b == G @ a``, or None when none exists."""
    g = gl_orbit_witness(a, b)
    if g is None:
        return None
    if det(g) == 1:
        return g
    k = a.rows
    h, u = hnf(a)
    r = sum(1 for row in h.data if any(row))
    if r == k:
        # full row rank: G is unique, and it has det -1
        return None
    # rows r..k-1 of H vanish, so flipping one of them stabilizes H; conjugate back
    flip = IntMatrix.diag([1] * (k - 1) + [-1])
    stab = inverse(u) @ flip @ u
    assert stab @ a == a and det(stab) == -1
    g = g @ stab
    assert g @ a == b and det(g) == 1
    return g


def sl_orbit_equal(a: IntMatrix, b: IntMatrix) -> bool:
    return sl_orbit_witness(a, b) is not None


# --- block conjugacy ----------------------------------------------------------

class ConjugacyError(ValueError):
    """The matrix T is not a valid conjugacy witness for the unipotent blocks."""


def unipotent_block(v: Sequence[int]) -> IntMatrix:
    """[[1, v^t], [0, I_n]]."""
    n = len(v)
    rows = [[1] + list(v)] + [[0] + [int(i == j) for j in range(n)] for i in range(n)]
    return IntMatrix.from_rows(rows, n + 1)


def conjugating_block(v: Sequence[int], w: Sequence[int], t: IntMatrix) -> IntMatrix:
    """X in GL_n(Z) with ``v == X w``, read off from T satisfying T B(v) = B(w) T."""
    n = len(v)
    if len(w) != n or t.shape != (n + 1, n + 1):
        raise ConjugacyError("dimension mismatch between v, w and T")
    if not is_unimodular(t):
        raise ConjugacyError("T is not in GL_{n+1}(Z)")
    if t @ unipotent_block(v) != unipotent_block(w) @ t:
        raise ConjugacyError("T does not conjugate the two unipotent blocks")
    a = t[0, 0]
    y = [t[i + 1, 0] for i in range(n)]
    big_y = IntMatrix.from_rows([[t[i + 1, j + 1] for j in range(n)] for i in range(n)], n)
    if not any(y):
        x = big_y.T.scale(a)
    elif not any(v):
        x = IntMatrix.identity(n)
    else:
        raise ConjugacyError("T has y != 0 while v != 0, impossible for a valid witness")
    if x.apply(w) != tuple(v) or not is_unimodular(x):
        raise ConjugacyError("constructed X fails v = X w")
    return x
