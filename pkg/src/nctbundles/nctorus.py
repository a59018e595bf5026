"""Twisted group algebras C*(Z^n, omega_Theta) on finitely supported elements.

Conventions
-----------
* omega_Theta(a, b) = exp(2 pi i <Theta a, b>), so u_j u_i = e^{2 pi i Theta_ij} u_i u_j for i < j.
* delta_m = u_1^{m_1} * ... * u_n^{m_n} exactly (the cocycle vanishes on that ordering).
* For n = 2 and Theta_12 = p/q the element u_1 goes to the clock matrix U and u_2 to the
  shift V of ``clock_shift(-p mod q, q)``; see :func:`compatible_rep`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline

from .heisenberg import check_strictly_upper, cocycle_exponent, unit_phase

Point = tuple[int, ...]


class ThetaMismatch(ValueError):
    """Operands carry different twisting matrices, or a rep does not match Theta."""


def _freeze_theta(theta) -> tuple[tuple, ...]:
    t = tuple(tuple(row) for row in theta)
    check_strictly_upper(t)
    return t


def theta2(value) -> tuple[tuple, ...]:
    """The 2x2 twisting matrix with Theta_12 = value."""
    return ((0, value), (0, 0))


@dataclass(frozen=True)
class TwistedAlgebraElement:
    theta: tuple[tuple, ...]
    terms: tuple[tuple[Point, complex], ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.theta)

    @classmethod
    def from_dict(cls, theta, coeffs: Mapping[Sequence[int], complex], tol: float = 0.0) -> TwistedAlgebraElement:
        theta = _freeze_theta(theta)
        acc: dict[Point, complex] = {}
        for m, c in coeffs.items():
            m = tuple(int(x) for x in m)
            if len(m) != len(theta):
                raise ValueError(f"support point {m} has wrong dimension")
            acc[m] = acc.get(m, 0j) + complex(c)
        return cls(theta, tuple(sorted((m, c) for m, c in acc.items() if abs(c) > tol)))

    @classmethod
    def delta(cls, theta, m: Sequence[int], c: complex = 1.0) -> TwistedAlgebraElement:
        return cls.from_dict(theta, {tuple(m): c})

    @classmethod
    def unit(cls, theta) -> TwistedAlgebraElement:
        return cls.delta(theta, (0,) * len(theta))

    @classmethod
    def generator(cls, theta, i: int) -> TwistedAlgebraElement:
        """u_i: the Dirac function at the i-th unit vector (1-based)."""
        n = len(theta)
        return cls.delta(theta, tuple(int(k == i - 1) for k in range(n)))

    @property
    def coeffs(self) -> dict[Point, complex]:
        return dict(self.terms)

    def coeff(self, m: Sequence[int]) -> complex:
        return self.coeffs.get(tuple(m), 0j)

    def support(self) -> list[Point]:
        return [m for m, _ in self.terms]

    def _check(self, other: TwistedAlgebraElement) -> None:
        if self.theta != other.theta:
            raise ThetaMismatch("operands have different Theta")

    def __add__(self, other: TwistedAlgebraElement) -> TwistedAlgebraElement:
        self._check(other)
        acc = self.coeffs
        for m, c in other.terms:
            acc[m] = acc.get(m, 0j) + c
        return TwistedAlgebraElement.from_dict(self.theta, acc)

    def __sub__(self, other: TwistedAlgebraElement) -> TwistedAlgebraElement:
        return self + other.scale(-1)

    def scale(self, c: complex) -> TwistedAlgebraElement:
        return TwistedAlgebraElement.from_dict(self.theta, {m: c * a for m, a in self.terms})

    def __mul__(self, other: TwistedAlgebraElement) -> TwistedAlgebraElement:
        return twisted_convolve(self, other)

    def star(self) -> TwistedAlgebraElement:
        return twisted_involution(self)

    def max_abs_diff(self, other: TwistedAlgebraElement) -> float:
        d = (self - other).terms
        return max((abs(c) for _, c in d), default=0.0)

    def to_json(self) -> dict:
        theta = [[i + 1, j + 1, _theta_json(self.theta[i][j])]
                 for i in range(self.n) for j in range(i + 1, self.n) if self.theta[i][j] != 0]
        return {"n": self.n, "theta": theta,
                "terms": [{"m": list(m), "re": c.real, "im": c.imag} for m, c in self.terms]}

    @classmethod
    def from_json(cls, obj: dict) -> TwistedAlgebraElement:
        n = int(obj["n"])
        theta = [[0] * n for _ in range(n)]
        for i, j, v in obj["theta"]:
            if not 1 <= i < j <= n:
                raise ValueError(f"theta entry ({i}, {j}) is not above the diagonal")
            theta[i - 1][j - 1] = Fraction(v) if isinstance(v, str) else v
        return cls.from_dict(theta, {tuple(t["m"]): complex(t["re"], t["im"]) for t in obj["terms"]})


def _theta_json(v):
    # rationals survive a round trip as "p/q" strings; floats stay floats
    if isinstance(v, Fraction):
        return str(v)
    return v


def cocycle_value(theta, a: Sequence[int], b: Sequence[int]) -> complex:
    return unit_phase(cocycle_exponent(theta, a, b))


def twisted_convolve(f: TwistedAlgebraElement, g: TwistedAlgebraElement) -> TwistedAlgebraElement:
    """(f * g)(s) = sum_t f(t) g(s - t) cocycle_value(t, s - t)."""
    f._check(g)
    acc: dict[Point, complex] = {}
    for a, c in f.terms:
        for b, d in g.terms:
            s = tuple(x + y for x, y in zip(a, b))
            acc[s] = acc.get(s, 0j) + c * d * cocycle_value(f.theta, a, b)
    return TwistedAlgebraElement.from_dict(f.theta, acc)


def twisted_involution(f: TwistedAlgebraElement) -> TwistedAlgebraElement:
    """f*(s) = conj(cocycle_value(s, -s)) conj(f(-s))."""
    acc = {}
    for m, c in f.terms:
        s = tuple(-x for x in m)
        acc[s] = (cocycle_value(f.theta, s, m) * c).conjugate()
    return TwistedAlgebraElement.from_dict(f.theta, acc)


def commutation_ratio(theta, i: int, j: int) -> complex:
    """Coefficient ratio (u_j * u_i) / (u_i * u_j)."""
    ui = TwistedAlgebraElement.generator(theta, i)
    uj = TwistedAlgebraElement.generator(theta, j)
    s = tuple(int(k in (i - 1, j - 1)) for k in range(len(theta)))
    return (uj * ui).coeff(s) / (ui * uj).coeff(s)


# --- clock and shift ------------------------------------------------------------

@dataclass(frozen=True)
class ClockShiftRep:
    p: int
    q: int
    U: np.ndarray = field(repr=False, compare=False)
    V: np.ndarray = field(repr=False, compare=False)

    @property
    def phase(self) -> complex:
        return np.exp(2j * np.pi * self.p / self.q)

    def relation_residual(self) -> float:
        """|| U V - e^{2 pi i p/q} V U ||_2."""
        return float(np.linalg.norm(self.U @ self.V - self.phase * self.V @ self.U, 2))

    def unitarity_residual(self) -> float:
        eye = np.eye(self.q)
        return float(max(np.linalg.norm(self.U @ self.U.conj().T - eye, 2),
                         np.linalg.norm(self.V @ self.V.conj().T - eye, 2)))


def clock_shift(p: int, q: int) -> ClockShiftRep:
    """q x q clock diag(zeta^k) and cyclic shift e_k -> e_{k+1}, zeta = e^{2 pi i p/q}."""
    if q < 1 or math.gcd(p, q) != 1:
        raise ValueError(f"need coprime p, q with q >= 1, got ({p}, {q})")
    k = np.arange(q)
    # exact angles: reduce p*k mod q before scaling
    u = np.diag(np.exp(2j * np.pi * ((p * k) % q) / q))
    v = np.roll(np.eye(q), 1, axis=0).astype(complex)
    return ClockShiftRep(p, q, u, v)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    fr = Fraction(x).limit_denominator(10 ** 6)
    if abs(float(fr) - x) > 1e-12:
        raise ThetaMismatch(f"{x!r} is not (close to) a rational with small denominator")
    return fr


def compatible_rep(theta12) -> ClockShiftRep:
    """The clock-shift rep in which u_1 -> U, u_2 -> V is a *-homomorphism."""
    fr = _as_fraction(theta12)
    p, q = fr.numerator, fr.denominator
    return clock_shift((-p) % q, q)


def represent(f: TwistedAlgebraElement, rep: ClockShiftRep | None = None) -> np.ndarray:
    """Image of f: delta_(m1, m2) -> U^{m1} V^{m2}."""
    if f.n != 2:
        raise ValueError("represent is defined for n = 2 only")
    fr = _as_fraction(f.theta[0][1])
    if rep is None:
        rep = compatible_rep(fr)
    # u_2 u_1 = e^{2 pi i theta} u_1 u_2 needs V U = e^{2 pi i theta} U V, i.e. p_rep = -p mod q
    if rep.q != fr.denominator or (rep.p + fr.numerator) % rep.q != 0:
        raise ThetaMismatch(f"rep ({rep.p}, {rep.q}) is not compatible with Theta_12 = {fr}")
    q = rep.q
    out = np.zeros((q, q), dtype=complex)
    diag_u = np.diag(rep.U)
    for (m1, m2), c in f.terms:
        # U^{m1} V^{m2}: V^{m2} shifts by m2, U^{m1} scales rows
        vm = np.roll(np.eye(q), m2 % q, axis=0)
        out += c * (diag_u ** (m1 % q))[:, None] * vm
    return out


# --- Rieffel projection ---------------------------------------------------------------

def _psi(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0
    out[pos] = np.exp(-1.0 / t[pos])
    return out


def smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step from 0 (t <= 0) to 1 (t >= 1) with all derivatives flat at both ends."""
    t = np.clip(t, 0.0, 1.0)
    a, b = _psi(t), _psi(1.0 - t)
    return a / (a + b)


RAMPS = ("smooth", "linear")


def rieffel_profiles(theta: float, x: np.ndarray, eps: float | None = None,
                     ramp: str = "smooth") -> tuple[np.ndarray, np.ndarray]:
    """The functions (f, g) on the circle R/Z with p = g(U) V + f(U) + V* g(U).

    Requirements: f(x) + f(x + theta) = 1 on supp g, g^2 = f - f^2 on [0, eps],
    and g(x) g(x + theta) = 0.  With ramp="smooth" the ramps are sin^2 / cos^2 of a
    smooth step; with ramp="linear" f is piecewise linear and g = sqrt(f - f^2),
    whose Fourier series converges much more slowly.
    """
    if ramp not in RAMPS:
        raise ValueError(f"ramp must be one of {RAMPS}, got {ramp!r}")
    step = smooth_step if ramp == "smooth" else (lambda t: np.clip(t, 0.0, 1.0))
    if eps is None:
        eps = min(theta, 1.0 - theta)
    x = np.mod(x, 1.0)
    f = np.zeros_like(x)
    g = np.zeros_like(x)
    up = x < eps
    ph = np.arcsin(np.sqrt(step(x[up] / eps))) if ramp == "linear" else 0.5 * np.pi * step(x[up] / eps)
    f[up] = np.sin(ph) ** 2
    g[up] = np.sin(ph) * np.cos(ph)
    f[(x >= eps) & (x < theta)] = 1.0
    down = (x >= theta) & (x < theta + eps)
    f[down] = 1.0 - step((x[down] - theta) / eps) if ramp == "linear" else np.cos(0.5 * np.pi * step((x[down] - theta) / eps)) ** 2
    return f, g


def fourier_coefficients(values: np.ndarray, degree: int) -> dict[int, complex]:
    """c_j = int_0^1 h(x) e^{-2 pi i j x} dx for |j| <= degree from uniform samples on [0, 1)."""
    c = np.fft.fft(values) / len(values)
    return {j: complex(c[j % len(values)]) for j in range(-degree, degree + 1)}


def rieffel_projection(theta, degree: int = 32, samples: int = 1 << 14, ramp: str = "smooth") -> TwistedAlgebraElement:
    """Self-adjoint element close to a projection of trace theta in A_theta (n = 2).

    Supported on u_2-degrees -1, 0, 1; each coefficient is a Fourier truncation in u_1.
    """
    t = float(theta)
    if not 0.0 < t < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    th = theta2(theta)
    x = np.arange(samples) / samples
    f, g = rieffel_profiles(t, x, ramp=ramp)
    cf = fourier_coefficients(f, degree)
    cg = fourier_coefficients(g, degree)
    f_el = TwistedAlgebraElement.from_dict(th, {(j, 0): c for j, c in cf.items()})
    g_el = TwistedAlgebraElement.from_dict(th, {(j, 0): c for j, c in cg.items()})
    v = TwistedAlgebraElement.generator(th, 2)
    p = g_el * v + f_el + v.star() * g_el
    return p


def normalized_trace(matrix: np.ndarray) -> float:
    return float(np.trace(matrix).real / matrix.shape[0])


def projection_defect(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix @ matrix - matrix, 2))


# --- module inner product -----------------------------------------------------------

@dataclass(frozen=True)
class SampledFunction:
    start: float
    stop: float
    values: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        if len(self.values) < 2 or not self.stop > self.start:
            raise ValueError("need at least two samples on an interval of positive length")

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], np.ndarray], start: float, stop: float,
                      num: int = 4096) -> SampledFunction:
        x = np.linspace(start, stop, num)
        return cls(start, stop, np.asarray(fn(x), dtype=complex))

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, len(self.values))

    def same_grid(self, other: SampledFunction) -> bool:
        return (self.start, self.stop, len(self.values)) == (other.start, other.stop, len(other.values))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Cubic-spline interpolation, zero outside the sampled interval."""
        x = np.asarray(x, dtype=float)
        grid = self.grid
        re = CubicSpline(grid, self.values.real)(x)
        im = CubicSpline(grid, self.values.imag)(x)
        out = re + 1j * im
        out[(x < self.start) | (x > self.stop)] = 0.0
        return out

    def norm2(self) -> float:
        return float(trapezoid(np.abs(self.values) ** 2, self.grid))


def module_inner_product(left: SampledFunction, right: SampledFunction, theta: float, m: int, n: int) -> complex:
    """(theta + 1) int conj(left(x + m theta + m)) right(x) e^{-2 pi i n x} dx by the trapezoidal rule."""
    if not left.same_grid(right):
        raise ValueError("left and right must be sampled on the same grid")
    x = right.grid
    shifted = left(x + m * theta + m) if m else left.values
    integrand = np.conj(shifted) * right.values * np.exp(-2j * np.pi * n * x)
    return complex((theta + 1.0) * trapezoid(integrand, x))


def gram_matrix(left: SampledFunction, theta, cutoff: int) -> np.ndarray:
    """sum_{|m|, |n| <= cutoff} <left, left>_{m,n} represent(delta_(m, n)) at rational theta."""
    fr = _as_fraction(theta)
    th = theta2(fr)
    coeffs = {(m, k): module_inner_product(left, left, float(fr), m, k)
              for m in range(-cutoff, cutoff + 1) for k in range(-cutoff, cutoff + 1)}
    return represent(TwistedAlgebraElement.from_dict(th, coeffs))
