"""Classification data of NCP T^n-bundles and the decision procedures built on it.

A bundle is described by its winding matrix W (pairs x base generators): entry
((i, j), loop) is the winding number of f_{ij} along the loop loop.  The
commutative principal bundle is carried as an opaque tag, since none of the
invariants computed here depend on it.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

from . import monodromy
from .exterior import BasisOrder, basis, induced_matrix
from .intmat import (IntMatrix, NotUnimodular, ShapeError, det, gl_orbit_equal, gl_orbit_witness, inverse,
                     is_unimodular, sl_orbit_equal, sl_orbit_witness)
from .monodromy import MonodromyMatrix, num_pairs, pairs

N3_CAVEAT = (
    "The winding matrices differ by a transformation of determinant -1 on the pair lattice. "
    "The K-theory group bundles are isomorphic, but it is not known whether the two bundles "
    "are RKK-equivalent: this reduces to whether the pullback of C*(H_3) along "
    "(z1, z2, z3) -> (conj z1, conj z2, conj z3) is RKK-equivalent to C*(H_3)."
)

# Results each verdict relies on, reported in the ``citations`` field.
CITE = {
    "n2": "rank 2: K-bundles isomorphic <=> W2 = +-W1 <=> RKK-equivalent after twisting",
    "n2-monodromy": "rank 2: a loop acts on K_0 by [[1, w], [0, 1]] and trivially on K_1",
    "conjugate": "conjugate unipotent blocks [[1, v^t], [0, I]] force v = X w with X in GL(Z)",
    "image": "Lambda^2: GL_2(Z) -> GL_1(Z) is onto; Lambda^2(GL_3(Z)) = SL_3(Z) on the pair lattice",
    "twist": "W2 = Lambda^2(Psi) W1 gives isomorphic bundles after the Psi-twist of the torus action",
    "n3-k": "rank 3: isomorphic K-bundles <=> W2 = A W1 for some A in GL_3(Z)",
    "n3-open": "rank 3: RKK-equivalence for det A = -1 is an open question",
    "partial": "rank > 3: only RKK => isomorphic K-bundles and Lambda^2-twist => RKK are known",
}


@dataclass(frozen=True)
class BaseHomology:
    rank: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        labels = self.labels or tuple(f"loop{k + 1}" for k in range(self.rank))
        object.__setattr__(self, "labels", tuple(labels))
        if len(self.labels) != self.rank or len(set(self.labels)) != self.rank:
            raise ValueError("base labels must be distinct and match the rank")


@dataclass(frozen=True)
class BundleDescriptor:
    n: int
    base: BaseHomology
    winding: IntMatrix
    commutative_part: Any = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("torus rank must be at least 2")
        if self.winding.shape != (num_pairs(self.n), self.base.rank):
            raise ShapeError(f"winding matrix must be {num_pairs(self.n)}x{self.base.rank}, "
                             f"got {self.winding.shape}")

    @classmethod
    def make(cls, n: int, winding, labels: Sequence[str] | None = None, note: Any = None) -> BundleDescriptor:
        w = winding if isinstance(winding, IntMatrix) else IntMatrix.from_rows(winding, None)
        base = BaseHomology(w.cols, tuple(labels) if labels else ())
        return cls(n, base, w, {"note": "trivial"} if note is None else note)

    def to_json(self) -> dict:
        return {"n": self.n,
                "base": {"rank": self.base.rank, "labels": list(self.base.labels)},
                "winding": self.winding.to_json(),
                "commutative_part": self.commutative_part}

    @classmethod
    def from_json(cls, obj: dict) -> BundleDescriptor:
        try:
            base = BaseHomology(int(obj["base"]["rank"]), tuple(obj["base"].get("labels", ())))
            return cls(int(obj["n"]), base, IntMatrix.from_json(obj["winding"]),
                       obj.get("commutative_part", {}))
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"malformed bundle descriptor: {exc}") from exc


# --- Lambda^2 -----------------------------------------------------------------------

def lambda2_matrix(twist_mat: IntMatrix) -> IntMatrix:
    """Matrix of Lambda^2 Psi on e_i ^ e_j (i < j): entry ((i,j),(k,l)) = Psi_ik Psi_jl - Psi_il Psi_jk."""
    if not is_unimodular(twist_mat):
        raise NotUnimodular("Lambda^2 is only taken of matrices in GL_n(Z)")
    return _lambda2(twist_mat)


def _lambda2(twist_mat: IntMatrix) -> IntMatrix:
    ps = pairs(twist_mat.rows)
    return IntMatrix.from_rows(
        [[twist_mat[i - 1, k - 1] * twist_mat[j - 1, l - 1] - twist_mat[i - 1, l - 1] * twist_mat[j - 1, k - 1] for k, l in ps]
         for i, j in ps], len(ps))


# For n = 3: e_i ^ e_j -> [z -> det(e_i, e_j, z)], pair order (12, 13, 23) -> dual basis (1*, 2*, 3*)
HODGE3 = IntMatrix.from_rows([[0, 0, 1], [0, -1, 0], [1, 0, 0]])


def dual_identification(n: int) -> IntMatrix:
    """Pair coordinates -> the scalar (n = 2) or dual-basis (n = 3) coordinates."""
    if n == 2:
        return IntMatrix.identity(1)
    if n == 3:
        return HODGE3
    raise ValueError("the pair/dual identification is only used for n = 2, 3")


@dataclass(frozen=True)
class ImageMembership:
    member: bool | None          # None: unsupported for this n
    witness: IntMatrix | None = None
    note: str = ""


def lambda2_image_member(n: int, a: IntMatrix) -> ImageMembership:
    """Is A = Lambda^2 Psi for some Psi in GL_n(Z)?  Decided for n = 2, 3."""
    if a.shape != (num_pairs(n), num_pairs(n)):
        raise ShapeError(f"expected a {num_pairs(n)}x{num_pairs(n)} matrix, got {a.shape}")
    if not is_unimodular(a):
        raise NotUnimodular("A must be invertible on the pair lattice")
    if n == 2:
        twist_mat = IntMatrix.diag([a[0, 0], 1])
        return ImageMembership(True, twist_mat, "Lambda^2 Psi = det Psi for n = 2")
    if n == 3:
        if det(a) != 1:
            return ImageMembership(False, None, "Lambda^2 Psi = det Psi * Psi^-T has determinant +1")
        j = HODGE3
        b = j @ a @ inverse(j)
        twist_mat = inverse(b).T  # det Psi = 1 and det Psi * Psi^-T = B
        assert lambda2_matrix(twist_mat) == a
        return ImageMembership(True, twist_mat, "witness Psi = B^-T with B = A in dual coordinates")
    return ImageMembership(None, None, f"image membership for n = {n} is not implemented")


# --- twisting and triviality ------------------------------------------------------------

def twist(d: BundleDescriptor, twist_mat: IntMatrix) -> BundleDescriptor:
    """([q_Psi], Lambda^2 Psi o f): W -> Lambda^2(Psi) W."""
    l2 = lambda2_matrix(twist_mat)
    tag = d.commutative_part
    history = list(tag.get("twists", [])) if isinstance(tag, dict) else []
    new_tag = dict(tag) if isinstance(tag, dict) else {"original": tag}
    new_tag["twists"] = history + [twist_mat.tolist()]
    return replace(d, winding=l2 @ d.winding, commutative_part=new_tag)


def is_k_trivial(d: BundleDescriptor) -> bool:
    return d.winding.is_zero()


@dataclass(frozen=True)
class KBundle:
    """K-theory group bundle: loop classes in Z^b -> automorphisms of Lambda*(Z^n)."""
    descriptor: BundleDescriptor
    order: BasisOrder = BasisOrder.LEX
    fiber: str = "K*(C(T^n)) = Lambda*(Z^n)"

    def __call__(self, loop: Sequence[int]) -> MonodromyMatrix:
        d = self.descriptor
        return monodromy.representation(d.n, d.winding, loop, self.order)

    def basis_loops(self) -> list[tuple[int, ...]]:
        b = self.descriptor.base.rank
        return [tuple(int(k == c) for k in range(b)) for c in range(b)]

    def is_constant_identity(self) -> bool:
        return all(self(g).is_identity() for g in self.basis_loops())


def k_bundle(d: BundleDescriptor, order: BasisOrder = BasisOrder.LEX) -> KBundle:
    return KBundle(d, order)


@dataclass(frozen=True)
class TDualResult:
    exists: bool
    evidence: dict


def monodromy_summary(d: BundleDescriptor) -> dict:
    kb = k_bundle(d)
    gens = {}
    for label, g in zip(d.base.labels, kb.basis_loops()):
        m = kb(g)
        gens[label] = {"identity": m.is_identity(), "pair_exponents": list(d.winding.apply(g))}
    return {"fiber": kb.fiber, "generators": gens}


def has_classical_t_dual(d: BundleDescriptor) -> TDualResult:
    """A classical T-dual exists iff the Mackey-obstruction map is null-homotopic (W = 0)."""
    return TDualResult(is_k_trivial(d), monodromy_summary(d))


# --- RKK comparison ----------------------------------------------------------------

class Verdict(enum.Enum):
    RKK_EQUIVALENT_VIA_TWIST = "RkkEquivalentViaTwist"
    ISOMORPHIC_K_BUNDLES_ONLY = "IsomorphicKBundlesOnly"
    NOT_EQUIVALENT = "NotEquivalent"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class RkkVerdict:
    verdict: Verdict
    witness: dict = field(default_factory=dict)
    citations: tuple[str, ...] = ()
    note: str = ""

    def to_json(self) -> dict:
        out = {"verdict": self.verdict.value, "witness": self.witness, "citations": list(self.citations)}
        if self.note:
            out["note"] = self.note
        return out


def _check_comparable(d1: BundleDescriptor, d2: BundleDescriptor) -> None:
    if d1.n != d2.n:
        raise ShapeError(f"torus ranks differ: {d1.n} vs {d2.n}")
    if d1.base.rank != d2.base.rank:
        raise ShapeError(f"base ranks differ: {d1.base.rank} vs {d2.base.rank}")


def _generator_set(n: int) -> list[IntMatrix]:
    gens = []
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            if k != l:
                gens += [IntMatrix.elementary(n, k, l, 1), IntMatrix.elementary(n, k, l, -1)]
    for k in range(1, n):
        sigma = list(range(1, n + 1))
        sigma[k - 1], sigma[k] = sigma[k], sigma[k - 1]
        gens.append(IntMatrix.permutation(sigma))
    return gens


def search_twist(w1: IntMatrix, w2: IntMatrix, n: int, depth: int = 3) -> IntMatrix | None:
    """Breadth-first search for Psi, a word of length <= depth in E_{k,l}(+-1) and adjacent
    transpositions, with Lambda^2(Psi) W1 = W2.  The generator set is closed under inverses."""
    gens = _generator_set(n)
    start = IntMatrix.identity(n)
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        twist_mat, k = queue.popleft()
        if _lambda2(twist_mat) @ w1 == w2:
            return twist_mat
        if k == depth:
            continue
        for g in gens:
            nxt = twist_mat @ g
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, k + 1))
    return None


def compare_rkk(d1: BundleDescriptor, d2: BundleDescriptor, twist_mat: IntMatrix | None = None,
                depth: int = 3) -> RkkVerdict:
    """Compare two bundles over the same base up to RKK-equivalence after commutative twisting.

    n = 2: decided completely.  n = 3: SL orbit -> equivalent, GL \\ SL -> K-bundles only.
    n >= 4: only a Lambda^2 Psi witness (supplied or searched) gives a definite answer.
    """
    _check_comparable(d1, d2)
    n, w1, w2 = d1.n, d1.winding, d2.winding
    if n == 2:
        for eps in (1, -1):
            if w1.scale(eps) == w2:
                return RkkVerdict(Verdict.RKK_EQUIVALENT_VIA_TWIST,
                                  {"A": [[eps]], "twist_mat": IntMatrix.diag([eps, 1]).tolist()},
                                  (CITE["n2"], CITE["conjugate"], CITE["image"]))
        return RkkVerdict(Verdict.NOT_EQUIVALENT, {"refutation": "W2 != +-W1"},
                          (CITE["n2"], CITE["n2-monodromy"]))
    if n == 3:
        g = sl_orbit_witness(w1, w2)
        if g is not None:
            mem = lambda2_image_member(3, g)
            return RkkVerdict(Verdict.RKK_EQUIVALENT_VIA_TWIST,
                              {"A": g.tolist(), "twist_mat": mem.witness.tolist()},
                              (CITE["twist"], CITE["image"]))
        if gl_orbit_equal(w1, w2):
            a = gl_orbit_witness(w1, w2)
            return RkkVerdict(Verdict.ISOMORPHIC_K_BUNDLES_ONLY, {"A": a.tolist(), "det": det(a)},
                              (CITE["n3-k"], CITE["n3-open"]), N3_CAVEAT)
        return RkkVerdict(Verdict.NOT_EQUIVALENT, {"refutation": "W1, W2 in different GL_3(Z) orbits"},
                          (CITE["n3-k"], CITE["conjugate"]))
    if twist_mat is not None:
        if lambda2_matrix(twist_mat) @ w1 == w2:
            return RkkVerdict(Verdict.RKK_EQUIVALENT_VIA_TWIST,
                              {"A": lambda2_matrix(twist_mat).tolist(), "twist_mat": twist_mat.tolist()},
                              (CITE["twist"],))
    found = search_twist(w1, w2, n, depth)
    if found is not None:
        return RkkVerdict(Verdict.RKK_EQUIVALENT_VIA_TWIST,
                          {"A": lambda2_matrix(found).tolist(), "twist_mat": found.tolist()},
                          (CITE["twist"],))
    return RkkVerdict(Verdict.UNDETERMINED,
                      {"gl_orbit_equal": gl_orbit_equal(w1, w2), "sl_orbit_equal": sl_orbit_equal(w1, w2),
                       "search_depth": depth},
                      (CITE["partial"],),
                      "no Lambda^2 Psi witness found within the search depth; a negative answer cannot be concluded for n > 3")


# --- conjugacy of K-bundles ------------------------------------------------------------

def grading_flip(n: int, order: BasisOrder = BasisOrder.LEX) -> IntMatrix:
    """e_J -> (-1)^{|J|(|J|-1)/2} e_J; conjugates M(v) to M(-v)."""
    return IntMatrix.diag([(-1) ** (len(j) * (len(j) - 1) // 2) for j in basis(n, order)])


def intertwiner(n: int, a: IntMatrix, order: BasisOrder = BasisOrder.LEX) -> IntMatrix:
    """T on Lambda*(Z^n) with T M(v) T^-1 = M(A v) for pair vectors v.

    Built from Psi with Lambda^2 Psi = +-A: T = flip^{[sign = -1]} Lambda*(Psi^-T).
    """
    for sign in (1, -1):
        target = a.scale(sign)
        if n in (2, 3):
            mem = lambda2_image_member(n, target)
            twist_mat = mem.witness if mem.member else None
        else:
            twist_mat = None
        if twist_mat is not None:
            t = induced_matrix(inverse(twist_mat).T, order)
            return grading_flip(n, order) @ t if sign == -1 else t
    raise ValueError("no intertwiner available for this A")


def monodromy_conjugate(d1: BundleDescriptor, d2: BundleDescriptor, a: IntMatrix,
                        order: BasisOrder = BasisOrder.LEX) -> bool:
    """rep2(loop) T == T rep1(loop) on all basis loops, T = intertwiner(A)."""
    t = intertwiner(d1.n, a, order)
    k1, k2 = k_bundle(d1, order), k_bundle(d2, order)
    return all(k2(g).matrix @ t == t @ k1(g).matrix for g in k1.basis_loops())
