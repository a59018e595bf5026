"""Command-line front end.

Exit codes: 0 success (a "false" answer is still success), 1 failed golden
check, 2 validation error, 3 undetermined verdict.

Winding matrices stand for homotopy classes [X, T^{n(n-1)/2}] only when
H^1(X; Z) = Hom(H_1(X; Z), Z); loops are given as vectors in the free part of H_1.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import bundles, heisenberg, monodromy, nctorus
from .exterior import BasisOrder
from .intmat import IntMatrix, NotUnimodular, ShapeError

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_UNDETERMINED = 0, 1, 2, 3


class ValidationError(ValueError):
    pass


class AliasingError(ValueError):
    """Consecutive samples of a loop differ by half a turn or more."""


# --- sampled loops ---------------------------------------------------------------

@dataclass(frozen=True)
class SampledLoop:
    """N samples of a loop in T^k, as unit complex numbers of shape (N, k)."""
    samples: np.ndarray

    @classmethod
    def from_phases(cls, phases) -> SampledLoop:
        """Phases in radians."""
        return cls.from_complex(np.exp(1j * np.asarray(phases, dtype=float)))

    @classmethod
    def from_complex(cls, values) -> SampledLoop:
        z = np.asarray(values, dtype=complex)
        if z.ndim == 1:
            z = z[:, None]
        if z.ndim != 2 or z.shape[0] < 3:
            raise ValidationError("a sampled loop needs at least 3 samples")
        if np.any(np.abs(z) == 0):
            raise ValidationError("loop samples must be nonzero")
        return cls(z / np.abs(z))


def winding_of_loop(loop: SampledLoop, residual_tol: float = 1e-6) -> tuple[int, ...]:
    """Winding number of each component: (1/2pi) * sum of principal phase steps, closing the loop."""
    z = loop.samples
    steps = np.angle(np.roll(z, -1, axis=0) / z)
    if np.any(np.abs(steps) >= math.pi - 1e-12):
        raise AliasingError("a phase step reaches pi; sample the loop more finely")
    total = steps.sum(axis=0) / (2 * math.pi)
    out = np.rint(total)
    if np.any(np.abs(total - out) > residual_tol):
        raise AliasingError(f"winding sum {total} is not within {residual_tol} of an integer")
    return tuple(int(k) for k in out)


# --- output ---------------------------------------------------------------------

def _clean(obj: Any) -> Any:
    """Make output deterministic: floats to 12 significant digits, tuples to lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, (np.floating,)):
        return float(f"{float(obj):.12g}")
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2)


def _matrix_text(m: IntMatrix | list) -> str:
    rows = m.tolist() if isinstance(m, IntMatrix) else m
    if not rows:
        return "  []"
    width = max(len(str(x)) for r in rows for x in r)
    return "\n".join("  [" + " ".join(str(x).rjust(width) for x in r) + "]" for r in rows)


def _is_flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _is_grid(v) -> bool:
    return isinstance(v, list) and bool(v) and all(_is_flat(r) and r for r in v)


def _text(obj: Any, indent: int = 0) -> str:
    pad = " " * indent
    if isinstance(obj, dict):
        if {"rows", "cols", "data"} <= obj.keys():
            head = f"{pad}{obj['rows']}x{obj['cols']}"
            if "basis" in obj:
                head += f" (basis {obj['basis']})"
            return head + "\n" + "\n".join(pad + line for line in _matrix_text(obj["data"]).splitlines())
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _is_flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 2))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v)}")
        return "\n".join(lines)
    if _is_grid(obj):
        return "\n".join(pad + line for line in _matrix_text(obj).splitlines())
    if isinstance(obj, list):
        lines = []
        for k, v in enumerate(obj):
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}[{k}]")
                lines.append(_text(v, indent + 2))
            else:
                lines.append(f"{pad}- {v}")
        return "\n".join(lines)
    return f"{pad}{obj}"


def emit(payload: Any, fmt: str, out=None) -> None:
    out = out or sys.stdout
    payload = _clean(payload)
    out.write((dumps(payload) if fmt == "json" else _text(payload)) + "\n")


# --- input --------------------------------------------------------------------

def load_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read JSON from {path}: {exc}") from exc


def load_matrix(path: str) -> IntMatrix:
    obj = load_json(path)
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected a matrix object with rows, cols, data")
    return IntMatrix.from_json(obj)


def load_descriptor(path: str) -> bundles.BundleDescriptor:
    obj = load_json(path)
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected a bundle descriptor object")
    return bundles.BundleDescriptor.from_json(obj)


def parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from exc


# --- commands -------------------------------------------------------------------

def cmd_monodromy(args) -> int:
    w = load_matrix(args.winding)
    loop = parse_int_list(args.loop) if args.loop is not None else [1] + [0] * (w.cols - 1)
    order = BasisOrder(args.basis)
    m = monodromy.representation(args.n, w, loop, order)
    payload = {"n": args.n, "loop": loop, "matrix": m.to_json(),
               "even": m.even.to_json(), "odd": m.odd.to_json(),
               "identity": m.is_identity(),
               "pair_exponents": dict(zip((f"{i},{j}" for i, j in monodromy.pairs(args.n)), w.apply(loop)))}
    emit(payload, args.format)
    return EXIT_OK


def cmd_rkk(args) -> int:
    d1, d2 = load_descriptor(args.a), load_descriptor(args.b)
    twist_mat = load_matrix(args.twist_mat) if args.twist_mat else None
    v = bundles.compare_rkk(d1, d2, twist_mat=twist_mat, depth=args.depth)
    emit(v.to_json(), args.format)
    return EXIT_UNDETERMINED if v.verdict is bundles.Verdict.UNDETERMINED else EXIT_OK


def cmd_tdual(args) -> int:
    d = load_descriptor(args.descriptor)
    r = bundles.has_classical_t_dual(d)
    emit({"classical_t_dual": r.exists, "k_trivial": bundles.is_k_trivial(d), "evidence": r.evidence},
         args.format)
    return EXIT_OK


def cmd_heisenberg(args) -> int:
    word = heisenberg.parse_word(args.word)
    g = heisenberg.normal_form(word, args.n)
    emit({"word": str(word), "element": g.to_json(), "normal_word": str(heisenberg.to_word(g)),
          "relation": heisenberg.COMMUTATION_RELATION}, args.format)
    return EXIT_OK


def nctorus_report(p: int, q: int, degree: int, tol: float) -> dict:
    rep = nctorus.clock_shift(p, q)
    relation = rep.relation_residual()
    report: dict[str, Any] = {
        "p": p, "q": q,
        "relation_residual": relation,
        "unitarity_residual": rep.unitarity_residual(),
        "relation_ok": relation <= tol,
    }
    if 0 < p < q:
        theta = Fraction(p, q)
        proj = nctorus.rieffel_projection(theta, degree=degree)
        mat = nctorus.represent(proj)
        evals = np.linalg.eigvalsh((mat + mat.conj().T) / 2)
        report["rieffel"] = {
            "theta": str(theta),
            "degree": degree,
            "trace": nctorus.normalized_trace(mat),
            "trace_error": abs(nctorus.normalized_trace(mat) - p / q),
            "projection_defect": nctorus.projection_defect(mat),
            "eigenvalues": [float(x) for x in evals],
        }
    return report


def trace_table_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "q", "relation_residual", "trace", "trace_error", "projection_defect"])
    for r in rows:
        rf = r.get("rieffel", {})
        w.writerow([r["p"], r["q"], f"{r['relation_residual']:.12g}",
                    f"{rf['trace']:.12g}" if rf else "", f"{rf['trace_error']:.12g}" if rf else "",
                    f"{rf['projection_defect']:.12g}" if rf else ""])
    return buf.getvalue()


def cmd_nctorus(args) -> int:
    tol = args.tolerance if args.tolerance is not None else 1e-12
    if args.q_max:
        rows = [nctorus_report(p, q, args.degree, tol)
                for q in range(1, args.q_max + 1) for p in range(q) if math.gcd(p, q) == 1]
    else:
        rows = [nctorus_report(args.p, args.q, args.degree, tol)]
    if args.csv:
        sys.stdout.write(trace_table_csv(rows))
    else:
        emit(rows[0] if len(rows) == 1 else rows, args.format)
    return EXIT_OK


def cmd_lambda2(args) -> int:
    twist_mat = load_matrix(args.twist_mat)
    n = twist_mat.rows
    a = bundles.lambda2_matrix(twist_mat)
    mem = bundles.lambda2_image_member(n, a) if n in (2, 3) else bundles.ImageMembership(None)
    payload = {"n": n, "twist_matrix": twist_mat.to_json(), "lambda2": a.to_json(),
               "pairs": [f"{i},{j}" for i, j in monodromy.pairs(n)]}
    if args.member:
        target = load_matrix(args.member)
        mem = bundles.lambda2_image_member(n, target)
    payload["image_member"] = {"member": mem.member,
                               "witness": mem.witness.to_json() if mem.witness is not None else None,
                               "note": mem.note}
    emit(payload, args.format)
    return EXIT_UNDETERMINED if mem.member is None else EXIT_OK


GOLDEN_N2_EVEN = [[1, 1], [0, 1]]


def golden_n3(w12: int, w23: int, w13: int) -> tuple[list[list[int]], list[list[int]]]:
    """The two 4x4 blocks for n = 3 in the bases (1, e12, e23, e13) and (e1, e2, e3, e123)."""
    even = [[1, w12, w23, w13], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    odd = [[1, 0, 0, w23], [0, 1, 0, -w13], [0, 0, 1, w12], [0, 0, 0, 1]]
    return even, odd


def golden_checks() -> list[dict]:
    checks = []
    g = monodromy.basic_generator(2, (1, 2))
    checks.append({"name": "n=2 generator, even block on ([1], beta)", "expected": GOLDEN_N2_EVEN,
                   "computed": g.even.tolist()})
    checks.append({"name": "n=2 generator, odd block", "expected": [[1, 0], [0, 1]],
                   "computed": g.odd.tolist()})
    for w12, w23, w13 in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 2, 3), (-2, 3, -1)]:
        m = monodromy.from_exponents(3, [w12, w13, w23], BasisOrder.GRADED_DIM3)
        even, odd = golden_n3(w12, w23, w13)
        label = f"(w12, w23, w13) = ({w12}, {w23}, {w13})"
        checks.append({"name": f"n=3 even block {label}", "expected": even, "computed": m.even.tolist()})
        checks.append({"name": f"n=3 odd block {label}", "expected": odd, "computed": m.odd.tolist()})
    for c in checks:
        c["ok"] = c["expected"] == c["computed"]
    return checks


def cmd_golden(args) -> int:
    checks = golden_checks()
    ok = all(c["ok"] for c in checks)
    emit({"all_ok": ok, "checks": checks}, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_winding(args) -> int:
    obj = load_json(args.samples)
    try:
        if isinstance(obj, dict) and "phases" in obj:
            loop = SampledLoop.from_phases(obj["phases"])
        elif isinstance(obj, dict) and "samples" in obj:
            arr = np.asarray(obj["samples"], dtype=float)
            loop = SampledLoop.from_complex(arr[..., 0] + 1j * arr[..., 1])
        else:
            raise ValidationError('expected {"phases": [...]} or {"samples": [[re, im], ...]}')
    except (TypeError, IndexError, ValueError) as exc:
        raise ValidationError(str(exc)) from exc
    tol = args.tolerance if args.tolerance is not None else 1e-6
    emit({"winding": list(winding_of_loop(loop, tol)), "samples": int(loop.samples.shape[0])}, args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def options(default_format, default_tol):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--format", choices=("json", "text"), default=default_format)
        p.add_argument("--tolerance", type=float, default=default_tol,
                       help="override the numerical tolerance of the verification layer")
        return p

    # options may come before or after the subcommand; the subcommand copy must not reset them
    common = options(argparse.SUPPRESS, argparse.SUPPRESS)
    ap = argparse.ArgumentParser(prog="nctbundles", description=__doc__.splitlines()[0],
                                 parents=[options("json", None)])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("monodromy", parents=[common], help="monodromy matrix of a loop")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--winding", required=True, help="winding matrix JSON ({rows, cols, data})")
    p.add_argument("--loop", help="loop class in Z^b, comma separated (default: first generator)")
    p.add_argument("--basis", choices=[o.value for o in BasisOrder], default=BasisOrder.LEX.value)
    p.set_defaults(func=cmd_monodromy)

    p = sub.add_parser("rkk-compare", parents=[common], help="compare two bundles up to RKK-equivalence")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--psi", dest="twist_mat", help="candidate twist Psi (JSON matrix), used for n >= 4")
    p.add_argument("--depth", type=int, default=3, help="word length of the twist search for n >= 4")
    p.set_defaults(func=cmd_rkk)

    p = sub.add_parser("tdual-check", parents=[common], help="does a classical T-dual exist")
    p.add_argument("descriptor")
    p.set_defaults(func=cmd_tdual)

    p = sub.add_parser("heisenberg", parents=[common], help="Heisenberg group words")
    hs = p.add_subparsers(dest="action", required=True)
    q = hs.add_parser("normal-form", parents=[common])
    q.add_argument("word", help='e.g. "U1 U2 U1^-1 V1,2^3"')
    q.add_argument("--n", type=int, default=None)
    q.set_defaults(func=cmd_heisenberg)

    p = sub.add_parser("nctorus", parents=[common], help="rational noncommutative torus checks")
    ns = p.add_subparsers(dest="action", required=True)
    q = ns.add_parser("verify", parents=[common])
    q.add_argument("--p", type=int, default=1)
    q.add_argument("--q", type=int, default=3)
    q.add_argument("--q-max", type=int, default=None, help="tabulate all coprime p/q with q <= Q")
    q.add_argument("--degree", type=int, default=32, help="Fourier truncation of the Rieffel projection")
    q.add_argument("--csv", action="store_true", help="emit the trace table as CSV")
    q.set_defaults(func=cmd_nctorus)

    p = sub.add_parser("lambda2", parents=[common], help="Lambda^2 of a matrix in GL_n(Z)")
    p.add_argument("--psi", dest="twist_mat", required=True, help="matrix in GL_n(Z), JSON")
    p.add_argument("--member", help="test this pair-lattice matrix for membership in the image instead")
    p.set_defaults(func=cmd_lambda2)

    p = sub.add_parser("golden", parents=[common], help="check the classical monodromy matrices")
    p.set_defaults(func=cmd_golden)

    p = sub.add_parser("winding", parents=[common], help="winding numbers of a sampled loop")
    p.add_argument("samples", help='JSON {"phases": [...]} or {"samples": [[re, im], ...]}')
    p.set_defaults(func=cmd_winding)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ShapeError, NotUnimodular, AliasingError, nctorus.ThetaMismatch,
            KeyError, TypeError, ValueError, IndexError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
