"""Command-line interface and spec-file serialization.

Spec files are JSON documents with fields n, d and terms, each term holding
a degree, an n x n coefficient array of [re, im] pairs, and an n x n
exponent array whose cells are numbers, rational strings "p/q", or "inf".
Rational exponents travel as strings so that no float round-off ever reaches
the exact tropical layer.

Exit codes: 0 success, 1 hard error, 2 ran fine but some corner was
non-generic with unresolved eigenvalues, 3 validation mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

import numpy as np

from . import __version__
from .assignment import hungarian, opt_graph, sat_graph
from .complex_poly import TAU_STRIP
from .errors import MatchFailure, TropPencilError
from .oracle import DEFAULT_EPS_GRID, match_predictions, sweep
from .theorem1 import (
    PencilSpec,
    WeierstrassSpec,
    analyze,
    najman_check,
    najman_pencil,
    theorem1_consistency,
)
from .tropical_pencil import char_poly_function, eval_pencil
from .validation import (
    as_complex_matrix,
    as_exponent_matrix,
    exponent_from_token,
    exponent_to_token,
)


def parse_spec(doc: dict) -> PencilSpec:
    try:
        n = int(doc["n"])
        d = int(doc["d"])
        terms = doc["terms"]
    except (KeyError, TypeError) as exc:
        raise TropPencilError(f"spec file missing field: {exc}") from exc
    coeffs = [np.zeros((n, n), dtype=complex) for _ in range(d + 1)]
    exps = [[["inf"] * n for _ in range(n)] for _ in range(d + 1)]
    seen = set()
    for idx, term in enumerate(terms):
        try:
            k = int(term["degree"])
        except (KeyError, TypeError) as exc:
            raise TropPencilError(f"terms[{idx}]: missing degree") from exc
        if not 0 <= k <= d:
            raise TropPencilError(f"terms[{idx}]: degree {k} outside 0..{d}")
        if k in seen:
            raise TropPencilError(f"terms[{idx}]: degree {k} appears twice")
        seen.add(k)
        try:
            coeffs[k] = as_complex_matrix(term["coeff"], n)
            exps[k] = term["exponent"]
        except KeyError as exc:
            raise TropPencilError(f"terms[{idx}]: missing field {exc}") from exc
    exp_mats = [as_exponent_matrix(e, n) for e in exps]
    return PencilSpec.build(coeffs, exp_mats)


def load_spec(path: str) -> PencilSpec:
    with open(path) as fh:
        return parse_spec(json.load(fh))


def spec_to_doc(spec: PencilSpec) -> dict:
    terms = []
    for k in range(spec.d + 1):
        A = spec.exponent_layers[k]
        if all(A[i, j].is_inf for i in range(spec.n) for j in range(spec.n)):
            continue
        a = spec.coeff_layers[k]
        terms.append(
            {
                "degree": k,
                "coeff": [[[a[i, j].real, a[i, j].imag] for j in range(spec.n)]
                          for i in range(spec.n)],
                "exponent": [[exponent_to_token(A[i, j]) for j in range(spec.n)]
                             for i in range(spec.n)],
            }
        )
    return {"n": spec.n, "d": spec.d, "terms": terms}


def canonical_text(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _emit(payload: dict, fmt: str, human: str) -> None:
    if fmt == "machine":
        print(canonical_text(payload), end="")
    else:
        print(human)


def _fmt_corners(corners) -> str:
    parts = [f"{c} (x{m})" for c, m in corners.entries]
    return ", ".join(parts) if parts else "(none)"


def cmd_corners(args) -> int:
    spec = load_spec(args.file)
    cp = char_poly_function(spec.trop_pencil())
    payload = {
        "corners": [[str(c), m] for c, m in cp.corners.entries],
        "val_perm": cp.val_perm,
        "deg_perm": cp.deg_perm,
        "pieces": [[s, str(b)] for s, b in cp.f.pieces],
    }
    human = "\n".join(
        [
            f"corners: {_fmt_corners(cp.corners)}",
            f"val permanent (terminal slope): {cp.val_perm}",
            f"deg permanent (initial slope):  {cp.deg_perm}",
            "pieces (slope, intercept): "
            + ", ".join(f"({s}, {b})" for s, b in cp.f.pieces),
        ]
    )
    _emit(payload, args.format, human)
    return 0


def cmd_predict(args) -> int:
    spec = load_spec(args.file)
    report = analyze(spec, mode=args.mode, tau=args.tol)
    diag = theorem1_consistency(report)
    payload = {
        "mode": report.mode,
        "branches": [
            {"gamma": str(b.gamma), "lambda": [b.lam.real, b.lam.imag]}
            for b in report.branches
        ],
        "corners": [
            {
                "gamma": str(r.gamma),
                "multiplicity": r.multiplicity,
                "m_gamma": r.m_gamma,
                "m_prime_gamma": r.m_prime_gamma,
                "generic": r.generic,
                "error": r.error,
            }
            for r in report.corner_records
        ],
        "identically_zero_count": report.identically_zero_count,
        "unresolved_count": report.unresolved_count,
        "consistency": diag["consistent"],
    }
    lines = [f"mode: {report.mode}"]
    for r in report.corner_records:
        status = "generic" if r.generic else (r.error or "non-generic")
        lines.append(
            f"corner gamma={r.gamma} mult={r.multiplicity}: "
            f"m={r.m_gamma} m'={r.m_prime_gamma} [{status}]"
        )
    for b in report.branches:
        lines.append(f"branch: L_eps ~ ({b.lam:.6g}) * eps^{b.gamma}")
    lines.append(f"identically zero eigenvalues: {report.identically_zero_count}")
    lines.append(f"unresolved eigenvalues: {report.unresolved_count}")
    _emit(payload, args.format, "\n".join(lines))
    return 2 if report.unresolved_count > 0 else 0


def _parse_eps(text: Optional[str]) -> tuple[float, ...]:
    if not text:
        return DEFAULT_EPS_GRID
    return tuple(float(x) for x in text.split(","))


def cmd_verify(args) -> int:
    spec = load_spec(args.file)
    report = analyze(spec, mode=args.mode, tau=args.tol)
    eps = _parse_eps(args.eps)
    sw = sweep(spec, eps, tau=args.tol)
    try:
        table = match_predictions(sw, report)
    except MatchFailure as exc:
        _emit({"error": "match_failure", "detail": str(exc)}, args.format,
              f"validation mismatch: {exc}")
        return 3
    payload = {
        "eps": list(sw.eps_values),
        "branches": [
            {
                "gamma": str(r.gamma),
                "lambda": [r.lam.real, r.lam.imag],
                "coeff_rel_error": r.coeff_rel_error,
                "exponent_error": r.exponent_error,
            }
            for r in table.branch_rows
        ],
        "max_coeff_error": table.max_coeff_error,
        "max_exponent_error": table.max_exponent_error,
        "unmatched": list(table.unmatched_trajectories),
    }
    lines = [f"eps grid: {', '.join(f'{e:g}' for e in sw.eps_values)}"]
    for r in table.branch_rows:
        expo = "n/a" if r.exponent_error is None else f"{r.exponent_error:.3g}"
        lines.append(
            f"branch gamma={r.gamma}: coeff err {r.coeff_rel_error:.3g}, "
            f"exponent err {expo}"
        )
    lines.append(f"max coefficient error: {table.max_coeff_error:.3g}")
    lines.append(f"max exponent error:    {table.max_exponent_error:.3g}")
    _emit(payload, args.format, "\n".join(lines))
    return 0


def cmd_assignment(args) -> int:
    spec = load_spec(args.file)
    trop = spec.trop_pencil()
    cp = char_poly_function(trop)
    gamma = exponent_from_token(args.gamma)
    if cp.corners.multiplicity(gamma) == 0:
        raise TropPencilError(
            f"gamma={gamma} is not a corner; corners are {_fmt_corners(cp.corners)}"
        )
    B = eval_pencil(trop, gamma)
    pair, sigma = hungarian(B)
    sat = sat_graph(B, pair)
    opt = opt_graph(B)
    payload = {
        "gamma": str(gamma),
        "U": [str(u) for u in pair.U],
        "V": [str(v) for v in pair.V],
        "matching": list(sigma),
        "sat_arcs": sorted(map(list, sat.arcs)),
        "opt_arcs": sorted(map(list, opt.arcs)),
    }
    human = "\n".join(
        [
            f"gamma = {gamma}",
            f"U = ({', '.join(str(u) for u in pair.U)})",
            f"V = ({', '.join(str(v) for v in pair.V)})",
            f"optimal matching (row -> col): {list(sigma)}",
            f"Sat arcs: {sorted(sat.arcs)}",
            f"Opt arcs: {sorted(opt.arcs)}",
        ]
    )
    _emit(payload, args.format, human)
    return 0


def load_weierstrass(path: str, seed: Optional[int]) -> tuple[WeierstrassSpec, np.ndarray]:
    with open(path) as fh:
        doc = json.load(fh)
    lambdas = tuple(complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
                    for c in doc.get("lambdas", []))
    w = WeierstrassSpec(
        lambdas=lambdas,
        zero_blocks=tuple(int(s) for s in doc.get("zero_blocks", [])),
        inf_blocks=tuple(int(s) for s in doc.get("inf_blocks", [])),
    )
    mfield = doc.get("m", "random:0")
    if isinstance(mfield, str):
        if not mfield.startswith("random:"):
            raise TropPencilError(f"unrecognized m field {mfield!r}")
        mseed = int(mfield.split(":", 1)[1]) if seed is None else seed
        rng = np.random.default_rng(mseed)
        m = rng.standard_normal((w.n, w.n)) + 1j * rng.standard_normal((w.n, w.n))
    else:
        m = as_complex_matrix(mfield, w.n)
    return w, m


def cmd_najman(args) -> int:
    w, m = load_weierstrass(args.file, args.seed)
    spec = najman_pencil(w, m)
    eps = _parse_eps(args.eps) if args.eps else None
    rep = najman_check(spec, w, eps_list=eps)
    payload = {
        "n": w.n,
        "expected": {str(k): v for k, v in rep.expected["histogram"].items()},
        "observed": {str(k): v for k, v in rep.observed["histogram"].items()},
        "zero_floor": rep.expected["zero_floor"],
        "zero_trajectories": rep.observed["zero_trajectories"],
        "mismatches": list(rep.mismatches),
        "ok": rep.ok,
    }
    lines = [f"n = {w.n}, r = {w.r}, q0 = {w.q0}, q0' = {w.q0_prime}, q_inf = {w.q_inf}"]
    for key, cnt in sorted(rep.expected["histogram"].items()):
        obs = rep.observed["histogram"].get(key, 0)
        lines.append(f"order eps^{key:+g}: expected {cnt}, observed {obs}")
    lines.append(
        f"identically zero: floor {rep.expected['zero_floor']}, "
        f"observed {rep.observed['zero_trajectories']}"
    )
    lines.append("OK" if rep.ok else "MISMATCHES:\n  " + "\n  ".join(rep.mismatches))
    _emit(payload, args.format, "\n".join(lines))
    return 0 if rep.ok else 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="troppencil",
        description="Asymptotic eigenvalue equivalents of perturbed matrix pencils",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("human", "machine"), default="human")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--tol", type=float, default=TAU_STRIP,
                        help="relative coefficient strip threshold")

    sp = sub.add_parser("corners", help="tropical corners of the pencil")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_corners)

    sp = sub.add_parser("predict", help="asymptotic eigenvalue branches")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=("opt", "sat"), default="opt")
    common(sp)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("verify", help="validate predictions with an eps sweep")
    sp.add_argument("file")
    sp.add_argument("--mode", choices=("opt", "sat"), default="opt")
    sp.add_argument("--eps", help="comma-separated decreasing eps values")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("assignment", help="Hungarian pair and graphs at a corner")
    sp.add_argument("file")
    sp.add_argument("--gamma", required=True, help="corner value (rational)")
    common(sp)
    sp.set_defaults(func=cmd_assignment)

    sp = sub.add_parser("najman", help="singular eps*X^2*m + X*c + k scenario check")
    sp.add_argument("file", help="Weierstrass block data file")
    sp.add_argument("--eps", help="comma-separated decreasing eps values")
    common(sp)
    sp.set_defaults(func=cmd_najman)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TropPencilError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
