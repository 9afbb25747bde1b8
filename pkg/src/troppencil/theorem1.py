"""Per-corner asymptotic eigenvalue equivalents of a perturbed pencil.

For each finite corner gamma of the min-plus characteristic polynomial
function, the coefficient layers are masked by the degree-k tightness graphs
at gamma; the nonzero eigenvalues of the resulting auxiliary pencil are the
leading coefficients of the eigenvalue branches of order eps^gamma.  Corners
where the auxiliary determinant degenerates carry no information and are
reported as unresolved rather than failing the whole analysis.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

import numpy as np

from .assignment import TropMatrix
from .complex_poly import (
    CMatrixPencil,
    RootSet,
    TAU_STRIP,
    pencil_eigenvalues,
)
from .errors import InconsistentSpec, SingularPencil
from .minplus import INF, ExtRat, as_extrat
from .tropical_pencil import (
    CharPolyFunction,
    CornerGraphs,
    TropPencil,
    char_poly_function,
    corner_graphs,
    zero_corner_count,
)


@dataclass(frozen=True)
class PencilSpec:
    """Leading coefficients and leading exponents of a perturbed pencil.

    Entries with +inf exponent vanish near 0; their coefficients are stored
    as 0.  A zero coefficient under a finite exponent contradicts leading-term
    semantics and is accepted with a warning (deliberate non-generic probing).
    """

    coeff_layers: tuple[np.ndarray, ...]
    exponent_layers: tuple[TropMatrix, ...]

    @classmethod
    def build(cls, coeff_layers: Sequence, exponent_layers: Sequence) -> "PencilSpec":
        if len(coeff_layers) != len(exponent_layers):
            raise InconsistentSpec("coefficient and exponent layer counts differ")
        exps = tuple(
            layer if isinstance(layer, TropMatrix) else TropMatrix(layer)
            for layer in exponent_layers
        )
        n = exps[0].n
        coeffs = []
        for a, A in zip(coeff_layers, exps):
            a = np.asarray(a, dtype=complex)
            if a.shape != (n, n) or A.n != n:
                raise InconsistentSpec("layer dimensions are inconsistent")
            a = a.copy()
            for i in range(n):
                for j in range(n):
                    if A[i, j].is_inf:
                        a[i, j] = 0
                    elif a[i, j] == 0:
                        warnings.warn(
                            f"zero leading coefficient at layer entry ({i},{j}) "
                            "with finite exponent",
                            stacklevel=3,
                        )
            coeffs.append(a)
        return cls(tuple(coeffs), exps)

    @property
    def n(self) -> int:
        return self.exponent_layers[0].n

    @property
    def d(self) -> int:
        return len(self.exponent_layers) - 1

    def trop_pencil(self) -> TropPencil:
        return TropPencil(self.exponent_layers)

    def shifted(self, c) -> "PencilSpec":
        """Substitute X -> eps^c * X: layer k exponents gain k*c.

        Eigenvalues of the new pencil are the old ones times eps^-c, so
        every branch exponent drops by c with unchanged coefficients.
        """
        c = Fraction(c)
        shifted = []
        for k, A in enumerate(self.exponent_layers):
            rows = [
                [
                    INF if A[i, j].is_inf else ExtRat(A[i, j].frac + k * c)
                    for j in range(A.n)
                ]
                for i in range(A.n)
            ]
            shifted.append(TropMatrix(rows))
        return PencilSpec(self.coeff_layers, tuple(shifted))


@dataclass(frozen=True)
class AsymptoticBranch:
    """One predicted eigenvalue branch L_eps ~ lam * eps^gamma."""

    gamma: ExtRat
    lam: complex

    def value(self, eps: float) -> complex:
        return self.lam * eps ** float(self.gamma.frac)


@dataclass(frozen=True)
class CornerRecord:
    gamma: ExtRat
    multiplicity: int
    m_gamma: int
    m_prime_gamma: int
    generic: bool
    mode: str
    graphs: Optional[CornerGraphs]
    rootset: Optional[RootSet]
    error: Optional[str] = None


@dataclass(frozen=True)
class AsymptoticReport:
    branches: tuple[AsymptoticBranch, ...]
    corner_records: tuple[CornerRecord, ...]
    identically_zero_count: int
    unresolved_count: int
    mode: str
    char_poly: CharPolyFunction

    @property
    def all_generic(self) -> bool:
        return all(r.generic for r in self.corner_records if r.error is None) and not any(
            r.error for r in self.corner_records
        )

    def branches_at(self, gamma) -> tuple[AsymptoticBranch, ...]:
        gamma = as_extrat(gamma)
        return tuple(b for b in self.branches if b.gamma == gamma)


def _auxiliary_pencil(spec: PencilSpec, graphs: CornerGraphs) -> CMatrixPencil:
    layers = []
    for a, G in zip(spec.coeff_layers, graphs.graphs):
        masked = np.zeros_like(a)
        for (i, j) in G.arcs:
            masked[i, j] = a[i, j]
        layers.append(masked)
    return CMatrixPencil(tuple(layers))


def analyze(
    spec: PencilSpec,
    mode: Literal["opt", "sat"] = "opt",
    pairs: Optional[dict] = None,
    tau: float = TAU_STRIP,
) -> AsymptoticReport:
    """Run the full corner-by-corner analysis of the spec.

    pairs optionally maps a corner (ExtRat) to the Hungarian pair to use in
    'sat' mode.  Corners are processed in descending order so that each
    corner's zero-eigenvalue count can be checked against the mass above it.
    """
    trop = spec.trop_pencil()
    cp = char_poly_function(trop)
    finite_corners = sorted(cp.corners.finite, key=lambda cm: cm[0], reverse=True)
    zero_count = zero_corner_count(cp)

    branches: list[AsymptoticBranch] = []
    records: list[CornerRecord] = []
    mass_above = cp.corners.inf_multiplicity  # +inf counts as above every gamma
    for gamma, mult in finite_corners:
        pair = (pairs or {}).get(gamma)
        graphs = corner_graphs(trop, gamma, mode=mode, pair=pair)
        aux = _auxiliary_pencil(spec, graphs)
        try:
            rs = pencil_eigenvalues(aux, tau=tau)
        except SingularPencil:
            records.append(
                CornerRecord(
                    gamma=gamma, multiplicity=mult, m_gamma=0, m_prime_gamma=0,
                    generic=False, mode=mode, graphs=graphs, rootset=None,
                    error="singular auxiliary pencil",
                )
            )
            mass_above += mult
            continue
        m_gamma = rs.n_nonzero
        m_prime = rs.zero_multiplicity
        generic = (m_gamma == mult) and (m_prime == mass_above)
        for lam in rs.expanded():
            branches.append(AsymptoticBranch(gamma=gamma, lam=lam))
        records.append(
            CornerRecord(
                gamma=gamma, multiplicity=mult, m_gamma=m_gamma,
                m_prime_gamma=m_prime, generic=generic, mode=mode,
                graphs=graphs, rootset=rs,
            )
        )
        mass_above += mult

    total_m = sum(r.m_gamma for r in records)
    unresolved = cp.degree - zero_count - total_m
    return AsymptoticReport(
        branches=tuple(branches),
        corner_records=tuple(records),
        identically_zero_count=zero_count,
        unresolved_count=max(unresolved, 0),
        mode=mode,
        char_poly=cp,
    )


def theorem1_consistency(report: AsymptoticReport) -> dict:
    """Cross-corner bookkeeping checks of a completed report.

    For every corner flagged generic, the eigenvalue mass emitted strictly
    above it (plus the identically-zero count) must equal its reported
    zero-eigenvalue multiplicity m'_gamma.  Violations are evidence of
    non-genericity, not errors.
    """
    violations = []
    records = sorted(
        (r for r in report.corner_records), key=lambda r: r.gamma, reverse=True
    )
    seen_above = report.identically_zero_count
    for rec in records:
        if rec.error is None and rec.generic:
            if rec.m_prime_gamma != seen_above:
                violations.append(
                    {
                        "gamma": str(rec.gamma),
                        "m_prime": rec.m_prime_gamma,
                        "mass_above": seen_above,
                    }
                )
        seen_above += rec.m_gamma
    total = sum(r.m_gamma for r in report.corner_records) + report.identically_zero_count
    return {
        "violations": violations,
        "consistent": not violations,
        "total_branch_mass": total,
        "char_poly_degree": report.char_poly.degree,
        "mass_accounted": total == report.char_poly.degree,
    }


@dataclass(frozen=True)
class WeierstrassSpec:
    """Block data of a regular pencil Xc + k in Weierstrass normal form.

    lambdas are the finite nonzero eigenvalues (one 1x1 block each),
    zero_blocks the Jordan block sizes at eigenvalue 0, inf_blocks the block
    sizes at infinity.
    """

    lambdas: tuple[complex, ...]
    zero_blocks: tuple[int, ...] = ()
    inf_blocks: tuple[int, ...] = ()

    @property
    def r(self) -> int:
        return len(self.lambdas)

    @property
    def d0(self) -> int:
        return sum(self.zero_blocks)

    @property
    def d_inf(self) -> int:
        return sum(self.inf_blocks)

    @property
    def q0(self) -> int:
        return len(self.zero_blocks)

    @property
    def q0_prime(self) -> int:
        return sum(1 for s in self.zero_blocks if s == 1)

    @property
    def q_inf(self) -> int:
        return len(self.inf_blocks)

    @property
    def n(self) -> int:
        return self.r + self.d0 + self.d_inf


def _jordan_nilpotent(s: int) -> np.ndarray:
    J = np.zeros((s, s), dtype=complex)
    for i in range(s - 1):
        J[i, i + 1] = 1
    return J


def weierstrass_ck(w: WeierstrassSpec) -> tuple[np.ndarray, np.ndarray]:
    """Matrices (c, k) of the pencil Xc + k assembled block-diagonally."""
    n = w.n
    c = np.zeros((n, n), dtype=complex)
    k = np.zeros((n, n), dtype=complex)
    pos = 0
    for lam in w.lambdas:
        c[pos, pos] = 1
        k[pos, pos] = -lam
        pos += 1
    for s in w.zero_blocks:
        c[pos:pos + s, pos:pos + s] = np.eye(s)
        k[pos:pos + s, pos:pos + s] = _jordan_nilpotent(s)
        pos += s
    for s in w.inf_blocks:
        c[pos:pos + s, pos:pos + s] = _jordan_nilpotent(s)
        k[pos:pos + s, pos:pos + s] = np.eye(s)
        pos += s
    return c, k


def najman_pencil(w: WeierstrassSpec, m: np.ndarray) -> PencilSpec:
    """Spec of the singularly perturbed pencil eps*X^2*m + X*c + k.

    c and k come from the Weierstrass block data; m is the quadratic-layer
    coefficient.  Exponent layers: 0 on nonzero entries of k and c, 1 on
    nonzero entries of m, +inf elsewhere.
    """
    m = np.asarray(m, dtype=complex)
    n = w.n
    if m.shape != (n, n):
        raise InconsistentSpec(
            f"m has shape {m.shape}, block data implies n = {n} "
            f"(r + d0 + d_inf = {w.r} + {w.d0} + {w.d_inf})"
        )
    c, k = weierstrass_ck(w)

    def exps(a: np.ndarray, level: int) -> TropMatrix:
        return TropMatrix(
            [
                [ExtRat(level) if a[i, j] != 0 else INF for j in range(n)]
                for i in range(n)
            ]
        )

    return PencilSpec.build(
        coeff_layers=(k, c, m),
        exponent_layers=(exps(k, 0), exps(c, 0), exps(m, 1)),
    )


@dataclass(frozen=True)
class NajmanReport:
    """Observed vs expected eigenvalue-order counts for eps*X^2*m + X*c + k."""

    expected: dict
    observed: dict
    mismatches: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def najman_check(
    spec: PencilSpec,
    w: WeierstrassSpec,
    eps_list: Optional[Sequence[float]] = None,
    slope_tol: float = 0.02,
    coeff_tol: float = 1e-2,
    precision: Optional[int] = 200,
    tau: Optional[float] = None,
) -> NajmanReport:
    """Validate the predicted order structure of the perturbed pencil.

    Compares the analysis and an eps-sweep against the block data: finite
    nonzero eigenvalues of Xc+k survive at order eps^0, those of Xm+c appear
    at order eps^-1, each infinity block of size s spawns s+1 eigenvalues of
    order eps^(-1/(s+1)), each zero block of size s > 2 spawns s-2 of order
    eps^(1/(s-2)), and at least 2*q0 - q0' eigenvalues vanish identically.
    Count failures are reported, not raised.

    The sweep runs in high precision by default: the instantiated determinant
    mixes coefficient scales far beyond double precision once the grid gets
    small.
    """
    from .oracle import sweep  # local import; oracle depends on this module

    if eps_list is None:
        eps_list = (1e-4, 1e-5, 1e-6, 1e-7) if precision else (1e-2, 1e-3, 1e-4)
    if tau is None:
        tau = 10.0 ** (-(precision - 40)) if precision else TAU_STRIP

    c, k = weierstrass_ck(w)
    m = spec.coeff_layers[2]
    mu_rs = pencil_eigenvalues(CMatrixPencil.from_layers((c, m)))
    mus = mu_rs.expanded()
    t = len(mus)

    report = analyze(spec)
    sw = sweep(spec, eps_list, tau=tau, precision=precision)

    mismatches: list[str] = []

    # (i) r branches at order eps^0 converging to the lambdas
    zero_order = [b.lam for b in report.branches_at(0)]
    if len(zero_order) != w.r:
        mismatches.append(f"(i) expected {w.r} branches at eps^0, got {len(zero_order)}")
    else:
        for lam in w.lambdas:
            close = [x for x in zero_order if abs(x - lam) <= coeff_tol * max(1, abs(lam))]
            if not close:
                mismatches.append(f"(i) no eps^0 branch converging to {lam}")

    # (ii) t branches at order eps^-1 equivalent to mu_i * eps^-1
    minus_one = [b.lam for b in report.branches_at(-1)]
    if len(minus_one) != t:
        mismatches.append(f"(ii) expected {t} branches at eps^-1, got {len(minus_one)}")
    else:
        for mu in mus:
            close = [x for x in minus_one if abs(x - mu) <= coeff_tol * max(1, abs(mu))]
            if not close:
                mismatches.append(f"(ii) no eps^-1 branch with coefficient {mu}")
    if t != w.n - w.q_inf:
        mismatches.append(f"(ii) t = {t} differs from n - q_inf = {w.n - w.q_inf}")

    # (iii) identically zero eigenvalues
    zero_floor = 2 * w.q0 - w.q0_prime
    n_zero_traj = sum(1 for tr in sw.trajectories if tr.is_zero)
    if report.identically_zero_count < zero_floor:
        mismatches.append(
            f"(iii) predicted {report.identically_zero_count} identically-zero "
            f"eigenvalues, lower bound is {zero_floor}"
        )
    if n_zero_traj < zero_floor:
        mismatches.append(
            f"(iii) observed {n_zero_traj} zero trajectories, lower bound is {zero_floor}"
        )

    # (iv)/(v) order histogram from regression slopes
    expected_hist: dict[float, int] = {0.0: w.r, -1.0: t}
    for s in w.inf_blocks:
        key = -1.0 / (s + 1)
        expected_hist[key] = expected_hist.get(key, 0) + s + 1
    for s in w.zero_blocks:
        if s > 2:
            key = 1.0 / (s - 2)
            expected_hist[key] = expected_hist.get(key, 0) + s - 2
    observed_hist: dict[float, int] = {key: 0 for key in expected_hist}
    unclassified = 0
    for tr in sw.trajectories:
        if tr.is_zero or tr.slope is None:
            continue
        hits = [key for key in expected_hist if abs(tr.slope - key) <= slope_tol]
        if len(hits) == 1:
            observed_hist[hits[0]] += 1
        else:
            unclassified += 1
    for key, cnt in expected_hist.items():
        if observed_hist[key] != cnt:
            mismatches.append(
                f"order eps^{key:+g}: expected {cnt} trajectories, got {observed_hist[key]}"
            )
    if unclassified:
        mismatches.append(f"{unclassified} trajectories match no expected order")

    return NajmanReport(
        expected={"histogram": expected_hist, "zero_floor": zero_floor, "t": t,
                  "lambdas": list(w.lambdas), "mus": mus},
        observed={"histogram": observed_hist, "zero_trajectories": n_zero_traj,
                  "branches_at_0": zero_order, "branches_at_-1": minus_one},
        mismatches=tuple(mismatches),
    )
