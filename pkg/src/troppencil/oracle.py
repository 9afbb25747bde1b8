"""Independent numeric validation of the asymptotic predictions.

The pencil is instantiated at a decreasing grid of concrete eps values, its
true eigenvalues are computed as roots of the determinant, trajectories are
linked across eps by a log-distance assignment, and observed leading
exponents (log-log regression slopes) and coefficients are compared with the
predicted branches.  Everything here deliberately avoids the exact tropical
machinery it validates; matching uses scipy's assignment solver, not ours.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .complex_poly import TAU_STRIP, instantiate, pencil_eigenvalues
from .errors import MatchFailure, TooLarge
from .minplus import ExtRat, lower_envelope, corners as extract_corners
from .theorem1 import AsymptoticReport, PencilSpec
from .tropical_pencil import CharPolyFunction, TropPencil

DEFAULT_EPS_GRID = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)


@dataclass(frozen=True)
class Trajectory:
    """One eigenvalue followed across the eps grid."""

    values: tuple[complex, ...]
    is_zero: bool
    slope: Optional[float]  # log-log regression exponent, None for zeros


@dataclass(frozen=True)
class SweepResult:
    eps_values: tuple[float, ...]
    eigenvalues: tuple[tuple[complex, ...], ...]  # per-eps, zeros included
    trajectories: tuple[Trajectory, ...]


def _log_distance(a: complex, b: complex) -> float:
    # scale-free metric: modulus in log space plus wrapped argument gap
    la, lb = math.log(abs(a)), math.log(abs(b))
    da = abs(cmath.phase(a) - cmath.phase(b))
    da = min(da, 2 * math.pi - da)
    return abs(la - lb) + da


def _match_lists(prev: Sequence[complex], cur: Sequence[complex]) -> list[int]:
    """Injective matching (permutation) of cur onto prev by log distance."""
    n = len(prev)
    cost = np.zeros((n, n))
    for i, a in enumerate(prev):
        for j, b in enumerate(cur):
            if a == 0 and b == 0:
                cost[i, j] = 0.0
            elif a == 0 or b == 0:
                cost[i, j] = 1e9
            else:
                cost[i, j] = _log_distance(a, b)
    rows, cols = linear_sum_assignment(cost)
    out = [0] * n
    for r, c in zip(rows, cols):
        out[r] = c
    return out


def sweep(
    spec: PencilSpec,
    eps_list: Sequence[float] = DEFAULT_EPS_GRID,
    tau: float = TAU_STRIP,
    precision: Optional[int] = None,
) -> SweepResult:
    """Numeric eigenvalue trajectories of the instantiated pencil.

    Zero eigenvalues (trailing determinant coefficients below tau) are kept
    as literal zeros so identically-zero trajectories stay visible.
    """
    eps_list = tuple(float(e) for e in eps_list)
    if any(e <= 0 for e in eps_list) or any(
        nxt >= prev for prev, nxt in zip(eps_list, eps_list[1:])
    ):
        raise ValueError("eps values must be positive and strictly decreasing")
    per_eps: list[list[complex]] = []
    for eps in eps_list:
        rs = pencil_eigenvalues(instantiate(spec, eps), tau=tau, precision=precision)
        vals = rs.expanded() + [0j] * rs.zero_multiplicity
        per_eps.append(vals)
    counts = {len(v) for v in per_eps}
    if len(counts) != 1:
        raise MatchFailure(
            f"eigenvalue count varies across eps ({sorted(counts)}); "
            "degree deficiency is eps-dependent at this tolerance"
        )
    counts.pop()
    # link trajectories across consecutive eps
    linked: list[list[complex]] = [[z] for z in per_eps[0]]
    prev = list(per_eps[0])
    for vals in per_eps[1:]:
        idx = _match_lists(prev, vals)
        prev = [vals[i] for i in idx]
        for traj, z in zip(linked, prev):
            traj.append(z)
    trajectories = []
    logeps = np.log(np.array(eps_list))
    for traj in linked:
        zero = all(z == 0 for z in traj)
        slope = None
        if not zero and all(z != 0 for z in traj) and len(traj) >= 3:
            slope = float(np.polyfit(logeps, np.log(np.abs(traj)), 1)[0])
        trajectories.append(Trajectory(tuple(traj), zero, slope))
    return SweepResult(
        eps_values=eps_list,
        eigenvalues=tuple(tuple(v) for v in per_eps),
        trajectories=tuple(trajectories),
    )


@dataclass(frozen=True)
class BranchValidation:
    gamma: ExtRat
    lam: complex
    trajectory_index: int
    coeff_rel_error: float
    exponent_error: Optional[float]


@dataclass(frozen=True)
class CornerValidation:
    gamma: ExtRat
    n_below: int  # trajectories with eps^-gamma * L -> 0
    n_above: int  # trajectories with |eps^-gamma * L| -> inf
    m_prime_gamma: int


@dataclass(frozen=True)
class ValidationTable:
    branch_rows: tuple[BranchValidation, ...]
    corner_rows: tuple[CornerValidation, ...]
    unmatched_trajectories: tuple[int, ...]

    @property
    def max_coeff_error(self) -> float:
        return max((r.coeff_rel_error for r in self.branch_rows), default=0.0)

    @property
    def max_exponent_error(self) -> float:
        return max(
            (r.exponent_error for r in self.branch_rows if r.exponent_error is not None),
            default=0.0,
        )


def match_predictions(sw: SweepResult, report: AsymptoticReport) -> ValidationTable:
    """Match predicted branches to observed trajectories and score errors.

    Raises MatchFailure when nonzero trajectories stay unmatched although the
    report claims every eigenvalue is accounted for (unresolved_count = 0).
    """
    eps_min = sw.eps_values[-1]
    nonzero_idx = [i for i, t in enumerate(sw.trajectories) if not t.is_zero]
    branches = list(report.branches)
    if branches and nonzero_idx:
        cost = np.zeros((len(branches), len(nonzero_idx)))
        for bi, b in enumerate(branches):
            pred = b.value(eps_min)
            for ti, i in enumerate(nonzero_idx):
                obs = sw.trajectories[i].values[-1]
                cost[bi, ti] = _log_distance(pred, obs) if obs != 0 else 1e9
        rows, cols = linear_sum_assignment(cost)
        assignment = dict(zip(rows.tolist(), cols.tolist()))
    else:
        assignment = {}

    branch_rows = []
    matched = set()
    for bi, b in enumerate(branches):
        if bi not in assignment:
            continue
        i = nonzero_idx[assignment[bi]]
        matched.add(i)
        traj = sw.trajectories[i]
        obs = traj.values[-1]
        pred = b.value(eps_min)
        coeff_err = abs(obs / pred - 1) if pred != 0 else float("inf")
        exp_err = (
            abs(traj.slope - float(b.gamma.frac)) if traj.slope is not None else None
        )
        branch_rows.append(
            BranchValidation(
                gamma=b.gamma,
                lam=b.lam,
                trajectory_index=i,
                coeff_rel_error=coeff_err,
                exponent_error=exp_err,
            )
        )

    unmatched = tuple(i for i in nonzero_idx if i not in matched)
    if unmatched and report.unresolved_count == 0:
        raise MatchFailure(
            f"{len(unmatched)} nonzero trajectories have no predicted branch"
        )

    corner_rows = []
    for rec in report.corner_records:
        if rec.error is not None:
            continue
        g = float(rec.gamma.frac)
        below = 0
        above = 0
        for t in sw.trajectories:
            if t.is_zero:
                below += 1
                continue
            first = abs(t.values[0]) * sw.eps_values[0] ** (-g)
            last = abs(t.values[-1]) * eps_min ** (-g)
            if last < first and last < 1e-2:
                below += 1
            elif last > first and last > 1e2:
                above += 1
        corner_rows.append(
            CornerValidation(
                gamma=rec.gamma,
                n_below=below,
                n_above=above,
                m_prime_gamma=rec.m_prime_gamma,
            )
        )

    return ValidationTable(
        branch_rows=tuple(branch_rows),
        corner_rows=tuple(corner_rows),
        unmatched_trajectories=unmatched,
    )


def brute_force_trop_charpoly(A: TropPencil) -> CharPolyFunction:
    """Literal lower-envelope oracle for the characteristic function.

    Enumerates every permutation and every per-entry degree choice, forms the
    explicit finite set of lines (total degree, total coefficient), and takes
    their lower envelope.  Same contract as char_poly_function; factorial in
    n, capped at n <= 7.
    """
    n = A.n
    if n > 7:
        raise TooLarge("brute force enumeration is capped at n = 7")
    from .errors import SingularTropPencil

    lines: dict[int, object] = {}
    entry_options = [
        [
            [(k, layer[i, j].frac) for k, layer in enumerate(A.layers)
             if not layer[i, j].is_inf]
            for j in range(n)
        ]
        for i in range(n)
    ]
    found = False
    for sigma in itertools.permutations(range(n)):
        opts = [entry_options[i][sigma[i]] for i in range(n)]
        if any(not o for o in opts):
            continue
        found = True
        for combo in itertools.product(*opts):
            s = sum(k for k, _ in combo)
            b = sum((c for _, c in combo), start=0)
            if s not in lines or b < lines[s]:
                lines[s] = b
    if not found:
        raise SingularTropPencil("no permutation of the pencil has finite weight")
    f = lower_envelope(lines.items())
    return CharPolyFunction(
        f=f,
        corners=extract_corners(f),
        val_perm=f.terminal_slope,
        deg_perm=f.initial_slope,
        probe_count=0,
    )
