"""Exact min-plus (tropical) arithmetic layer.

Scalars are exact rationals extended with +infinity, which is the tropical
zero (min-neutral, plus-absorbing).  Formal polynomials, concave
piecewise-linear polynomial functions and corner (tropical root) extraction
live here.  Nothing in this module touches floating point: corners solve
linear equations in the input exponents and slopes are integers, so the whole
layer stays exact and tie-breaking is unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Mapping, Sequence, Union

from .errors import InconsistentTangents

RatLike = Union[int, str, Fraction, "ExtRat"]


@total_ordering
class ExtRat:
    """An exact rational or +infinity, totally ordered with +inf maximal.

    +inf is a distinguished tagged state rather than a sentinel rational,
    so accidental arithmetic on it raises instead of silently corrupting
    results.
    """

    __slots__ = ("_v",)

    def __init__(self, value: RatLike | None = None):
        if isinstance(value, ExtRat):
            self._v = value._v
        elif value is None:
            self._v = None
        elif isinstance(value, float):
            raise TypeError("ExtRat does not accept floats; pass int, str or Fraction")
        else:
            self._v = Fraction(value)

    @property
    def is_inf(self) -> bool:
        return self._v is None

    @property
    def frac(self) -> Fraction:
        if self._v is None:
            raise ValueError("+inf has no rational value")
        return self._v

    def __eq__(self, other):
        if not isinstance(other, ExtRat):
            return NotImplemented
        return self._v == other._v

    def __lt__(self, other):
        if not isinstance(other, ExtRat):
            return NotImplemented
        if self._v is None:
            return False
        if other._v is None:
            return True
        return self._v < other._v

    def __hash__(self):
        return hash(self._v)

    def __repr__(self):
        return "ExtRat(inf)" if self._v is None else f"ExtRat({self._v})"

    def __str__(self):
        return "inf" if self._v is None else str(self._v)


#: The tropical zero (min-neutral element).
INF = ExtRat(None)
#: The tropical unit.
ONE = ExtRat(0)


def as_extrat(x: RatLike | None) -> ExtRat:
    return x if isinstance(x, ExtRat) else ExtRat(x)


def trop_add(a: ExtRat, b: ExtRat) -> ExtRat:
    """Tropical addition: min under the total order."""
    return a if a <= b else b


def trop_mul(a: ExtRat, b: ExtRat) -> ExtRat:
    """Tropical multiplication: rational addition, +inf absorbing."""
    if a.is_inf or b.is_inf:
        return INF
    return ExtRat(a.frac + b.frac)


def trop_sum(xs: Iterable[ExtRat]) -> ExtRat:
    out = INF
    for x in xs:
        out = trop_add(out, x)
    return out


def trop_prod(xs: Iterable[ExtRat]) -> ExtRat:
    out = ONE
    for x in xs:
        out = trop_mul(out, x)
    return out


class TropFormalPoly:
    """Formal min-plus polynomial: finitely many non-inf coefficients by degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, RatLike]):
        cleaned = {}
        for k, c in coeffs.items():
            if k < 0:
                raise ValueError("degrees must be nonnegative")
            c = as_extrat(c)
            if not c.is_inf:
                cleaned[int(k)] = c
        self.coeffs = cleaned

    @property
    def is_null(self) -> bool:
        """True for the identically-+inf polynomial (no finite coefficient)."""
        return not self.coeffs

    @property
    def deg(self) -> int:
        if self.is_null:
            raise ValueError("degree of the null polynomial is undefined")
        return max(self.coeffs)

    @property
    def val(self) -> int:
        if self.is_null:
            raise ValueError("valuation of the null polynomial is undefined")
        return min(self.coeffs)

    def coeff(self, k: int) -> ExtRat:
        return self.coeffs.get(k, INF)

    def __eq__(self, other):
        return isinstance(other, TropFormalPoly) and self.coeffs == other.coeffs

    def __repr__(self):
        if self.is_null:
            return "TropFormalPoly(null)"
        terms = " + ".join(f"{c}*X^{k}" for k, c in sorted(self.coeffs.items()))
        return f"TropFormalPoly({terms})"


def eval_formal(P: TropFormalPoly, x: ExtRat) -> ExtRat:
    """Value of the polynomial function of P at x: min_k (coeff_k + k*x)."""
    if P.is_null:
        return INF
    best = INF
    for k, c in P.coeffs.items():
        if k == 0:
            term = c
        elif x.is_inf:
            term = INF
        else:
            term = ExtRat(c.frac + k * x.frac)
        best = trop_add(best, term)
    return best


@dataclass(frozen=True)
class CornerList:
    """Corners of a min-plus polynomial function with their multiplicities.

    Finite corners are listed in increasing order; the corner +inf, when it
    has positive multiplicity (equal to the valuation), is listed last.
    """

    entries: tuple[tuple[ExtRat, int], ...]

    def __post_init__(self):
        prev = None
        for c, m in self.entries:
            if m <= 0:
                raise ValueError("corner multiplicities must be positive")
            if prev is not None and not prev < c:
                raise ValueError("corners must be strictly increasing")
            prev = c

    def multiplicity(self, c: RatLike | None) -> int:
        c = as_extrat(c) if not isinstance(c, ExtRat) else c
        for corner, m in self.entries:
            if corner == c:
                return m
        return 0

    @property
    def inf_multiplicity(self) -> int:
        return self.multiplicity(INF)

    @property
    def finite(self) -> tuple[tuple[ExtRat, int], ...]:
        return tuple((c, m) for c, m in self.entries if not c.is_inf)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def as_multiset(self) -> dict[ExtRat, int]:
        return {c: m for c, m in self.entries}


class ConcavePL:
    """Concave piecewise-linear function: pointwise min of lines.

    Stored as pieces (slope, intercept) with strictly decreasing nonnegative
    integer slopes; breakpoints are kept redundantly and cross-validated
    against the pieces on construction.
    """

    __slots__ = ("pieces", "breakpoints")

    def __init__(self, pieces: Sequence[tuple[int, RatLike]]):
        if not pieces:
            raise ValueError("a ConcavePL needs at least one piece")
        norm = []
        for s, b in pieces:
            if int(s) != s or s < 0:
                raise ValueError(f"slopes must be nonnegative integers, got {s!r}")
            norm.append((int(s), Fraction(b)))
        slopes = [s for s, _ in norm]
        if any(s_next >= s_prev for s_prev, s_next in zip(slopes, slopes[1:])):
            raise ValueError("slopes must be strictly decreasing")
        self.pieces = tuple(norm)
        bps = []
        for (s1, b1), (s2, b2) in zip(self.pieces, self.pieces[1:]):
            bps.append(Fraction(b2 - b1, s1 - s2))
        if any(x1 >= x2 for x1, x2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        self.breakpoints = tuple(bps)

    def value(self, x: RatLike) -> Fraction:
        x = Fraction(x) if not isinstance(x, Fraction) else x
        return min(s * x + b for s, b in self.pieces)

    def left_slope(self, x: RatLike) -> int:
        """Slope of f just left of x (max slope among active lines)."""
        x = Fraction(x)
        v = self.value(x)
        return max(s for s, b in self.pieces if s * x + b == v)

    def right_slope(self, x: RatLike) -> int:
        x = Fraction(x)
        v = self.value(x)
        return min(s for s, b in self.pieces if s * x + b == v)

    @property
    def initial_slope(self) -> int:
        """Slope as x -> -inf; the degree of the underlying polynomial."""
        return self.pieces[0][0]

    @property
    def terminal_slope(self) -> int:
        """Slope as x -> +inf; the valuation of the underlying polynomial."""
        return self.pieces[-1][0]

    def __eq__(self, other):
        return isinstance(other, ConcavePL) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        ps = ", ".join(f"({s}, {b})" for s, b in self.pieces)
        return f"ConcavePL([{ps}])"


def corners(f: ConcavePL) -> CornerList:
    """Corner list of f: breakpoints with multiplicity = slope drop, plus the
    corner +inf with multiplicity = terminal slope when positive."""
    entries = []
    for x, (p1, p2) in zip(f.breakpoints, zip(f.pieces, f.pieces[1:])):
        entries.append((ExtRat(x), p1[0] - p2[0]))
    if f.terminal_slope > 0:
        entries.append((INF, f.terminal_slope))
    return CornerList(tuple(entries))


def lower_envelope(lines: Iterable[tuple[int, RatLike]]) -> ConcavePL:
    """Pointwise min of finitely many lines (slope, intercept) as a ConcavePL."""
    best: dict[int, Fraction] = {}
    for s, b in lines:
        s = int(s)
        b = Fraction(b)
        if s not in best or b < best[s]:
            best[s] = b
    if not best:
        raise ValueError("empty set of lines")
    # decreasing slope; with min-per-slope intercepts, a middle line b between
    # a (steeper) and c (flatter) never attains the minimum iff the a/b
    # crossing lies at or right of the b/c crossing
    cand = sorted(best.items(), key=lambda sb: -sb[0])

    def cross(l1, l2):
        # x where l1 and l2 meet; l1 has the larger slope
        return Fraction(l2[1] - l1[1], l1[0] - l2[0])

    stack: list[tuple[int, Fraction]] = []
    for line in cand:
        while len(stack) >= 2 and cross(stack[-2], stack[-1]) >= cross(stack[-1], line):
            stack.pop()
        stack.append(line)
    return ConcavePL(stack)


def product_of_factors(cs: Iterable[RatLike], unit: RatLike = 0) -> ConcavePL:
    """Polynomial function a * prod_i (x (+) c_i) as a ConcavePL.

    Finite factors only; each factor min(x, c_i) contributes a breakpoint.
    """
    cs = sorted(Fraction(c) for c in cs)
    a = Fraction(unit)
    n = len(cs)
    lines = []
    # choosing x from k factors (the k smallest corners are taken as constants
    # is wrong; the min picks x for factors with c_i > x): slope k line takes
    # x from the k factors with largest c_i
    for k in range(n + 1):
        const = sum(cs[: n - k], Fraction(0))
        lines.append((k, a + const))
    return lower_envelope(lines)


def concave_from_samples(
    tangents: Sequence[tuple[RatLike, RatLike, int, int]],
) -> ConcavePL:
    """Reconstruct the concave PL function agreeing with tangent data.

    Each sample is (x, value, left_slope, right_slope).  The reconstruction
    is the lower envelope of all tangent lines; a sample whose value is not
    attained by that envelope contradicts concavity.
    """
    if not tangents:
        raise ValueError("need at least one tangent sample")
    lines = []
    samples = []
    for x, v, sl, sr in tangents:
        x = Fraction(x)
        v = Fraction(v)
        if sl < sr:
            raise InconsistentTangents(f"left slope {sl} < right slope {sr} at x={x}")
        lines.append((int(sl), v - sl * x))
        lines.append((int(sr), v - sr * x))
        samples.append((x, v))
    env = lower_envelope(lines)
    for x, v in samples:
        if env.value(x) != v:
            raise InconsistentTangents(
                f"tangent value {v} at x={x} is not attained by the envelope"
            )
    return env
