"""Min-plus matrix pencils and their characteristic polynomial function.

The characteristic polynomial function x -> perm(A-hat(x)) is concave
piecewise linear with integer slopes.  It is computed exactly by tangent
bisection: each probe costs a few assignment solves, the left/right slopes at
a probe come from a lexicographic (value, degree) assignment, and new probes
are placed at tangent intersections until every linear piece is certified.
Slopes live in a bounded integer range, so termination is guaranteed after
finitely many assignment solves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

from .assignment import (
    Digraph,
    HungarianPair,
    LexPair,
    TropMatrix,
    hungarian,
    lex_assignment,
    lex_pair_assignment,
    opt_graph,
    permanent,
    sat_graph,
)
from .errors import Infeasible, SingularTropPencil
from .minplus import (
    INF,
    ConcavePL,
    CornerList,
    ExtRat,
    TropFormalPoly,
    as_extrat,
    corners as extract_corners,
)


@dataclass(frozen=True)
class TropPencil:
    """Min-plus pencil A_0 (+) X A_1 (+) ... (+) X^d A_d."""

    layers: tuple[TropMatrix, ...]

    def __post_init__(self):
        if not self.layers:
            raise ValueError("a pencil needs at least one layer")
        n = self.layers[0].n
        if any(layer.n != n for layer in self.layers):
            raise ValueError("all layers must share the same dimension")

    @classmethod
    def from_rows(cls, layers: Sequence[Sequence[Sequence]]) -> "TropPencil":
        return cls(tuple(TropMatrix(layer) for layer in layers))

    @property
    def n(self) -> int:
        return self.layers[0].n

    @property
    def d(self) -> int:
        return len(self.layers) - 1

    def entry(self, i: int, j: int) -> TropFormalPoly:
        return TropFormalPoly({k: layer[i, j] for k, layer in enumerate(self.layers)})

    def val_matrix(self) -> TropMatrix:
        """Entrywise valuation: least degree with a finite coefficient."""
        rows = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                ks = [k for k, layer in enumerate(self.layers) if not layer[i, j].is_inf]
                row.append(ExtRat(min(ks)) if ks else INF)
            rows.append(row)
        return TropMatrix(rows)

    def neg_deg_matrix(self) -> TropMatrix:
        """Entrywise -degree, +inf where the entry is identically +inf.

        The max-plus permanent of deg A equals minus the min-plus permanent
        of this matrix.
        """
        rows = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                ks = [k for k, layer in enumerate(self.layers) if not layer[i, j].is_inf]
                row.append(ExtRat(-max(ks)) if ks else INF)
            rows.append(row)
        return TropMatrix(rows)


def eval_pencil(A: TropPencil, x: ExtRat) -> TropMatrix:
    """The matrix A-hat(x): entrywise min over k of (A_k)_ij + k*x."""
    x = as_extrat(x)
    if x.is_inf:
        raise ValueError("evaluation point must be finite")
    xf = x.frac
    rows = []
    for i in range(A.n):
        row = []
        for j in range(A.n):
            best = None
            for k, layer in enumerate(A.layers):
                c = layer[i, j]
                if c.is_inf:
                    continue
                t = c.frac + k * xf
                if best is None or t < best:
                    best = t
            row.append(INF if best is None else ExtRat(best))
        rows.append(row)
    return TropMatrix(rows)


@dataclass(frozen=True)
class CharPolyFunction:
    """The min-plus characteristic polynomial function with its corners.

    val_perm (terminal slope) is the min-plus permanent of val A; deg_perm
    (initial slope) is the max-plus permanent of deg A.
    """

    f: ConcavePL
    corners: CornerList
    val_perm: int
    deg_perm: int
    probe_count: int

    @property
    def degree(self) -> int:
        return self.deg_perm


@dataclass(frozen=True)
class CornerGraphs:
    """Per-degree tightness digraphs G_0..G_d at a finite corner."""

    gamma: ExtRat
    graphs: tuple[Digraph, ...]
    base: Digraph
    mode: str
    pair: Optional[HungarianPair]


class _Line:
    __slots__ = ("slope", "intercept")

    def __init__(self, slope: int, intercept: Fraction):
        self.slope = int(slope)
        self.intercept = Fraction(intercept)

    def at(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept

    def cross(self, other: "_Line") -> Fraction:
        return Fraction(other.intercept - self.intercept, self.slope - other.slope)


def _probe(A: TropPencil, x: Fraction):
    """Exact value and one-sided slopes of the characteristic function at x.

    The right slope is the least total degree among optimal configurations,
    the left slope the greatest; both come from lexicographic assignments
    with the degree matrix chosen per-entry among tight layers.
    """
    n = A.n
    B_rows = []
    dmin = [[0] * n for _ in range(n)]
    dmax = [[0] * n for _ in range(n)]
    for i in range(n):
        row = []
        for j in range(n):
            options = [
                (layer[i, j].frac + k * x, k)
                for k, layer in enumerate(A.layers)
                if not layer[i, j].is_inf
            ]
            if not options:
                row.append(INF)
                continue
            m = min(t for t, _ in options)
            tight = [k for t, k in options if t == m]
            dmin[i][j] = min(tight)
            dmax[i][j] = max(tight)
            row.append(ExtRat(m))
        B_rows.append(row)
    B = TropMatrix(B_rows)
    v_lo, s_right = lex_assignment(B, dmin, "min")
    v_hi, s_left = lex_assignment(B, dmax, "max")
    assert v_lo == v_hi
    return v_lo.frac, s_left, s_right


def _extreme_line(A: TropPencil, which: Literal["val", "deg"]) -> _Line:
    """The envelope's boundary line: minimal (resp. maximal) slope with the
    least intercept, via a per-entry lexicographic reduction."""
    n = A.n
    cost: list[list[LexPair | None]] = []
    for i in range(n):
        row: list[LexPair | None] = []
        for j in range(n):
            best: LexPair | None = None
            for k, layer in enumerate(A.layers):
                if layer[i, j].is_inf:
                    continue
                key = Fraction(k) if which == "val" else Fraction(-k)
                cand = LexPair(key, layer[i, j].frac)
                if best is None or cand < best:
                    best = cand
            row.append(best)
        cost.append(row)
    total, _ = lex_pair_assignment(cost)
    slope = int(total.a) if which == "val" else -int(total.a)
    return _Line(slope, total.b)


def char_poly_function(A: TropPencil) -> CharPolyFunction:
    """Exact concave PL representation of x -> perm(A-hat(x)) with corners.

    Raises SingularTropPencil when no permutation is finite (the function is
    identically +inf).
    """
    val_perm_val = permanent(A.val_matrix())
    if val_perm_val.is_inf:
        raise SingularTropPencil("no permutation of the pencil has finite weight")

    line_lo = _extreme_line(A, "val")   # slope = val perm, rightmost piece
    line_hi = _extreme_line(A, "deg")   # slope = deg perm, leftmost piece
    assert line_lo.slope == val_perm_val.frac

    lines: dict[int, Fraction] = {line_lo.slope: line_lo.intercept}
    if line_hi.slope != line_lo.slope:
        lines[line_hi.slope] = line_hi.intercept

    probes = 0
    cache: dict[Fraction, tuple[Fraction, int, int]] = {}

    def probe(x: Fraction):
        nonlocal probes
        if x not in cache:
            cache[x] = _probe(A, x)
            probes += 1
        return cache[x]

    def add_line(line: _Line):
        prev = lines.get(line.slope)
        if prev is None:
            lines[line.slope] = line.intercept
        elif prev != line.intercept:
            raise AssertionError("conflicting tangent lines of equal slope")

    stack: list[tuple[_Line, _Line]] = []
    if line_hi.slope > line_lo.slope:
        stack.append((line_hi, line_lo))
    while stack:
        l1, l2 = stack.pop()  # l1 steeper (left), l2 flatter (right)
        x = l1.cross(l2)
        v, sl, sr = probe(x)
        if v == l1.at(x):
            # x is a certified breakpoint between the pieces of l1 and l2
            assert v == l2.at(x) and sl == l1.slope and sr == l2.slope
            continue
        assert v < l1.at(x)
        left = _Line(sl, v - sl * x)
        right = _Line(sr, v - sr * x)
        add_line(left)
        if sr != sl:
            add_line(right)
        if l1.slope > sl:
            stack.append((l1, left))
        if sr > l2.slope:
            stack.append((right, l2))

    pieces = sorted(lines.items(), key=lambda sb: -sb[0])
    f = ConcavePL(pieces)
    return CharPolyFunction(
        f=f,
        corners=extract_corners(f),
        val_perm=line_lo.slope,
        deg_perm=line_hi.slope,
        probe_count=probes,
    )


def zero_corner_count(cp: CharPolyFunction) -> int:
    """Generic number of identically-zero pencil eigenvalues: the
    multiplicity of +inf as a corner, i.e. the terminal slope."""
    return cp.corners.inf_multiplicity


def corner_graphs(
    A: TropPencil,
    gamma: ExtRat,
    mode: Literal["opt", "sat"] = "opt",
    pair: Optional[HungarianPair] = None,
) -> CornerGraphs:
    """Digraphs G_0..G_d at a finite corner gamma.

    In 'opt' mode the base graph is pair-free (arcs on some optimal
    assignment); in 'sat' mode it is the saturation graph of the supplied
    Hungarian pair (computed if omitted).  Arc (i,j) enters G_k when it is a
    base arc and layer k is tight: (A_k)_ij + k*gamma = A-hat_ij(gamma).
    """
    gamma = as_extrat(gamma)
    if gamma.is_inf:
        raise ValueError("corner graphs are defined at finite corners only")
    B = eval_pencil(A, gamma)
    if permanent(B).is_inf:
        raise Infeasible("assignment infeasible at this corner")
    if mode == "opt":
        base = opt_graph(B)
        used_pair = None
    elif mode == "sat":
        if pair is None:
            pair, _ = hungarian(B)
        base = sat_graph(B, pair)
        used_pair = pair
    else:
        raise ValueError("mode must be 'opt' or 'sat'")
    gf = gamma.frac
    graphs = []
    for k, layer in enumerate(A.layers):
        arcs = frozenset(
            (i, j)
            for (i, j) in base.arcs
            if not layer[i, j].is_inf
            and layer[i, j].frac + k * gf == B[i, j].frac
        )
        graphs.append(Digraph(A.n, arcs))
    return CornerGraphs(
        gamma=gamma, graphs=tuple(graphs), base=base, mode=mode, pair=used_pair
    )
