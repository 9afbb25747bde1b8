"""Optimal assignment over exact rationals, with dual certificates.

The Hungarian algorithm here runs on exact Fractions (or lexicographic
Fraction pairs), never on floats: tightness tests B_ij = U_i + V_j feed the
saturation and Opt graphs, and those zero patterns must be exact.

+inf entries (forbidden arcs) are replaced internally by a sentinel that is
provably larger than any finite assignment; an optimal solution touching the
sentinel certifies infeasibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import networkx as nx

from .errors import Infeasible, InvalidPair
from .minplus import INF, ExtRat, as_extrat


class TropMatrix:
    """Square matrix over the min-plus scalars."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(as_extrat(x) for x in r) for r in rows)
        self.n = len(self.rows)
        if any(len(r) != self.n for r in self.rows):
            raise ValueError("matrix must be square")

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "TropMatrix":
        return TropMatrix(list(zip(*self.rows)))

    def permute_rows(self, perm: Sequence[int]) -> "TropMatrix":
        return TropMatrix([self.rows[p] for p in perm])

    def __eq__(self, other):
        return isinstance(other, TropMatrix) and self.rows == other.rows

    def __repr__(self):
        return f"TropMatrix({[[str(x) for x in r] for r in self.rows]})"


@dataclass(frozen=True)
class HungarianPair:
    """Optimal dual variables of the assignment LP: B_ij >= U_i + V_j with
    total dual value equal to the optimal assignment value."""

    U: tuple[Fraction, ...]
    V: tuple[Fraction, ...]


@dataclass(frozen=True)
class Digraph:
    """Directed graph on nodes 0..n-1 given by its arc set."""

    n: int
    arcs: frozenset[tuple[int, int]]

    def __contains__(self, arc):
        return arc in self.arcs

    def issubset(self, other: "Digraph") -> bool:
        return self.arcs <= other.arcs


@dataclass(frozen=True, order=True)
class LexPair:
    """Lexicographically ordered additive cost: primary then secondary."""

    a: Fraction
    b: Fraction

    def __add__(self, other):
        return LexPair(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return LexPair(self.a - other.a, self.b - other.b)


def _hungarian_core(cost):
    """Jonker-style shortest augmenting path Hungarian algorithm.

    cost is an n x n list of elements supporting +, -, < (all finite).
    Returns (row_to_col, u, v, total) with cost_ij >= u_i + v_j everywhere
    and equality on matched arcs.  Ties are broken by lowest column index.
    """
    n = len(cost)
    zero = cost[0][0] - cost[0][0]
    u = [zero] * (n + 1)
    v = [zero] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row (1-based) matched to column j; column 0 is virtual
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [None] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = None
            j1 = -1
            for j in range(1, n + 1):
                if not used[j]:
                    cur = cost[i0 - 1][j - 1] - u[i0] - v[j]
                    if minv[j] is None or cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if delta is None or minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] = u[p[j]] + delta
                    v[j] = v[j] - delta
                elif minv[j] is not None:
                    minv[j] = minv[j] - delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    row_to_col = [-1] * n
    for j in range(1, n + 1):
        row_to_col[p[j] - 1] = j - 1
    total = zero
    for i in range(n):
        total = total + cost[i][row_to_col[i]]
    return row_to_col, u[1:], v[1:], total


def _finite_bound(B: TropMatrix) -> Fraction:
    vals = [abs(x.frac) for row in B.rows for x in row if not x.is_inf]
    return max(vals, default=Fraction(0))


def _solve(B: TropMatrix):
    """Run the Hungarian algorithm with +inf replaced by a safe sentinel.

    Returns (matching, U, V, total, feasible).  When feasible, (U, V) is a
    valid Hungarian pair for B and total = perm B.
    """
    n = B.n
    M = _finite_bound(B)
    big = 2 * n * (M + 1) + 1
    cost = [[big if B[i, j].is_inf else B[i, j].frac for j in range(n)] for i in range(n)]
    sigma, u, v, total = _hungarian_core(cost)
    feasible = all(not B[i, sigma[i]].is_inf for i in range(n))
    return sigma, u, v, total, feasible


def permanent(B: TropMatrix) -> ExtRat:
    """Min-plus permanent: value of an optimal assignment, +inf if infeasible."""
    if B.n == 0:
        return ExtRat(0)
    _, _, _, total, feasible = _solve(B)
    return ExtRat(total) if feasible else INF


def hungarian(B: TropMatrix) -> tuple[HungarianPair, tuple[int, ...]]:
    """Hungarian pair and an optimal permutation (row i -> column sigma[i]).

    Every matched arc is tight: B_{i,sigma(i)} = U_i + V_{sigma(i)}.
    """
    sigma, u, v, total, feasible = _solve(B)
    if not feasible:
        raise Infeasible("no permutation with finite weight")
    pair = HungarianPair(tuple(u), tuple(v))
    return pair, tuple(sigma)


def check_pair(B: TropMatrix, p: HungarianPair) -> None:
    """Raise InvalidPair unless p is feasible and optimal for B."""
    n = B.n
    if len(p.U) != n or len(p.V) != n:
        raise InvalidPair("dual vector dimensions do not match the matrix")
    for i in range(n):
        for j in range(n):
            if not B[i, j].is_inf and B[i, j].frac < p.U[i] + p.V[j]:
                raise InvalidPair(f"dual infeasible at ({i},{j})")
    perm = permanent(B)
    if perm.is_inf:
        raise InvalidPair("matrix has no finite assignment")
    if sum(p.U) + sum(p.V) != perm.frac:
        raise InvalidPair("duality gap is nonzero")


def sat_graph(B: TropMatrix, p: HungarianPair) -> Digraph:
    """Saturation graph: arcs where the dual constraint is tight."""
    check_pair(B, p)
    arcs = frozenset(
        (i, j)
        for i in range(B.n)
        for j in range(B.n)
        if not B[i, j].is_inf and B[i, j].frac == p.U[i] + p.V[j]
    )
    return Digraph(B.n, arcs)


def opt_graph(B: TropMatrix) -> Digraph:
    """Arcs lying on at least one optimal assignment.

    By complementary slackness the optimal permutations are exactly the
    perfect matchings of the tight graph of any Hungarian pair; an arc (i,j)
    of the tight graph lies on some perfect matching iff it is matched or
    closes an alternating cycle, i.e. columns sigma(i) and j are co-strongly
    connected in the matching-oriented tight graph.
    """
    sigma, u, v, _, feasible = _solve(B)
    if not feasible:
        raise Infeasible("no permutation with finite weight")
    n = B.n
    tight = [
        (i, j)
        for i in range(n)
        for j in range(n)
        if not B[i, j].is_inf and B[i, j].frac == u[i] + v[j]
    ]
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    for i, j in tight:
        if j != sigma[i]:
            g.add_edge(sigma[i], j)
    comp = {}
    for cid, nodes in enumerate(nx.strongly_connected_components(g)):
        for node in nodes:
            comp[node] = cid
    arcs = frozenset(
        (i, j) for i, j in tight if j == sigma[i] or comp[sigma[i]] == comp[j]
    )
    return Digraph(n, arcs)


def lex_assignment(
    B: TropMatrix,
    D: Sequence[Sequence[int]],
    sense: Literal["min", "max"],
) -> tuple[ExtRat, int]:
    """Optimal assignment value together with the extreme total degree.

    Among the permutations optimal for B, returns the min (resp. max) of
    sum_i D[i][sigma(i)], solved as a single assignment over lexicographic
    (value, +/-degree) cost pairs; no numeric perturbation is involved.
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    sgn = 1 if sense == "min" else -1
    n = B.n
    M = _finite_bound(B)
    Dmax = max((abs(int(D[i][j])) for i in range(n) for j in range(n)
                if not B[i, j].is_inf), default=0)
    big = LexPair(2 * n * (M + 1) + 1, Fraction(2 * n * (Dmax + 1) + 1))
    cost = [
        [
            big
            if B[i, j].is_inf
            else LexPair(B[i, j].frac, Fraction(sgn * int(D[i][j])))
            for j in range(n)
        ]
        for i in range(n)
    ]
    sigma, _, _, total = _hungarian_core(cost)
    if any(B[i, sigma[i]].is_inf for i in range(n)):
        raise Infeasible("no permutation with finite weight")
    return ExtRat(total.a), sgn * int(total.b)


def lex_pair_assignment(cost: Sequence[Sequence[LexPair | None]]) -> tuple[LexPair, tuple[int, ...]]:
    """Assignment over explicit LexPair costs; None marks a forbidden arc."""
    n = len(cost)
    amax = max((abs(c.a) for row in cost for c in row if c is not None), default=Fraction(0))
    bmax = max((abs(c.b) for row in cost for c in row if c is not None), default=Fraction(0))
    big = LexPair(2 * n * (amax + 1) + 1, 2 * n * (bmax + 1) + 1)
    filled = [[big if c is None else c for c in row] for row in cost]
    sigma, _, _, total = _hungarian_core(filled)
    if any(cost[i][sigma[i]] is None for i in range(n)):
        raise Infeasible("no permutation avoids forbidden arcs")
    return total, tuple(sigma)


def alternate_pairs(B: TropMatrix, count: int = 2) -> list[HungarianPair]:
    """Distinct-looking Hungarian pairs from transposed and row-rotated reruns.

    All returned pairs are valid for B; they need not differ when the dual
    optimum is unique.
    """
    pairs = []
    pair, _ = hungarian(B)
    pairs.append(pair)
    if len(pairs) < count:
        tp, _ = hungarian(B.transpose())
        pairs.append(HungarianPair(tp.V, tp.U))
    n = B.n
    shift = 1
    while len(pairs) < count and shift < n:
        perm = [(i + shift) % n for i in range(n)]
        rp, _ = hungarian(B.permute_rows(perm))
        U = [Fraction(0)] * n
        for pos, orig in enumerate(perm):
            U[orig] = rp.U[pos]
        pairs.append(HungarianPair(tuple(U), rp.V))
        shift += 1
    return pairs[:count]
