"""Complex polynomial matrices: determinants, roots, eigenvalue counting.

The determinant of a degree-d pencil is recovered by evaluation at n*d+1
scaled roots of unity followed by an inverse DFT; cofactor expansion is kept
as an oracle for small sizes.  Root finding is Aberth-Ehrlich simultaneous
iteration with a companion-matrix fallback.

An optional high-precision path (mpmath) exists for instantiated pencils
whose determinant coefficients span too many orders of magnitude for double
precision; it changes nothing in the contracts, only the arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import SingularPencil, ZeroPolynomial
from .minplus import ExtRat

#: Relative magnitude below which a coefficient is treated as a structural zero.
TAU_STRIP = 1e-9

#: Relative radius for merging numerically coincident roots into one
#: multiple root.
CLUSTER_RADIUS = 1e-6


@dataclass(frozen=True)
class CPoly:
    """Complex polynomial, ascending coefficients, normalized leading term."""

    coeffs: tuple[complex, ...]

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[complex], tau: float = TAU_STRIP) -> "CPoly":
        c = [complex(x) for x in coeffs]
        scale = max((abs(x) for x in c), default=0.0)
        if scale == 0.0:
            return cls(())
        c = [x if abs(x) > tau * scale else 0.0 for x in c]
        while c and c[-1] == 0.0:
            c.pop()
        return cls(tuple(c))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if self.is_zero:
            raise ZeroPolynomial("degree of the zero polynomial is undefined")
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        out = 0j
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def residual_scale(self, z: complex) -> float:
        """sum_i |c_i| |z|^i, the natural scale for the residual bound."""
        out = 0.0
        az = abs(z)
        p = 1.0
        for c in self.coeffs:
            out += abs(c) * p
            p *= az
        return out


@dataclass(frozen=True)
class CMatrixPencil:
    """Complex matrix pencil b_0 + X b_1 + ... + X^d b_d."""

    layers: tuple[np.ndarray, ...]

    @classmethod
    def from_layers(cls, layers: Sequence) -> "CMatrixPencil":
        arrs = tuple(np.asarray(layer, dtype=complex) for layer in layers)
        if not arrs:
            raise ValueError("a pencil needs at least one layer")
        n = arrs[0].shape[0]
        if any(a.shape != (n, n) for a in arrs):
            raise ValueError("layers must be square and of equal dimension")
        return cls(arrs)

    @property
    def n(self) -> int:
        return self.layers[0].shape[0]

    @property
    def d(self) -> int:
        return len(self.layers) - 1

    def value(self, z: complex) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=complex)
        zp = 1.0 + 0j
        for layer in self.layers:
            out += zp * layer
            zp *= z
        return out

    def conjugate(self) -> "CMatrixPencil":
        return CMatrixPencil(tuple(np.conj(layer) for layer in self.layers))


@dataclass(frozen=True)
class RootSet:
    """Roots of a determinant polynomial, with multiplicity bookkeeping.

    degree_deficiency counts the drop from the structural degree n*d to the
    numeric degree (roots escaping to infinity).
    """

    nonzero_roots: tuple[tuple[complex, int], ...]
    zero_multiplicity: int
    degree_deficiency: int

    @property
    def n_nonzero(self) -> int:
        return sum(m for _, m in self.nonzero_roots)

    def expanded(self) -> list[complex]:
        out = []
        for z, m in self.nonzero_roots:
            out.extend([z] * m)
        return out


def _interp_radius(P: CMatrixPencil) -> float:
    mags = [abs(x) for layer in P.layers for x in layer.ravel() if x != 0]
    if not mags:
        return 1.0
    r = math.exp(sum(math.log(m) for m in mags) / len(mags))
    return min(max(r, 1e-6), 1e6)


def det_poly(P: CMatrixPencil, tau: float = TAU_STRIP,
             precision: Optional[int] = None) -> CPoly:
    """Determinant of the pencil as a polynomial of degree <= n*d.

    Evaluation-interpolation at n*d+1 points on a circle whose radius is the
    geometric mean of the coefficient magnitudes; coefficients below the
    relative threshold tau are zeroed.  With precision set, evaluation and
    interpolation run in mpmath at that many digits (tau should then be
    chosen accordingly by the caller).
    """
    if precision is not None:
        return _det_poly_mp(P, tau, precision)
    N = P.n * P.d + 1
    R = _interp_radius(P)
    omega = np.exp(2j * np.pi / N)
    vals = np.array([np.linalg.det(P.value(R * omega**j)) for j in range(N)])
    # c_k R^k = (1/N) sum_j v_j exp(-2*pi*i*j*k/N), which is fft/N in numpy's sign convention
    coeffs = np.fft.fft(vals) / N
    coeffs = coeffs / R ** np.arange(N)
    return CPoly.from_coeffs(coeffs, tau=tau)


def _det_poly_mp(P: CMatrixPencil, tau: float, dps: int) -> CPoly:
    import mpmath as mp

    N = P.n * P.d + 1
    R = _interp_radius(P)
    with mp.workdps(dps):
        layers = [mp.matrix([[mp.mpc(x) for x in row] for row in layer])
                  for layer in P.layers]
        vals = []
        for j in range(N):
            z = mp.mpc(R) * mp.expjpi(mp.mpf(2 * j) / N)
            M = layers[0].copy()
            zp = z
            for layer in layers[1:]:
                M += zp * layer
                zp *= z
            vals.append(mp.det(M))
        coeffs = []
        for k in range(N):
            acc = mp.mpc(0)
            for j, v in enumerate(vals):
                acc += v * mp.expjpi(mp.mpf(-2 * j * k) / N)
            acc /= N * mp.mpc(R) ** k
            coeffs.append(acc)
        scale = max((abs(c) for c in coeffs), default=mp.mpf(0))
        if scale == 0:
            return CPoly(())
        kept = [c if abs(c) > tau * scale else mp.mpc(0) for c in coeffs]
        while kept and kept[-1] == 0:
            kept.pop()
        # roots are found in mpmath as well when precision is requested;
        # export exact-enough floats for the coefficient record
        return _MPPoly(tuple(kept), dps)


class _MPPoly(CPoly):
    """CPoly carrying mpmath coefficients for high-precision root finding."""

    def __new__(cls, mp_coeffs, dps):
        obj = object.__new__(cls)
        return obj

    def __init__(self, mp_coeffs, dps):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in mp_coeffs))
        object.__setattr__(self, "mp_coeffs", mp_coeffs)
        object.__setattr__(self, "dps", dps)


def det_poly_cofactor(P: CMatrixPencil) -> CPoly:
    """Determinant by Laplace expansion over polynomial entries.

    Exponential in n; retained as an independent oracle for n <= 4 and for
    degeneracy confirmation.
    """
    n = P.n
    entries = [
        [np.array([layer[i, j] for layer in P.layers], dtype=complex)
         for j in range(n)]
        for i in range(n)
    ]

    def det(rows, cols):
        if len(rows) == 1:
            return entries[rows[0]][cols[0]]
        acc = np.zeros(1, dtype=complex)
        r = rows[0]
        rest = rows[1:]
        for pos, c in enumerate(cols):
            minor = det(rest, cols[:pos] + cols[pos + 1:])
            term = np.convolve(entries[r][c], minor)
            sign = -1.0 if pos % 2 else 1.0
            width = max(len(acc), len(term))
            acc = np.pad(acc, (0, width - len(acc)))
            acc = acc + sign * np.pad(term, (0, width - len(term)))
        return acc

    full = det(tuple(range(n)), tuple(range(n)))
    return CPoly.from_coeffs(full)


def _aberth(coeffs: np.ndarray, seed: int = 0) -> Optional[np.ndarray]:
    """Aberth-Ehrlich simultaneous iteration; None on non-convergence."""
    m = len(coeffs) - 1
    monic = coeffs / coeffs[-1]
    desc = monic[::-1]
    ddesc = np.polyder(desc)
    r0 = abs(monic[0]) ** (1.0 / m) if monic[0] != 0 else 1.0
    rng = np.random.default_rng(seed)
    z = r0 * np.exp(2j * np.pi * (np.arange(m) + 0.25) / m)
    if seed:
        z = z * (1 + 0.1 * rng.standard_normal(m)) + 0.05 * r0 * (
            rng.standard_normal(m) + 1j * rng.standard_normal(m)
        )
    scale = np.sum(np.abs(desc))
    for _ in range(200):
        pv = np.polyval(desc, z)
        if np.all(np.abs(pv) <= 1e-14 * scale * np.maximum(np.abs(z), 1.0) ** m):
            return z
        dv = np.polyval(ddesc, z)
        dv = np.where(dv == 0, 1e-300, dv)
        w = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - w * s
        denom = np.where(denom == 0, 1e-300, denom)
        step = w / denom
        z = z - step
        if np.all(np.abs(step) <= 1e-13 * np.maximum(np.abs(z), 1e-300)):
            return z
    return None


def roots(p: CPoly, tau: float = TAU_STRIP,
          cluster_radius: float = CLUSTER_RADIUS) -> RootSet:
    """Roots of p with zero/nonzero separation and multiplicity clustering.

    Trailing coefficients below the relative threshold count as a zero root
    of that multiplicity; the deflated polynomial is solved by Aberth-Ehrlich
    with a companion-matrix (Hessenberg QR) fallback.
    """
    if p.is_zero:
        raise ZeroPolynomial("cannot extract roots of the zero polynomial")
    mp_coeffs = getattr(p, "mp_coeffs", None)
    if mp_coeffs is not None:
        return _roots_mp(p, tau, cluster_radius)
    c = np.array(p.coeffs, dtype=complex)
    scale = np.max(np.abs(c))
    zero_mult = 0
    while zero_mult < len(c) - 1 and abs(c[zero_mult]) <= tau * scale:
        zero_mult += 1
    deflated = c[zero_mult:]
    if len(deflated) == 1:
        return RootSet((), zero_mult, 0)
    z = _aberth(deflated)
    if z is None:
        z = _aberth(deflated, seed=1)
    if z is not None:
        q = CPoly(tuple(deflated))
        ok = all(abs(q(zi)) <= 1e-8 * q.residual_scale(zi) for zi in z)
        if not ok:
            z = None
    if z is None:
        z = np.roots(deflated[::-1])
    clustered = _cluster(list(z), cluster_radius)
    return RootSet(tuple(clustered), zero_mult, 0)


def _roots_mp(p, tau: float, cluster_radius: float) -> RootSet:
    import mpmath as mp

    with mp.workdps(p.dps):
        c = list(p.mp_coeffs)
        scale = max(abs(x) for x in c)
        zero_mult = 0
        while zero_mult < len(c) - 1 and abs(c[zero_mult]) <= tau * scale:
            zero_mult += 1
        deflated = c[zero_mult:]
        if len(deflated) == 1:
            return RootSet((), zero_mult, 0)
        zs = mp.polyroots(list(reversed(deflated)), maxsteps=200, extraprec=4 * p.dps)
    clustered = _cluster([complex(z) for z in zs], cluster_radius)
    return RootSet(tuple(clustered), zero_mult, 0)


def _cluster(zs: list[complex], radius_rel: float) -> list[tuple[complex, int]]:
    # radius relative to the pair being compared; a global scale would merge
    # well-separated small roots whenever some other root is huge
    groups: list[list[complex]] = []
    for z in sorted(zs, key=lambda w: (abs(w), w.real, w.imag)):
        for g in groups:
            if abs(z - g[0]) <= radius_rel * max(abs(z), abs(g[0]), 1e-300):
                g.append(z)
                break
        else:
            groups.append([z])
    return [(sum(g) / len(g), len(g)) for g in groups]


def pencil_eigenvalues(P: CMatrixPencil, tau: float = TAU_STRIP,
                       precision: Optional[int] = None) -> RootSet:
    """Eigenvalues of the pencil: roots of det, with degree bookkeeping."""
    p = det_poly(P, tau=tau, precision=precision)
    if p.is_zero:
        raise SingularPencil("det of the pencil vanishes identically")
    rs = roots(p, tau=tau)
    deficiency = P.n * P.d - p.degree
    return RootSet(rs.nonzero_roots, rs.zero_multiplicity, deficiency)


def instantiate(spec, eps: float) -> CMatrixPencil:
    """Leading-term instantiation at a concrete eps > 0.

    Entry (i,j) of layer k becomes (a_k)_ij * eps^(A_k)_ij, and exactly 0
    where the exponent is +inf (the entry vanishes near 0 by convention).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    layers = []
    for a, A in zip(spec.coeff_layers, spec.exponent_layers):
        n = A.n
        layer = np.zeros((n, n), dtype=complex)
        for i in range(n):
            for j in range(n):
                e: ExtRat = A[i, j]
                if not e.is_inf:
                    layer[i, j] = a[i, j] * eps ** float(e.frac)
        layers.append(layer)
    return CMatrixPencil(tuple(layers))
