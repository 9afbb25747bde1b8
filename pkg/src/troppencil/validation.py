"""Input validation and conversion helpers for user-facing surfaces."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .assignment import TropMatrix
from .errors import InconsistentSpec
from .minplus import INF, ExtRat


def exponent_from_token(tok) -> ExtRat:
    """Parse one exponent cell: number, rational string 'p/q', or 'inf'.

    Floats are converted through their decimal representation so that values
    like 0.5 stay exact; exponents feed the exact tropical layer.
    """
    if isinstance(tok, ExtRat):
        return tok
    if isinstance(tok, str):
        s = tok.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return INF
        return ExtRat(Fraction(s))
    if tok is None:
        return INF
    if isinstance(tok, bool):
        raise InconsistentSpec(f"invalid exponent {tok!r}")
    if isinstance(tok, int):
        return ExtRat(tok)
    if isinstance(tok, float):
        return ExtRat(Fraction(repr(tok)))
    raise InconsistentSpec(f"invalid exponent {tok!r}")


def exponent_to_token(e: ExtRat):
    if e.is_inf:
        return "inf"
    f = e.frac
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def as_exponent_matrix(rows: Sequence[Sequence], n: int) -> TropMatrix:
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InconsistentSpec(f"exponent matrix must be {n}x{n}")
    return TropMatrix([[exponent_from_token(x) for x in r] for r in rows])


def as_complex_matrix(rows, n: int) -> np.ndarray:
    """Coefficient cells are [re, im] pairs or bare numbers."""
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InconsistentSpec(f"coefficient matrix must be {n}x{n}")
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            if isinstance(cell, (list, tuple)):
                if len(cell) != 2:
                    raise InconsistentSpec(f"coefficient cell {cell!r} is not [re, im]")
                out[i, j] = complex(float(cell[0]), float(cell[1]))
            else:
                out[i, j] = complex(cell)
    return out


def check_square_layers(layers) -> int:
    arrs = [np.asarray(a) for a in layers]
    if not arrs:
        raise InconsistentSpec("at least one layer is required")
    n = arrs[0].shape[0]
    if any(a.shape != (n, n) for a in arrs):
        raise InconsistentSpec("layers must be square matrices of equal size")
    return n
