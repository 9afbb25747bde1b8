"""Scikit-learn style front end.

The heavy exact work (tropical corners, assignment graphs, auxiliary pencil
eigenvalues) happens once in fit; predict then evaluates the asymptotic
equivalents lam * eps^gamma at arbitrary eps, which makes the solver compose
with parameter sweeps and pipelines like any other estimator.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .errors import InconsistentSpec
from .theorem1 import PencilSpec, analyze
from .validation import as_exponent_matrix, check_square_layers


class AsymptoticEigenSolver(BaseEstimator):
    """Predicts eigenvalue asymptotics of a perturbed matrix pencil.

    Parameters
    ----------
    mode : 'opt' or 'sat'
        Which tightness graph family masks the auxiliary pencils.  'opt' is
        pair-free and therefore reproducible across assignment solvers.
    strip_tol : float
        Relative coefficient threshold separating structural zeros from
        rounding noise in the numeric layer.
    """

    def __init__(self, mode: str = "opt", strip_tol: float = 1e-9):
        self.mode = mode
        self.strip_tol = strip_tol

    def fit(self, coeff_layers: Sequence, exponent_layers: Optional[Sequence] = None):
        """Analyze the pencil given by coefficient and exponent layers.

        coeff_layers may also be a ready-made PencilSpec, in which case
        exponent_layers must be omitted.
        """
        if isinstance(coeff_layers, PencilSpec):
            if exponent_layers is not None:
                raise InconsistentSpec("pass either a PencilSpec or raw layers")
            spec = coeff_layers
        else:
            if exponent_layers is None:
                raise InconsistentSpec("exponent layers are required with raw input")
            n = check_square_layers(coeff_layers)
            exps = [
                e if hasattr(e, "rows") else as_exponent_matrix(e, n)
                for e in exponent_layers
            ]
            spec = PencilSpec.build(coeff_layers, exps)
        self.spec_ = spec
        self.report_ = analyze(spec, mode=self.mode, tau=self.strip_tol)
        self.corners_ = self.report_.char_poly.corners
        self.branches_ = self.report_.branches
        return self

    def predict(self, eps) -> np.ndarray:
        """Predicted eigenvalue equivalents at each eps.

        Returns an array of shape (len(eps), n_branches); identically-zero
        eigenvalues are not listed (their predicted value is 0 for all eps).
        """
        if not hasattr(self, "report_"):
            raise InconsistentSpec("fit must be called before predict")
        eps = np.atleast_1d(np.asarray(eps, dtype=float))
        out = np.empty((len(eps), len(self.branches_)), dtype=complex)
        for i, e in enumerate(eps):
            for j, b in enumerate(self.branches_):
                out[i, j] = b.value(float(e))
        return out
