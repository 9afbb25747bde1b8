"""Asymptotic eigenvalue equivalents of perturbed matrix pencils.

Given the leading coefficients a and leading exponents A of a pencil whose
entries behave like a * eps^A as eps -> 0, this package computes the
asymptotic equivalents lam * eps^gamma of all the pencil's eigenvalues: the
exponents gamma are the corners of a min-plus characteristic polynomial
function, and the coefficients lam are eigenvalues of auxiliary pencils
built from optimal assignment (Hungarian) tightness graphs.  A numeric
eps-sweep oracle validates every prediction.
"""

__version__ = "0.1.0"

from .assignment import (
    Digraph,
    HungarianPair,
    TropMatrix,
    hungarian,
    lex_assignment,
    opt_graph,
    permanent,
    sat_graph,
)
from .complex_poly import (
    CMatrixPencil,
    CPoly,
    RootSet,
    det_poly,
    instantiate,
    pencil_eigenvalues,
    roots,
)
from .errors import (
    InconsistentSpec,
    InconsistentTangents,
    Infeasible,
    InvalidPair,
    MatchFailure,
    SingularPencil,
    SingularTropPencil,
    TooLarge,
    TropPencilError,
    ZeroPolynomial,
)
from .estimator import AsymptoticEigenSolver
from .minplus import (
    INF,
    ConcavePL,
    CornerList,
    ExtRat,
    TropFormalPoly,
    concave_from_samples,
    corners,
    eval_formal,
    trop_add,
    trop_mul,
)
from .oracle import SweepResult, brute_force_trop_charpoly, match_predictions, sweep
from .theorem1 import (
    AsymptoticBranch,
    AsymptoticReport,
    PencilSpec,
    WeierstrassSpec,
    analyze,
    najman_check,
    najman_pencil,
    theorem1_consistency,
)
from .tropical_pencil import (
    CharPolyFunction,
    CornerGraphs,
    TropPencil,
    char_poly_function,
    corner_graphs,
    eval_pencil,
    zero_corner_count,
)
