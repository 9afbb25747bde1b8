"""Exception hierarchy shared across the package."""


class TropPencilError(Exception):
    """Base class for all errors raised by this package."""


class Infeasible(TropPencilError):
    """The optimal assignment problem has no finite-weight permutation."""


class InvalidPair(TropPencilError):
    """A claimed Hungarian pair violates feasibility or optimality."""


class SingularTropPencil(TropPencilError):
    """The min-plus characteristic polynomial function is identically +inf."""


class ZeroPolynomial(TropPencilError):
    """Root finding was requested on the zero polynomial."""


class SingularPencil(TropPencilError):
    """det of a complex pencil vanishes identically (within tolerance)."""


class InconsistentSpec(TropPencilError):
    """A structured input (Weierstrass block data, spec file) is inconsistent."""


class InconsistentTangents(TropPencilError):
    """Tangent samples contradict concavity; no concave PL function fits them."""


class MatchFailure(TropPencilError):
    """Predicted branches and observed trajectories could not be reconciled."""


class TooLarge(TropPencilError):
    """A brute-force oracle was invoked beyond its intended size limit."""
