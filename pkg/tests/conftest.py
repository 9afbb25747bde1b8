import json

import numpy as np
import pytest

from troppencil import PencilSpec
from troppencil.cli import canonical_text, spec_to_doc

INF = float("inf")

#: Exponent layers of the worked 3x3 example: A_0 dense with a fast
#: lower-right block, A_1 = diag(eps^0, eps^1, eps^1) written as exponents.
EXAMPLE_E0 = [[0, 0, 0], [0, 1, 1], [0, 1, 1]]
EXAMPLE_E1 = [[0, None, None], [None, 0, None], [None, None, 0]]


def example_spec(seed: int = 7) -> PencilSpec:
    """The 3x3 reference pencil with complex random leading coefficients b."""
    rng = np.random.default_rng(seed)
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    return PencilSpec.build(
        coeff_layers=[b, np.eye(3)],
        exponent_layers=[EXAMPLE_E0, EXAMPLE_E1],
    )


@pytest.fixture
def reference_example():
    return example_spec()


@pytest.fixture
def spec_file(tmp_path):
    """Write a PencilSpec to a canonical JSON spec file, return its path."""

    def write(spec: PencilSpec, name: str = "spec.json") -> str:
        path = tmp_path / name
        path.write_text(canonical_text(spec_to_doc(spec)))
        return str(path)

    return write


def random_spec(rng, n=None, d=None, allow_inf=True) -> PencilSpec:
    """Random small spec: exponents in {-3..3} plus +inf, unit-scale coeffs."""
    n = n if n is not None else int(rng.integers(1, 5))
    d = d if d is not None else int(rng.integers(1, 3))
    while True:
        exps = []
        coeffs = []
        for _ in range(d + 1):
            E = rng.integers(-3, 4, size=(n, n)).astype(object)
            if allow_inf:
                mask = rng.random((n, n)) < 0.3
                E[mask] = None
            exps.append(E.tolist())
            coeffs.append(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        # every entry identically +inf in some row/col pattern can make the
        # pencil singular; that is a valid spec, keep it and let callers skip
        spec = PencilSpec.build(coeffs, exps)
        return spec


def machine(args) -> dict:
    """Run the CLI main() capturing machine-format JSON output."""
    import contextlib
    import io

    from troppencil.cli import main

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(args) + ["--format", "machine"])
    return code, json.loads(buf.getvalue()) if buf.getvalue().strip() else None
