import numpy as np
import pytest
from sklearn.base import clone

from troppencil.errors import InconsistentSpec
from troppencil.estimator import AsymptoticEigenSolver
from troppencil.minplus import ExtRat

from conftest import EXAMPLE_E0, EXAMPLE_E1, example_spec


class TestFit:
    def test_fit_with_spec(self, reference_example):
        est = AsymptoticEigenSolver().fit(reference_example)
        assert est.corners_.as_multiset() == {ExtRat(0): 2, ExtRat(1): 1}
        assert len(est.branches_) == 3

    def test_fit_with_raw_layers(self, reference_example):
        est = AsymptoticEigenSolver().fit(
            list(reference_example.coeff_layers), [EXAMPLE_E0, EXAMPLE_E1]
        )
        ref = AsymptoticEigenSolver().fit(reference_example)
        key = lambda z: (z.real, z.imag)
        got = sorted((b.lam for b in est.branches_), key=key)
        want = sorted((b.lam for b in ref.branches_), key=key)
        assert all(abs(a - b) < 1e-12 for a, b in zip(got, want))

    def test_fit_input_validation(self, reference_example):
        with pytest.raises(InconsistentSpec):
            AsymptoticEigenSolver().fit(reference_example, [EXAMPLE_E0])
        with pytest.raises(InconsistentSpec):
            AsymptoticEigenSolver().fit([np.eye(3)])


class TestPredict:
    def test_predict_shape_and_values(self, reference_example):
        est = AsymptoticEigenSolver().fit(reference_example)
        eps = [1e-2, 1e-4]
        out = est.predict(eps)
        assert out.shape == (2, 3)
        for i, e in enumerate(eps):
            for j, b in enumerate(est.branches_):
                assert out[i, j] == b.lam * e ** float(b.gamma.frac)

    def test_predict_before_fit_raises(self):
        with pytest.raises(InconsistentSpec):
            AsymptoticEigenSolver().predict([1e-3])

    def test_scalar_eps(self, reference_example):
        est = AsymptoticEigenSolver().fit(reference_example)
        assert est.predict(1e-3).shape == (1, 3)


class TestSklearnContract:
    def test_get_params_and_clone(self):
        est = AsymptoticEigenSolver(mode="sat", strip_tol=1e-8)
        assert est.get_params() == {"mode": "sat", "strip_tol": 1e-8}
        twin = clone(est)
        assert twin.get_params() == est.get_params()
        assert not hasattr(twin, "report_")

    def test_set_params(self, reference_example):
        est = AsymptoticEigenSolver()
        est.set_params(mode="sat")
        est.fit(reference_example)
        assert est.report_.mode == "sat"
