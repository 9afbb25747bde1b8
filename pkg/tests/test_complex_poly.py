import numpy as np
import pytest

from troppencil.complex_poly import (
    CMatrixPencil,
    CPoly,
    det_poly,
    det_poly_cofactor,
    instantiate,
    pencil_eigenvalues,
    roots,
)
from troppencil.errors import SingularPencil, ZeroPolynomial

from conftest import example_spec


def random_pencil(rng, n, d) -> CMatrixPencil:
    return CMatrixPencil.from_layers(
        [rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) for _ in range(d + 1)]
    )


class TestCPoly:
    def test_strip_and_degree(self):
        p = CPoly.from_coeffs([1.0, 1e-15, 2.0, 0.0])
        assert p.coeffs == (1.0, 0.0, 2.0)
        assert p.degree == 2

    def test_zero_poly(self):
        p = CPoly.from_coeffs([0.0, 0.0])
        assert p.is_zero
        with pytest.raises(ZeroPolynomial):
            p.degree
        with pytest.raises(ZeroPolynomial):
            roots(p)

    def test_horner_eval(self):
        p = CPoly((1 + 0j, 2 + 0j, 3 + 0j))
        z = 0.5 + 0.25j
        assert abs(p(z) - (1 + 2 * z + 3 * z * z)) < 1e-14


class TestDetPoly:
    def test_interpolation_matches_cofactor(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            n = int(rng.integers(1, 5))
            d = int(rng.integers(1, 3))
            P = random_pencil(rng, n, d)
            p1 = det_poly(P)
            p2 = det_poly_cofactor(P)
            assert len(p1.coeffs) == len(p2.coeffs)
            scale = max(abs(c) for c in p2.coeffs)
            for a, b in zip(p1.coeffs, p2.coeffs):
                assert abs(a - b) <= 1e-10 * scale

    def test_known_2x2(self):
        # det([[1, x], [x, 1]]) = 1 - x^2
        P = CMatrixPencil.from_layers(
            [np.eye(2), np.array([[0, 1], [1, 0]], dtype=complex)]
        )
        p = det_poly(P)
        ref = (1 + 0j, 0j, -1 + 0j)
        assert all(abs(a - b) < 1e-12 for a, b in zip(p.coeffs, ref))

    def test_high_precision_path_agrees(self):
        rng = np.random.default_rng(33)
        P = random_pencil(rng, 3, 2)
        p1 = det_poly(P)
        p2 = det_poly(P, precision=60, tau=1e-30)
        scale = max(abs(c) for c in p1.coeffs)
        assert all(abs(a - b) <= 1e-9 * scale for a, b in zip(p1.coeffs, p2.coeffs))

    def test_conjugation_equivariance(self):
        rng = np.random.default_rng(35)
        P = random_pencil(rng, 3, 1)
        p = det_poly(P)
        pc = det_poly(P.conjugate())
        assert all(abs(np.conj(a) - b) < 1e-10 * max(abs(c) for c in p.coeffs)
                   for a, b in zip(p.coeffs, pc.coeffs))


class TestRoots:
    def test_residual_bound_on_corpus(self):
        rng = np.random.default_rng(37)
        for _ in range(60):
            deg = int(rng.integers(1, 9))
            c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
            p = CPoly.from_coeffs(c)
            rs = roots(p)
            for z, _ in rs.nonzero_roots:
                assert abs(p(z)) <= 1e-8 * p.residual_scale(z)

    def test_zero_multiplicity_from_trailing_zeros(self):
        # x^2 * (x - 2)
        p = CPoly.from_coeffs([0, 0, -2, 1])
        rs = roots(p)
        assert rs.zero_multiplicity == 2
        assert rs.n_nonzero == 1
        z, m = rs.nonzero_roots[0]
        assert m == 1 and abs(z - 2) < 1e-9

    def test_multiple_root_clustering(self):
        # (x - 1)^3
        p = CPoly.from_coeffs([-1, 3, -3, 1])
        rs = roots(p)
        assert sum(m for _, m in rs.nonzero_roots) == 3
        assert all(abs(z - 1) < 1e-3 for z, _ in rs.nonzero_roots)

    def test_constant_after_deflation(self):
        p = CPoly.from_coeffs([0, 0, 5])
        rs = roots(p)
        assert rs.zero_multiplicity == 2 and rs.nonzero_roots == ()


class TestPencilEigenvalues:
    def test_generalized_eigenvalues_match_scipy(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            # roots of det(A + x B) vs scipy eig(A, -B)
            from scipy.linalg import eigvals

            rs = pencil_eigenvalues(CMatrixPencil.from_layers([A, B]))
            got = sorted(rs.expanded(), key=lambda z: (z.real, z.imag))
            ref = sorted(eigvals(A, -B), key=lambda z: (z.real, z.imag))
            assert len(got) == len(ref)
            for a, b in zip(got, ref):
                assert abs(a - b) <= 1e-7 * max(1.0, abs(b))

    def test_degree_deficiency(self):
        # leading layer singular: one eigenvalue escapes to infinity
        A = np.array([[1, 0], [0, 1]], dtype=complex)
        B = np.array([[1, 0], [0, 0]], dtype=complex)
        rs = pencil_eigenvalues(CMatrixPencil.from_layers([A, B]))
        assert rs.degree_deficiency == 1
        assert rs.n_nonzero == 1

    def test_singular_pencil_raises(self):
        Z = np.zeros((2, 2), dtype=complex)
        with pytest.raises(SingularPencil):
            pencil_eigenvalues(CMatrixPencil.from_layers([Z, Z]))


class TestInstantiate:
    def test_entrywise_leading_terms(self):
        spec = example_spec()
        eps = 1e-3
        P = instantiate(spec, eps)
        b = spec.coeff_layers[0]
        assert P.layers[0][0, 0] == b[0, 0]
        assert abs(P.layers[0][1, 1] - b[1, 1] * eps) < 1e-18
        # +inf exponent entries vanish exactly
        assert P.layers[1][0, 1] == 0
        assert P.layers[1][0, 0] == spec.coeff_layers[1][0, 0]

    def test_rejects_nonpositive_eps(self):
        with pytest.raises(ValueError):
            instantiate(example_spec(), 0.0)
