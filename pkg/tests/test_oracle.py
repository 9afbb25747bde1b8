import numpy as np
import pytest

from troppencil.errors import TooLarge
from troppencil.oracle import (
    DEFAULT_EPS_GRID,
    brute_force_trop_charpoly,
    match_predictions,
    sweep,
)
from troppencil.theorem1 import PencilSpec, analyze

from conftest import example_spec


class TestSweep:
    def test_rejects_bad_grids(self, reference_example):
        with pytest.raises(ValueError):
            sweep(reference_example, (1e-2, 1e-2))
        with pytest.raises(ValueError):
            sweep(reference_example, (1e-3, 1e-2))
        with pytest.raises(ValueError):
            sweep(reference_example, (-1e-2,))

    def test_trajectory_count_and_linking(self, reference_example):
        sw = sweep(reference_example)
        assert len(sw.eps_values) == len(DEFAULT_EPS_GRID)
        assert len(sw.trajectories) == 3
        assert all(len(t.values) == len(sw.eps_values) for t in sw.trajectories)
        assert not any(t.is_zero for t in sw.trajectories)

    def test_slopes_recover_corner_exponents(self, reference_example):
        sw = sweep(reference_example)
        slopes = sorted(t.slope for t in sw.trajectories)
        assert abs(slopes[0]) < 1e-2 and abs(slopes[1]) < 1e-2
        assert abs(slopes[2] - 1) < 1e-2

    def test_identically_zero_trajectories_kept(self):
        # valuation 1: column 0 carries a factor of X
        spec = PencilSpec.build(
            [np.zeros((2, 2)), np.array([[1.0, 0], [2.0, 3.0]])],
            [[[None, None], [None, None]], [[0, None], [0, 0]]],
        )
        sw = sweep(spec)
        zeros = [t for t in sw.trajectories if t.is_zero]
        assert len(zeros) == 2  # det = x^2 * const: both roots at zero


class TestMatchPredictions:
    def test_example_errors_small_and_improving(self, reference_example):
        rep = analyze(reference_example)
        grid = (1e-2, 1e-3, 1e-4)
        coarse = match_predictions(sweep(reference_example, grid), rep)
        fine = match_predictions(sweep(reference_example, grid + (1e-5, 1e-6)), rep)
        assert coarse.max_coeff_error < 5e-2
        assert fine.max_coeff_error < coarse.max_coeff_error
        assert fine.max_exponent_error < 1e-2
        assert not fine.unmatched_trajectories

    def test_every_branch_gets_a_distinct_trajectory(self, reference_example):
        rep = analyze(reference_example)
        table = match_predictions(sweep(reference_example), rep)
        idx = [r.trajectory_index for r in table.branch_rows]
        assert len(idx) == len(set(idx)) == len(rep.branches)

    def test_corner_rows_account_for_mass(self, reference_example):
        rep = analyze(reference_example)
        table = match_predictions(sweep(reference_example), rep)
        rows = {str(r.gamma): r for r in table.corner_rows}
        # mass at exponents above a corner decays after rescaling by eps^-gamma
        assert rows["1"].n_below == rows["1"].m_prime_gamma == 0
        assert rows["1"].n_above == 2
        assert rows["0"].n_below == rows["0"].m_prime_gamma == 1
        assert rows["0"].n_above == 0


class TestBruteForceCharpoly:
    def test_rejects_large_matrices(self):
        spec = example_spec()
        big = PencilSpec.build(
            [np.ones((8, 8))], [np.zeros((8, 8), dtype=int).tolist()]
        )
        with pytest.raises(TooLarge):
            brute_force_trop_charpoly(big.trop_pencil())
        # and runs fine at the reference size
        bf = brute_force_trop_charpoly(spec.trop_pencil())
        assert bf.degree == 3
