import math

import numpy as np
import pytest

from fisher_noise.density import Grid, density_from_wavefunction, fisher_information
from fisher_noise.errors import GridMismatch, IndexOutOfRange
from fisher_noise.problem import Quadratic, Zero
from fisher_noise.schrodinger import (
    RESIDUAL_TOL,
    PotentialGrid,
    analytic_well_energy,
    assemble,
    ground_state,
    nth_state,
    potential_from_quality,
    sign_changes,
)


def well_operator(n_points: int = 4000, a: float = 1.0):
    grid = Grid(-a, a, n_points)
    return assemble(grid, potential_from_quality(grid, Zero(), 0.0))


# ---- Assembly -----------------------------------------------------------------
def test_assemble_stencil():
    grid = Grid(0.0, 1.0, 9)
    op = assemble(grid, potential_from_quality(grid, Quadratic(), 4.0))
    assert op.diag.shape == (9,) and op.offdiag.shape == (8,)
    assert np.allclose(op.diag, 2 / grid.h**2 + grid.nodes**2)
    assert np.allclose(op.offdiag, -1 / grid.h**2)


def test_matvec_matches_dense_matrix():
    grid = Grid(-1.0, 1.0, 6)
    op = assemble(grid, potential_from_quality(grid, Quadratic(), 1.0))
    dense = np.diag(op.diag) + np.diag(op.offdiag, 1) + np.diag(op.offdiag, -1)
    x = np.arange(6, dtype=float)
    assert np.allclose(op.matvec(x), dense @ x)
    assert op.norm_inf == pytest.approx(np.abs(dense).sum(axis=1).max())


def test_assemble_rejects_potential_from_another_grid():
    potential = potential_from_quality(Grid(-1.0, 1.0, 10), Zero(), 0.0)
    with pytest.raises(GridMismatch):
        assemble(Grid(-2.0, 2.0, 10), potential)


def test_potential_needs_one_value_per_node():
    with pytest.raises(GridMismatch):
        PotentialGrid(Grid(-1.0, 1.0, 10), np.zeros(9))


def test_potential_from_zero_quality_is_flat():
    grid = Grid(-1.0, 1.0, 10)
    assert not np.any(potential_from_quality(grid, Zero(), 5.0).v)
    assert not np.any(potential_from_quality(grid, Quadratic(), 0.0).v)


# ---- Square well ------------------------------------------------------------------
def test_square_well_ground_state():
    pair = ground_state(well_operator())
    assert pair.eigenvalue == pytest.approx(math.pi**2 / 4, rel=1e-5)
    assert pair.residual_norm <= RESIDUAL_TOL
    psi = pair.eigenvector
    assert np.all(psi.values >= 0)
    assert psi.grid.h * np.dot(psi.values, psi.values) == pytest.approx(1.0, abs=1e-12)
    assert sign_changes(psi) == 0


def test_excited_states_are_suboptimal():
    op = well_operator()
    fishers = []
    for n in range(1, 5):
        pair = nth_state(op, n)
        assert pair.eigenvalue == pytest.approx(analytic_well_energy(1.0, n), rel=1e-5)
        assert sign_changes(pair.eigenvector) == n - 1
        fisher = fisher_information(density_from_wavefunction(pair.eigenvector))
        assert fisher == pytest.approx(n**2 * math.pi**2, rel=1e-3)
        fishers.append(fisher)
    assert all(b > a for a, b in zip(fishers, fishers[1:]))


def test_state_orientation_is_deterministic():
    op = well_operator(n_points=500)
    first = nth_state(op, 3).eigenvector.values
    second = nth_state(op, 3).eigenvector.values
    assert np.array_equal(first, second)
    # odd states start with a positive lobe on the left
    assert nth_state(op, 2).eigenvector.values[0] > 0


@pytest.mark.parametrize("n", [0, 501])
def test_state_index_out_of_range(n):
    with pytest.raises(IndexOutOfRange):
        nth_state(well_operator(n_points=500), n)


def test_grid_convergence_is_second_order():
    energy_errors, fisher_errors = [], []
    for n_points in (1000, 2000, 4000):
        pair = ground_state(well_operator(n_points))
        energy_errors.append(abs(pair.eigenvalue - math.pi**2 / 4))
        fisher = fisher_information(density_from_wavefunction(pair.eigenvector))
        fisher_errors.append(abs(fisher - math.pi**2))

    for errors in (energy_errors, fisher_errors):
        for coarse, fine in zip(errors, errors[1:]):
            assert 3.5 <= coarse / fine <= 4.5


# ---- Harmonic oscillator ------------------------------------------------------------
def test_harmonic_oscillator_ground_state():
    grid = Grid(-10.0, 10.0, 4000)
    pair = ground_state(assemble(grid, potential_from_quality(grid, Quadratic(), 1.0)))
    assert pair.eigenvalue == pytest.approx(0.5, rel=1e-4)
    gaussian = np.exp(-grid.nodes**2 / 4) / (2 * math.pi) ** 0.25
    assert np.max(np.abs(pair.eigenvector.values - gaussian)) < 1e-4


def test_assemble_reference_stencil():
    grid = Grid(-1.0, 1.0, 3)
    op = assemble(grid, potential_from_quality(grid, Zero(), 0.0))
    assert np.allclose(op.diag, [8.0, 8.0, 8.0])
    assert np.allclose(op.offdiag, [-4.0, -4.0])


def test_ground_state_is_cosine():
    pair = ground_state(well_operator())
    w = pair.eigenvector.grid.nodes
    assert np.max(np.abs(pair.eigenvector.values - np.cos(np.pi * w / 2))) < 1e-4


def test_first_state_is_ground_state():
    op = well_operator(n_points=300)
    assert np.array_equal(nth_state(op, 1).eigenvector.values,
                          ground_state(op).eigenvector.values)
