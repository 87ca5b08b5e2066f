import math

import numpy as np
import pytest

from fisher_noise.density import Grid, NoiseDensity
from fisher_noise.errors import InvalidQuery, OutOfRange
from fisher_noise.mechanism import (
    AffineScalar,
    AttackReport,
    IdentityScalar,
    apply_query,
    ks_statistic,
    mle_estimate,
    monte_carlo_attack,
    noise_mode,
    respond,
    sample,
)

TRIALS = 100_000


# ---- Sampling ---------------------------------------------------------------------
def test_gaussian_samples_have_unit_variance(gaussian_result):
    w = sample(gaussian_result.density, seed=42, count=TRIALS)
    assert abs(w.mean()) < 0.02
    assert abs(w.var() - 1.0) < 0.03


def test_square_well_samples_stay_in_support(well_result):
    w = sample(well_result.density, seed=42, count=TRIALS)
    assert np.all((w >= -1.0) & (w <= 1.0))


def test_sampling_is_reproducible(gaussian_result):
    first = sample(gaussian_result.density, seed=123, count=1000)
    second = sample(gaussian_result.density, seed=123, count=1000)
    assert np.array_equal(first, second)
    assert not np.array_equal(first, sample(gaussian_result.density, seed=124, count=1000))


def test_sample_count_must_be_positive(gaussian_result):
    with pytest.raises(OutOfRange):
        sample(gaussian_result.density, seed=1, count=0)


@pytest.mark.parametrize("fixture", ["gaussian_result", "well_result"])
def test_ks_statistic_within_critical_value(fixture, request):
    density = request.getfixturevalue(fixture).density
    w = sample(density, seed=42, count=TRIALS)
    assert ks_statistic(density, w) <= 1.95 / math.sqrt(TRIALS)


# ---- Responses -----------------------------------------------------------------------
def point_mass_density() -> NoiseDensity:
    grid = Grid(0.0, 1.0, 9)
    values = np.zeros(9)
    values[4] = 1.0
    return NoiseDensity.from_values(grid, values)


def test_respond_adds_noise(gaussian_result):
    w = sample(gaussian_result.density, seed=5, count=1)[0]
    assert respond(IdentityScalar(), 3.0, gaussian_result.density, seed=5) == 3.0 + w
    affine = AffineScalar(slope=2.0, intercept=1.0)
    assert respond(affine, 3.0, gaussian_result.density, seed=5) == 7.0 + w


def test_respond_with_point_mass_noise():
    d = point_mass_density()
    y = respond(IdentityScalar(), 3.0, d, seed=0)
    # all mass within one cell around the node at 0.5
    assert abs(y - 3.5) <= d.grid.h


def test_affine_query_needs_nonzero_slope():
    with pytest.raises(InvalidQuery):
        apply_query(AffineScalar(slope=0.0), 1.0)


# ---- Estimation ------------------------------------------------------------------------
def test_mle_on_gaussian_noise(gaussian_result):
    assert mle_estimate(gaussian_result.density, 2.7) == pytest.approx(2.7, abs=1e-6)


def test_mle_on_square_well_noise(well_result):
    assert mle_estimate(well_result.density, 5.0) == pytest.approx(5.0, abs=1e-3)


def test_mle_is_location_equivariant(well_result):
    d = well_result.density
    for delta in (-3.25, 0.5, 12.0):
        assert mle_estimate(d, 1.0 + delta) == pytest.approx(mle_estimate(d, 1.0) + delta,
                                                             abs=1e-12)


def test_mle_vectorized_matches_scalar(gaussian_result):
    ys = np.array([-1.0, 0.0, 2.5])
    expected = [mle_estimate(gaussian_result.density, y) for y in ys]
    assert np.allclose(mle_estimate(gaussian_result.density, ys), expected)


def test_mle_ties_resolve_toward_smallest_estimate():
    grid = Grid(0.0, 1.0, 9)
    values = np.zeros(9)
    values[[2, 6]] = 1.0
    d = NoiseDensity.from_values(grid, values)
    assert noise_mode(d) == pytest.approx(grid.nodes[6])


def test_mle_with_affine_query(gaussian_result):
    query = AffineScalar(slope=2.0, intercept=1.0)
    assert mle_estimate(gaussian_result.density, 7.0, query) == pytest.approx(3.0, abs=1e-6)


# ---- Attacks ------------------------------------------------------------------------------
def test_attack_on_gaussian_reaches_cramer_rao_floor(gaussian_result):
    report = monte_carlo_attack(gaussian_result.density, x_true=0.0, trials=TRIALS, seed=42)
    assert report.cramer_rao_floor == pytest.approx(1.0, rel=1e-3)
    assert report.empirical_mse == pytest.approx(report.cramer_rao_floor, rel=0.05)
    assert abs(report.empirical_bias) < 0.01


def test_attack_on_square_well_respects_floor(well_result):
    report = monte_carlo_attack(well_result.density, x_true=0.3, trials=TRIALS, seed=42)
    assert report.cramer_rao_floor == pytest.approx(1 / math.pi**2, rel=1e-3)
    assert abs(report.empirical_bias) < 0.01
    assert report.empirical_mse >= 0.95 * report.cramer_rao_floor


def test_affine_attack_divides_out_the_slope(gaussian_result):
    query = AffineScalar(slope=2.0, intercept=-1.0)
    report = monte_carlo_attack(gaussian_result.density, x_true=1.0, trials=TRIALS, seed=42,
                                query=query)
    assert report.cramer_rao_floor == pytest.approx(0.25, rel=1e-3)
    assert report.empirical_mse == pytest.approx(0.25, rel=0.05)


def test_attack_is_reproducible(well_result):
    first = monte_carlo_attack(well_result.density, 0.0, trials=2000, seed=9)
    second = monte_carlo_attack(well_result.density, 0.0, trials=2000, seed=9)
    assert first == second
    assert isinstance(first, AttackReport)
    assert first.seed == 9 and first.trials == 2000


def test_attack_needs_enough_trials(gaussian_result):
    with pytest.raises(OutOfRange):
        monte_carlo_attack(gaussian_result.density, 0.0, trials=999, seed=1)
