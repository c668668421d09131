"""Distribution functions, radial rearrangement, and symmetrization inequalities."""

import numpy as np
import pytest

from conemoser import fixtures, rearrange
from conemoser.rearrange import (
    GridFunction,
    ZeroFunctionError,
    composition_integral,
    decreasing_rearrangement,
    default_thresholds,
    distribution,
    equimeasurability_report,
    gradient_seminorm,
    grid_from_profile,
    load_grid,
    load_profile,
    polya_szego_check,
    profile_distribution,
    radial_rearrangement,
    save_grid,
    save_profile,
    support_measure,
)


def test_distribution_is_nonincreasing(spec_x1):
    f = fixtures.two_bumps(spec_x1)
    dist = distribution(f, spec_x1, default_thresholds(f))
    assert np.all(np.diff(dist.measures) <= 1e-14)


def test_distribution_of_ball_indicator(spec_x1, consts_x1):
    # mu({indicator > tau}) = mu(B_1) for every tau < 1
    f = fixtures.ball_indicator(spec_x1, n=256)
    dist = distribution(f, spec_x1, np.array([0.25, 0.5, 0.75]))
    for m in dist.measures:
        assert m == pytest.approx(consts_x1.C_D, rel=2e-2)


def test_distribution_rejects_bad_thresholds(spec_x1):
    f = fixtures.tent(spec_x1)
    with pytest.raises(ValueError):
        distribution(f, spec_x1, np.array([0.5, 0.25]))
    with pytest.raises(ValueError):
        distribution(f, spec_x1, np.array([]))


def test_decreasing_rearrangement_inverse_conventions():
    dist = rearrange.StepDistribution(
        thresholds=np.array([0.2, 0.5, 0.8]), measures=np.array([1.0, 0.4, 0.1])
    )
    assert decreasing_rearrangement(dist, 2.0) == 0.0  # beyond the support
    assert decreasing_rearrangement(dist, 0.4) == pytest.approx(0.5)
    assert decreasing_rearrangement(dist, 0.05) == pytest.approx(0.8)
    with pytest.raises(ValueError):
        decreasing_rearrangement(dist, 0.0)


def test_radial_bump_is_fixed_point(spec_x1):
    # the radial bump is already nonincreasing in |x|, so rearrangement
    # reproduces its own radial section
    f = fixtures.radial_bump(spec_x1, n=256)
    u = radial_rearrangement(f, spec_x1)
    exact = np.clip(1.0 - u.radii ** 2, 0.0, None) ** 1.5
    assert np.max(np.abs(u.values - exact)) <= 2e-2
    assert u.R == pytest.approx(1.0, abs=2e-2)


def test_profile_is_monotone(spec_x1x2):
    f = fixtures.two_bumps(spec_x1x2)
    u = radial_rearrangement(f, spec_x1x2)
    assert np.all(np.diff(u.values) <= 0)
    assert u.values[-1] == 0.0


def test_rearrangement_rejects_zero_function(spec_x1):
    f = GridFunction(lo=(0.0, -1.0), hi=(1.0, 1.0), values=np.zeros((8, 8)))
    with pytest.raises(ZeroFunctionError):
        radial_rearrangement(f, spec_x1)


def test_support_measure_matches_distribution_limit(spec_x1):
    f = fixtures.radial_bump(spec_x1, n=256)
    dist = distribution(f, spec_x1, np.array([1e-6]))
    assert dist.measures[0] == pytest.approx(support_measure(f, spec_x1), rel=1e-3)


@pytest.mark.parametrize("name", ["radial-bump", "shifted-bump", "two-bumps"])
def test_equimeasurability(name, spec_x1, spec_x1x2):
    for spec in (spec_x1, spec_x1x2):
        rep = equimeasurability_report(fixtures.grid_fixture(name, spec, 128), spec)
        assert rep.discrepancy <= 1e-2


def test_equimeasurability_improves_under_refinement(spec_x1):
    coarse = equimeasurability_report(fixtures.two_bumps(spec_x1, 128), spec_x1)
    fine = equimeasurability_report(fixtures.two_bumps(spec_x1, 256), spec_x1)
    assert fine.discrepancy < coarse.discrepancy


def test_composition_integral_invariance(spec_x1, consts_x1):
    f = fixtures.shifted_bump(spec_x1)
    u = radial_rearrangement(f, spec_x1)
    a = consts_x1.C_D / 2.0
    dp = consts_x1.D_conj
    for psi in (lambda s: s, lambda s: s * s, lambda s: np.exp(a * s ** dp) - 1.0):
        lhs = composition_integral(f, spec_x1, psi)
        rhs = composition_integral(u, spec_x1, psi)
        assert abs(lhs - rhs) <= 1e-2 * abs(lhs)


def test_composition_rejects_nonincreasing_psi(spec_x1):
    f = fixtures.radial_bump(spec_x1)
    with pytest.raises(ValueError):
        composition_integral(f, spec_x1, lambda s: -s)


def test_gradient_seminorm_linear_function(spec_x1):
    # f = x1 on [0,1]x[-1,1]: int |grad f|^2 x1 dx = int x1 = 1
    n = 129
    x = np.linspace(0.0, 1.0, n)
    y = np.linspace(-1.0, 1.0, n)
    f = GridFunction(lo=(0.0, -1.0), hi=(1.0, 1.0), values=np.broadcast_to(
        x[:, None], (n, n)).copy())
    assert gradient_seminorm(f, spec_x1, 2.0) == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("p", [1.0, 2.0])
def test_polya_szego_tent(p, spec_x1):
    rep = polya_szego_check(fixtures.tent(spec_x1), spec_x1, p)
    assert rep.holds


@pytest.mark.parametrize("name", ["radial-bump", "shifted-bump", "two-bumps"])
def test_polya_szego_smooth_fixtures(name, spec_x1, consts_x1):
    for p in (1.0, 2.0, consts_x1.D):
        rep = polya_szego_check(fixtures.grid_fixture(name, spec_x1, 128), spec_x1, p)
        assert rep.holds, (name, p, rep.lhs, rep.rhs)


def test_polya_szego_strict_on_two_bumps(spec_x1, spec_x1x2):
    for spec in (spec_x1, spec_x1x2):
        rep = polya_szego_check(fixtures.two_bumps(spec), spec, 2.0)
        assert rep.lhs < 0.99 * rep.rhs


def test_profile_distribution_consistency(spec_x1):
    f = fixtures.radial_bump(spec_x1, n=256)
    u = radial_rearrangement(f, spec_x1)
    taus = np.array([0.1, 0.3, 0.6, 0.9])
    direct = distribution(f, spec_x1, taus)
    via_profile = profile_distribution(u, spec_x1, taus)
    assert np.allclose(direct.measures, via_profile.measures, rtol=5e-3, atol=1e-4)


def test_grid_round_trip(tmp_path, spec_x1):
    f = fixtures.tent(spec_x1, n=32)
    prefix = str(tmp_path / "grid")
    save_grid(f, prefix)
    g = load_grid(prefix)
    assert g.lo == f.lo and g.hi == f.hi
    assert np.array_equal(g.values, f.values)


def test_profile_round_trip(tmp_path, spec_x1):
    u = radial_rearrangement(fixtures.radial_bump(spec_x1), spec_x1, n=64)
    path = str(tmp_path / "profile.csv")
    save_profile(u, path)
    v = load_profile(path)
    assert np.allclose(u.radii, v.radii)
    assert np.allclose(u.values, v.values)


def test_grid_from_profile_samples_radially(spec_x1):
    u = radial_rearrangement(fixtures.radial_bump(spec_x1, n=256), spec_x1)
    g = grid_from_profile(u, spec_x1, 65)
    mid = g.values[0, 32]  # x = (0, 0): the peak
    assert mid == pytest.approx(np.max(u.values), rel=1e-6)
