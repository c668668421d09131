"""Geometric constants and weight evaluation."""

import json

import numpy as np
import pytest

from conemoser import weights
from conemoser.weights import (
    BudgetError,
    ConeError,
    ConeSpec,
    WeightSpec,
    ball_measure,
    compute_constants,
    perimeter,
    unit_ball_measure_closed_form,
    unit_ball_measure_quadrature,
    weight_eval,
)


def make_spec(d, active, exponents):
    return WeightSpec(cone=ConeSpec(dimension=d, active=active), exponents=exponents)


# closed forms derived by hand via iterated Gamma integrals and frozen
CLOSED_FORM_CASES = [
    (2, (1,), (1.0,), 2.0 / 3.0),
    (2, (1, 2), (1.0, 1.0), 1.0 / 8.0),
    (3, (1, 2, 3), (1.0, 1.0, 1.0), 1.0 / 48.0),
]


@pytest.mark.parametrize("d,active,exps,expected", CLOSED_FORM_CASES)
def test_unit_ball_closed_form(d, active, exps, expected):
    spec = make_spec(d, active, exps)
    assert unit_ball_measure_closed_form(spec) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("d,active,exps,expected", CLOSED_FORM_CASES)
def test_quadrature_agrees_with_closed_form(d, active, exps, expected):
    spec = make_spec(d, active, exps)
    quad = unit_ball_measure_quadrature(spec, budget=200_000, seed=0)
    assert quad.value == pytest.approx(expected, rel=1e-3)
    assert abs(quad.value - expected) <= max(10.0 * quad.error_estimate, 1e-3 * expected)


def test_quadrature_rejects_tiny_budget(spec_x1):
    with pytest.raises(BudgetError):
        unit_ball_measure_quadrature(spec_x1, budget=100)


def test_perimeter_relation(spec_x1, spec_x1x2):
    for spec in (spec_x1, spec_x1x2):
        c = unit_ball_measure_closed_form(spec)
        p = perimeter(spec, budget=200_000)
        assert p == pytest.approx(spec.D * c, rel=1e-4)


def test_compute_constants_bundle(spec_x1):
    consts = compute_constants(spec_x1)
    assert consts.D == pytest.approx(3.0)
    assert consts.alpha == pytest.approx(1.0)
    assert consts.C_D == pytest.approx(2.0 / 3.0, rel=1e-9)
    assert consts.P_w == pytest.approx(2.0, rel=1e-4)
    obj = json.loads(consts.to_json())
    assert set(obj) >= {"C_D", "P_w", "alpha", "D"}


def test_ball_measure_scaling(spec_x1, consts_x1):
    # mu(B_r) = C_D r^D; r = 1/2 value 1/12 frozen from direct 2-d quadrature
    assert ball_measure(spec_x1, consts_x1, 0.5) == pytest.approx(1.0 / 12.0, rel=1e-9)


def test_weight_homogeneity():
    rng = np.random.default_rng(7)
    for d, active, exps, _ in CLOSED_FORM_CASES:
        spec = make_spec(d, active, exps)
        x = rng.uniform(0.1, 2.0, size=(1000, d))
        kappa = rng.uniform(0.1, 10.0, size=1000)
        w1 = weight_eval(spec, x * kappa[:, None])
        w0 = weight_eval(spec, x)
        assert np.allclose(w1, w0 * kappa ** spec.alpha, rtol=1e-12, atol=0.0)


def test_weight_eval_rejects_points_outside_cone(spec_x1):
    with pytest.raises(ConeError):
        weight_eval(spec_x1, np.array([[-0.5, 0.3]]))


def test_weight_eval_inactive_axis_sign_free(spec_x1):
    vals = weight_eval(spec_x1, np.array([[0.5, -0.9], [0.5, 0.9]]))
    assert vals[0] == vals[1] == pytest.approx(0.5)


def test_conespec_validation():
    with pytest.raises(ValueError):
        ConeSpec(dimension=2, active=(3,))
    with pytest.raises(ValueError):
        ConeSpec(dimension=0, active=())
    with pytest.raises(ValueError):
        make_spec(2, (1,), (-1.0,))


def test_weightspec_json_round_trip(spec_x1x2):
    text = spec_x1x2.to_json()
    back = WeightSpec.from_json(text)
    assert back == spec_x1x2


def test_contains(spec_x1):
    cone = spec_x1.cone
    assert cone.contains(np.array([0.1, -5.0]))
    assert not cone.contains(np.array([-0.1, 0.0]))


def test_noninteger_exponent_constant():
    # C_D from the Gamma formula vs independent quadrature, A = (1/2)
    spec = make_spec(2, (1,), (0.5,))
    c = unit_ball_measure_closed_form(spec)
    quad = unit_ball_measure_quadrature(spec, budget=200_000)
    assert quad.value == pytest.approx(c, rel=1e-3)
