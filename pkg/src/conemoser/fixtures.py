"""Canonical d = 2 test inputs used by the test suite and the CLI.

Two monomial weights (x_1 and x_1 x_2) and a small family of sampled
functions: a radial bump (its own rearrangement), a tent, a ball
indicator, a shifted bump, and a pair of separated bumps (strict
symmetrization case).
"""

from __future__ import annotations

import numpy as np

from .rearrange import GridFunction
from .weights import ConeSpec, WeightSpec

__all__ = [
    "weight_x1",
    "weight_x1x2",
    "radial_bump",
    "tent",
    "ball_indicator",
    "shifted_bump",
    "two_bumps",
    "grid_fixture",
    "GRID_FIXTURES",
    "WEIGHT_FIXTURES",
]


def weight_x1() -> WeightSpec:
    """w(x) = x_1 on the half-plane x_1 > 0 (alpha = 1, D = 3)."""
    return WeightSpec(cone=ConeSpec(dimension=2, active=(1,)), exponents=(1.0,))


def weight_x1x2() -> WeightSpec:
    """w(x) = x_1 x_2 on the positive quadrant (alpha = 2, D = 4)."""
    return WeightSpec(cone=ConeSpec(dimension=2, active=(1, 2)), exponents=(1.0, 1.0))


def _box(spec: WeightSpec, half: float) -> tuple[tuple, tuple]:
    lo = tuple(0.0 if ax in spec.cone.active_axes else -half for ax in range(spec.d))
    hi = (half,) * spec.d
    return lo, hi


def _sample(spec: WeightSpec, half: float, n: int, fn) -> GridFunction:
    lo, hi = _box(spec, half)
    axes = [np.linspace(l, h, n) for l, h in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return GridFunction(lo=lo, hi=hi, values=fn(*mesh))


# C^1 contact of order 3/2: the gradient vanishes at the support edge but
# the samples in edge cells stay at grid scale, which keeps superlevel-set
# quadrature well conditioned
_BUMP_POWER = 1.5


def radial_bump(spec: WeightSpec, n: int = 128) -> GridFunction:
    """Radially nonincreasing bump (1 - |x|^2)^{3/2} on B_1; its own rearrangement."""
    return _sample(
        spec,
        1.05,
        n,
        lambda x, y: np.clip(1.0 - (x * x + y * y), 0.0, None) ** _BUMP_POWER,
    )


def tent(spec: WeightSpec, n: int = 128) -> GridFunction:
    return _sample(
        spec, 1.05, n, lambda x, y: np.clip(1.0 - np.sqrt(x * x + y * y), 0.0, None)
    )


def ball_indicator(spec: WeightSpec, n: int = 128) -> GridFunction:
    return _sample(
        spec, 1.05, n, lambda x, y: (x * x + y * y < 1.0).astype(float)
    )


def _bump_at(cx, cy, rho):
    def fn(x, y):
        rr = (x - cx) ** 2 + (y - cy) ** 2
        return np.clip(1.0 - rr / rho ** 2, 0.0, None) ** _BUMP_POWER

    return fn


def shifted_bump(spec: WeightSpec, n: int = 128) -> GridFunction:
    """A translated bump strictly inside the cone."""
    if len(spec.cone.active) == 2:
        return _sample(spec, 1.05, n, _bump_at(0.55, 0.55, 0.35))
    return _sample(spec, 1.05, n, _bump_at(0.55, 0.1, 0.35))


def two_bumps(spec: WeightSpec, n: int = 128) -> GridFunction:
    """Two separated bumps; symmetrization strictly decreases the energy."""
    if len(spec.cone.active) == 2:
        a, b = _bump_at(0.45, 0.45, 0.3), _bump_at(1.25, 1.25, 0.3)
        return _sample(spec, 1.7, n, lambda x, y: a(x, y) + b(x, y))
    a, b = _bump_at(0.5, -0.55, 0.3), _bump_at(0.5, 0.55, 0.3)
    return _sample(spec, 1.05, n, lambda x, y: a(x, y) + b(x, y))


GRID_FIXTURES = {
    "radial-bump": radial_bump,
    "tent": tent,
    "ball-indicator": ball_indicator,
    "shifted-bump": shifted_bump,
    "two-bumps": two_bumps,
}

WEIGHT_FIXTURES = {
    "x1": weight_x1,
    "x1x2": weight_x1x2,
}


def grid_fixture(name: str, spec: WeightSpec, n: int = 128) -> GridFunction:
    try:
        return GRID_FIXTURES[name](spec, n)
    except KeyError:
        raise KeyError(
            f"unknown fixture {name!r}; choose from {sorted(GRID_FIXTURES)}"
        ) from None
