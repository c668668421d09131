"""Monomial weights on orthant-type cones and their geometric constants.

A weight ``w(x) = prod_{j in J} x_j^{A_j}`` lives on the cone
``Sigma = {x : x_j > 0 for j in J}``.  It is homogeneous of degree
``alpha = sum A_j`` and induces the measure ``d mu = w dx`` on Sigma, which
scales like an ``D = d + alpha`` dimensional volume:
``mu(B_r \\cap Sigma) = C_D r^D``.

Everything downstream (rearrangement, one-dimensional reduction, the
exponential-functional maximization) consumes the two constants computed
here: the unit-ball mass ``C_D`` and the weighted perimeter ``P_w`` of the
unit-sphere portion inside the cone.  They are linked by ``P_w = D * C_D``,
which the independent quadrature routines let us verify numerically.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import qmc

MIN_QUADRATURE_BUDGET = 10_000

__all__ = [
    "ConeError",
    "BudgetError",
    "ConeSpec",
    "WeightSpec",
    "GeometricConstants",
    "QuadratureResult",
    "weight_eval",
    "unit_ball_measure_closed_form",
    "unit_ball_measure_quadrature",
    "ball_measure",
    "perimeter",
    "compute_constants",
]


class ConeError(ValueError):
    """A point (or a box) lies outside the closed cone."""


class BudgetError(ValueError):
    """Quadrature node budget below the supported minimum."""


@dataclass(frozen=True)
class ConeSpec:
    """Orthant-type cone: positive half-spaces in the active coordinates.

    ``active`` holds 1-based coordinate indices, matching the usual
    subscript convention x_1, ..., x_d.
    """

    dimension: int
    active: tuple[int, ...]

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError(f"dimension must be >= 2, got {self.dimension}")
        active = tuple(sorted(set(int(j) for j in self.active)))
        if not 1 <= len(active) <= self.dimension:
            raise ValueError("need between 1 and d active coordinates")
        if any(j < 1 or j > self.dimension for j in active):
            raise ValueError(f"active indices must lie in 1..{self.dimension}")
        object.__setattr__(self, "active", active)

    @property
    def active_axes(self) -> tuple[int, ...]:
        """0-based axis indices of the active coordinates."""
        return tuple(j - 1 for j in self.active)

    def contains(self, x, strict: bool = True):
        """Membership test, vectorized over the leading axes of ``x``."""
        x = np.asarray(x, dtype=float)
        act = list(self.active_axes)
        if strict:
            return np.all(x[..., act] > 0.0, axis=-1)
        return np.all(x[..., act] >= 0.0, axis=-1)


@dataclass(frozen=True)
class WeightSpec:
    """A monomial weight: cone plus one positive exponent per active axis."""

    cone: ConeSpec
    exponents: tuple[float, ...]

    def __post_init__(self):
        exps = tuple(float(a) for a in self.exponents)
        if len(exps) != len(self.cone.active):
            raise ValueError(
                f"got {len(exps)} exponents for {len(self.cone.active)} active coordinates"
            )
        if any(not math.isfinite(a) or a <= 0.0 for a in exps):
            raise ValueError("exponents must be positive and finite")
        object.__setattr__(self, "exponents", exps)

    @property
    def d(self) -> int:
        return self.cone.dimension

    @property
    def alpha(self) -> float:
        return float(sum(self.exponents))

    @property
    def D(self) -> float:
        return self.d + self.alpha

    @property
    def D_conj(self) -> float:
        """Holder conjugate D' = D/(D-1)."""
        return self.D / (self.D - 1.0)

    def exponent_vector(self) -> np.ndarray:
        """Per-axis exponents, zero on the inactive axes."""
        a = np.zeros(self.d)
        for j, aj in zip(self.cone.active_axes, self.exponents):
            a[j] = aj
        return a

    def to_json(self) -> str:
        obj = {
            "d": self.d,
            "active": list(self.cone.active),
            "exponents": list(self.exponents),
        }
        return json.dumps(obj, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "WeightSpec":
        obj = json.loads(text)
        cone = ConeSpec(dimension=int(obj["d"]), active=tuple(obj["active"]))
        return cls(cone=cone, exponents=tuple(obj["exponents"]))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float


@dataclass(frozen=True)
class GeometricConstants:
    """C_D, P_w and the residual of the relation P_w = D * C_D."""

    C_D: float
    P_w: float
    alpha: float
    D: float
    residual: float

    def __post_init__(self):
        if self.C_D <= 0 or self.P_w <= 0:
            raise ValueError("C_D and P_w must be positive")

    @property
    def D_conj(self) -> float:
        return self.D / (self.D - 1.0)

    def to_json(self) -> str:
        obj = {
            "C_D": self.C_D,
            "P_w": self.P_w,
            "alpha": self.alpha,
            "D": self.D,
            "residual": self.residual,
        }
        return json.dumps(obj, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GeometricConstants":
        obj = json.loads(text)
        return cls(**{k: float(obj[k]) for k in ("C_D", "P_w", "alpha", "D", "residual")})


def weight_eval(spec: WeightSpec, x):
    """Evaluate w at ``x`` (shape ``(..., d)``); zero on the cone boundary.

    Raises ConeError if any active coordinate is negative.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != spec.d:
        raise ValueError(f"expected points in R^{spec.d}, got shape {x.shape}")
    act = list(spec.cone.active_axes)
    xa = x[..., act]
    if np.any(xa < 0.0):
        raise ConeError("point outside the closed cone (negative active coordinate)")
    w = np.prod(xa ** np.asarray(spec.exponents), axis=-1)
    if w.ndim == 0:
        return float(w)
    return w


def unit_ball_measure_closed_form(spec: WeightSpec) -> float:
    """C_D via the Dirichlet (Gamma-function) integral for monomial weights.

    Over the full ball, int_{B_1} prod |x_i|^{a_i} dx
    = 2 prod Gamma((a_i+1)/2) / (Gamma(D/2) D); restricting each active
    coordinate to its positive half-space divides by 2 per active axis.
    Validated against `unit_ball_measure_quadrature` in the test suite.
    """
    a = spec.exponent_vector()
    k = len(spec.cone.active)
    log_c = (
        math.log(2.0)
        + float(np.sum(gammaln((a + 1.0) / 2.0)))
        - k * math.log(2.0)
        - float(gammaln(spec.D / 2.0))
        - math.log(spec.D)
    )
    return math.exp(log_c)


def _sphere_angular_ranges_2d(spec: WeightSpec):
    act = set(spec.cone.active)
    if act == {1, 2}:
        return 0.0, 0.5 * math.pi
    if act == {1}:
        return -0.5 * math.pi, 0.5 * math.pi
    # act == {2}
    return 0.0, math.pi


def _sphere_quadrature_2d(spec: WeightSpec, m: int) -> float:
    """int over the unit-circle arc inside Sigma of w, Gauss-Legendre."""
    lo, hi = _sphere_angular_ranges_2d(spec)
    nodes, wts = np.polynomial.legendre.leggauss(m)
    theta = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    # Gauss nodes are interior, but guard against rounding at the arc ends
    pts = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    pts[..., list(spec.cone.active_axes)] = np.clip(
        pts[..., list(spec.cone.active_axes)], 0.0, None
    )
    vals = weight_eval(spec, pts)
    return float(0.5 * (hi - lo) * np.sum(wts * vals))


def _sphere_quadrature_3d(spec: WeightSpec, m: int) -> float:
    """Spherical-coordinate Gauss-Legendre over the cone's sphere patch."""
    act = set(spec.cone.active)
    th_hi = 0.5 * math.pi if 3 in act else math.pi
    in_plane = act & {1, 2}
    if in_plane == {1, 2}:
        ph_lo, ph_hi = 0.0, 0.5 * math.pi
    elif in_plane == {1}:
        ph_lo, ph_hi = -0.5 * math.pi, 0.5 * math.pi
    elif in_plane == {2}:
        ph_lo, ph_hi = 0.0, math.pi
    else:
        ph_lo, ph_hi = 0.0, 2.0 * math.pi
    nodes, wts = np.polynomial.legendre.leggauss(m)
    theta = 0.5 * th_hi * nodes + 0.5 * th_hi
    wth = 0.5 * th_hi * wts
    phi = 0.5 * (ph_hi - ph_lo) * nodes + 0.5 * (ph_hi + ph_lo)
    wph = 0.5 * (ph_hi - ph_lo) * wts
    st = np.sin(theta)[:, None]
    pts = np.stack(
        [
            st * np.cos(phi)[None, :],
            st * np.sin(phi)[None, :],
            np.broadcast_to(np.cos(theta)[:, None], (m, m)),
        ],
        axis=-1,
    )
    pts[..., list(spec.cone.active_axes)] = np.clip(
        pts[..., list(spec.cone.active_axes)], 0.0, None
    )
    vals = weight_eval(spec, pts)
    integrand = vals * st
    return float(np.einsum("i,j,ij->", wth, wph, integrand))


def _sphere_quadrature(spec: WeightSpec, m: int) -> float:
    if spec.d == 2:
        return _sphere_quadrature_2d(spec, m)
    if spec.d == 3:
        return _sphere_quadrature_3d(spec, m)
    raise ValueError("deterministic sphere quadrature only for d <= 3")


def _sphere_monte_carlo(spec: WeightSpec, n: int, seed: int) -> QuadratureResult:
    """P_w for d > 3: uniform sphere sampling via normalized Gaussians."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, spec.d))
    x = g / np.linalg.norm(g, axis=1, keepdims=True)
    inside = spec.cone.contains(x, strict=True)
    vals = np.zeros(n)
    vals[inside] = weight_eval(spec, x[inside])
    area = 2.0 * math.pi ** (spec.d / 2.0) / math.gamma(spec.d / 2.0)
    chunks = np.array_split(vals, 8)
    means = np.array([c.mean() for c in chunks])
    value = area * float(vals.mean())
    err = area * float(means.std(ddof=1)) / math.sqrt(len(chunks))
    return QuadratureResult(value=value, error_estimate=err)


def unit_ball_measure_quadrature(
    spec: WeightSpec, budget: int = 1_000_000, seed: int = 0
) -> QuadratureResult:
    """Numerical estimate of C_D, independent of the Gamma closed form.

    d <= 3 uses tensor Gauss-Legendre in polar/spherical coordinates
    (the radial integral int_0^1 r^{D-1} dr = 1/D is analytic); d > 3
    falls back to quasi-Monte Carlo rejection over the bounding box.
    The error estimate is a heuristic difference of two budgets, not a
    rigorous bound.
    """
    if budget < MIN_QUADRATURE_BUDGET:
        raise BudgetError(
            f"budget {budget} below the minimum of {MIN_QUADRATURE_BUDGET} nodes"
        )
    if spec.d <= 3:
        m = max(16, int(math.sqrt(budget)))
        coarse = _sphere_quadrature(spec, m // 2) / spec.D
        fine = _sphere_quadrature(spec, m) / spec.D
        return QuadratureResult(value=fine, error_estimate=abs(fine - coarse))
    # QMC over the box: [0,1] on active axes, [-1,1] elsewhere
    sampler = qmc.Sobol(d=spec.d, scramble=True, seed=seed)
    n = 2 ** int(math.ceil(math.log2(budget)))
    u = sampler.random(n)
    lo = np.full(spec.d, -1.0)
    lo[list(spec.cone.active_axes)] = 0.0
    x = lo + u * (1.0 - lo)
    volume = float(np.prod(1.0 - lo))
    inside = np.linalg.norm(x, axis=1) < 1.0
    vals = np.zeros(n)
    vals[inside] = weight_eval(spec, x[inside])
    half_a = volume * float(vals[: n // 2].mean())
    half_b = volume * float(vals[n // 2 :].mean())
    value = volume * float(vals.mean())
    return QuadratureResult(value=value, error_estimate=abs(half_a - half_b))


def ball_measure(spec: WeightSpec, consts: GeometricConstants, r: float) -> float:
    """mu(B_r cap Sigma) = C_D r^D."""
    if r <= 0.0:
        raise ValueError(f"radius must be positive, got {r}")
    return consts.C_D * r ** consts.D


def perimeter(spec: WeightSpec, budget: int = 100_000, seed: int = 0) -> float:
    """Weighted perimeter P_w of the unit-sphere portion inside the cone.

    Computed by direct surface quadrature, so the relation P_w = D * C_D
    is a genuine cross-check against the closed-form ball mass.
    """
    if spec.d <= 3:
        m = max(64, int(math.sqrt(budget)))
        return _sphere_quadrature(spec, m)
    return _sphere_monte_carlo(spec, max(budget, MIN_QUADRATURE_BUDGET), seed).value


def compute_constants(spec: WeightSpec, budget: int = 100_000, seed: int = 0) -> GeometricConstants:
    """Assemble GeometricConstants; residual records |P_w - D*C_D| / P_w."""
    c_d = unit_ball_measure_closed_form(spec)
    p_w = perimeter(spec, budget=budget, seed=seed)
    residual = abs(p_w - spec.D * c_d) / p_w
    return GeometricConstants(
        C_D=c_d, P_w=p_w, alpha=spec.alpha, D=spec.D, residual=residual
    )
