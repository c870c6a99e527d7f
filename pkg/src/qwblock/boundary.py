"""Boundary functions of the Riemann-Hilbert problems.

Theta1 is the half-phase of the boundary coefficient alpha1 on the circle
of radius r1, Phi1 its Cauchy-integral companion, and phi1 the resulting
sectionally analytic factor evaluated inside the circle.  Theta2/phi2
play the same role for the no-reservation (a = 0) baseline.

Both Theta functions are computed with the two-argument angle of
(denominator, sqrt(-Delta)); the printed arctan form folds the branch
whenever the denominator changes sign, while atan2 keeps the angle
continuous in [0, pi].  The convention is pinned by the identity
alpha1(X0(y+0i)) = exp(-2i*Theta1(y)), which is tested directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import KernelZeroOnCut
from .kernel import BranchPoints, Side, branch_points, kernel_value, x_roots, y_roots
from .model import ModelParams
from .quadrature import QuadConfig, cosine_grid, integrate_pv


def theta1(params: ModelParams, y):
    """Boundary angle Theta1(y) in [0, pi] for y in the cut [y1, y2]."""
    y = np.asarray(y, dtype=float)
    s = params.rate_sum
    q1 = params.mu2c2 * y * y - s * y + params.lambda2
    d1 = q1 * q1 - 4.0 * params.mu1c1 * params.lambda1 * y * y
    if np.any(d1 > 1e-9 * s * s):
        raise ValueError("y outside the cut [y1, y2]: Delta1(y) > 0")
    num = np.sqrt(np.maximum(-d1, 0.0))
    den = q1 + 2.0 * params.lambda1
    out = np.arctan2(num, den)
    return out if out.ndim else float(out)


def theta2(params: ModelParams, x):
    """Baseline boundary angle Theta2(x) in [0, pi] for x in [x1, x2]."""
    x = np.asarray(x, dtype=float)
    s = params.rate_sum
    q2 = params.mu1c1 * x * x - s * x + params.lambda1
    d2 = q2 * q2 - 4.0 * params.mu2c2 * params.lambda2 * x * x
    if np.any(d2 > 1e-9 * s * s):
        raise ValueError("x outside the cut [x1, x2]: Delta2(x) > 0")
    num = np.sqrt(np.maximum(-d2, 0.0))
    den = ((x + 1.0) * (params.lambda1 - x * params.mu1c1)
           + x * (params.lambda2 - params.mu2c2))
    out = np.arctan2(num, den)
    return out if out.ndim else float(out)


def alpha1(params: ModelParams, x, bp: BranchPoints | None = None):
    """Boundary coefficient alpha1(x) for x on the circle of radius r1."""
    bp = bp or branch_points(params)
    y0, _ = y_roots(params, x, bp)
    return (params.lambda1 * (y0 - x)
            / (x * (params.mu1c1 * x * y0 - params.lambda1)))


def alpha1_winding(params: ModelParams, n_points: int = 2000) -> int:
    """Winding number of alpha1 around the circle of radius r1.

    Sums phase increments over a uniform circle grid and rounds; the
    analytic theory gives index 0, which downstream solutions assume.
    """
    bp = branch_points(params)
    th = np.linspace(0.0, 2.0 * math.pi, n_points, endpoint=False)
    z = bp.r1 * np.exp(1j * th)
    vals = np.array([alpha1(params, zz, bp) for zz in z])
    args = np.angle(vals)
    dargs = np.diff(np.concatenate([args, args[:1]]))
    dargs = (dargs + math.pi) % (2.0 * math.pi) - math.pi
    return round(float(dargs.sum() / (2.0 * math.pi)))


def phi1_exponent_big(params: ModelParams, y: float,
                      bp: BranchPoints | None = None,
                      cfg: QuadConfig | None = None) -> float:
    """The Cauchy principal-value exponent Phi1(y), y strictly inside the cut."""
    bp = bp or branch_points(params)
    cfg = cfg or QuadConfig()
    if not bp.y1 < y < bp.y2:
        raise ValueError(f"y={y} not strictly inside [{bp.y1}, {bp.y2}]")
    # secondary pole mu2c2*y*xi = lambda2 must stay outside the cut
    if bp.y2 * bp.y2 >= params.lambda2 / params.mu2c2:
        raise KernelZeroOnCut(
            "secondary pole of the Phi1 integrand enters the cut")

    def f(xi):
        xi = np.asarray(xi, dtype=float)
        return (y * (params.lambda2 - params.mu2c2 * xi * xi) * theta1(params, xi)
                / (xi * (params.mu2c2 * y * xi - params.lambda2)))

    return integrate_pv(f, bp.y1, bp.y2, y, cfg) / math.pi


@dataclass
class BoundaryCache:
    """Tabulated boundary data on a shared cosine grid over [y1, y2].

    Immutable after construction; every downstream integral against the
    sin(Theta1)*exp(-Phi1) weight reuses these arrays, so the coefficient
    assembly touches each node once.
    """

    params: ModelParams
    bp: BranchPoints
    grid_size: int
    cfg: QuadConfig
    y_nodes: np.ndarray = field(repr=False)
    y_weights: np.ndarray = field(repr=False)
    theta1_nodes: np.ndarray = field(repr=False)
    sin_theta1: np.ndarray = field(repr=False)
    exp_neg_phi1: np.ndarray = field(repr=False)
    _phi1_memo: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, params: ModelParams,
              cfg: QuadConfig | None = None) -> "BoundaryCache":
        cfg = cfg or QuadConfig()
        bp = branch_points(params)
        nodes, weights = cosine_grid(bp.y1, bp.y2, cfg.grid_size)
        th1 = theta1(params, nodes)
        phi_big = np.array([phi1_exponent_big(params, y, bp, cfg)
                            for y in nodes])
        return cls(params=params, bp=bp, grid_size=cfg.grid_size, cfg=cfg,
                   y_nodes=nodes, y_weights=weights, theta1_nodes=th1,
                   sin_theta1=np.sin(th1), exp_neg_phi1=np.exp(-phi_big))

    def phi1(self, x):
        """The sectionally analytic factor phi1(x), |x| < r1.

        Real and positive for real x off the poles of the integrand;
        phi1(0) = 1.
        """
        if x in self._phi1_memo:
            return self._phi1_memo[x]
        p = self.params
        kern = kernel_value(p, x, self.y_nodes)
        scale = p.rate_sum * max(1.0, abs(x)) ** 2
        if np.min(np.abs(kern)) < 1e-12 * scale:
            raise KernelZeroOnCut(
                f"K({x}, y) vanishes on the cut [y1, y2]")
        integrand = ((p.lambda2 - p.mu2c2 * self.y_nodes ** 2)
                     * self.theta1_nodes / (self.y_nodes * kern))
        total = float(np.sum(self.y_weights * integrand))
        value = math.exp(x / math.pi * total)
        self._phi1_memo[x] = value
        return value

    def phi1_many(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self.phi1(float(x)) for x in xs])


_CACHE: dict[tuple, BoundaryCache] = {}


def boundary_cache(params: ModelParams,
                   cfg: QuadConfig | None = None) -> BoundaryCache:
    """Memoized BoundaryCache keyed by (rates, grid_size)."""
    cfg = cfg or QuadConfig()
    key = (params.lambda1, params.lambda2, params.mu1c1, params.mu2c2,
           cfg.grid_size)
    if key not in _CACHE:
        _CACHE[key] = BoundaryCache.build(params, cfg)
    return _CACHE[key]


def phi2(params: ModelParams, y: float,
         bp: BranchPoints | None = None,
         cfg: QuadConfig | None = None) -> float:
    """Baseline factor phi2(y), via the Theta2 integral over [x1, x2]."""
    bp = bp or branch_points(params)
    cfg = cfg or QuadConfig()
    nodes, weights = cosine_grid(bp.x1, bp.x2, cfg.grid_size)
    kern = kernel_value(params, nodes, y)
    scale = params.rate_sum * max(1.0, abs(y)) ** 2
    if np.min(np.abs(kern)) < 1e-12 * scale:
        raise KernelZeroOnCut(f"K(x, {y}) vanishes on the cut [x1, x2]")
    integrand = ((params.lambda1 - params.mu1c1 * nodes ** 2)
                 * theta2(params, nodes) / (nodes * kern))
    total = float(np.sum(weights * integrand))
    return math.exp(y / math.pi * total)
