"""Kernel algebra of the quarter-plane walk.

Everything here is closed form: the bivariate kernel K(x, y), its two
discriminants, the four-plus-four real branch points, the algebraic root
functions X0/X1 and Y0/Y1 with deterministic branch tracking, the
theta-parametrization of the cut [x1, x2], and Chebyshev polynomials of
the second kind.

Branch convention: sigma1 (the square root of the first discriminant) is
the product of the four principal square roots sqrt(y - y_i), scaled so
that sigma1(0) = lambda2 > 0.  This is analytic off the two real cuts and
needs no path continuation.  One-sided values on a cut are selected with
an explicit :class:`Side`, implemented via signed-zero imaginary parts.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBranchPoints, NegativeDiscriminant, OnCut
from .model import ModelParams

_CUT_TOL = 1e-9


class Side(enum.Enum):
    """Which one-sided limit to take on a branch cut."""

    ABOVE = +1.0
    BELOW = -1.0


@dataclass(frozen=True)
class BranchPoints:
    """Real roots of the two discriminants and the cut-image circle radii.

    y1 < y2 < 1 < y3 < y4 are the zeros of the first discriminant,
    x1 < x2 < 1 < x3 < x4 of the second.  X0 maps the cut [y1, y2] onto
    the circle of radius r1 = sqrt(lambda1/mu1c1) > 1; Y0 maps [x1, x2]
    onto the circle of radius r2 = sqrt(lambda2/mu2c2).
    """

    y1: float
    y2: float
    y3: float
    y4: float
    x1: float
    x2: float
    x3: float
    x4: float
    r1: float
    r2: float

    @property
    def y_cut(self):
        return self.y1, self.y2

    @property
    def x_cut(self):
        return self.x1, self.x2


def kernel_value(params: ModelParams, x, y):
    """The kernel K(x, y); vanishes on the zero pairs coupling the walk."""
    s = params.rate_sum
    return (params.mu1c1 * x * x * y + params.mu2c2 * x * y * y
            - s * x * y + params.lambda1 * y + params.lambda2 * x)


def discriminants(params: ModelParams, z):
    """(Delta1(z), Delta2(z)) of the quadratics K(., z) and K(z, .)."""
    s = params.rate_sum
    q1 = params.mu2c2 * z * z - s * z + params.lambda2
    q2 = params.mu1c1 * z * z - s * z + params.lambda1
    d1 = q1 * q1 - 4.0 * params.mu1c1 * params.lambda1 * z * z
    d2 = q2 * q2 - 4.0 * params.mu2c2 * params.lambda2 * z * z
    return d1, d2


def _quartic_roots(lead: float, sum_rate: float, shift: float, const: float):
    """Roots of (lead*z^2 - sum_rate*z + const)^2 = (2*shift*z)^2.

    Factors the difference of squares into two real quadratics; returns
    the four roots sorted ascending.
    """
    roots = []
    for sgn in (+1.0, -1.0):
        b = sum_rate + sgn * 2.0 * shift
        disc = b * b - 4.0 * lead * const
        if disc < 0:
            raise DegenerateBranchPoints(
                "complex factor roots; parameters sit on a degeneracy")
        sq = math.sqrt(disc)
        roots.extend(((b - sq) / (2.0 * lead), (b + sq) / (2.0 * lead)))
    return sorted(roots)


def branch_points(params: ModelParams) -> BranchPoints:
    """All eight branch points plus the circle radii r1, r2."""
    s = params.rate_sum
    ys = _quartic_roots(params.mu2c2, s,
                        math.sqrt(params.mu1c1 * params.lambda1),
                        params.lambda2)
    xs = _quartic_roots(params.mu1c1, s,
                        math.sqrt(params.mu2c2 * params.lambda2),
                        params.lambda1)
    for seq in (ys, xs):
        if min(b - a for a, b in zip(seq, seq[1:])) < 1e-12:
            raise DegenerateBranchPoints(f"coincident branch points: {seq}")
    return BranchPoints(
        *ys, *xs,
        r1=math.sqrt(params.lambda1 / params.mu1c1),
        r2=math.sqrt(params.lambda2 / params.mu2c2),
    )


def _on_cut(z, lo: float, hi: float) -> bool:
    return abs(z.imag) < _CUT_TOL and lo - _CUT_TOL < z.real < hi + _CUT_TOL


def _cut_point(z, lo, hi, lo2, hi2, side: Side | None):
    """Attach a signed-zero imaginary part when z sits on a cut."""
    z = complex(z)
    if _on_cut(z, lo, hi) or _on_cut(z, lo2, hi2):
        if side is None:
            raise OnCut(f"{z} lies on a branch cut; specify side=Side.ABOVE/BELOW")
        return complex(z.real, side.value * 0.0)
    return z


def _sqrt_prod(z, roots, scale: float):
    """scale * prod sqrt(z - r) with principal square roots.

    Analytic off the cuts; signed zeros in z.imag select the one-sided
    limit on a cut.
    """
    acc = complex(scale)
    for r in roots:
        acc *= cmath.sqrt(complex(z.real - r, z.imag))
    return acc


def x_roots(params: ModelParams, y, bp: BranchPoints | None = None,
            side: Side | None = None):
    """The two x-roots (X0, X1) of K(., y), X0 vanishing at the origin.

    For y on the cut [y1, y2] (or [y3, y4]) the one-sided limit must be
    requested through ``side``.
    """
    bp = bp or branch_points(params)
    y = _cut_point(y, bp.y1, bp.y2, bp.y3, bp.y4, side)
    if y == 0:
        return 0j, complex(math.inf)
    s = params.rate_sum
    q1 = params.mu2c2 * y * y - s * y + params.lambda2
    sigma1 = _sqrt_prod(y, (bp.y1, bp.y2, bp.y3, bp.y4), params.mu2c2)
    x0 = (-q1 + sigma1) / (2.0 * params.mu1c1 * y)
    return x0, params.lambda1 / (params.mu1c1 * x0)


def y_roots(params: ModelParams, x, bp: BranchPoints | None = None,
            side: Side | None = None):
    """The two y-roots (Y0, Y1) of K(x, .), Y0 vanishing at the origin."""
    bp = bp or branch_points(params)
    x = _cut_point(x, bp.x1, bp.x2, bp.x3, bp.x4, side)
    if x == 0:
        return 0j, complex(math.inf)
    s = params.rate_sum
    q2 = params.mu1c1 * x * x - s * x + params.lambda1
    sigma2 = _sqrt_prod(x, (bp.x1, bp.x2, bp.x3, bp.x4), params.mu1c1)
    y0 = (-q2 + sigma2) / (2.0 * params.mu2c2 * x)
    return y0, params.lambda2 / (params.mu2c2 * y0)


def x_of_theta(params: ModelParams, theta):
    """Parametrization of the cut [x1, x2]: x(0) = x2, x(pi) = x1.

    Vectorized over theta in [0, pi].
    """
    theta = np.asarray(theta, dtype=float)
    s = params.rate_sum
    c = s - 2.0 * math.sqrt(params.mu2c2 * params.lambda2) * np.cos(theta)
    delta1 = c * c - 4.0 * params.mu1c1 * params.lambda1
    if np.any(delta1 < -1e-12 * s * s):
        raise NegativeDiscriminant("delta1(theta) < 0 for a stable parameter set")
    x = (c - np.sqrt(np.maximum(delta1, 0.0))) / (2.0 * params.mu1c1)
    return x if x.ndim else float(x)


def theta2_of_x(params: ModelParams, x, bp: BranchPoints | None = None):
    """Inverse of x_of_theta on [x1, x2], with sin(theta2) >= 0.

    Defined so that Y0(x + 0i) = r2 * exp(-i*theta2(x)).
    """
    bp = bp or branch_points(params)
    x = np.asarray(x, dtype=float)
    if np.any(x < bp.x1 - 1e-12) or np.any(x > bp.x2 + 1e-12):
        raise ValueError(f"x outside [{bp.x1}, {bp.x2}]")
    s = params.rate_sum
    q2 = params.mu1c1 * x * x - s * x + params.lambda1
    denom = 2.0 * x * math.sqrt(params.mu2c2 * params.lambda2)
    cos_t = np.clip(-q2 / denom, -1.0, 1.0)
    out = np.arccos(cos_t)
    return out if out.ndim else float(out)


def chebyshev_u(n: int, t):
    """Chebyshev polynomial of the second kind U_n(t), by recurrence."""
    if n < 0:
        raise ValueError("n must be non-negative")
    t = np.asarray(t, dtype=float)
    u_prev = np.ones_like(t)
    if n == 0:
        return u_prev if u_prev.ndim else float(u_prev)
    u = 2.0 * t
    for _ in range(n - 1):
        u_prev, u = u, 2.0 * t * u - u_prev
    return u if u.ndim else float(u)
