"""Independent ground truth by direct stationary solves.

Two chains are solved exactly (up to truncation): the limiting
quarter-plane walk restricted to a finite box with outward transitions
suppressed, and the original finite-capacity two-DC chain before the
many-servers rescaling.  Both go through a sparse direct solve of the
balance equations with a normalization row; the stationarity residual
and the probability mass sitting on the truncation rim are reported so
callers can judge the truncation error instead of trusting it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .errors import BoxTooSmall, StateSpaceTooLarge
from .model import BlockingPair, ModelParams, validate


@dataclass
class TruncatedDistribution:
    """Stationary probabilities of the truncated walk on a box."""

    box: tuple[int, int]
    probs: np.ndarray          # shape (n1_max+1, n2_max+1)
    boundary_mass: float
    residual: float
    a: int

    def marginal_n1(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    def marginal_n2(self) -> np.ndarray:
        return self.probs.sum(axis=0)


def _stationary_from_transitions(n_states: int, rows, cols, rates,
                                 pin: int = 0):
    """Stationary vector of a CTMC given off-diagonal transition triplets.

    The balance equations have rank n-1, so pi[pin] is fixed to 1, that
    state's equation dropped, the rest solved by sparse LU, and the
    result normalized.  ``pin`` should sit near the mode of the
    distribution so the solved ratios stay within floating-point range.
    Returns (pi, residual) with residual the max balance violation.
    """
    rows = np.asarray(rows)
    cols = np.asarray(cols)
    rates = np.asarray(rates, dtype=float)
    if pin != 0:
        # relabel so the pinned state is index 0
        swap = np.arange(n_states)
        swap[0], swap[pin] = pin, 0
        rows = swap[rows]
        cols = swap[cols]
    out_rate = np.zeros(n_states)
    np.add.at(out_rate, rows, rates)
    q = scipy.sparse.coo_matrix(
        (np.concatenate([rates, -out_rate]),
         (np.concatenate([rows, np.arange(n_states)]),
          np.concatenate([cols, np.arange(n_states)]))),
        shape=(n_states, n_states)).tocsr()
    # rank deficiency is exactly one: pin pi[0] = 1, drop equation 0,
    # solve the remaining sparse system, then normalize
    qt = q.T.tocsc()
    a11 = qt[1:, 1:]
    rhs = -np.asarray(qt[1:, [0]].todense()).ravel()
    rest = scipy.sparse.linalg.spsolve(a11.tocsc(), rhs)
    pi = np.concatenate([[1.0], rest])
    pi = np.maximum(pi, 0.0)
    pi /= pi.sum()
    residual = float(np.max(np.abs(pi @ q)))
    if pin != 0:
        pi[[0, pin]] = pi[[pin, 0]]
    return pi, residual


def default_box(params: ModelParams, safety: float = 20.0) -> tuple[int, int]:
    """Box sized from the per-axis geometric decay rates.

    n1 decays at rho1 = mu1c1/lambda1; n2 at mu2c2 over the effective
    service lambda2 + lambda1*P(n1=0).  Each side gets ~safety/(1-rho)
    states, clipped to [60, 2500].
    """
    validate(params)
    rho1 = params.mu1c1 / params.lambda1
    eff2 = params.lambda2 + params.lambda1 * (1.0 - rho1)
    rho2 = params.mu2c2 / eff2
    def side(rho):
        return int(np.clip(math.ceil(safety / max(1.0 - rho, 1e-3)), 60, 2500))
    return side(rho1), side(rho2) + params.a


def solve_limiting_walk(params: ModelParams,
                        box: tuple[int, int] = (400, 400),
                        tol: float = 1e-12) -> TruncatedDistribution:
    """Stationary distribution of the limiting walk on a truncated box.

    Outward transitions at the rim are suppressed (reflecting
    truncation), which keeps a proper generator; the rim mass bounds the
    truncation error.  Raises BoxTooSmall when the rim holds more than
    1e-4 probability.
    """
    validate(params)
    n1_max, n2_max = box
    w = n2_max + 1
    n_states = (n1_max + 1) * w

    n1, n2 = np.meshgrid(np.arange(n1_max + 1), np.arange(n2_max + 1),
                         indexing="ij")
    n1 = n1.ravel()
    n2 = n2.ravel()
    idx = n1 * w + n2

    rows, cols, rates = [], [], []

    def add(mask, delta1, delta2, rate):
        rows.append(idx[mask])
        cols.append(idx[mask] + delta1 * w + delta2)
        r = rate[mask] if isinstance(rate, np.ndarray) else np.full(mask.sum(), rate)
        rates.append(r)

    add(n1 < n1_max, +1, 0, params.mu1c1)
    add(n2 < n2_max, 0, +1, params.mu2c2)
    add(n1 > 0, -1, 0, params.lambda1)
    down = np.where(n2 > 0,
                    params.lambda2
                    + params.lambda1 * ((n1 == 0) & (n2 > params.a)),
                    0.0)
    add(n2 > 0, 0, -1, down)

    pi, residual = _stationary_from_transitions(
        n_states,
        np.concatenate(rows), np.concatenate(cols), np.concatenate(rates))
    probs = pi.reshape(n1_max + 1, w)
    boundary_mass = float(probs[-1, :].sum() + probs[:, -1].sum()
                          - probs[-1, -1])
    if boundary_mass > 1e-4:
        raise BoxTooSmall(
            f"truncation rim holds {boundary_mass:.3e} probability; "
            f"enlarge the box {box}")
    return TruncatedDistribution(box=box, probs=probs,
                                 boundary_mass=boundary_mass,
                                 residual=residual, a=params.a)


def blocking_from_distribution(dist: TruncatedDistribution,
                               params: ModelParams) -> BlockingPair:
    """B1 = P(n1=0, n2<=a), B2 = P(n2=0) from a truncated solve."""
    b1 = float(dist.probs[0, :params.a + 1].sum())
    b2 = float(dist.probs[:, 0].sum())
    return BlockingPair(b1, b2)


def oracle_blocking(params: ModelParams,
                    box: tuple[int, int] = (400, 400)) -> BlockingPair:
    """Convenience wrapper: truncated solve plus blocking extraction."""
    return blocking_from_distribution(solve_limiting_walk(params, box), params)


def solve_prelimit(lambda1: float, lambda2: float, mu1: float, mu2: float,
                   c1: float, c2: float, a: int, nu: float) -> BlockingPair:
    """Exact blocking of the finite pre-limit chain with scaling factor nu.

    Capacities are C_i = nu * c_i (rounded with a warning when not
    integral).  A redirected DC-1 request is lost when N1 = C1 and
    C2 - a <= N2 <= C2; DC-2 requests are lost when N2 = C2.
    """
    cap1 = nu * c1
    cap2 = nu * c2
    if abs(cap1 - round(cap1)) > 1e-9 or abs(cap2 - round(cap2)) > 1e-9:
        warnings.warn(f"nu*c = ({cap1}, {cap2}) rounded to integers")
    cap1, cap2 = round(cap1), round(cap2)
    n_states = (cap1 + 1) * (cap2 + 1)
    if n_states > 4_000_000:
        raise StateSpaceTooLarge(f"{n_states} states exceeds 4e6")

    w = cap2 + 1
    m1, m2 = np.meshgrid(np.arange(cap1 + 1), np.arange(cap2 + 1),
                         indexing="ij")
    m1 = m1.ravel()
    m2 = m2.ravel()
    idx = m1 * w + m2

    big1 = nu * lambda1
    big2 = nu * lambda2

    rows, cols, rates = [], [], []

    def add(mask, delta1, delta2, rate):
        rows.append(idx[mask])
        cols.append(idx[mask] + delta1 * w + delta2)
        r = rate[mask] if isinstance(rate, np.ndarray) else np.full(mask.sum(), rate)
        rates.append(r)

    add(m1 < cap1, +1, 0, big1)
    up = big2 * (m2 < cap2) + big1 * ((m1 == cap1) & (m2 < cap2 - a))
    add(m2 < cap2, 0, +1, up)
    add(m1 > 0, -1, 0, mu1 * m1.astype(float))
    add(m2 > 0, 0, -1, mu2 * m2.astype(float))

    # pin near the mode of the independent Erlang product to avoid
    # overflow in the solved probability ratios
    mode1 = min(cap1, int(big1 / mu1))
    mode2 = min(cap2, int(big2 / mu2))
    pi, _ = _stationary_from_transitions(
        n_states,
        np.concatenate(rows), np.concatenate(cols), np.concatenate(rates),
        pin=int(mode1 * w + mode2))
    probs = pi.reshape(cap1 + 1, w)
    b1 = float(probs[cap1, max(cap2 - a, 0):].sum())
    b2 = float(probs[:, cap2].sum())
    return BlockingPair(b1, b2)
