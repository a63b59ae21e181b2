"""The eigenvalue-ratio curve sigma -> k_{nu+1,1}^2 / k_{nu,1}^2.

On the unit ball the first two Robin eigenvalues are the squared cross
zeros alpha = k_{nu,1} and beta = k_{nu+1,1}, so this curve is the sharp
upper bound for the ratio of the first two eigenvalues over all domains
of the same volume.  It decreases strictly from +infinity (sigma -> 0)
to the Dirichlet value (j_{nu+1,1}/j_{nu,1})^2, with closed-form
derivatives obtained by implicit differentiation of the boundary
relations alpha J_{nu+1}(alpha)/J_nu(alpha) = sigma and
beta J_{nu+2}(beta)/J_{nu+1}(beta) = sigma + 1:

    alpha'(sigma) = alpha / (sigma^2 - 2 nu sigma + alpha^2)
    beta'(sigma)  = beta / (sigma^2 - 2 nu sigma - 2 nu - 1 + beta^2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OutOfRangeError
from .robin_zeros import first_cross_zeros
from .special import classical_zero

# Below this the alpha root underflows the solver tolerances; accuracy is
# degraded below 1e-4 already since alpha^2 ~ 2(nu+1) sigma.
_SIGMA_FLOOR = 1e-6

_CRITICAL_TOL = 1e-8


@dataclass(frozen=True)
class DimensionSpec:
    """Euclidean dimension N >= 2 with the derived Bessel order and ball volume."""

    n: int

    def __post_init__(self):
        if self.n < 2 or int(self.n) != self.n:
            raise DomainError(f"dimension must be an integer >= 2, got {self.n}")

    @property
    def nu(self) -> float:
        return 0.5 * self.n - 1.0

    @property
    def unit_ball_volume(self) -> float:
        # C_N = pi^(N/2) / Gamma(1 + N/2)
        return math.pi ** (0.5 * self.n) / math.gamma(1.0 + 0.5 * self.n)


@dataclass(frozen=True)
class RatioPoint:
    """One sample of the ratio curve with closed-form derivatives."""

    sigma: float
    alpha: float
    beta: float
    ratio: float
    dalpha: float
    dbeta: float


def ratio_point(dim: DimensionSpec, sigma: float) -> RatioPoint:
    """Ratio curve sample at sigma > 0 (clamped below at 1e-6)."""
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    sigma = max(sigma, _SIGMA_FLOOR)
    nu = dim.nu
    alpha, beta = first_cross_zeros(nu, sigma)
    den_a = sigma * sigma - 2.0 * nu * sigma + alpha * alpha
    den_b = sigma * sigma - 2.0 * nu * sigma - 2.0 * nu - 1.0 + beta * beta
    if den_a <= 0.0 or den_b <= 0.0:
        raise DomainError(
            f"nonpositive derivative denominator at sigma={sigma} (root-finder fault)"
        )
    return RatioPoint(
        sigma=sigma,
        alpha=alpha,
        beta=beta,
        ratio=(beta / alpha) ** 2,
        dalpha=alpha / den_a,
        dbeta=beta / den_b,
    )


def ratio_curve(
    dim: DimensionSpec, sigma_min: float, sigma_max: float, steps: int
) -> list[RatioPoint]:
    """Ratio samples on a log-spaced sigma grid, ordered by sigma."""
    if not 0.0 < sigma_min < sigma_max:
        raise DomainError(f"need 0 < sigma_min < sigma_max, got [{sigma_min}, {sigma_max}]")
    if steps < 2:
        raise DomainError(f"need at least 2 grid points, got {steps}")
    grid = np.geomspace(sigma_min, sigma_max, steps)
    return [ratio_point(dim, float(s)) for s in grid]


def dirichlet_ratio(dim: DimensionSpec) -> float:
    """The sigma -> infinity limit (j_{nu+1,1}/j_{nu,1})^2."""
    nu = dim.nu
    return (classical_zero(nu + 1.0, 1) / classical_zero(nu, 1)) ** 2


def critical_sigma(dim: DimensionSpec, target: float) -> float:
    """The unique sigma with ratio(sigma) = target.

    Exists for every target above the Dirichlet limit because the curve
    decreases strictly from +infinity to that limit.
    """
    floor = dirichlet_ratio(dim)
    if not target > floor:
        raise OutOfRangeError(
            f"target ratio {target} is not above the Dirichlet limit {floor:.6f}"
        )
    lo = hi = 1.0
    while ratio_point(dim, hi).ratio > target:
        hi *= 2.0
        if hi > 1e12:
            raise OutOfRangeError(f"no sigma below 1e12 reaches ratio {target}")
    while ratio_point(dim, lo).ratio < target:
        lo *= 0.5
        if lo < _SIGMA_FLOOR:
            break
    # monotone bisection in the ratio value
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        r = ratio_point(dim, mid).ratio
        if abs(r - target) <= _CRITICAL_TOL:
            return mid
        if r > target:
            lo = mid
        else:
            hi = mid
    return math.sqrt(lo * hi)


@dataclass(frozen=True)
class LemmaReport:
    """Numeric margins for the two trial-function lemmas and the gap bound.

    gap_excess       = beta^2 - alpha^2 - (2 nu + 1)   (> 0 expected)
    convexity_margin = beta^2/(nu+2) - alpha^2/(nu+1)  (> 0 expected)
    q_prime_end      = 2 nu + 1 + alpha^2 - beta^2     (< 0 expected)
    """

    sigma: float
    gap_excess: float
    convexity_margin: float
    q_prime_end: float

    @property
    def all_hold(self) -> bool:
        return self.gap_excess > 0.0 and self.convexity_margin > 0.0 and self.q_prime_end < 0.0


def lemma_checks(dim: DimensionSpec, sigma: float) -> LemmaReport:
    """Evaluate the strict inequalities behind the trial-function monotonicity."""
    pt = ratio_point(dim, sigma)
    nu = dim.nu
    a2, b2 = pt.alpha**2, pt.beta**2
    return LemmaReport(
        sigma=pt.sigma,
        gap_excess=b2 - a2 - (2.0 * nu + 1.0),
        convexity_margin=b2 / (nu + 2.0) - a2 / (nu + 1.0),
        q_prime_end=2.0 * nu + 1.0 + a2 - b2,
    )
