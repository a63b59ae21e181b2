"""Trial-function profiles for the eigenvalue-gap bound.

For alpha = k_{nu,1} and beta = k_{nu+1,1} the radial trial factor is

    w(r) = J_{nu+1}(beta r) / J_nu(alpha r)      on [0, 1],

extended as the constant w(1) for r >= 1.  Its logarithmic slope
q(r) = r w'(r)/w(r) runs from q(0) = 1 down to q(1) = 0, and

    B(r) = w'(r)^2 + (2 nu + 1) w(r)^2 / r^2
         = [q(r)^2 + (2 nu + 1)] (w(r)/r)^2

is the radial energy density of the N component trial functions.  w is
strictly increasing and B strictly decreasing on [0, 1], which is what
makes the rearrangement step of the ratio bound work.

Near r = 0 the quotients are 0/0 forms; below a small threshold they are
replaced by their ascending-series expansions with relative error O(r^4).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureError
from .ratio_analysis import DimensionSpec
from .robin_zeros import first_cross_zeros
from .special import bessel_j

_SERIES_RADIUS = 1e-4
_QUAD_ABS_TOL = 1e-10


def origin_slope(nu: float, alpha: float, beta: float) -> float:
    """lim_{r->0} w(r)/r = lim w'(r) = beta^{nu+1} / (2 (nu+1) alpha^nu).

    Derived from the leading forms J_m(z) ~ (z/2)^m / Gamma(m+1); the
    denominator carries nu+1, and the limit is finite for every nu >= 0.
    """
    return beta ** (nu + 1.0) / (2.0 * (nu + 1.0) * alpha**nu)


def _curvature(nu: float, alpha: float, beta: float) -> float:
    # w(r) = c0 r (1 + w2 r^2 + O(r^4))
    return alpha**2 / (4.0 * (nu + 1.0)) - beta**2 / (4.0 * (nu + 2.0))


def w_value(nu: float, alpha: float, beta: float, t: float) -> float:
    """w(t), extended as the constant w(1) for t >= 1."""
    if t < 0.0:
        raise DomainError(f"radius must be nonnegative, got {t}")
    if t >= 1.0:
        t = 1.0
    if t < _SERIES_RADIUS:
        c0 = origin_slope(nu, alpha, beta)
        return c0 * t * (1.0 + _curvature(nu, alpha, beta) * t * t)
    den = bessel_j(nu, alpha * t)
    if den == 0.0:
        raise DomainError(f"pole of w at t={t}: J_nu(alpha t) = 0")
    return bessel_j(nu + 1.0, beta * t) / den


def w_over_r(nu: float, alpha: float, beta: float, t: float) -> float:
    """w(t)/t with its finite series limit at the origin."""
    if t >= 1.0:
        return w_value(nu, alpha, beta, 1.0) / t
    if t < _SERIES_RADIUS:
        c0 = origin_slope(nu, alpha, beta)
        return c0 * (1.0 + _curvature(nu, alpha, beta) * t * t)
    return w_value(nu, alpha, beta, t) / t


def q_value(nu: float, alpha: float, beta: float, t: float) -> float:
    """q(t) = t w'(t)/w(t) = 1 + alpha t J_{nu+1}/J_nu - beta t J_{nu+2}/J_{nu+1}."""
    if t < 0.0 or t > 1.0:
        raise DomainError(f"q is defined on [0, 1], got {t}")
    if t < _SERIES_RADIUS:
        return 1.0 + 2.0 * _curvature(nu, alpha, beta) * t * t
    at, bt = alpha * t, beta * t
    return (
        1.0
        + at * bessel_j(nu + 1.0, at) / bessel_j(nu, at)
        - bt * bessel_j(nu + 2.0, bt) / bessel_j(nu + 1.0, bt)
    )


def w_prime(nu: float, alpha: float, beta: float, t: float) -> float:
    """w'(t) = w(t) q(t) / t, zero for t >= 1 (constant extension)."""
    if t >= 1.0:
        return 0.0
    if t < _SERIES_RADIUS:
        c0 = origin_slope(nu, alpha, beta)
        return c0 * (1.0 + 3.0 * _curvature(nu, alpha, beta) * t * t)
    return w_over_r(nu, alpha, beta, t) * q_value(nu, alpha, beta, t)


def b_value(nu: float, alpha: float, beta: float, t: float) -> float:
    """B(t) = [q^2 + (2 nu + 1)] (w/t)^2, extended with q = 0 for t >= 1."""
    q = q_value(nu, alpha, beta, t) if t < 1.0 else 0.0
    wr = w_over_r(nu, alpha, beta, t)
    return (q * q + 2.0 * nu + 1.0) * wr * wr


def q_prime_value(nu: float, alpha: float, beta: float, t: float) -> float:
    """q'(t) = (a^2-b^2) t + (1-q)(q+2nu+1)/t + 2 a q J_{nu+1}(at)/J_nu(at)."""
    if t < 0.0 or t > 1.0:
        raise DomainError(f"q' is defined on [0, 1], got {t}")
    if t < _SERIES_RADIUS:
        # q''(0) = alpha^2/(nu+1) - beta^2/(nu+2), q'(0) = 0
        return 4.0 * _curvature(nu, alpha, beta) * t
    q = q_value(nu, alpha, beta, t)
    at = alpha * t
    return (
        (alpha**2 - beta**2) * t
        + (1.0 - q) * (q + 2.0 * nu + 1.0) / t
        + 2.0 * alpha * q * bessel_j(nu + 1.0, at) / bessel_j(nu, at)
    )


@dataclass(frozen=True)
class TrialProfile:
    """Sampled trial-function data on a uniform grid over [0, 1].

    a = (ln w)' = q/r is the antidifferentiation factor; its value at the
    origin is +inf since w vanishes linearly there.
    """

    dim: DimensionSpec
    sigma: float
    alpha: float
    beta: float
    r: np.ndarray
    w: np.ndarray
    q: np.ndarray
    b: np.ndarray
    a: np.ndarray


def trial_profile(dim: DimensionSpec, sigma: float, n: int = 256) -> TrialProfile:
    """Sample w, q, B, A on n uniform points spanning [0, 1]."""
    if n < 16:
        raise DomainError(f"need at least 16 samples, got {n}")
    if not sigma > 0.0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    nu = dim.nu
    alpha, beta = first_cross_zeros(nu, sigma)
    r = np.linspace(0.0, 1.0, n)
    w = np.array([w_value(nu, alpha, beta, float(t)) for t in r])
    q = np.array([q_value(nu, alpha, beta, float(t)) for t in r])
    b = np.array([b_value(nu, alpha, beta, float(t)) for t in r])
    with np.errstate(divide="ignore"):
        a = np.where(r > 0.0, q / np.where(r > 0.0, r, 1.0), np.inf)
    return TrialProfile(dim=dim, sigma=sigma, alpha=alpha, beta=beta, r=r, w=w, q=q, b=b, a=a)


def q_prime(profile: TrialProfile, i: int) -> float:
    """q'(r_i) on the profile grid; returns the limit 0 at r = 0."""
    t = float(profile.r[i])
    if t == 0.0:
        return 0.0
    return q_prime_value(profile.dim.nu, profile.alpha, profile.beta, t)


def _quad(f, lo, hi, what: str) -> float:
    out = quad(f, lo, hi, epsabs=_QUAD_ABS_TOL, epsrel=1e-12, limit=200, full_output=1)
    if len(out) > 3:
        raise QuadratureError(f"quadrature for {what} did not converge: {out[3]}")
    value, abserr = out[0], out[1]
    if abserr > 1e-8 * max(1.0, abs(value)):
        raise QuadratureError(f"quadrature for {what} only reached abserr={abserr:g}")
    return value


def rayleigh_identity_residual(profile: TrialProfile) -> float:
    """|int B J_nu^2(ar) r dr / int w^2 J_nu^2(ar) r dr - (beta^2 - alpha^2)|.

    The quotient collapses exactly to beta^2 - alpha^2 after
    antidifferentiation, because the boundary term r A(r) J_{nu+1}^2(beta r)
    vanishes at both ends (A(1) = q(1) = 0); this is the unit-ball form of
    the gap inequality with the trial factor itself plugged in.
    """
    nu, alpha, beta = profile.dim.nu, profile.alpha, profile.beta
    num = _quad(
        lambda t: b_value(nu, alpha, beta, t) * bessel_j(nu, alpha * t) ** 2 * t,
        0.0,
        1.0,
        "gap numerator",
    )
    den = _quad(
        lambda t: (w_value(nu, alpha, beta, t) * bessel_j(nu, alpha * t)) ** 2 * t,
        0.0,
        1.0,
        "gap denominator",
    )
    return abs(num / den - (beta**2 - alpha**2))


def gap_quotient(dim: DimensionSpec, g, g_prime, weight, r_max: float) -> float:
    """Rayleigh quotient of the summed radial trial functions.

        int (g'^2 + (N-1) g^2/r^2) weight r^{N-1} dr
        --------------------------------------------
              int g^2 weight r^{N-1} dr

    over [0, r_max], where weight is the squared first eigenfunction
    profile.  Any admissible g bounds the spectral gap mu2 - mu1 from
    above.  If g(0) != 0 the centrifugal term diverges for N <= 3 and the
    quotient is +inf.
    """
    if not r_max > 0.0:
        raise DomainError(f"r_max must be positive, got {r_max}")
    npow = dim.n - 1

    def den_f(r):
        return g(r) ** 2 * weight(r) * r**npow

    den = _quad(den_f, 0.0, r_max, "gap quotient denominator")
    if den <= 0.0:
        raise DomainError("weight profile integrates to zero")

    def num_f(r):
        centrifugal = (dim.n - 1) * (g(r) / r) ** 2 if r > 0.0 else 0.0
        return (g_prime(r) ** 2 + centrifugal) * weight(r) * r**npow

    # a nonzero g(0) makes the integrand ~ r^{N-3} near 0: divergent for N<=3
    if abs(g(0.0)) > 0.0 and dim.n <= 3:
        return float("inf")
    try:
        num = _quad(num_f, 0.0, r_max, "gap quotient numerator")
    except QuadratureError:
        return float("inf")
    return num / den
