"""Decreasing rearrangements and Chiti-type comparison machinery.

Discrete fields are cell-value/cell-measure pairs; their rearrangements
are exact step functions obtained by sorting, which makes the
equimeasurability identity hold to rounding error.  The ball-eigenfunction
profile z(r) = c r^{-nu} J_nu(sqrt(mu1) r) enters through its
rearrangement z*(s), which satisfies the ODE

    -(z*)'(s) = mu1 N^{-2} C_N^{-2/N} s^{2/N-2} int_0^s z*(t) dt,

the equality case of the inequality obeyed by the rearranged first
eigenfunction of any domain below the superlevel measure of its boundary
maximum.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureError, ResolutionError
from .ratio_analysis import DimensionSpec
from .robin_zeros import first_cross_zeros
from .special import bessel_j


@dataclass(frozen=True)
class DiscreteField:
    """Nonnegative cell values with positive cell measures."""

    values: np.ndarray
    measures: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        measures = np.asarray(self.measures, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "measures", measures)
        if values.ndim != 1 or values.shape != measures.shape or values.size == 0:
            raise DomainError("field needs matching, non-empty value/measure arrays")
        if np.any(values < 0.0):
            raise DomainError("cell values must be nonnegative")
        if np.any(measures <= 0.0):
            raise DomainError("cell measures must be positive")

    @property
    def total_measure(self) -> float:
        return float(self.measures.sum())


def distribution(field: DiscreteField, t: float) -> float:
    """mu(t): total measure of the cells with value strictly above t."""
    if t < 0.0:
        raise DomainError(f"level must be nonnegative, got {t}")
    return float(field.measures[field.values > t].sum())


@dataclass(frozen=True)
class RearrangedProfile:
    """Right-continuous step function on [0, total]: value v_j on [s_{j-1}, s_j)."""

    breakpoints: np.ndarray  # s_0 = 0 < s_1 < ... < s_m
    values: np.ndarray  # one value per interval

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        if bp.ndim != 1 or vals.ndim != 1 or bp.size != vals.size + 1:
            raise DomainError("need m+1 breakpoints for m step values")
        if bp[0] != 0.0 or np.any(np.diff(bp) <= 0.0):
            raise DomainError("breakpoints must start at 0 and increase strictly")

    @property
    def total_measure(self) -> float:
        return float(self.breakpoints[-1])

    def __call__(self, s):
        """Evaluate the step function (right-continuous; clamped at the ends)."""
        s = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.breakpoints[1:], s, side="right")
        idx = np.clip(idx, 0, self.values.size - 1)
        out = self.values[idx]
        return float(out) if out.ndim == 0 else out

    def integral(self, s: float) -> float:
        """Exact integral of the step function over [0, s]."""
        if s < 0.0 or s > self.total_measure * (1.0 + 1e-12):
            raise DomainError(f"integration endpoint {s} outside [0, {self.total_measure}]")
        widths = np.diff(self.breakpoints)
        cum = np.concatenate([[0.0], np.cumsum(self.values * widths)])
        j = int(np.searchsorted(self.breakpoints[1:], s, side="right"))
        j = min(j, self.values.size - 1)
        return float(cum[j] + self.values[j] * (s - self.breakpoints[j]))

    def squared_integral(self) -> float:
        """Integral of the squared profile over its whole range."""
        return float(np.sum(self.values**2 * np.diff(self.breakpoints)))

    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.breakpoints[:-1] + self.breakpoints[1:])


def _profile_from_sorted(values: np.ndarray, measures: np.ndarray) -> RearrangedProfile:
    # merge exact ties so the profile is unique regardless of tie order
    keep_values = []
    keep_measures = []
    for v, m in zip(values, measures):
        if keep_values and v == keep_values[-1]:
            keep_measures[-1] += m
        else:
            keep_values.append(v)
            keep_measures.append(m)
    breakpoints = np.concatenate([[0.0], np.cumsum(keep_measures)])
    return RearrangedProfile(breakpoints=breakpoints, values=np.array(keep_values))


def decreasing_rearrangement(field: DiscreteField) -> RearrangedProfile:
    """u*(s): cell values sorted descending over cumulative measures."""
    order = np.argsort(-field.values, kind="stable")
    return _profile_from_sorted(field.values[order], field.measures[order])


def increasing_rearrangement(field: DiscreteField) -> RearrangedProfile:
    """u_*(s) = u*(total - s): cell values sorted ascending."""
    order = np.argsort(field.values, kind="stable")
    return _profile_from_sorted(field.values[order], field.measures[order])


# ---------------------------------------------------------------------------
# ball eigenfunction profile


class BallRearrangement:
    """z*(s) for the radial ground state z(r) = c r^{-nu} J_nu(sqrt(mu1) r).

    The ball B_R carries the unit-scale Robin parameter sigma, so
    sqrt(mu1) = k_{nu,1}(sigma) / R.  The rearrangement variable is
    s = C_N r^N with s ranging over [0, C_N R^N].
    """

    def __init__(self, dim: DimensionSpec, sigma: float, radius: float, scale: float = 1.0):
        if not radius > 0.0:
            raise DomainError(f"radius must be positive, got {radius}")
        if not sigma > 0.0:
            raise DomainError(f"sigma must be positive, got {sigma}")
        self.dim = dim
        self.sigma = sigma
        self.radius = radius
        self.scale = scale
        alpha, _ = first_cross_zeros(dim.nu, sigma)
        self.root = math.sqrt(alpha**2 / radius**2)  # sqrt(mu1)
        self.mu1 = self.root**2
        self.ball_measure = dim.unit_ball_volume * radius**dim.n

    def radial(self, r: float) -> float:
        """z(r) = scale * r^{-nu} J_nu(sqrt(mu1) r)."""
        nu = self.dim.nu
        if r < 1e-10 * self.radius:
            return self.scale * (0.5 * self.root) ** nu / math.gamma(nu + 1.0)
        return self.scale * r ** (-nu) * bessel_j(nu, self.root * r)

    def _r_of_s(self, s: float) -> float:
        return (s / self.dim.unit_ball_volume) ** (1.0 / self.dim.n)

    def value(self, s: float) -> float:
        if s < 0.0 or s > self.ball_measure * (1.0 + 1e-12):
            raise DomainError(f"s={s} outside [0, {self.ball_measure}]")
        return self.radial(self._r_of_s(min(s, self.ball_measure)))

    def neg_derivative(self, s: float) -> float:
        """-(z*)'(s) = scale * sqrt(mu1) r^{-nu} J_{nu+1}(sqrt(mu1) r) / (N C_N r^{N-1})."""
        n, nu, cn = self.dim.n, self.dim.nu, self.dim.unit_ball_volume
        r = self._r_of_s(s)
        if r <= 0.0:
            raise DomainError("derivative is evaluated for s > 0")
        return (
            self.scale
            * self.root
            * r ** (-nu)
            * bessel_j(nu + 1.0, self.root * r)
            / (n * cn * r ** (n - 1))
        )

    def cumulative(self, s: float) -> float:
        """int_0^s z*(t) dt in closed form via int x^{nu+1} J_nu dx = x^{nu+1} J_{nu+1}."""
        n, nu, cn = self.dim.n, self.dim.nu, self.dim.unit_ball_volume
        r = self._r_of_s(s)
        return self.scale * n * cn * r ** (nu + 1.0) * bessel_j(nu + 1.0, self.root * r) / self.root

    def cumulative_quad(self, s: float) -> float:
        """Same integral by adaptive quadrature (independent of the closed form)."""
        n, cn = self.dim.n, self.dim.unit_ball_volume
        r = self._r_of_s(s)
        out = quad(
            lambda rho: self.radial(rho) * n * cn * rho ** (n - 1),
            0.0,
            r,
            epsabs=1e-12,
            epsrel=1e-12,
            limit=200,
            full_output=1,
        )
        if len(out) > 3:
            raise QuadratureError(f"cumulative quadrature failed: {out[3]}")
        return out[0]

    def ode_residual(self, s_points) -> float:
        """Worst relative residual of the rearrangement ODE on the sample points.

        The left side uses the closed-form derivative, the right side the
        quadrature cumulative, so the two routes are independent.
        """
        n, cn = self.dim.n, self.dim.unit_ball_volume
        worst = 0.0
        for s in np.asarray(s_points, dtype=float):
            if not 0.0 < s <= self.ball_measure:
                raise DomainError(f"ODE residual sample {s} outside (0, {self.ball_measure}]")
            lhs = self.neg_derivative(float(s))
            rhs = self.mu1 * n**-2 * cn ** (-2.0 / n) * s ** (2.0 / n - 2.0) * (
                self.cumulative_quad(float(s))
            )
            worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
        return worst

    def squared_volume_integral(self) -> float:
        """int_{B_R} z^2 dx by radial quadrature."""
        n, cn = self.dim.n, self.dim.unit_ball_volume
        out = quad(
            lambda rho: self.radial(rho) ** 2 * n * cn * rho ** (n - 1),
            0.0,
            self.radius,
            epsabs=1e-12,
            epsrel=1e-12,
            limit=200,
            full_output=1,
        )
        if len(out) > 3:
            raise QuadratureError(f"normalization quadrature failed: {out[3]}")
        return out[0]

    def sampled_field(self, cells: int) -> DiscreteField:
        """Radial shell discretization: values at shell midpoints, exact measures."""
        n, cn = self.dim.n, self.dim.unit_ball_volume
        edges = np.linspace(0.0, self.radius, cells + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
        values = np.array([self.radial(float(r)) for r in mids])
        measures = cn * (edges[1:] ** n - edges[:-1] ** n)
        return DiscreteField(values=values, measures=measures)


def ball_eigen_rearrangement(
    dim: DimensionSpec, sigma: float, radius: float, scale: float = 1.0
) -> BallRearrangement:
    """Rearranged ball ground state z*(s) with sqrt(mu1) = k_{nu,1}(sigma)/radius."""
    return BallRearrangement(dim, sigma, radius, scale)


# ---------------------------------------------------------------------------
# Chiti-type comparison


@dataclass(frozen=True)
class ChitiReport:
    """Sign pattern of z* - u1* on [0, |B_R|] up to a discretization band.

    regime is 'dominates' (z* >= u1* throughout), 'single_crossing'
    (nonnegative then nonpositive, crossing near s1), or 'violation'.
    hypothesis_ok records whether R_tilde >= R held (None if the caller
    did not supply R_tilde); the classification is reported either way.
    """

    regime: str
    crossing: float | None
    max_violation: float
    ball_radius: float
    ball_measure: float
    normalization: float
    tolerance: float
    hypothesis_ok: bool | None
    precondition_ok: bool


def _best_single_crossing(diff: np.ndarray) -> tuple[float, int]:
    """Smallest max-violation over all cut positions of a (+ then -) pattern."""
    neg = np.maximum(-diff, 0.0)
    pos = np.maximum(diff, 0.0)
    prefix = np.concatenate([[0.0], np.maximum.accumulate(neg)])  # prefix[i] = max(neg[:i])
    suffix = np.concatenate([np.maximum.accumulate(pos[::-1])[::-1], [0.0]])
    costs = np.maximum(prefix, suffix)  # cut before index i
    best = int(np.argmin(costs))
    return float(costs[best]), best


def chiti_compare(
    u1_star: RearrangedProfile,
    dim: DimensionSpec,
    sigma: float,
    mu1: float,
    eps_discr: float,
    samples: int = 2048,
    r_tilde: float | None = None,
    r_tilde_band: float = 0.0,
) -> ChitiReport:
    """Compare u1* with the rearranged ball ground state after L2 matching.

    The ball radius is R = k_{nu,1}(sigma)/sqrt(mu1) and z is scaled so the
    squared integrals agree.  If |B_R| exceeds |Omega| (possible when the
    comparison hypotheses fail) the comparison is trimmed to [0, |Omega|]
    and flagged.  A clear violation must exceed twice the tolerance band;
    marginal ones raise ResolutionError.
    """
    if not mu1 > 0.0:
        raise DomainError(f"mu1 must be positive, got {mu1}")
    if eps_discr < 0.0:
        raise DomainError(f"tolerance must be nonnegative, got {eps_discr}")
    alpha, _ = first_cross_zeros(dim.nu, sigma)
    radius = alpha / math.sqrt(mu1)
    ball = ball_eigen_rearrangement(dim, sigma, radius)
    omega = u1_star.total_measure
    precondition_ok = ball.ball_measure <= omega * (1.0 + 1e-9)
    s_hi = min(ball.ball_measure, omega)

    # normalization (squared-integral matching); u1* is compared as given
    scale = math.sqrt(u1_star.squared_integral() / ball.squared_volume_integral())

    grid = np.unique(
        np.concatenate(
            [
                np.linspace(0.0, s_hi, samples),
                u1_star.midpoints()[u1_star.midpoints() <= s_hi],
            ]
        )
    )
    z_vals = np.array([scale * ball.value(float(s)) for s in grid])
    u_vals = np.asarray(u1_star(grid))
    diff = z_vals - u_vals

    dominate_violation = float(np.max(np.maximum(-diff, 0.0)))
    cross_violation, cut = _best_single_crossing(diff)

    hypothesis_ok = None if r_tilde is None else bool(r_tilde >= radius - r_tilde_band)

    if dominate_violation <= eps_discr:
        return ChitiReport(
            regime="dominates",
            crossing=None,
            max_violation=dominate_violation,
            ball_radius=radius,
            ball_measure=ball.ball_measure,
            normalization=scale,
            tolerance=eps_discr,
            hypothesis_ok=hypothesis_ok,
            precondition_ok=precondition_ok,
        )
    if cross_violation <= eps_discr:
        cut = min(max(cut, 1), grid.size - 1)
        crossing = 0.5 * (grid[cut - 1] + grid[cut])
        return ChitiReport(
            regime="single_crossing",
            crossing=float(crossing),
            max_violation=cross_violation,
            ball_radius=radius,
            ball_measure=ball.ball_measure,
            normalization=scale,
            tolerance=eps_discr,
            hypothesis_ok=hypothesis_ok,
            precondition_ok=precondition_ok,
        )
    magnitude = min(dominate_violation, cross_violation)
    if magnitude <= 2.0 * eps_discr:
        raise ResolutionError(
            f"sign pattern ambiguous: violation {magnitude:g} within twice the "
            f"tolerance {eps_discr:g}; refine the mesh"
        )
    return ChitiReport(
        regime="violation",
        crossing=None,
        max_violation=magnitude,
        ball_radius=radius,
        ball_measure=ball.ball_measure,
        normalization=scale,
        tolerance=eps_discr,
        hypothesis_ok=hypothesis_ok,
        precondition_ok=precondition_ok,
    )


# ---------------------------------------------------------------------------
# superlevel derivative inequality


@dataclass(frozen=True)
class Lemma31Report:
    """Windowed -(u1*)' against mu1 N^-2 C_N^{-2/N} s^{2/N-2} int_0^s u1*.

    allowance is the slope uncertainty 2 * value_band / window implied by
    the profile's value-level error (rearrangement contracts sup norms, so
    a value band translates directly into a secant band).  max_violation
    is the worst signed excess of the left side beyond that allowance;
    *_rel entries are scaled by the pointwise magnitude so they are
    dimensionless.  max_equality_gap_rel ignores the allowance and is the
    two-sided equality diagnostic used for exact ball profiles.
    """

    s: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    allowance: np.ndarray

    def _scale(self) -> np.ndarray:
        return np.maximum(np.maximum(self.lhs, self.rhs), 1e-300)

    @property
    def max_violation(self) -> float:
        if self.s.size == 0:
            return 0.0
        return float(np.max(self.lhs - self.rhs - self.allowance))

    @property
    def max_violation_rel(self) -> float:
        if self.s.size == 0:
            return 0.0
        return float(np.max((self.lhs - self.rhs - self.allowance) / self._scale()))

    @property
    def max_equality_gap_rel(self) -> float:
        if self.s.size == 0:
            return 0.0
        return float(np.max(np.abs(self.lhs - self.rhs) / self._scale()))


def lemma31_check(
    u1_star: RearrangedProfile,
    mu1: float,
    dim: DimensionSpec,
    s_max: float,
    window_fraction: float = 0.005,
    skip_fraction: float = 1e-3,
    value_band: float = 0.0,
) -> Lemma31Report:
    """Evaluate the rearrangement inequality on [delta, s_max).

    Derivatives are secants of the step midpoints over windows spanning
    about window_fraction of the total measure, which suppresses the
    cell-level noise of finite-element fields.  Each secant is compared
    against the exact window average of the right side (the integrated
    transcription of the almost-everywhere inequality): int u* is
    piecewise linear on a step profile, so int s^a (c + v s) ds is
    available in closed form on every segment and the ball equality case
    is reproduced without curvature bias.  The first skip_fraction of the
    measure is excluded because the peak is unresolved there.
    """
    total = u1_star.total_measure
    if not 0.0 < s_max <= total * (1.0 + 1e-12):
        raise DomainError(f"s_max must lie in (0, {total}], got {s_max}")
    n, cn = dim.n, dim.unit_ball_volume
    mids = u1_star.midpoints()
    vals = u1_star.values
    bp = u1_star.breakpoints
    delta = skip_fraction * total
    window = max(window_fraction * total, 1e-300)
    pref = mu1 * n**-2 * cn ** (-2.0 / n)
    a = 2.0 / n - 2.0

    # cumulative integral of u* at breakpoints: I(s) = ibp[j] + v_j (s - s_j)
    ibp = np.concatenate([[0.0], np.cumsum(vals * np.diff(bp))])

    def _pow_int(x1: float, x2: float, t: float) -> float:
        # int_{x1}^{x2} s^t ds for x1 > 0
        if t == -1.0:
            return math.log(x2 / x1)
        return (x2 ** (t + 1.0) - x1 ** (t + 1.0)) / (t + 1.0)

    def _segment_piece(j: int, x1: float, x2: float) -> float:
        # int_{x1}^{x2} s^a I(s) ds inside segment j, where I = c_j + v_j s
        cj = ibp[j] - vals[j] * bp[j]
        out = vals[j] * _pow_int(x1, x2, a + 1.0)
        if cj != 0.0:
            out += cj * _pow_int(x1, x2, a)
        return out

    # antiderivative of s^a I(s) at every breakpoint (first segment has c = 0)
    gbp = np.zeros(bp.size)
    for j in range(vals.size):
        x1 = bp[j] if bp[j] > 0.0 else 0.0
        if x1 == 0.0:
            piece = vals[0] * (bp[1] ** (a + 2.0)) / (a + 2.0)
        else:
            piece = _segment_piece(j, float(bp[j]), float(bp[j + 1]))
        gbp[j + 1] = gbp[j] + piece

    def rhs_window_integral(lo: float, hi: float) -> float:
        out = 0.0
        jlo = min(int(np.searchsorted(bp[1:], lo, side="right")), vals.size - 1)
        jhi = min(int(np.searchsorted(bp[1:], hi, side="right")), vals.size - 1)
        out += gbp[jhi] - gbp[jlo]
        out -= _segment_piece(jlo, float(bp[jlo]), lo)
        out += _segment_piece(jhi, float(bp[jhi]), hi)
        return pref * out

    s_out, lhs_out, rhs_out, allow_out = [], [], [], []
    j2_floor = 0
    for j in range(mids.size - 1):
        target = mids[j] + window
        j2 = max(bisect.bisect_left(mids, target, lo=j2_floor), j + 1)
        if j2 >= mids.size:
            break
        j2_floor = j2
        lo, hi = float(mids[j]), float(mids[j2])
        s_eval = 0.5 * (lo + hi)
        if lo < delta or hi >= s_max:
            continue
        lhs = (vals[j] - vals[j2]) / (hi - lo)
        rhs = rhs_window_integral(lo, hi) / (hi - lo)
        s_out.append(s_eval)
        lhs_out.append(lhs)
        rhs_out.append(rhs)
        allow_out.append(2.0 * value_band / (hi - lo))
    return Lemma31Report(
        s=np.array(s_out),
        lhs=np.array(lhs_out),
        rhs=np.array(rhs_out),
        allowance=np.array(allow_out),
    )
