"""Cross zeros k J_{nu+l+1}(k) = (sigma+l) J_{nu+l}(k) and the sigma->0 limit.

Closed-form anchors used as oracles:
  * nu=1/2, l=0, sigma=1: the cross function reduces to -k cos k times a
    positive prefactor, so the first zero is exactly pi/2.
  * sigma = 2nu+1, l=1: by the three-term recurrence the cross function
    equals -k J_nu(k), so the first zero is exactly j_{nu,1}.
  * k_star(nu) solves k J_{nu+2}(k) = J_{nu+1}(k); for nu=1/2 this is the
    trigonometric equation (2/k - k) sin k = 2 cos k.
"""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from robin_spectral.errors import DomainError
from robin_spectral.robin_zeros import (
    CrossZero,
    CrossZeroQuery,
    cross_fn,
    cross_zero,
    first_cross_zeros,
    h_fn,
    k_star,
)
from robin_spectral.special import bessel_j, classical_zero


class TestCrossFn:
    def test_small_k_limit_is_minus_sigma(self):
        # J_0(0)=1 and k J_1(k) -> 0, so the nu=0 limit is -sigma
        for sigma in [0.3, 1.0, 7.0]:
            assert cross_fn(0.0, 0, sigma, 1e-8) == pytest.approx(-sigma, abs=1e-7)

    def test_spherical_reduction_at_half_pi(self):
        # k J_{3/2}(k) - J_{1/2}(k) = -sqrt(2/(pi k)) k cos k vanishes at pi/2
        assert abs(cross_fn(0.5, 0, 1.0, math.pi / 2.0)) < 1e-10

    def test_positive_at_first_classical_zero(self):
        j01 = classical_zero(0.0, 1)
        val = cross_fn(0.0, 0, 1.0, j01)
        assert val == pytest.approx(j01 * bessel_j(1.0, j01), rel=1e-12)
        assert val > 0.0

    def test_requires_positive_k(self):
        with pytest.raises(DomainError):
            cross_fn(0.0, 0, 1.0, 0.0)


class TestCrossZero:
    def test_half_order_closed_form(self):
        z = cross_zero(CrossZeroQuery(nu=0.5, l=0, sigma=1.0))
        assert z.k == pytest.approx(math.pi / 2.0, abs=1e-10)

    def test_sigma_equal_2nu_plus_1_gives_classical_zero(self):
        # k J_{nu+2} - (2nu+2) J_{nu+1} = -k J_nu by the recurrence
        for nu in [0.0, 0.5, 1.0, 2.0]:
            z = cross_zero(CrossZeroQuery(nu=nu, l=1, sigma=2.0 * nu + 1.0))
            assert z.k == pytest.approx(classical_zero(nu, 1), abs=1e-11)

    def test_n2_sigma1_value(self):
        # frozen from a bisection oracle on the series-evaluated cross function
        z = cross_zero(CrossZeroQuery(nu=0.0, l=0, sigma=1.0))
        assert z.k == pytest.approx(1.2558, abs=1e-3)
        assert z.k == pytest.approx(1.255783711794593, abs=1e-11)

    def test_boundary_relations(self):
        # alpha J_{nu+1}(alpha)/J_nu(alpha) = sigma and the beta analogue
        for nu, sigma in [(0.0, 1.0), (0.5, 1.0), (1.0, 5.0), (0.0, 0.1)]:
            alpha, beta = first_cross_zeros(nu, sigma)
            assert alpha * bessel_j(nu + 1.0, alpha) / bessel_j(nu, alpha) == pytest.approx(
                sigma, abs=1e-10
            )
            assert beta * bessel_j(nu + 2.0, beta) / bessel_j(nu + 1.0, beta) == pytest.approx(
                sigma + 1.0, abs=1e-10
            )

    def test_first_zero_below_classical(self):
        for nu in [0.0, 0.5, 1.5]:
            for sigma in [0.1, 1.0, 10.0, 1e4]:
                for l in (0, 1):
                    z = cross_zero(CrossZeroQuery(nu=nu, l=l, sigma=sigma))
                    assert 0.0 < z.k < classical_zero(nu + l, 1)

    def test_dirichlet_limit_approach(self):
        j01 = classical_zero(0.0, 1)
        gaps = []
        for sigma in [1e2, 1e3, 1e4]:
            k = cross_zero(CrossZeroQuery(nu=0.0, l=0, sigma=sigma)).k
            assert k < j01
            gaps.append(j01 - k)
        # gap ~ C/sigma: each decade shrinks the residual about tenfold
        assert gaps[1] < gaps[0] and gaps[2] < gaps[1]
        assert gaps[0] / gaps[1] == pytest.approx(10.0, rel=0.2)
        assert gaps[1] / gaps[2] == pytest.approx(10.0, rel=0.2)

    def test_sigma_monotonicity(self):
        sigmas = [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0]
        for nu in [0.0, 0.5, 1.0]:
            for l in (0, 1):
                ks = [cross_zero(CrossZeroQuery(nu=nu, l=l, sigma=s)).k for s in sigmas]
                assert all(a < b for a, b in zip(ks, ks[1:]))

    def test_single_sign_change_on_first_bracket(self):
        for nu, l, sigma in [(0.0, 0, 1.0), (0.5, 1, 3.0), (1.0, 0, 0.2)]:
            hi = classical_zero(nu + l, 1)
            grid = np.linspace(1e-6, hi - 1e-6, 400)
            signs = np.sign([cross_fn(nu, l, sigma, float(t)) for t in grid])
            flips = np.count_nonzero(np.diff(signs))
            assert flips == 1

    def test_higher_index_zeros(self):
        q2 = CrossZeroQuery(nu=0.0, l=0, sigma=1.0, m=2)
        z2 = cross_zero(q2)
        assert classical_zero(0.0, 1) < z2.k < classical_zero(0.0, 2)
        assert abs(cross_fn(0.0, 0, 1.0, z2.k)) < 1e-10
        z3 = cross_zero(CrossZeroQuery(nu=0.0, l=0, sigma=1.0, m=3))
        assert z2.k < z3.k

    def test_invalid_queries(self):
        with pytest.raises(DomainError):
            CrossZeroQuery(nu=0.0, l=0, sigma=-1.0)
        with pytest.raises(DomainError):
            CrossZeroQuery(nu=0.0, l=0, sigma=0.0)
        with pytest.raises(DomainError):
            CrossZeroQuery(nu=0.0, l=2, sigma=1.0)
        with pytest.raises(DomainError):
            CrossZeroQuery(nu=-1.0, l=0, sigma=1.0)
        with pytest.raises(DomainError):
            CrossZeroQuery(nu=0.0, l=0, sigma=1.0, m=0)


class TestLimitObject:
    def test_h_at_zero_limit(self):
        for nu in [0.0, 0.5, 2.0]:
            assert h_fn(nu, 1e-6) == pytest.approx(-1.0, abs=1e-10)

    def test_h_domain(self):
        with pytest.raises(DomainError):
            h_fn(0.0, classical_zero(1.0, 1) + 0.1)

    def test_h_strictly_increasing(self):
        for nu in [0.0, 0.5, 1.0]:
            hi = classical_zero(nu + 1.0, 1)
            grid = np.linspace(1e-4, hi - 1e-6, 200)
            vals = [h_fn(nu, float(t)) for t in grid]
            assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_k_star_half_order_trig_oracle(self):
        # k J_{5/2}(k) = J_{3/2}(k)  <=>  (2/k - k) sin k = 2 cos k
        trig = lambda k: (2.0 / k - k) * math.sin(k) - 2.0 * math.cos(k)
        oracle = brentq(trig, 1.9, 2.2, xtol=1e-13)
        assert k_star(0.5) == pytest.approx(oracle, abs=1e-11)

    def test_k_star_is_neumann_derivative_zero_for_nu0(self):
        # k J_2(k) = J_1(k) reduces to J_1'(k) = 0; first root 1.8411838
        assert k_star(0.0) == pytest.approx(1.841183781340659, abs=1e-11)

    def test_k_star_matches_sigma_to_zero_limit(self):
        for nu in [0.0, 0.5, 1.0]:
            beta_small = cross_zero(CrossZeroQuery(nu=nu, l=1, sigma=1e-8)).k
            assert abs(beta_small - k_star(nu)) < 1e-6

    def test_k_star_in_range(self):
        for nu in [0.0, 0.5, 1.0, 2.0]:
            assert 0.0 < k_star(nu) < classical_zero(nu + 1.0, 1)
