"""Bessel functions of the first kind for real order nu >= 0.

Evaluation strategy: ascending power series for z <= max(12, 2*nu),
Miller-style backward recurrence with Neumann-series normalization for
larger z.  This covers the working range z <= 50 of the rest of the
package without asymptotic expansions.  Classical zeros j_{nu,k} are
bracketed by scanning/bisection and polished with Brent's method.
"""

from __future__ import annotations

import math
import threading

from scipy.optimize import brentq

from .errors import BracketError, DomainError, OverflowSignal

# Power series terminates when a term drops below this relative size.
_SERIES_RTOL = 1e-17
_SERIES_MAX_TERMS = 200

# Largest argument accepted; accuracy is only contracted for z <= 50.
_MAX_ARGUMENT = 1.0e6

_RESCALE_LIMIT = 1e250


def _check_order_argument(nu: float, z: float) -> None:
    if not (nu >= 0.0) or math.isnan(nu):
        raise DomainError(f"order must satisfy nu >= 0, got {nu}")
    if not (0.0 <= z <= _MAX_ARGUMENT):
        raise DomainError(f"argument must lie in [0, {_MAX_ARGUMENT:g}], got {z}")


def _series_j(nu: float, z: float) -> float:
    # J_nu(z) = (z/2)^nu / Gamma(nu+1) * sum_k (-1)^k (z^2/4)^k / (k! (nu+1)_k)
    quarter_z2 = 0.25 * z * z
    term = (0.5 * z) ** nu / math.gamma(nu + 1.0)
    total = term
    for k in range(1, _SERIES_MAX_TERMS + 1):
        term *= -quarter_z2 / (k * (nu + k))
        total += term
        if abs(term) <= _SERIES_RTOL * max(abs(total), 1e-300):
            break
    return total


def _backward_j(nu: float, z: float) -> float:
    # Downward recurrence f_{k-1} = 2(nu+k)/z f_k - f_{k+1}, normalized by
    # the Neumann sum  sum_k (nu+2k) Gamma(nu+k)/k! * J_{nu+2k}(z) = (z/2)^nu.
    start = int(z + max(18.0, 12.0 * z ** (1.0 / 3.0))) + 2
    if start % 2:
        start += 1
    fkp1 = 0.0
    fk = 1e-300
    ladder = [0.0] * (start + 1)
    ladder[start] = fk
    for k in range(start, 0, -1):
        fkm1 = (2.0 * (nu + k) / z) * fk - fkp1
        if abs(fkm1) > _RESCALE_LIMIT:
            scale = 1.0 / _RESCALE_LIMIT
            fkm1 *= scale
            fk *= scale
            for i in range(k, start + 1):
                ladder[i] *= scale
        ladder[k - 1] = fkm1
        fkp1, fk = fk, fkm1
    # Neumann normalization over even ladder entries.
    coeff = math.gamma(nu + 1.0)  # (nu+2k)Gamma(nu+k)/k! at k=0, limit form
    total = coeff * ladder[0]
    half = len(ladder) // 2
    for k in range(1, half):
        if k == 1:
            coeff *= nu + 2.0  # the nu factors cancel between k=0 and k=1
        else:
            coeff *= (nu + 2.0 * k) * (nu + k - 1.0) / ((nu + 2.0 * k - 2.0) * k)
        total += coeff * ladder[2 * k]
    if total == 0.0 or not math.isfinite(total):
        raise OverflowSignal(f"normalization sum failed for nu={nu}, z={z}")
    return ladder[0] * ((0.5 * z) ** nu / total)


def bessel_j(nu: float, z: float) -> float:
    """J_nu(z) for real order nu >= 0 and argument 0 <= z <= 1e6."""
    _check_order_argument(nu, z)
    if z == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if z <= max(12.0, 2.0 * nu):
        return _series_j(nu, z)
    return _backward_j(nu, z)


def bessel_j_prime(nu: float, z: float) -> float:
    """d/dz J_nu(z) via J_nu'(z) = -J_{nu+1}(z) + (nu/z) J_nu(z)."""
    _check_order_argument(nu, z)
    if z == 0.0:
        # series limit branch; the derivative diverges for 0 < nu < 1
        if nu < 1.0 and nu != 0.0:
            raise DomainError(f"J_nu'(0) is unbounded for 0 < nu < 1, got nu={nu}")
        if nu == 0.0:
            return 0.0
        return 0.5 if nu == 1.0 else 0.0
    return -bessel_j(nu + 1.0, z) + (nu / z) * bessel_j(nu, z)


def small_z_leading(nu: float, z: float) -> float:
    """Leading small-argument form (z/2)^nu / Gamma(nu+1), valid for z <= 0.1."""
    _check_order_argument(nu, z)
    if z > 0.1:
        raise DomainError(f"leading form only supported for z <= 0.1, got {z}")
    return (0.5 * z) ** nu / math.gamma(nu + 1.0)


# ---------------------------------------------------------------------------
# classical zeros j_{nu,k}

# cache guarded by a lock so concurrent callers see a consistent list
_zero_cache: dict[float, list[float]] = {}
_zero_cache_lock = threading.Lock()

_SCAN_STEP = 0.5
_BRACKET_TARGET = 1e-3
_ROOT_XTOL = 1e-13


def _refine_zero(nu: float, lo: float, hi: float) -> float:
    f = lambda t: bessel_j(nu, t)
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError(f"no sign change of J_{nu} on [{lo}, {hi}]")
    # bisect to the target width, then Brent-polish
    while hi - lo > _BRACKET_TARGET:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return brentq(f, lo, hi, xtol=_ROOT_XTOL, rtol=1e-15)


def classical_zero(nu: float, k: int) -> float:
    """The k-th positive zero j_{nu,k} of J_nu, k >= 1."""
    if k < 1 or int(k) != k:
        raise DomainError(f"zero index must be a positive integer, got {k}")
    _check_order_argument(nu, 1.0)
    k = int(k)
    known = _zero_cache.setdefault(nu, [])
    if len(known) >= k:
        return known[k - 1]
    # McMahon-style upper estimate for where the k-th zero must appear;
    # the scan verifies each bracket by an actual sign change.  Consecutive
    # zeros of J_nu are separated by more than 3 for nu >= 0, so restarting
    # 0.25 past a found zero cannot skip the next one.
    t = known[-1] + 0.25 if known else max(1e-3, 0.5 * nu)
    limit = (k + 0.5 * nu + 1.0) * math.pi + 2.0 * nu + 25.0
    ft = bessel_j(nu, t)
    while len(known) < k:
        if t > limit:
            raise BracketError(f"scan for j_({nu},{k}) exceeded {limit:g}")
        t_next = t + _SCAN_STEP
        f_next = bessel_j(nu, t_next)
        if ft == 0.0:
            known.append(t)
            t = t + 0.25
            ft = bessel_j(nu, t)
        elif ft * f_next < 0.0:
            root = _refine_zero(nu, t, t_next)
            known.append(root)
            t = root + 0.25
            ft = bessel_j(nu, t)
        else:
            t, ft = t_next, f_next
    return known[k - 1]
