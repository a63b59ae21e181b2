"""Shared fixtures: expensive finite-element runs are computed once."""

import math

import pytest

from robin_spectral.fem_solver import (
    disk_mesh,
    eigen_report,
    rectangle_mesh,
    verify_domain,
)

# 2:1 ellipse with area pi (same volume as the unit disk)
ELLIPSE_2_TO_1 = "ellipse:%.12f,%.12f" % (math.sqrt(2.0), 1.0 / math.sqrt(2.0))

VERIFY_H = 0.06


@pytest.fixture(scope="session")
def bundles():
    """Memoized verification bundles keyed by (shape, sigma, h)."""
    cache = {}

    def get(shape, sigma, h=VERIFY_H):
        key = (shape, sigma, h)
        if key not in cache:
            cache[key] = verify_domain(shape, sigma, h)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def disk_convergence():
    """Disk eigen reports at the three refinement levels, sigma = 1."""
    return {h: eigen_report(disk_mesh(h), 1.0) for h in (0.08, 0.04, 0.02)}


@pytest.fixture(scope="session")
def square_sweep():
    """Unit-square reports over the boundary-parameter sweep."""
    mesh = rectangle_mesh(1.0, 1.0, 0.04)
    return {sigma: eigen_report(mesh, sigma) for sigma in (1.0, 10.0, 100.0, 1000.0)}
