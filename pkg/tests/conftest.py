import math

import mpmath as mp
import pytest

from reflect_lab import ElementGeometry, RadioBudget

mp.mp.dps = 40


def mp_alpha(n, area, d):
    """High-precision reference for the planar-array gain."""
    n, area, d = mp.mpf(n), mp.mpf(area), mp.mpf(d)
    return mp.atan(n * area / (4 * d * mp.sqrt(n * area + d * d))) / mp.pi


def mp_far_field_error(n, area, d):
    a = mp_alpha(n, area, d)
    approx = mp.mpf(n) * mp.mpf(area) / (4 * mp.pi * mp.mpf(d) ** 2)
    return abs(approx - a) / a


@pytest.fixture
def geom_01():
    """lambda = 0.1 m, isotropic element (A ~ 7.958e-4 m^2)."""
    return ElementGeometry.isotropic(0.1)


@pytest.fixture
def budget_ref():
    return RadioBudget(p_tx=0.01, noise=1e-8)


def rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a)


@pytest.fixture(scope="session")
def area_01():
    return 0.1**2 / (4 * math.pi)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance")
    for key in sorted(RESULTS):
        ok, detail = RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")
