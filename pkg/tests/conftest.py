"""Shared fixtures.

The mean-field and master-equation runs are expensive, so each is computed
once per session and shared by the unit tests and the acceptance suite.
"""

from __future__ import annotations

import functools
import math
import time

import pytest

from hybridsim import checks
from hybridsim.gpe import Drive, contrast_curve, ground_state, loss_spectrum

OMEGA_M = checks.OMEGA_M

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}

# fixture name -> wall seconds, for the runtime budgets
TIMINGS: dict[str, float] = {}


def timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        TIMINGS[fn.__name__] = time.perf_counter() - t0
        return out

    return wrapper


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def bec_setup():
    return checks.bec_gpe_setup(points=128)


@pytest.fixture(scope="session")
def bec_config(bec_setup):
    return bec_setup.config(OMEGA_M, Drive())


@pytest.fixture(scope="session")
@timed
def bec_ground(bec_config):
    return ground_state(bec_config)


@pytest.fixture(scope="session")
@timed
def contrast_rows(bec_config):
    """Contrast at 10 ms for b = 0, 20, 40, 60 nm, resonant drive."""
    return contrast_curve(bec_config, [0.0, 20e-9, 40e-9, 60e-9], checks.CONTRAST_DURATION, OMEGA_M)


@pytest.fixture(scope="session")
@timed
def off_resonant_contrast(bec_setup):
    cfg = bec_setup.config(2 * math.pi * 4e3, Drive())
    return contrast_curve(cfg, [40e-9], checks.CONTRAST_DURATION, OMEGA_M)[0].contrast


@pytest.fixture(scope="session")
@timed
def refined_contrast():
    """Same b = 40 nm point on a grid with twice the points."""
    cfg = checks.bec_gpe_setup(points=256).config(OMEGA_M, Drive())
    return contrast_curve(cfg, [40e-9], checks.CONTRAST_DURATION, OMEGA_M)[0].contrast


@pytest.fixture(scope="session")
@timed
def loss_rows(bec_config):
    import numpy as np

    grid = OMEGA_M + 2 * math.pi * np.arange(-6.0, 6.1, 1.5)
    return loss_spectrum(bec_config, grid, 60e-9, OMEGA_M, 3200.0, checks.CONTRAST_DURATION)


@pytest.fixture(scope="session")
@timed
def spectroscopy():
    return checks.run_spectroscopy()


@pytest.fixture(scope="session")
@timed
def cooling_crosscheck():
    from hybridsim.dynamics import sympathetic_cooling_crosscheck

    return sympathetic_cooling_crosscheck(0.05, 1, 1.0, 0.001, 0.5)


@pytest.fixture(scope="session")
def correspondence_ratio():
    return checks._correspondence()
