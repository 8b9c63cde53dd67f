import math

import mpmath
import numpy as np
import pytest

from weierlab.lattice import make_tau

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def tau_i():
    return make_tau(1j)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


# ---- independent high-precision oracles (mpmath, no shared code paths) ----

def mp_theta(z, tau, derivative=0):
    """Our theta equals -theta_1(pi z, e^{pi i tau}) in mpmath's convention."""
    with mpmath.workdps(30):
        q = mpmath.exp(1j * mpmath.pi * tau)
        val = -mpmath.jtheta(1, mpmath.pi * z, q, derivative) * mpmath.pi**derivative
        return complex(val)


def mp_e2(tau):
    """Lambert-series form 1 - 24 sum n q^n / (1 - q^n)."""
    with mpmath.workdps(30):
        q = mpmath.exp(2j * mpmath.pi * tau)
        s = mpmath.nsum(lambda n: n * q**n / (1 - q**n), [1, mpmath.inf])
        return complex(1 - 24 * s)


def mp_g2(tau):
    return math.pi**2 / 3 * mp_e2(tau)


def mp_zeta(z, tau):
    return mp_theta(z, tau, 1) / mp_theta(z, tau) + mp_g2(tau) * z


def mp_wp(z, tau):
    t0, t1, t2 = (mp_theta(z, tau, k) for k in range(3))
    return -(t2 * t0 - t1 * t1) / t0**2 - mp_g2(tau)
