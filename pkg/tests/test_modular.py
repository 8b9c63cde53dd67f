import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weierlab import modular
from weierlab.lattice import PoleAtLatticePoint, TauTooCloseToRealAxis, TruncationPolicy, make_tau
from weierlab.modular import (
    QSeriesTerms,
    ZETA_TWO,
    dedekind_eta,
    divisor_sums,
    eisenstein_e2,
    g2,
    g2_star,
    index_zero_quotient,
    jacobi_theta,
    raise_theta,
    theta_prime,
    theta_sigma_residual,
)
from weierlab.weierstrass import quasi_periods, zeta_lattice

from conftest import mp_e2, mp_theta

PI = math.pi
ETA_I = math.gamma(0.25) / (2 * PI**0.75)

sample_taus = st.builds(complex, st.floats(-0.5, 0.5), st.floats(0.8, 2.0))
sample_z = st.builds(complex, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))


# ---- theta ----

def test_theta_vanishes_at_origin(tau_i):
    assert abs(jacobi_theta(0, tau_i)) < 1e-14


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.1j, -0.45 + 0.8j, 0.1 + 0.3j])
@pytest.mark.parametrize("z", [0.2 - 0.4j, 0.77 + 0.1j, -1.3 + 1.9j])
def test_theta_matches_mpmath(tau, z):
    for k, fn in enumerate((jacobi_theta, theta_prime, modular.theta_double_prime)):
        want = mp_theta(z, tau, k)
        assert abs(fn(z, tau) - want) <= 1e-13 * max(1, abs(want))


@settings(max_examples=100)
@given(sample_z, sample_taus)
def test_theta_transformation_laws(z, tau):
    t = make_tau(tau)
    th = jacobi_theta(z, t)
    assert abs(jacobi_theta(-z, t) + th) <= 1e-10 * max(1, abs(th))
    assert abs(jacobi_theta(z + 1, t) + th) <= 1e-10 * max(1, abs(th))
    # compare at theta's own scale: theta(z+tau) / multiplier
    inv_mult = cmath.exp(1j * PI * tau + 2j * PI * z)
    assert abs(jacobi_theta(z + tau, t) * inv_mult + th) <= 1e-10 * max(1, abs(th))


def test_theta_shift_one_tight():
    t = make_tau(0.1 + 1.3j)
    z = np.array([0.3 + 0.2j, -0.7 + 0.9j])
    assert np.all(np.abs(jacobi_theta(z + 1, t) + jacobi_theta(z, t)) < 1e-12)


def test_theta_far_from_real_axis():
    # the window recentres on the dominant index; compare via the exact multiplier
    t = make_tau(0.2 + 0.9j)
    z = 0.3 + 0.1j
    far = jacobi_theta(z + 5 * t.tau, t)
    mult = cmath.exp(-25j * PI * t.tau - 10j * PI * z) * (-1) ** 5
    assert abs(far - mult * jacobi_theta(z, t)) <= 1e-12 * abs(far)


def test_theta_prime_at_zero_is_eta_cubed(tau_i):
    eta = dedekind_eta(tau_i)
    want = -2 * PI * eta**3
    assert abs(theta_prime(0, tau_i) - want) <= 1e-10 * abs(eta**3)


def test_theta_prime_even(rng):
    t = make_tau(0.2 + 1.2j)
    z = rng.uniform(-1, 1, 20) + 1j * rng.uniform(-1, 1, 20)
    assert np.allclose(theta_prime(-z, t), theta_prime(z, t), rtol=1e-12, atol=1e-14)


def test_theta_prime_central_difference():
    t = make_tau(0.3 + 1.1j)
    z, h = 0.41 - 0.27j, 1e-5
    fd = (jacobi_theta(z + h, t) - jacobi_theta(z - h, t)) / (2 * h)
    assert abs(fd - theta_prime(z, t)) < 1e-6


def test_theta_vectorised_matches_scalar():
    t = make_tau(0.1 + 1.3j)
    z = np.array([[0.1, 0.2 + 3j], [-4 - 2j, 0.5j]])
    vec = jacobi_theta(z, t)
    assert vec.shape == z.shape
    for idx in np.ndindex(z.shape):
        assert vec[idx] == pytest.approx(jacobi_theta(complex(z[idx]), t), rel=1e-13)


# ---- eta ----

def test_eta_at_i():
    assert dedekind_eta(1j) == pytest.approx(ETA_I, abs=1e-15)
    assert abs(dedekind_eta(1j) - 0.768225422326) < 1e-12
    # a long product agrees to double precision
    assert dedekind_eta(1j, QSeriesTerms(200)) == pytest.approx(ETA_I, abs=1e-15)


def test_eta_matches_mpmath():
    import mpmath

    for tau in (0.3 + 1.1j, -0.4 + 0.85j, 0.5 + 2j):
        assert abs(dedekind_eta(tau) - complex(mpmath.eta(tau))) < 1e-14


def test_eta_translation():
    tau = 0.2 + 0.9j
    assert abs(dedekind_eta(tau + 1) - cmath.exp(1j * PI / 12) * dedekind_eta(tau)) < 1e-14


def test_eta_cusp_limit():
    t = make_tau(10j)
    assert abs(dedekind_eta(t) * t.q ** (-1 / 24) - 1) < 1e-12


# ---- E2, G2, G2* ----

def test_divisor_sieve():
    sig = divisor_sums(50)
    brute = [0] + [sum(d for d in range(1, n + 1) if n % d == 0) for n in range(1, 51)]
    assert sig.tolist() == brute


def test_e2_at_i():
    assert abs(eisenstein_e2(1j) - 3 / PI) < 1e-12


@pytest.mark.parametrize("tau", [0.3 + 1.1j, 2j, -0.5 + 0.8j, 0.05 + 0.4j])
def test_e2_matches_lambert_series(tau):
    assert abs(eisenstein_e2(tau) - mp_e2(tau)) < 1e-13


def test_e2_cusp_limit():
    assert abs(eisenstein_e2(20j) - 1) <= 1e-15


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.1j, 2j])
def test_e2_is_scaled_quasi_period(tau):
    eta1, _ = quasi_periods(tau)
    assert abs(eisenstein_e2(tau) - 3 * eta1 / PI**2) < 1e-4


def test_g2_values():
    assert abs(g2(1j) - PI) < 1e-12
    assert abs(g2(30j) - PI**2 / 3) < 1e-14


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.1j, -0.2 + 1.7j])
def test_g2_equals_lattice_quasi_period(tau):
    eta1, _ = quasi_periods(tau)
    assert abs(g2(tau) - eta1) < 1e-4


def test_g2_star_at_i_vanishes():
    # both independent paths (this and the s-regularised sum) give 0; the
    # square lattice is invariant under w -> i w, which flips the sign of w^-2
    assert abs(g2_star(1j)) < 1e-12


def test_g2_star_translation():
    tau = 0.15 + 0.95j
    assert abs(g2_star(tau + 1) - g2_star(tau)) < 1e-12


@pytest.mark.parametrize("tau", [0.5 + 1.2j, -0.3 + 0.9j, 0.1 + 2j])
def test_g2_star_weight_two(tau):
    assert abs(g2_star(-1 / tau) - tau**2 * g2_star(tau)) < 1e-8


@given(sample_taus)
def test_e2_g2_chain_exact(tau):
    e2 = eisenstein_e2(tau)
    assert g2(tau) == 2 * ZETA_TWO * e2
    assert g2_star(tau) == g2(tau) - PI / tau.imag
    assert ZETA_TWO == PI**2 / 6


def test_guard():
    with pytest.raises(TauTooCloseToRealAxis):
        eisenstein_e2(0.1 + 0.01j)
    assert eisenstein_e2(0.1 + 0.01j, QSeriesTerms(64, min_im_tau=0.001)) is not None


@pytest.mark.parametrize("tau", [0.8j, 0.3 + 1.0j, -0.5 + 1.9j])
def test_truncation_convergence(tau):
    t = make_tau(tau)
    m = 12
    small, big = QSeriesTerms(m), QSeriesTerms(2 * m)
    scale = abs(t.q) ** m
    z = 0.3 - 0.2j
    assert abs(jacobi_theta(z, t, small) - jacobi_theta(z, t, big)) <= scale
    assert abs(dedekind_eta(t, small) - dedekind_eta(t, big)) <= scale
    # E2 coefficients grow like n*log n; allow their size
    assert abs(eisenstein_e2(t, small) - eisenstein_e2(t, big)) <= 24 * 2 * m * m * scale


def test_tail_bound():
    t = make_tau(1j)
    assert QSeriesTerms(8).tail_bound(t) == pytest.approx(abs(t.q) ** 16)


# ---- raising operator and the index-zero quotient ----

def test_raise_theta_real_axis():
    t = make_tau(0.3 + 1.1j)
    z = np.linspace(-1, 1, 7)
    assert np.array_equal(raise_theta(z, t), theta_prime(z, t))


def test_raise_theta_at_zero(tau_i):
    eta = dedekind_eta(tau_i)
    assert abs(raise_theta(0, tau_i) + 2 * PI * eta**3) < 1e-10


def test_raise_theta_antiholomorphic_derivative():
    t = make_tau(0.2 + 1.4j)
    z, h = 0.3 + 0.45j, 1e-4
    d_x = (raise_theta(z + h, t) - raise_theta(z - h, t)) / (2 * h)
    d_y = (raise_theta(z + 1j * h, t) - raise_theta(z - 1j * h, t)) / (2 * h)
    wirtinger = 0.5 * (d_x + 1j * d_y)
    assert abs(wirtinger - (-PI / t.imag) * jacobi_theta(z, t)) < 1e-5


@settings(max_examples=60)
@given(sample_z, sample_taus)
def test_index_zero_quotient_doubly_periodic(z, tau):
    t = make_tau(tau)
    from weierlab.lattice import lattice_distance

    if lattice_distance(z, t) < 1e-3:
        return
    f = index_zero_quotient(z, t)
    assert abs(index_zero_quotient(z + 1, t) - f) < 1e-10
    assert abs(index_zero_quotient(z + tau, t) - f) < 1e-10


@pytest.mark.parametrize("tau", [1j, 0.3 + 1.1j])
def test_index_zero_quotient_lattice_form(tau, rng):
    t = make_tau(tau)
    z = rng.uniform(-1, 1, 10) + 1j * rng.uniform(-1, 1, 10)
    eta1, _ = quasi_periods(t)
    lattice_form = zeta_lattice(z, t) - eta1 * z + 2j * PI * z.imag / t.imag
    assert np.max(np.abs(index_zero_quotient(z, t) - lattice_form)) < 1e-4


def test_index_zero_quotient_pole():
    t = make_tau(0.3 + 1.1j)
    with pytest.raises(PoleAtLatticePoint):
        index_zero_quotient(2 - t.tau, t)


def test_qseries_zeta_identity_tight(rng):
    # quotient + eta1*z with eta1 = pi^2 E2/3, against the mpmath oracle
    from conftest import mp_zeta, mp_wp

    t = make_tau(0.3 + 1.1j)
    for z in rng.uniform(-1, 1, 5) + 1j * rng.uniform(-1, 1, 5):
        assert abs(modular.zeta_qseries(z, t) - mp_zeta(z, t.tau)) < 1e-10
        assert abs(modular.wp_qseries(z, t) - mp_wp(z, t.tau)) < 1e-9


def test_sigma_qseries_at_small_z(tau_i):
    h = 1e-4
    assert abs(modular.sigma_qseries(h, tau_i) / h - 1) < 1e-6


# ---- theta-sigma identity ----

def test_theta_sigma_residual_at_zero(tau_i):
    assert abs(theta_sigma_residual(0, tau_i)) < 1e-12


def test_theta_sigma_residual_random(tau_i, rng):
    r = 0.75 * np.sqrt(rng.uniform(size=50))
    z = r * np.exp(2j * PI * rng.uniform(size=50))
    res = theta_sigma_residual(z, tau_i)
    assert np.all(np.abs(res) <= 1e-5 * (1 + np.abs(jacobi_theta(z, tau_i))))


def test_theta_sigma_derivative_at_zero(tau_i):
    eta = dedekind_eta(tau_i)
    assert abs(theta_prime(0, tau_i) + 2 * PI * eta**3) < 1e-9


def test_theta_sigma_residual_accepts_policy():
    policy = TruncationPolicy(shell_radius=300)
    res = theta_sigma_residual(np.array([0.3 + 0.2j]), 0.2 + 1.1j, policy)
    assert res.shape == (1,)
    assert abs(res[0]) < 1e-5
