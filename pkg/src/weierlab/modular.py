"""q-series side: Jacobi theta, Dedekind eta, E2/G2/G2*, and the raising operator.

The theta function is normalised as

    theta(z; tau) = sum_{n in 1/2 + Z} exp(pi*i*n^2*tau + 2*pi*i*n*(z + 1/2)),

so that it is odd in ``z``, vanishes exactly on the lattice and satisfies
``theta(z+1) = -theta(z)``, ``theta(z+tau) = -exp(-pi*i*tau - 2*pi*i*z) theta(z)``.

Nothing in this module calls a lattice sum except :func:`theta_sigma_residual`,
whose whole purpose is to compare the two families.  In particular the
quasi-period used on the q-series side is always ``G2(tau)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import (
    DEFAULT_POLICY,
    PoleAtLatticePoint,
    TauParameter,
    TauTooCloseToRealAxis,
    TruncationPolicy,
    lattice_distance,
    make_tau,
)

__all__ = [
    "QSeriesTerms",
    "DEFAULT_TERMS",
    "ZETA_TWO",
    "divisor_sums",
    "jacobi_theta",
    "theta_prime",
    "theta_double_prime",
    "theta_log_derivative",
    "dedekind_eta",
    "eisenstein_e2",
    "g2",
    "g2_star",
    "raise_theta",
    "index_zero_quotient",
    "zeta_qseries",
    "wp_qseries",
    "sigma_qseries",
    "theta_sigma_residual",
]

ZETA_TWO = math.pi**2 / 6

POLE_RADIUS = 1e-12


@dataclass(frozen=True)
class QSeriesTerms:
    """Term count for the q-series plus the Im(tau) domain guard."""

    count: int = 64
    min_im_tau: float = 0.05

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ValueError("count must be a positive integer")

    @classmethod
    def from_policy(cls, policy: TruncationPolicy) -> "QSeriesTerms":
        return cls(policy.q_terms, policy.min_im_tau)

    def tail_bound(self, tau: TauParameter) -> float:
        """Size of the first omitted theta term relative to the leading one."""
        return abs(tau.q) ** (self.count**2 / 4)


DEFAULT_TERMS = QSeriesTerms()


def _coerce(tau, terms):
    if terms is None:
        terms = DEFAULT_TERMS
    elif isinstance(terms, TruncationPolicy):
        terms = QSeriesTerms.from_policy(terms)
    elif isinstance(terms, int):
        terms = QSeriesTerms(terms)
    tau = make_tau(tau)
    if tau.imag < terms.min_im_tau:
        raise TauTooCloseToRealAxis(
            f"Im(tau) = {tau.imag!r} below q-series guard {terms.min_im_tau!r}"
        )
    return tau, terms


def _unwrap(z, value):
    return complex(value) if np.ndim(z) == 0 else value


def _theta_sums(z, tau: TauParameter, terms: QSeriesTerms, orders=(0, 1)):
    """Scaled partial sums of the theta series and its z-derivatives.

    Returns ``(log_scale, {k: S_k})`` with ``theta^(k)(z) = exp(log_scale) * S_k``.
    Each row is scaled by its own largest term so that points far from the
    real axis neither overflow nor lose the dominant terms.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex)).ravel()
    # the dominant index sits near -Im(z)/Im(tau); widen the symmetric window
    extra = int(math.ceil(np.max(np.abs(z.imag)) / tau.imag)) if z.size else 0
    half = terms.count + extra
    n = np.arange(-half, half) + 0.5
    expo = (
        1j * np.pi * n**2 * tau.tau
        + 2j * np.pi * n * (z[:, None] + 0.5)
    )
    shift = expo.real.max(axis=1)
    base = np.exp(expo - shift[:, None])
    sums = {}
    for k in orders:
        weight = (2j * np.pi * n) ** k
        sums[k] = base @ weight
    return shift, sums


def jacobi_theta(z, tau, terms: QSeriesTerms | None = None):
    tau, terms = _coerce(tau, terms)
    shift, s = _theta_sums(z, tau, terms, (0,))
    out = np.exp(shift) * s[0]
    return _unwrap(z, out.reshape(np.shape(z)))


def theta_prime(z, tau, terms: QSeriesTerms | None = None):
    """z-derivative of :func:`jacobi_theta`, summed term by term."""
    tau, terms = _coerce(tau, terms)
    shift, s = _theta_sums(z, tau, terms, (1,))
    out = np.exp(shift) * s[1]
    return _unwrap(z, out.reshape(np.shape(z)))


def theta_double_prime(z, tau, terms: QSeriesTerms | None = None):
    tau, terms = _coerce(tau, terms)
    shift, s = _theta_sums(z, tau, terms, (2,))
    out = np.exp(shift) * s[2]
    return _unwrap(z, out.reshape(np.shape(z)))


def _check_poles(z, tau):
    if np.any(lattice_distance(z, tau) < POLE_RADIUS):
        raise PoleAtLatticePoint("theta vanishes on the lattice; quotient undefined")


def theta_log_derivative(z, tau, terms: QSeriesTerms | None = None):
    """theta'/theta, computed as a ratio of the scaled sums."""
    tau, terms = _coerce(tau, terms)
    _check_poles(z, tau)
    _, s = _theta_sums(z, tau, terms, (0, 1))
    out = s[1] / s[0]
    return _unwrap(z, out.reshape(np.shape(z)))


def dedekind_eta(tau, terms: QSeriesTerms | None = None) -> complex:
    tau, terms = _coerce(tau, terms)
    n = np.arange(1, terms.count + 1)
    # q^(1/24) taken from tau itself, not from a branch of log(q)
    prefactor = np.exp(2j * np.pi * tau.tau / 24)
    return complex(prefactor * np.prod(1 - np.exp(2j * np.pi * n * tau.tau)))


@lru_cache(maxsize=16)
def _divisor_sums(count: int) -> np.ndarray:
    sig = np.zeros(count + 1, dtype=np.int64)
    for d in range(1, count + 1):
        sig[d::d] += d
    sig.flags.writeable = False
    return sig


def divisor_sums(count: int) -> np.ndarray:
    """sigma_1(n) for n = 0..count (entry 0 is 0), by a sieve."""
    return _divisor_sums(int(count)).copy()


def eisenstein_e2(tau, terms: QSeriesTerms | None = None) -> complex:
    """E2(tau) = 1 - 24 * sum_{n<=M} sigma_1(n) q^n."""
    tau, terms = _coerce(tau, terms)
    sig = _divisor_sums(terms.count)[1:]
    n = np.arange(1, terms.count + 1)
    qn = np.exp(2j * np.pi * n * tau.tau)
    # smallest terms first
    return complex(1 - 24 * np.sum((sig * qn)[::-1]))


def g2(tau, terms: QSeriesTerms | None = None) -> complex:
    return 2 * ZETA_TWO * eisenstein_e2(tau, terms)


def g2_star(tau, terms: QSeriesTerms | None = None) -> complex:
    """Non-holomorphic completion G2 - pi/Im(tau); weight-2 modular."""
    tau, terms = _coerce(tau, terms)
    return g2(tau, terms) - math.pi / tau.imag


def raise_theta(z, tau, terms: QSeriesTerms | None = None):
    """theta' + 2*pi*i * (Im z / Im tau) * theta."""
    tau, terms = _coerce(tau, terms)
    shift, s = _theta_sums(z, tau, terms, (0, 1))
    zi = np.atleast_1d(np.asarray(z, dtype=complex)).ravel().imag
    out = np.exp(shift) * (s[1] + 2j * np.pi * zi / tau.imag * s[0])
    return _unwrap(z, out.reshape(np.shape(z)))


def index_zero_quotient(z, tau, terms: QSeriesTerms | None = None):
    """Raised theta divided by theta.  Doubly periodic in ``z``."""
    tau, terms = _coerce(tau, terms)
    zi = np.asarray(z, dtype=complex).imag
    return theta_log_derivative(z, tau, terms) + 2j * np.pi * zi / tau.imag


def zeta_qseries(z, tau, terms: QSeriesTerms | None = None):
    """Weierstrass zeta rebuilt from theta: theta'/theta + G2 * z."""
    tau, terms = _coerce(tau, terms)
    return theta_log_derivative(z, tau, terms) + g2(tau, terms) * np.asarray(z)


def wp_qseries(z, tau, terms: QSeriesTerms | None = None):
    """Weierstrass wp as -(theta'/theta)' - G2."""
    tau, terms = _coerce(tau, terms)
    _check_poles(z, tau)
    _, s = _theta_sums(z, tau, terms, (0, 1, 2))
    ratio = s[1] / s[0]
    out = -(s[2] / s[0] - ratio**2) - g2(tau, terms)
    return _unwrap(z, out.reshape(np.shape(z)))


def sigma_qseries(z, tau, terms: QSeriesTerms | None = None):
    """Weierstrass sigma from theta, with G2 standing in for the quasi-period."""
    tau, terms = _coerce(tau, terms)
    z_arr = np.asarray(z, dtype=complex)
    eta = dedekind_eta(tau, terms)
    th = jacobi_theta(z_arr, tau, terms)
    out = th * np.exp(g2(tau, terms) * z_arr**2 / 2) / (-2 * math.pi * eta**3)
    return _unwrap(z, out)


def theta_sigma_residual(
    z,
    tau,
    policy: TruncationPolicy = DEFAULT_POLICY,
    terms: QSeriesTerms | None = None,
):
    """theta(z) + 2*pi*eta^3 * exp(-eta1*z^2/2) * sigma(z).

    sigma is the lattice product and eta1 the lattice quasi-period, so this
    residual mixes the two computation families on purpose.
    """
    from .weierstrass import quasi_periods, sigma_product

    if terms is None:
        terms = QSeriesTerms.from_policy(policy)
    tau, terms = _coerce(tau, terms)
    z_arr = np.asarray(z, dtype=complex)
    eta1, _ = quasi_periods(tau, policy)
    eta = dedekind_eta(tau, terms)
    rhs = -2 * math.pi * eta**3 * np.exp(-eta1 * z_arr**2 / 2) * sigma_product(z_arr, tau, policy)
    return _unwrap(z, jacobi_theta(z_arr, tau, terms) - rhs)
