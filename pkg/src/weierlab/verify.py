"""Executable identity checks over seeded (tau, z) samples.

Each check evaluates one identity on a batch of random points and records
the largest absolute residual.  Checks run in registry order and are fully
deterministic given the :class:`SampleSpec` seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import modular
from .lattice import (
    DEFAULT_POLICY,
    TauParameter,
    TruncationPolicy,
    lattice_distance,
    make_tau,
)
from .modular import QSeriesTerms
from .weierstrass import (
    quasi_periods,
    s_regularized_sum,
    sigma_product,
    wp_lattice,
    zeta_hat,
    zeta_lattice,
)

__all__ = [
    "REGISTRY",
    "DEFAULT_TOLERANCES",
    "UnknownCheckName",
    "IdentityCheck",
    "SampleSpec",
    "sample_taus",
    "sample_points",
    "run_suite",
    "report_json",
    "report_lines",
]

REGISTRY = (
    "theorem1_shift1",
    "theorem1_shiftTau",
    "theorem1_general_w",
    "sigma_logderiv",
    "theta_sigma",
    "theta_quotient",
    "index_zero_periodic",
    "e2_quasiperiod",
    "s_equals_g2star",
    "legendre",
    "wp_is_minus_zeta_prime",
    "zetahat_antiholomorphic",
)

DEFAULT_TOLERANCES = {
    "theorem1_shift1": 1e-8,
    "theorem1_shiftTau": 1e-8,
    "theorem1_general_w": 1e-3,
    "sigma_logderiv": 1e-4,
    "theta_sigma": 1e-5,
    "theta_quotient": 1e-4,
    "index_zero_periodic": 1e-10,
    "e2_quasiperiod": 1e-4,
    "s_equals_g2star": 1e-2,
    "legendre": 1e-4,
    "wp_is_minus_zeta_prime": 1e-4,
    "zetahat_antiholomorphic": 1e-5,
}

# minimum distance from the lattice for sampled z
POLE_REJECTION = 1e-3
# finite-difference checks need room: the h^2 f''' error blows up near poles
FD_REJECTION = 0.3
THETA_SIGMA_RADIUS = 0.75
SHIFT_RANGE = 3


class UnknownCheckName(KeyError):
    pass


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    samples: int
    max_residual: float
    tolerance: float
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.max_residual <= self.tolerance))


@dataclass(frozen=True)
class SampleSpec:
    tau_count: int = 6
    z_count: int = 12
    seed: int = 42
    tau_box: tuple[float, float, float, float] = (-0.5, 0.5, 0.8, 2.0)
    z_radius: float = 1.5

    def __post_init__(self):
        re_min, re_max, im_min, im_max = self.tau_box
        if not (re_min <= re_max and 0 < im_min <= im_max):
            raise ValueError(f"bad tau box {self.tau_box}")
        if self.tau_count < 1 or self.z_count < 1:
            raise ValueError("sample counts must be positive")
        if not self.z_radius > 0:
            raise ValueError("z_radius must be positive")


def sample_taus(spec: SampleSpec) -> list[TauParameter]:
    rng = np.random.default_rng([spec.seed, 0])
    re_min, re_max, im_min, im_max = spec.tau_box
    re = rng.uniform(re_min, re_max, spec.tau_count)
    im = rng.uniform(im_min, im_max, spec.tau_count)
    return [make_tau(complex(a, b)) for a, b in zip(re, im)]


def sample_points(
    rng: np.random.Generator,
    tau: TauParameter,
    count: int,
    radius: float,
    min_distance: float = POLE_REJECTION,
) -> np.ndarray:
    """Uniform points of the disk |z| <= radius, at least min_distance off the lattice."""
    out: list[complex] = []
    while len(out) < count:
        r = radius * np.sqrt(rng.uniform(size=count))
        phi = rng.uniform(0.0, 2 * math.pi, size=count)
        z = r * np.exp(1j * phi)
        ok = lattice_distance(z, tau) >= min_distance
        out.extend(z[ok].tolist())
    return np.array(out[:count])


class _Context:
    def __init__(self, spec, policy, terms, taus, index):
        self.spec = spec
        self.policy = policy
        self.terms = terms
        self.taus = taus
        self.index = index

    def points(self, tau_index, radius=None, min_distance=POLE_REJECTION):
        rng = np.random.default_rng([self.spec.seed, 1 + self.index, tau_index])
        radius = self.spec.z_radius if radius is None else radius
        return sample_points(rng, self.taus[tau_index], self.spec.z_count, radius, min_distance)

    def per_tau(self, fn, **point_kw):
        residuals = []
        for i, tau in enumerate(self.taus):
            z = self.points(i, **point_kw)
            residuals.append(np.abs(np.asarray(fn(tau, z))).ravel())
        res = np.concatenate(residuals)
        return res.size, _max(res)


def _max(values) -> float:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    if np.any(np.isnan(values)):
        return math.nan
    return float(values.max())


def _zhat_q(ctx, z, tau):
    return zeta_hat(z, tau, ctx.policy, "qseries").total


def _theorem1_shift1(ctx):
    return ctx.per_tau(lambda tau, z: _zhat_q(ctx, z + 1, tau) - _zhat_q(ctx, z, tau))


def _theorem1_shift_tau(ctx):
    return ctx.per_tau(
        lambda tau, z: _zhat_q(ctx, z + tau.tau, tau) - _zhat_q(ctx, z, tau)
    )


def _shifts(tau: TauParameter) -> np.ndarray:
    r = range(-SHIFT_RANGE, SHIFT_RANGE + 1)
    return np.array([m + n * tau.tau for m in r for n in r if (m, n) != (0, 0)])


def _theorem1_general_w(ctx):
    def residual(tau, z):
        w = _shifts(tau)
        shifted = (z[:, None] + w[None, :]).ravel()
        both = zeta_hat(np.concatenate([z, shifted]), tau, ctx.policy, "lattice").total
        base, moved = both[: z.size], both[z.size:].reshape(z.size, w.size)
        return moved - base[:, None]

    return ctx.per_tau(residual)


def _sigma_logderiv(ctx, h=1e-5):
    def residual(tau, z):
        s = sigma_product(np.concatenate([z + h, z - h, z]), tau, ctx.policy)
        plus, minus, mid = np.split(s, 3)
        return (plus - minus) / (2 * h * mid) - modular.zeta_qseries(z, tau, ctx.terms)

    return ctx.per_tau(residual, min_distance=FD_REJECTION)


def _theta_sigma(ctx):
    def residual(tau, z):
        r = modular.theta_sigma_residual(z, tau, ctx.policy, ctx.terms)
        return np.abs(r) / (1 + np.abs(modular.jacobi_theta(z, tau, ctx.terms)))

    return ctx.per_tau(residual, radius=min(ctx.spec.z_radius, THETA_SIGMA_RADIUS))


def _theta_quotient(ctx):
    def residual(tau, z):
        return zeta_lattice(z, tau, ctx.policy) - modular.zeta_qseries(z, tau, ctx.terms)

    return ctx.per_tau(residual)


def _index_zero_periodic(ctx):
    def residual(tau, z):
        f = modular.index_zero_quotient(np.concatenate([z, z + 1, z + tau.tau]), tau, ctx.terms)
        base, one, shift_tau = np.split(f, 3)
        return np.maximum(np.abs(one - base), np.abs(shift_tau - base))

    return ctx.per_tau(residual)


def _per_tau_scalar(ctx, fn):
    res = [abs(fn(tau)) for tau in ctx.taus]
    return len(res), _max(res)


def _e2_quasiperiod(ctx):
    def residual(tau):
        eta1, _ = quasi_periods(tau, ctx.policy)
        return modular.eisenstein_e2(tau, ctx.terms) - 3 * eta1 / math.pi**2

    return _per_tau_scalar(ctx, residual)


def _s_equals_g2star(ctx):
    return _per_tau_scalar(
        ctx, lambda tau: s_regularized_sum(tau, ctx.policy) - modular.g2_star(tau, ctx.terms)
    )


def _legendre(ctx):
    def residual(tau):
        eta1, eta2 = quasi_periods(tau, ctx.policy)
        return eta1 * tau.tau - eta2 - 2j * math.pi

    return _per_tau_scalar(ctx, residual)


def _wp_is_minus_zeta_prime(ctx, h=1e-5):
    def residual(tau, z):
        zeta = zeta_lattice(np.concatenate([z + h, z - h]), tau, ctx.policy)
        plus, minus = np.split(zeta, 2)
        return wp_lattice(z, tau, ctx.policy) + (plus - minus) / (2 * h)

    return ctx.per_tau(residual, min_distance=FD_REJECTION)


def _zetahat_antiholomorphic(ctx, h=1e-4):
    def residual(tau, z):
        pts = np.concatenate([z + h, z - h, z + 1j * h, z - 1j * h])
        f = zeta_hat(pts, tau, ctx.policy, "lattice").total
        fx_plus, fx_minus, fy_plus, fy_minus = np.split(f, 4)
        d_x = (fx_plus - fx_minus) / (2 * h)
        d_y = (fy_plus - fy_minus) / (2 * h)
        wirtinger = 0.5 * (d_x + 1j * d_y)
        return wirtinger + math.pi / tau.imag

    return ctx.per_tau(residual, min_distance=FD_REJECTION)


_CHECKS: dict[str, Callable[[_Context], tuple[int, float]]] = {
    "theorem1_shift1": _theorem1_shift1,
    "theorem1_shiftTau": _theorem1_shift_tau,
    "theorem1_general_w": _theorem1_general_w,
    "sigma_logderiv": _sigma_logderiv,
    "theta_sigma": _theta_sigma,
    "theta_quotient": _theta_quotient,
    "index_zero_periodic": _index_zero_periodic,
    "e2_quasiperiod": _e2_quasiperiod,
    "s_equals_g2star": _s_equals_g2star,
    "legendre": _legendre,
    "wp_is_minus_zeta_prime": _wp_is_minus_zeta_prime,
    "zetahat_antiholomorphic": _zetahat_antiholomorphic,
}


def run_suite(
    spec: SampleSpec = SampleSpec(),
    policy: TruncationPolicy = DEFAULT_POLICY,
    terms: QSeriesTerms | None = None,
    selection: Iterable[str] | None = None,
    tol_scale: float = 1.0,
    tolerances: dict[str, float] | None = None,
) -> list[IdentityCheck]:
    """Run the selected checks (all of them for ``None`` or an empty set).

    Results come back in registry order whatever order ``selection`` uses.
    """
    chosen = set(selection or ())
    unknown = chosen.difference(REGISTRY)
    if unknown:
        raise UnknownCheckName(", ".join(sorted(unknown)))
    if not chosen:
        chosen = set(REGISTRY)
    if spec.tau_box[2] < policy.min_im_tau:
        raise ValueError("tau box reaches below the Im(tau) domain guard")
    if terms is None:
        terms = QSeriesTerms.from_policy(policy)
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    taus = sample_taus(spec)

    results = []
    for index, name in enumerate(REGISTRY):
        if name not in chosen:
            continue
        ctx = _Context(spec, policy, terms, taus, index)
        count, worst = _CHECKS[name](ctx)
        results.append(IdentityCheck(name, count, worst, tol[name] * tol_scale))
    return results


def _number(x: float):
    return x if math.isfinite(x) else None


def report_json(checks: Iterable[IdentityCheck]) -> bytes:
    checks = list(checks)
    doc = {
        "checks": [
            {
                "name": c.name,
                "samples": c.samples,
                "max_residual": _number(c.max_residual),
                "tolerance": _number(c.tolerance),
                "passed": c.passed,
            }
            for c in checks
        ],
        "all_passed": all(c.passed for c in checks),
    }
    return (json.dumps(doc, allow_nan=False) + "\n").encode("ascii")


def report_lines(checks: Iterable[IdentityCheck]) -> list[str]:
    return [
        f"{'PASS' if c.passed else 'FAIL'}  {c.name:<26} n={c.samples:<5d} "
        f"max_residual={c.max_residual:.3e}  tol={c.tolerance:.1e}"
        for c in checks
    ]
