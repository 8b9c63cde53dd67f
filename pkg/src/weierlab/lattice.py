"""Geometry of the lattice Z + Z*tau.

Everything here is a pure function of its inputs.  The lattice is always
normalised so that its first period is 1; ``tau`` lives in the upper
half-plane.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "NotInUpperHalfPlane",
    "TauTooCloseToRealAxis",
    "PoleAtLatticePoint",
    "TauParameter",
    "LatticeVector",
    "TruncationPolicy",
    "DEFAULT_POLICY",
    "make_tau",
    "shell_vectors",
    "shell_indices",
    "reduce_mod_lattice",
    "lattice_distance",
    "volume",
    "parse_complex",
    "format_complex",
]


class NotInUpperHalfPlane(ValueError):
    """Raised when a lattice parameter does not satisfy Im(tau) > 0."""


class TauTooCloseToRealAxis(NotInUpperHalfPlane):
    """Im(tau) is positive but below the configured domain guard."""


class PoleAtLatticePoint(ValueError):
    """Raised when a meromorphic function is evaluated on (or next to) a pole."""


@dataclass(frozen=True)
class TauParameter:
    tau: complex
    q: complex

    @property
    def imag(self) -> float:
        return self.tau.imag

    @property
    def real(self) -> float:
        return self.tau.real

    def __complex__(self) -> complex:
        return self.tau


def make_tau(value, min_imag: float = 0.0) -> TauParameter:
    """Validate ``value`` as a point of the upper half-plane and cache its nome.

    ``min_imag`` is an optional extra guard; values with
    ``0 < Im(tau) < min_imag`` raise :class:`TauTooCloseToRealAxis`.
    """
    if isinstance(value, TauParameter):
        value = value.tau
    tau = complex(value)
    if not (tau.imag > 0.0) or not math.isfinite(tau.real):
        raise NotInUpperHalfPlane(f"tau = {tau!r} is not in the upper half-plane")
    if tau.imag < min_imag:
        raise TauTooCloseToRealAxis(
            f"Im(tau) = {tau.imag!r} is below the domain guard {min_imag!r}"
        )
    return TauParameter(tau=tau, q=complex(np.exp(2j * np.pi * tau)))


class LatticeVector(NamedTuple):
    m: int
    n: int

    def embed(self, tau: TauParameter | complex) -> complex:
        return self.m + self.n * complex(tau)

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(-self.m, -self.n)


@dataclass(frozen=True)
class TruncationPolicy:
    """Truncation parameters shared by the lattice and q-series evaluators.

    shell_radius
        Lattice sums and the sigma product run over ``0 < max(|m|,|n|) <= N``.
    q_terms
        Number of q-series terms (half-integer indices per side for theta).
    s_exponents
        Strictly decreasing exponents used to extrapolate the Hecke-regularised
        sum to ``s = 0``.
    min_im_tau
        Domain guard for the q-series evaluators.
    """

    shell_radius: int = 500
    q_terms: int = 64
    s_exponents: tuple[float, ...] = (0.5, 0.25, 0.125, 0.0625)
    min_im_tau: float = 0.05

    def __post_init__(self):
        if int(self.shell_radius) != self.shell_radius or self.shell_radius < 1:
            raise ValueError("shell_radius must be a positive integer")
        if int(self.q_terms) != self.q_terms or self.q_terms < 1:
            raise ValueError("q_terms must be a positive integer")
        s = tuple(float(x) for x in self.s_exponents)
        if not s or any(x <= 0 for x in s) or any(a <= b for a, b in zip(s, s[1:])):
            raise ValueError("s_exponents must be positive and strictly decreasing")
        object.__setattr__(self, "s_exponents", s)
        if not self.min_im_tau > 0:
            raise ValueError("min_im_tau must be positive")

    def with_shell_radius(self, n: int) -> "TruncationPolicy":
        return TruncationPolicy(n, self.q_terms, self.s_exponents, self.min_im_tau)


DEFAULT_POLICY = TruncationPolicy()


def shell_indices(n_max: int, n_min: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Integer coordinates of all shells ``n_min <= max(|m|,|n|) <= n_max``.

    Shells are emitted innermost first; inside a shell the order is fixed,
    so the output is deterministic.
    """
    if n_min < 1:
        raise ValueError("n_min must be >= 1")
    ms, ns = [], []
    for k in range(n_min, n_max + 1):
        side = np.arange(-k, k + 1)
        inner = np.arange(-k + 1, k)
        ms.extend((side, side, np.full(inner.size, k), np.full(inner.size, -k)))
        ns.extend((np.full(side.size, k), np.full(side.size, -k), inner, inner))
    if not ms:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    return np.concatenate(ms).astype(np.int64), np.concatenate(ns).astype(np.int64)


def shell_vectors(tau: TauParameter, n: int) -> list[LatticeVector]:
    """All nonzero lattice vectors with ``max(|m|,|n|) <= n``, shell by shell."""
    if n < 1:
        raise ValueError("shell radius must be >= 1")
    m_idx, n_idx = shell_indices(n)
    return [LatticeVector(int(a), int(b)) for a, b in zip(m_idx, n_idx)]


def _coordinates(z, tau: TauParameter):
    z = np.asarray(z, dtype=complex)
    b = z.imag / tau.imag
    a = z.real - b * tau.real
    return a, b


def reduce_mod_lattice(z, tau: TauParameter):
    """Write ``z = z0 + m + n*tau`` with ``z0 = a + b*tau``, ``a, b in [0, 1)``.

    Works elementwise on arrays; scalars in give scalars out.
    """
    a, b = _coordinates(z, tau)
    m = np.floor(a)
    n = np.floor(b)
    z0 = np.asarray(z, dtype=complex) - m - n * tau.tau
    if np.ndim(z0) == 0:
        return complex(z0), int(m), int(n)
    return z0, m.astype(np.int64), n.astype(np.int64)


def lattice_distance(z, tau: TauParameter):
    """Distance from ``z`` to the nearest point of the lattice."""
    z0, _, _ = reduce_mod_lattice(z, tau)
    z0 = np.asarray(z0, dtype=complex)
    best = np.full(z0.shape, np.inf)
    # the nearest lattice point to the reduced parallelogram lies in a 4x4 patch
    for m in range(-1, 3):
        for n in range(-1, 3):
            best = np.minimum(best, np.abs(z0 - (m + n * tau.tau)))
    return float(best) if best.ndim == 0 else best


def volume(tau: TauParameter) -> float:
    return tau.imag


_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>{_REAL})?(?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-])?i)?$"
)


def parse_complex(text: str, strict: bool = False) -> complex:
    """Parse ``a+bi`` / ``a-bi`` literals.

    Also accepted: a bare real ``a``, a pure imaginary ``bi`` and the
    coefficient-free forms ``i``, ``-i``, ``a+i``.  With ``strict=True`` an
    imaginary coefficient must be written out (``0+1i``, not ``i``).
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    match = _COMPLEX_RE.match(s)
    if match is None or s in {"+", "-"}:
        raise ValueError(f"malformed complex literal {text!r}")
    re_part, im_part = match.group("re"), match.group("im")
    has_i = s.endswith("i")
    if not has_i:
        return complex(float(re_part), 0.0)
    if im_part is None:
        # forms like "2.5i", "-3i", "i", "-i": the leading number is the
        # imaginary coefficient
        if re_part is None:
            if strict:
                raise ValueError(f"bare 'i' not allowed in {text!r}; write 0+1i")
            return complex(0.0, -1.0 if s.startswith("-") else 1.0)
        if strict:
            raise ValueError(f"write {text!r} as a+bi")
        return complex(0.0, float(re_part))
    if im_part in {"+", "-"}:
        if strict:
            raise ValueError(f"imaginary coefficient missing in {text!r}")
        im = 1.0 if im_part == "+" else -1.0
    else:
        im = float(im_part)
    if re_part is None:
        if im_part in {"+", "-"}:
            return complex(0.0, im)
        raise ValueError(f"malformed complex literal {text!r}")
    return complex(float(re_part), im)


def format_complex(z: complex) -> str:
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"
