"""Statistical description with temperature-independent fluctuations.

The energy follows the exponential law ``W_s(E) = exp(-E/U)/U`` with ``U``
the full Planck mean energy.  Its variance ``U**2`` splits into a thermal part
``U_T**2 + 2 e0 U_T`` and a zero-point part ``e0**2`` with no covariance
between them.  Only variances are decomposed; no joint law of the two parts
is assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from . import spectrum
from .errors import DomainError


@dataclass(frozen=True)
class FluctuationDecomposition:
    u_total: float
    u_thermal: float
    e0: float
    var_total: float
    var_thermal: float
    var_zero_point: float
    covariance: float


def ws_density(e, u: float):
    """Exponential energy density; zero for negative energies."""
    if not u > 0:
        raise DomainError(f"mean energy must be positive, got {u!r}")
    e = np.asarray(e, dtype=float)
    out = np.where(e >= 0, np.exp(-np.maximum(e, 0.0) / u) / u, 0.0)
    return float(out) if out.ndim == 0 else out


def ws_cdf(e, u: float):
    if not u > 0:
        raise DomainError(f"mean energy must be positive, got {u!r}")
    e = np.asarray(e, dtype=float)
    out = np.where(e >= 0, -np.expm1(-np.maximum(e, 0.0) / u), 0.0)
    return float(out) if out.ndim == 0 else out


def decompose_fluctuations(e0: float, beta: float) -> FluctuationDecomposition:
    if e0 < 0:
        raise DomainError(f"e0 must be non-negative, got {e0!r}")
    if e0 == 0:
        u_t = spectrum.planck_mean_energy(0.0, beta)
    else:
        u_t = spectrum.thermal_mean_energy(e0, beta)
    u = u_t + e0
    var_total = u * u
    var_thermal = u_t * u_t + 2.0 * e0 * u_t
    var_zp = e0 * e0
    cov = 0.5 * (var_total - var_thermal - var_zp)
    return FluctuationDecomposition(u, u_t, e0, var_total, var_thermal, var_zp, cov)


def statistical_entropy(u: float, k: float = 1.0) -> float:
    """Differential entropy ``k ln U + k`` of the exponential law."""
    if not u > 0:
        raise DomainError(f"mean energy must be positive, got {u!r}")
    return k * math.log(u) + k


def density_moment(pdf: Callable[[float], float], upper: float, power: int = 1) -> float:
    """``int_0^upper E**power pdf(E) dE`` by adaptive quadrature."""
    val, _ = integrate.quad(lambda e: e**power * pdf(e), 0.0, upper, epsabs=1e-13, epsrel=1e-11, limit=200)
    return val


def density_entropy(pdf: Callable[[float], float], upper: float, k: float = 1.0) -> float:
    """``-k int p ln p`` over ``[0, upper]`` by adaptive quadrature."""

    def integrand(e):
        p = pdf(e)
        return -p * math.log(p) if p > 0 else 0.0

    val, _ = integrate.quad(integrand, 0.0, upper, epsabs=1e-13, epsrel=1e-11, limit=200)
    return k * val


def ws_entropy_by_quadrature(u: float, k: float = 1.0) -> float:
    """Entropy of ``W_s`` integrated on ``[0, 50u]`` plus the analytic tail.

    Beyond ``L = 50u`` the integrand ``p(E/u + ln u)`` integrates to
    ``e^{-L/u} (L/u + 1 + ln u)``.
    """
    upper = 50.0 * u
    body = density_entropy(lambda e: ws_density(e, u), upper, k=1.0)
    tail = math.exp(-50.0) * (50.0 + 1.0 + math.log(u))
    return k * (body + tail)
