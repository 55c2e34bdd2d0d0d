"""Closed-form equilibrium thermodynamics of a single oscillator.

Energies are measured in the same units as ``e0`` and inverse temperatures
in reciprocal energy (Boltzmann's constant absorbed into ``beta``).  Every
hyperbolic function is rewritten in terms of ``exp(-2x)`` and ``expm1`` with
``x = e0*beta`` so that the same expression is accurate for ``x -> 0`` and
does not overflow for ``x`` in the hundreds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class OscillatorModel:
    """Fixed parameters of one oscillator species."""

    omega: float
    hbar: float = 1.0
    k: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        for name in ("omega", "hbar", "k", "mass"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")

    @classmethod
    def from_e0(cls, e0: float, hbar: float = 1.0, k: float = 1.0, mass: float = 1.0):
        return cls(omega=2.0 * e0 / hbar, hbar=hbar, k=k, mass=mass)

    @property
    def e0(self) -> float:
        return zero_point_energy(self)


@dataclass(frozen=True)
class ThermoPoint:
    beta: float
    u: float
    sigma2: float
    cv: float
    s: float
    z: float


def _check_beta(beta):
    if np.any(np.asarray(beta) <= 0) or np.any(~np.isfinite(np.asarray(beta))):
        raise DomainError(f"beta must be positive and finite, got {beta!r}")


def _check_e0(e0, strict=False):
    if not math.isfinite(e0) or e0 < 0 or (strict and e0 == 0):
        bound = "positive" if strict else "non-negative"
        raise DomainError(f"e0 must be {bound}, got {e0!r}")


def _scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def _thermal(e0, beta):
    # 2 e0 / (exp(2x) - 1) written as (y / (1 - e^-y)) e^-y / beta, y = 2x;
    # stays finite when x underflows (tends to 1/beta) and for large x
    y = 2.0 * e0 * beta
    safe = np.where(y > 0, y, 1.0)
    ratio = np.where(y > 0, safe / -np.expm1(-safe), 1.0)
    return ratio * np.exp(-y) / beta


def zero_point_energy(model: OscillatorModel) -> float:
    return 0.5 * model.hbar * model.omega


def planck_mean_energy(e0: float, beta):
    """Mean energy ``e0*coth(e0*beta)``; equipartition ``1/beta`` when ``e0 == 0``."""
    _check_beta(beta)
    _check_e0(e0)
    beta = np.asarray(beta, dtype=float)
    if e0 == 0:
        return _scalar(1.0 / beta)
    return _scalar(e0 + _thermal(e0, beta))


def thermal_mean_energy(e0: float, beta):
    """Planck law without the zero-point term, ``2 e0 / (exp(2 e0 beta) - 1)``."""
    _check_beta(beta)
    _check_e0(e0, strict=True)
    beta = np.asarray(beta, dtype=float)
    return _scalar(_thermal(e0, beta))


def wien_approximation(e0: float, beta):
    """Low-temperature exponential law ``2 e0 exp(-2 e0 beta)``.

    Its relative shortfall against :func:`thermal_mean_energy` is exactly
    ``exp(-2 e0 beta)``.
    """
    _check_beta(beta)
    _check_e0(e0, strict=True)
    beta = np.asarray(beta, dtype=float)
    return _scalar(2.0 * e0 * np.exp(-2.0 * e0 * beta))


def energy_variance(e0: float, beta):
    """Thermal energy variance ``U**2 - e0**2 = e0**2 csch**2(e0 beta)``."""
    _check_beta(beta)
    _check_e0(e0)
    beta = np.asarray(beta, dtype=float)
    if e0 == 0:
        u = 1.0 / beta  # sigma^2 = U^2 bit for bit in the classical limit
        return _scalar(u * u)
    x = e0 * beta
    return _scalar(4.0 * e0**2 * np.exp(-2.0 * x) / np.expm1(-2.0 * x) ** 2)


def log_partition_function(e0: float, beta):
    """``ln Z_g`` with ``Z_g = e0 / sinh(e0 beta)``, or ``-ln beta`` when ``e0 == 0``."""
    _check_beta(beta)
    _check_e0(e0)
    beta = np.asarray(beta, dtype=float)
    if e0 == 0:
        return _scalar(-np.log(beta))
    x = e0 * beta
    log_sinh = x + np.log(-np.expm1(-2.0 * x)) - math.log(2.0)
    return _scalar(math.log(e0) - log_sinh)


def partition_function(e0: float, beta):
    """Partition function ``Z_g``, evaluated through its logarithm.

    For ``e0*beta`` beyond roughly 700 the value underflows gracefully to 0;
    use :func:`log_partition_function` when the magnitude matters there.
    """
    return _scalar(np.exp(log_partition_function(e0, beta)))


def entropy(e0: float, beta, k: float = 1.0):
    """Thermal entropy ``k[-ln(2 sinh x) + x coth x]`` with ``x = e0 beta``; zero at T=0."""
    _check_beta(beta)
    _check_e0(e0, strict=True)
    x = e0 * np.asarray(beta, dtype=float)
    one_minus_r = -np.expm1(-2.0 * x)
    s = -np.log(one_minus_r) + 2.0 * x * np.exp(-2.0 * x) / one_minus_r
    return _scalar(k * s)


def heat_capacity(e0: float, beta, k: float = 1.0):
    """``C_V = k beta**2 sigma**2``; tends to ``k`` at high and 0 at low temperature."""
    _check_e0(e0)
    if e0 == 0:
        _check_beta(beta)
        return _scalar(k * np.ones_like(np.asarray(beta, dtype=float)))
    beta = np.asarray(beta, dtype=float)
    return _scalar(k * beta**2 * energy_variance(e0, beta))


def thermo_point(e0: float, beta: float, k: float = 1.0) -> ThermoPoint:
    """All equilibrium quantities at one inverse temperature.

    The classical branch (``e0 == 0``) has no absolute entropy; there ``s`` is
    reported as ``k(ln Z_g + beta U)`` with the intrinsic-weight constant set
    to zero.
    """
    u = planck_mean_energy(e0, beta)
    if e0 > 0:
        s = entropy(e0, beta, k)
    else:
        s = k * (log_partition_function(0.0, beta) + beta * u)
    return ThermoPoint(
        beta=float(beta),
        u=u,
        sigma2=energy_variance(e0, beta),
        cv=heat_capacity(e0, beta, k),
        s=s,
        z=partition_function(e0, beta),
    )


def wien_scaling_check(model: OscillatorModel, scale: float, beta: float) -> float:
    """Residual of the displacement-law scaling ``U(s w, s T)/(s w) = U(w, T)/w``."""
    if not scale > 0:
        raise DomainError(f"scale must be positive, got {scale!r}")
    _check_beta(beta)
    e0 = model.e0
    base = planck_mean_energy(e0, beta) / model.omega
    scaled_model = OscillatorModel(model.omega * scale, model.hbar, model.k, model.mass)
    # T -> sT means beta -> beta/s
    scaled = planck_mean_energy(scaled_model.e0, beta / scale) / scaled_model.omega
    return abs(scaled - base)
