"""Planck's interpolation route and Einstein's fluctuation formula, numerically.

The entropy curvature ``d2S/dU_T2 = -k/(U_T^2 + 2 e0 U_T)`` interpolates
between the Rayleigh-Jeans limit ``-k/U_T^2`` and the Wien limit
``-k/(2 e0 U_T)``.  Integrating it once (anchored to the Wien-regime slope
at a tiny thermal energy) and solving ``dS/dU_T = 1/T`` recovers the thermal
Planck law without using its closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from . import spectrum
from .errors import ConvergenceError, DomainError

# Wien-regime anchor for dS/dU_T; its error is O(U_ref/e0) in the slope
ANCHOR_FRACTION = 1e-12


@dataclass(frozen=True)
class InterpolationCurve:
    e0: float
    u_grid: np.ndarray
    d2s_values: np.ndarray
    beta_of_u: np.ndarray


def planck_d2s(u_t, e0: float, k: float = 1.0):
    u_t = np.asarray(u_t, dtype=float)
    if np.any(u_t <= 0):
        raise DomainError("the entropy curvature is singular at U_T = 0")
    out = -k / (u_t * u_t + 2.0 * e0 * u_t)
    return float(out) if out.ndim == 0 else out


def wien_entropy_slope(u_t: float, e0: float, k: float = 1.0) -> float:
    """dS/dU_T implied by Wien's exponential law alone."""
    return -k / (2.0 * e0) * math.log(u_t / (2.0 * e0))


def entropy_slope(u_t: float, e0: float, k: float = 1.0) -> float:
    """dS/dU_T from integrating the interpolated curvature.

    Integration runs in ``ln U_T``, where the integrand ``-k/(U_T + 2 e0)``
    is smooth, starting from the Wien-regime slope at ``U_ref = 1e-12 e0``.
    """
    if not (u_t > 0 and e0 > 0):
        raise DomainError(f"need u_t > 0 and e0 > 0, got u_t={u_t!r}, e0={e0!r}")
    u_ref = ANCHOR_FRACTION * e0
    val, _ = integrate.quad(
        lambda t: -k / (math.exp(t) + 2.0 * e0),
        math.log(u_ref), math.log(u_t),
        epsabs=1e-15, epsrel=1e-13, limit=200,
    )
    return wien_entropy_slope(u_ref, e0, k) + val


def reconstruct_planck_from_interpolation(e0: float, beta: float, k: float = 1.0) -> float:
    """Thermal energy at ``beta`` from ``dS/dU_T = 1/T = k beta``.

    Root-finding is done in ``ln U_T`` with Brent's method after an expanding
    bracket search; the slope is strictly decreasing in ``U_T``.
    """
    if not (e0 > 0 and beta > 0):
        raise DomainError(f"need e0 > 0 and beta > 0, got e0={e0!r}, beta={beta!r}")
    target = k * beta

    def gap(t):
        return entropy_slope(math.exp(t), e0, k) - target

    lo = hi = math.log(e0)
    step = 1.0
    for _ in range(200):
        if gap(lo) > 0:
            break
        lo -= step
        step *= 2.0
    else:
        raise ConvergenceError(f"no lower bracket for beta={beta!r} (reached ln U_T={lo:g})")
    step = 1.0
    for _ in range(200):
        if gap(hi) < 0:
            break
        hi += step
        step *= 2.0
    else:
        raise ConvergenceError(f"no upper bracket for beta={beta!r} (reached ln U_T={hi:g})")
    try:
        t, info = optimize.brentq(gap, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps,
                                  maxiter=200, full_output=True)
    except (ValueError, RuntimeError) as exc:
        raise ConvergenceError(f"root finding failed in bracket [{lo:g}, {hi:g}] (ln U_T): {exc}") from exc
    if not info.converged:
        raise ConvergenceError(f"root finding did not converge in bracket [{lo:g}, {hi:g}] (ln U_T)")
    return math.exp(t)


def interpolation_curve(e0: float, u_grid, k: float = 1.0) -> InterpolationCurve:
    u_grid = np.asarray(u_grid, dtype=float)
    d2s = planck_d2s(u_grid, e0, k)
    betas = np.array([entropy_slope(float(u), e0, k) / k for u in u_grid])
    return InterpolationCurve(e0, u_grid, np.atleast_1d(d2s), betas)


def einstein_terms(u_t: float, e0: float) -> tuple[float, float]:
    """(wave, particle) contributions ``(U_T^2, 2 e0 U_T)`` to the thermal variance."""
    if u_t < 0:
        raise DomainError(f"thermal energy must be non-negative, got {u_t!r}")
    return u_t * u_t, 2.0 * e0 * u_t


def einstein_fluctuation(u_t: float, e0: float) -> float:
    wave, particle = einstein_terms(u_t, e0)
    return wave + particle


def crossover_temperature(e0: float) -> float:
    """Inverse temperature where the wave and particle terms are equal (``U_T = 2 e0``).

    Found by bracketed root-finding on the thermal Planck law; the closed
    form is ``ln(2)/(2 e0)``.
    """
    if not e0 > 0:
        raise DomainError(f"e0 must be positive, got {e0!r}")

    def gap(b):
        return spectrum.thermal_mean_energy(e0, b) - 2.0 * e0

    lo, hi = 1e-3 / e0, 1.0 / e0
    while gap(hi) > 0:
        hi *= 2.0
    return optimize.brentq(gap, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)
