"""Discrete level structure behind the continuous canonical distribution.

The intrinsic weight g(E) is a comb of delta functions at ``E_n = (2n+1) e0``.
It is never tabulated; everything here acts through sums over the retained
levels, which is all the comb ever does inside an average.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from . import spectrum
from .errors import DomainError, NonFiniteError, TruncationError

MAX_LEVELS = 10_000_000
DEFAULT_TAIL_TOL = 1e-15


@dataclass(frozen=True)
class DiscreteSpectrum:
    e0: float
    beta: float
    n_max: int
    levels: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    log_z: float = 0.0  # ln of the dimensionless partition sum over retained levels

    @property
    def z(self) -> float:
        return math.exp(self.log_z)

    @property
    def ratio(self) -> float:
        """Geometric ratio ``w_{n+1}/w_n = exp(-2 e0 beta)``."""
        return math.exp(-2.0 * self.e0 * self.beta)

    def shannon_entropy(self) -> float:
        """``-sum w_n ln w_n`` over the retained levels (units of k)."""
        w = self.weights[self.weights > 0]
        return -math.fsum(w * np.log(w))


def levels_needed(e0: float, beta: float, tail_tol: float = DEFAULT_TAIL_TOL) -> int:
    """Smallest ``n_max`` whose discarded geometric tail is below ``tail_tol``."""
    # tail fraction beyond n_max is r**(n_max+1), r = exp(-2 e0 beta)
    log_r = -2.0 * e0 * beta
    return max(0, math.ceil(math.log(tail_tol) / log_r) - 1)


def build_spectrum(e0: float, beta: float, tail_tol: float = DEFAULT_TAIL_TOL) -> DiscreteSpectrum:
    """Truncated levels and normalized weights at inverse temperature ``beta``.

    The weights are formed by direct exponentiation and summation of the
    Boltzmann factors rather than from the geometric-series closed form, so
    the result can serve as an independent check on :mod:`spectrum`.
    """
    if not e0 > 0:
        raise DomainError(f"e0 must be positive, got {e0!r}")
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    if not 0 < tail_tol < 1:
        raise DomainError(f"tail_tol must lie in (0, 1), got {tail_tol!r}")
    n_max = levels_needed(e0, beta, tail_tol)
    if n_max > MAX_LEVELS:
        raise TruncationError(
            f"e0*beta = {e0 * beta:.3g} needs {n_max} levels for tail_tol={tail_tol:g} "
            f"(cap {MAX_LEVELS}); use the classical branch at such high temperature"
        )
    n = np.arange(n_max + 1, dtype=float)
    levels = (2.0 * n + 1.0) * e0
    # factors relative to the ground level keep the sum O(1) at any beta
    rel = np.exp(-beta * (levels - e0))
    total = math.fsum(rel)
    weights = rel / total
    log_z = -beta * e0 + math.log(total)
    return DiscreteSpectrum(e0, beta, n_max, levels, weights, log_z)


def discrete_average(spec: DiscreteSpectrum, f: Callable) -> float:
    """``sum_n w_n f(E_n)``: the canonical average of ``f`` over the level comb.

    ``f`` may be vectorized or scalar; a constant function returns its value
    exactly.
    """
    try:
        values = np.asarray(f(spec.levels), dtype=float)
        if values.shape != spec.levels.shape:
            values = np.broadcast_to(values, spec.levels.shape)
    except (TypeError, ValueError):
        values = np.array([f(e) for e in spec.levels], dtype=float)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        n = int(bad[0])
        raise NonFiniteError(f"f(E_{n}) = f({spec.levels[n]!r}) is {values[n]!r}")
    if values.size and np.all(values == values[0]):
        return float(values[0])
    return math.fsum(spec.weights * values)


def mean_occupation(e0: float, beta: float) -> float:
    """Mean thermal quantum number ``1/(exp(2 e0 beta) - 1)``."""
    if not (e0 > 0 and beta > 0):
        raise DomainError(f"e0 and beta must be positive, got e0={e0!r}, beta={beta!r}")
    x = e0 * beta
    return math.exp(-2.0 * x) / -math.expm1(-2.0 * x)


def verify_lng_constancy(e0: float, betas: Sequence[float]) -> float:
    """Check that the average log intrinsic weight does not depend on temperature.

    The thermodynamic potential is rebuilt by integrating ``phi' = -U/(omega k)``
    from the first temperature in ``betas``; the implied constant
    ``ln Z_g - phi`` is then compared across all points.  Returns the largest
    spread, which vanishes when the partition function and the mean energy are
    mutually consistent with a constant average.
    """
    betas = [float(b) for b in betas]
    if len(betas) < 2:
        raise DomainError("need at least two inverse temperatures")
    ref = betas[0]
    log_zg_ref = spectrum.log_partition_function(e0, ref)

    def mean_energy(b):
        return spectrum.planck_mean_energy(e0, b)

    offsets = []
    for b in betas:
        # dz = omega k dbeta, so integral of U/(omega k) dz is integral of U dbeta
        if b == ref:
            phi_shift = 0.0
        else:
            val, _ = integrate.quad(mean_energy, ref, b, epsabs=1e-14, epsrel=1e-13, limit=200)
            phi_shift = -val
        offsets.append(spectrum.log_partition_function(e0, b) - log_zg_ref - phi_shift)
    return max(offsets) - min(offsets)
