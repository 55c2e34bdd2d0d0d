"""Energy moments and the derivative identities they obey.

Averages are level sums over :func:`discrete_spectrum.build_spectrum`;
temperature derivatives are central differences (step ``1e-4*beta``,
Richardson-extrapolated once), never symbolic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .discrete_spectrum import DEFAULT_TAIL_TOL, build_spectrum, discrete_average
from .errors import DomainError
from .numerics import central_difference

MAX_ORDER = 12


@dataclass(frozen=True)
class MomentTable:
    e0: float
    beta: float
    orders: tuple
    values: tuple

    def __getitem__(self, r):
        return self.values[self.orders.index(r)]


def _moment_spectrum(e0: float, beta: float, r: int):
    """Levels for ``<E^r>``: the weight cut-off is tightened until the dropped
    tail is negligible for ``E^r``, which grows along the tail."""
    tol = DEFAULT_TAIL_TOL
    spec = build_spectrum(e0, beta, tol)
    mean = discrete_average(spec, lambda e: e)
    for _ in range(8):
        # tail terms beyond E_cut are enhanced by at most ~(E_cut/<E>)^r (plus
        # the sum over the tail); demand that the enhanced tail stays small
        boost = (spec.levels[-1] / mean + 2.0) ** r
        if boost * tol <= DEFAULT_TAIL_TOL:
            break
        tol = max(DEFAULT_TAIL_TOL / boost, 1e-300)
        spec = build_spectrum(e0, beta, tol)
    return spec


def energy_moment(e0: float, beta: float, r: int) -> float:
    """``<E**r>`` by summation over the discrete levels."""
    if r < 0 or r > MAX_ORDER or int(r) != r:
        raise DomainError(f"moment order must be an integer in [0, {MAX_ORDER}], got {r!r}")
    r = int(r)
    return discrete_average(_moment_spectrum(e0, beta, r), lambda e: e**r)


def moment_table(e0: float, beta: float, orders: Sequence[int] = range(MAX_ORDER + 1)) -> MomentTable:
    orders = tuple(int(r) for r in orders)
    for r in orders:
        if r < 0 or r > MAX_ORDER:
            raise DomainError(f"moment order out of range: {r}")
    spec = _moment_spectrum(e0, beta, max(orders, default=0))
    values = tuple(discrete_average(spec, lambda e, r=r: e**r) for r in orders)
    return MomentTable(e0, beta, orders, values)


def _beta_derivative(g: Callable[[float], float], beta: float) -> float:
    return central_difference(g, beta, 1e-4 * beta)


def _finish(lhs, rhs, relative):
    diff = lhs - rhs
    if not relative:
        return diff
    scale = max(abs(lhs), abs(rhs))
    return diff / scale if scale else 0.0


def recurrence_residual(e0: float, beta: float, r: int, relative: bool = False) -> float:
    """``<E^{r+1}> - (<E><E^r> - d<E^r>/dbeta)``.

    With ``relative=True`` the residual is divided by the larger of the two
    sides, which keeps tolerances meaningful across orders.
    """
    if r < 1 or r > MAX_ORDER - 1:
        raise DomainError(f"recurrence order must lie in [1, {MAX_ORDER - 1}], got {r!r}")
    spec = _moment_spectrum(e0, beta, r + 1)
    lhs = discrete_average(spec, lambda e: e ** (r + 1))
    mean = discrete_average(spec, lambda e: e)
    m_r = discrete_average(spec, lambda e: e**r)
    slope = _beta_derivative(lambda b: energy_moment(e0, b, r), beta)
    return _finish(lhs, mean * m_r - slope, relative)


def covariance_identity_residual(e0: float, beta: float, g: Callable, relative: bool = False) -> float:
    """``-d<G>/dbeta - cov(E, G)``; vanishes for any smooth ``G``."""
    spec = build_spectrum(e0, beta)
    mean_e = discrete_average(spec, lambda e: e)
    mean_g = discrete_average(spec, g)
    cov = discrete_average(spec, lambda e: (e - mean_e) * (g(e) - mean_g))
    slope = _beta_derivative(lambda b: discrete_average(build_spectrum(e0, b), g), beta)
    return _finish(-slope, cov, relative)
