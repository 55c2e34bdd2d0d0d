"""From a quadratic energy-variance law to the equilibrium mean energy.

The variance is assumed to be a polynomial of degree two in the mean energy,
``sigma^2(U) = a0 + a1 U + a2 U^2``.  Combined with ``sigma^2 = -dU/dbeta`` this
is a Riccati equation whose solution is a shifted hyperbolic cotangent.  The
displacement-law check shows that the linear coefficient must vanish, and
matching the classical limit fixes ``a2 = 1``, leaving Planck's law with the
zero-point energy.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConvergenceError, DomainError

Q_ZERO_TOL = 1e-14


@dataclass(frozen=True)
class VarianceAnsatz:
    """Coefficients of ``sigma^2(U) = a0 + a1 U + a2 U^2``."""

    a0: float
    a1: float
    a2: float

    def __post_init__(self):
        if self.q < -Q_ZERO_TOL:
            raise DomainError(
                f"discriminant q = {self.q:g} < 0: no real zero of the variance "
                f"(a0={self.a0}, a1={self.a1}, a2={self.a2})"
            )

    @property
    def q(self) -> float:
        return self.a1**2 - 4.0 * self.a0 * self.a2

    @property
    def is_classical(self) -> bool:
        return abs(self.q) <= Q_ZERO_TOL

    @property
    def sqrt_q(self) -> float:
        return 0.0 if self.is_classical else math.sqrt(self.q)

    def roots(self) -> tuple[float, float]:
        """Zeros ``(U_-, U_+)`` of the variance law."""
        _require_a2(self)
        shift = -self.a1 / (2.0 * self.a2)
        half = self.sqrt_q / (2.0 * self.a2)
        return shift - half, shift + half

    @classmethod
    def from_ground_energy(cls, e0: float, a1: float = 0.0, a2: float = 1.0) -> "VarianceAnsatz":
        """Ansatz whose largest variance zero is ``e0`` for the given ``a1``, ``a2``."""
        if a1 + 2.0 * a2 * e0 < 0:
            raise DomainError("e0 would be the smaller root for these coefficients")
        return cls(a0=-a1 * e0 - a2 * e0**2, a1=a1, a2=a2)


class LawKind(enum.Enum):
    EQUIPARTITION = "equipartition"
    PLANCK_FAMILY = "planck-family"


@dataclass(frozen=True)
class EquilibriumLaw:
    kind: LawKind
    e0: float


def _require_a2(ansatz):
    if not ansatz.a2 > 0:
        raise DomainError(f"a2 must be positive (variance grows with energy), got {ansatz.a2!r}")


def equilibrium_law(ansatz: VarianceAnsatz) -> EquilibriumLaw:
    """Classify the ansatz and pick the physical (largest) root as ground energy."""
    _, upper = ansatz.roots()
    kind = LawKind.EQUIPARTITION if ansatz.is_classical else LawKind.PLANCK_FAMILY
    return EquilibriumLaw(kind, upper)


def derive_planck_ansatz(e0: float) -> VarianceAnsatz:
    """The ansatz selected by parity and the classical limit: ``(-e0**2, 0, 1)``."""
    if e0 < 0:
        raise DomainError(f"e0 must be non-negative, got {e0!r}")
    return VarianceAnsatz(a0=-(e0**2), a1=0.0, a2=1.0)


def solve_mean_energy(ansatz: VarianceAnsatz, beta):
    """Closed-form solution of ``dU/dbeta = -(a0 + a1 U + a2 U^2)``.

    ``q = 0`` gives ``1/(a2 beta) - a1/(2 a2)``; ``q > 0`` gives
    ``(sqrt(q)/2a2) coth(sqrt(q) beta / 2) - a1/(2 a2)``.
    """
    _require_a2(ansatz)
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0):
        raise DomainError(f"beta must be positive, got {beta!r}")
    a1, a2 = ansatz.a1, ansatz.a2
    shift = a1 / (2.0 * a2)
    if ansatz.is_classical:
        u = 1.0 / (a2 * beta) - shift
    else:
        half = ansatz.sqrt_q / (2.0 * a2)
        y = ansatz.sqrt_q * beta  # coth(y/2) = 1 + 2 e^{-y}/(1 - e^{-y})
        u = half * (1.0 + 2.0 * np.exp(-y) / -np.expm1(-y)) - shift
    return float(u) if u.ndim == 0 else u


def variance_from_u(ansatz: VarianceAnsatz, u):
    return ansatz.a0 + ansatz.a1 * u + ansatz.a2 * u * u


def variance_about_root(ansatz: VarianceAnsatz, excess):
    """The variance law in terms of ``excess = U - e0`` above the physical root.

    Re-expanding about the root drops the constant term, which is zero by
    construction, so thermal-scale variances keep full relative precision
    even when ``excess`` is far below ``e0`` times machine epsilon.  For the
    Planck ansatz this is ``U_T^2 + 2 e0 U_T``.
    """
    root = ansatz.roots()[1]
    return (ansatz.a1 + 2.0 * ansatz.a2 * root) * excess + ansatz.a2 * excess * excess


def dispersion_vs_beta(ansatz: VarianceAnsatz, beta):
    """Variance as a function of temperature, ``(q/4a2)(coth^2(sqrt(q) beta/2) - 1)``.

    The classical branch returns ``1/(a2 beta^2)``.
    """
    _require_a2(ansatz)
    beta = np.asarray(beta, dtype=float)
    if np.any(beta <= 0):
        raise DomainError(f"beta must be positive, got {beta!r}")
    if ansatz.is_classical:
        out = 1.0 / (ansatz.a2 * beta**2)
    else:
        y = ansatz.sqrt_q * beta
        # coth^2(y/2) - 1 = csch^2(y/2) = 4 e^{-y} / (1 - e^{-y})^2
        out = ansatz.q / (4.0 * ansatz.a2) * 4.0 * np.exp(-y) / np.expm1(-y) ** 2
    return float(out) if out.ndim == 0 else out


def wien_consistency_residual(ansatz: VarianceAnsatz, e0: float | None, beta: float) -> float:
    """Scale-free residual of the displacement-law condition on the general solution.

    With ``c = e0 + a1/(2 a2)`` and ``x = a2 c beta`` the condition reads
    ``a2 e0 c beta + (a1/2a2)[sinh(2x)/2 - sinh^2 x] = a2 c^2 beta``; the
    returned value is ``(lhs - rhs) / (a2 e0^2 beta)``.  It is zero at every
    temperature only when ``a1 = 0``.  ``e0=None`` takes the ansatz's own
    largest root.
    """
    _require_a2(ansatz)
    if ansatz.is_classical:
        raise DomainError("the displacement-law residual needs q > 0")
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    root = ansatz.roots()[1]
    if e0 is None:
        e0 = root
    elif not math.isclose(e0, root, rel_tol=1e-9, abs_tol=1e-12):
        raise DomainError(f"e0={e0!r} is not the largest variance zero ({root!r}) of the ansatz")
    a1, a2 = ansatz.a1, ansatz.a2
    shift = a1 / (2.0 * a2)
    c = e0 + shift
    x = a2 * c * beta
    # sinh(2x)/2 - sinh(x)^2 = sinh(x) e^{-x} = (1 - e^{-2x})/2, finite for any x
    bracket = -math.expm1(-2.0 * x) / 2.0
    lhs = a2 * e0 * c * beta + shift * bracket
    rhs = a2 * c * c * beta
    return (lhs - rhs) / (a2 * e0 * e0 * beta)


def integrate_mean_energy(ansatz: VarianceAnsatz, betas, beta0: float = 1e-6, rtol: float = 1e-10, atol: float = 1e-12):
    """Numerical route: integrate ``dU/dbeta = -sigma^2(U)`` from a high-temperature anchor.

    Starts at ``beta0`` with ``U = 1/(a2 beta0) - a1/(2 a2)`` and integrates in
    ``ln beta`` with an embedded Runge-Kutta pair.  Perturbations of the
    anchor decay like ``(beta0/beta)^2``, so the O(beta0) anchor error is
    invisible by ``beta ~ 1e-2``.
    """
    _require_a2(ansatz)
    betas = np.atleast_1d(np.asarray(betas, dtype=float))
    if np.any(betas <= beta0):
        raise DomainError(f"all betas must exceed the anchor beta0={beta0}")
    a0, a1, a2 = ansatz.a0, ansatz.a1, ansatz.a2
    order = np.argsort(betas)
    s_eval = np.log(betas[order])
    u0 = 1.0 / (a2 * beta0) - a1 / (2.0 * a2)

    def rhs(s, u):
        b = math.exp(s)
        return -b * (a0 + a1 * u + a2 * u * u)

    sol = solve_ivp(rhs, (math.log(beta0), s_eval[-1]), [u0], method="DOP853",
                    t_eval=s_eval, rtol=rtol, atol=atol)
    if not sol.success:
        raise ConvergenceError(f"ODE integration failed: {sol.message}")
    out = np.empty_like(betas)
    out[order] = sol.y[0]
    return out
