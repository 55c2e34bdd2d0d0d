"""Statistical thermodynamics of the harmonic oscillator with zero-point energy."""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError, NonFiniteError, TruncationError
from .spectrum import (
    OscillatorModel,
    ThermoPoint,
    energy_variance,
    entropy,
    heat_capacity,
    partition_function,
    planck_mean_energy,
    thermal_mean_energy,
    thermo_point,
    wien_approximation,
    zero_point_energy,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "NonFiniteError",
    "TruncationError",
    "OscillatorModel",
    "ThermoPoint",
    "energy_variance",
    "entropy",
    "heat_capacity",
    "partition_function",
    "planck_mean_energy",
    "thermal_mean_energy",
    "thermo_point",
    "wien_approximation",
    "zero_point_energy",
]
