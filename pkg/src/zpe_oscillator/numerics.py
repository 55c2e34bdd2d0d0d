"""Small numerical helpers shared by the verification routines."""

from __future__ import annotations

from typing import Callable


def fd_step(beta: float) -> float:
    """Default finite-difference step in inverse temperature."""
    return max(1e-6, 1e-4 * beta)


def central_difference(f: Callable[[float], float], x: float, h: float) -> float:
    """Central difference with one Richardson extrapolation (error O(h^4))."""
    d_h = (f(x + h) - f(x - h)) / (2.0 * h)
    d_half = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h
    return (4.0 * d_half - d_h) / 3.0


def relative_gap(a: float, b: float) -> float:
    """|a - b| scaled by the larger magnitude; 0 when both vanish."""
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale
