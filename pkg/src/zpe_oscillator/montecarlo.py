"""Seeded Monte Carlo oracles for the energy distributions.

Every sampler takes an :class:`RngContract` ``(seed, stream_id)`` and draws
from a PCG64 generator whose seed sequence is keyed by both, so equal
contracts give bit-identical batches and distinct stream ids give independent
streams.  Only uniform variates are taken from the generator; geometric,
exponential and normal variates are built from them by explicit transforms.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .errors import DomainError
from .phase_space import PhaseSpaceGaussian

MODE_CHUNK = 1 << 21  # phasors per chunk in the interference experiment


@dataclass(frozen=True)
class RngContract:
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        if self.stream_id < 0:
            raise DomainError(f"stream_id must be non-negative, got {self.stream_id!r}")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, stream_id: int) -> "RngContract":
        return RngContract(self.seed, stream_id)


@dataclass(frozen=True)
class SampleBatch:
    label: str
    n: int
    mean: float
    variance: float
    std_error: float
    seed: int
    stream_id: int = 0
    variance_std_error: float = float("nan")
    draws: np.ndarray | None = field(default=None, repr=False, compare=False)
    aux: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def degenerate(self) -> bool:
        """True for a single-draw batch, which carries no variance estimate."""
        return self.n < 2

    def record(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "mean": self.mean,
            "variance": self.variance,
            "std_error": self.std_error,
            "variance_std_error": self.variance_std_error,
            "seed": self.seed,
            "stream_id": self.stream_id,
        }


def batch_from_draws(label: str, draws: np.ndarray, rng: RngContract, keep: bool = True, **aux) -> SampleBatch:
    draws = np.asarray(draws, dtype=float)
    n = draws.size
    if n == 0:
        raise DomainError("empty sample")
    mean = float(draws.mean())
    if n < 2:
        variance = std_error = var_se = float("nan")
    else:
        centered = draws - mean
        m2 = float(np.mean(centered**2))
        m4 = float(np.mean(centered**4))
        variance = m2 * n / (n - 1)
        std_error = math.sqrt(variance / n)
        var_se = math.sqrt(max(m4 - m2 * m2, 0.0) / n)
    return SampleBatch(label, n, mean, variance, std_error, rng.seed, rng.stream_id,
                       var_se, draws if keep else None, dict(aux))


def merge_batches(batches: Sequence[SampleBatch]) -> SampleBatch:
    """Pool batches in the given order (pairwise mean/variance update).

    The fourth-moment error bar is not recoverable from the summaries and is
    reported as NaN unless every batch kept its draws.
    """
    if not batches:
        raise DomainError("nothing to merge")
    if all(b.draws is not None for b in batches):
        first = batches[0]
        merged = batch_from_draws(first.label, np.concatenate([b.draws for b in batches]),
                                  RngContract(first.seed, first.stream_id))
        return merged
    n, mean, m2 = 0, 0.0, 0.0
    for b in batches:
        b_m2 = 0.0 if b.n < 2 else b.variance * (b.n - 1)
        total = n + b.n
        delta = b.mean - mean
        mean += delta * b.n / total
        m2 += b_m2 + delta * delta * n * b.n / total
        n = total
    variance = m2 / (n - 1) if n > 1 else float("nan")
    std_error = math.sqrt(variance / n) if n > 1 else float("nan")
    first = batches[0]
    return SampleBatch(first.label, n, mean, variance, std_error, first.seed, first.stream_id)


def run_chains(sampler: Callable[[RngContract], SampleBatch], rng: RngContract, n_chains: int,
               max_workers: int | None = None) -> SampleBatch:
    """Run ``sampler`` on streams ``rng.stream_id + i`` and merge in stream order.

    The result does not depend on how the chains are scheduled.
    """
    contracts = [rng.child(rng.stream_id + i) for i in range(n_chains)]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        batches = list(pool.map(sampler, contracts))
    return merge_batches(batches)


def _open_uniform(gen: np.random.Generator, size) -> np.ndarray:
    # (0, 1]: safe under log
    return 1.0 - gen.random(size)


def standard_normal_pairs(gen: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Two independent standard-normal arrays of length ``n`` (Box-Muller)."""
    radius = np.sqrt(-2.0 * np.log(_open_uniform(gen, n)))
    angle = 2.0 * math.pi * gen.random(n)
    return radius * np.cos(angle), radius * np.sin(angle)


def _check_n(n):
    if n < 1 or int(n) != n:
        raise DomainError(f"sample count must be a positive integer, got {n!r}")
    return int(n)


def sample_level_indices(e0: float, beta: float, n: int, rng: RngContract) -> np.ndarray:
    """Geometric quantum numbers ``P(k) = (1 - r) r^k``, ``r = exp(-2 e0 beta)``."""
    n = _check_n(n)
    if not (e0 > 0 and beta > 0):
        raise DomainError(f"need e0 > 0 and beta > 0, got e0={e0!r}, beta={beta!r}")
    gen = rng.generator()
    # P(K >= k) = r^k, so K = floor(ln V / ln r) for V uniform on (0, 1]
    return np.floor(np.log(_open_uniform(gen, n)) / (-2.0 * e0 * beta))


def sample_discrete_levels(e0: float, beta: float, n: int, rng: RngContract) -> SampleBatch:
    k = sample_level_indices(e0, beta, n, rng)
    energies = (2.0 * k + 1.0) * e0
    return batch_from_draws("discrete_levels", energies, rng, indices=k)


def sample_ws(u: float, n: int, rng: RngContract) -> SampleBatch:
    """Exponential energies with mean ``u`` by inverse transform."""
    n = _check_n(n)
    if not u > 0:
        raise DomainError(f"mean energy must be positive, got {u!r}")
    energies = -u * np.log(_open_uniform(rng.generator(), n))
    return batch_from_draws("ws", energies, rng)


def sample_phase_space(g: PhaseSpaceGaussian, n: int, rng: RngContract) -> SampleBatch:
    """Independent normal momenta and positions; the batch summarizes their energies.

    The raw ``p`` and ``q`` draws are kept in ``aux``.
    """
    n = _check_n(n)
    z_p, z_q = standard_normal_pairs(rng.generator(), n)
    p = math.sqrt(g.var_p) * z_p
    q = math.sqrt(g.var_q) * z_q
    return batch_from_draws("phase_space", g.energy(p, q), rng, p=p, q=q)


def interference_energies(n_modes: int, n_samples: int, rng: RngContract) -> np.ndarray:
    """``|sum_j exp(i theta_j)|^2 / n_modes`` for independent uniform phases.

    Phases and partial sums are single precision to keep 10^9 phasors
    affordable; the resulting energies carry ~1e-6 relative rounding, far
    below any statistical resolution used here.
    """
    gen = rng.generator()
    rows = max(1, MODE_CHUNK // n_modes)
    out = np.empty(n_samples)
    two_pi = np.float32(2.0 * math.pi)
    for start in range(0, n_samples, rows):
        m = min(rows, n_samples - start)
        phases = gen.random((m, n_modes), dtype=np.float32) * two_pi
        re = np.cos(phases).sum(axis=1, dtype=np.float64)
        im = np.sin(phases).sum(axis=1, dtype=np.float64)
        out[start:start + m] = (re * re + im * im) / n_modes
    return out


def mode_interference_experiment(n_modes: int, n_samples: int, rng: RngContract) -> SampleBatch:
    if n_modes < 2 or int(n_modes) != n_modes:
        raise DomainError(f"need at least two modes, got {n_modes!r}")
    n_samples = _check_n(n_samples)
    energies = interference_energies(int(n_modes), n_samples, rng)
    return batch_from_draws("mode_interference", energies, rng, n_modes=int(n_modes))


def relative_variance(batch: SampleBatch) -> float:
    return batch.variance / batch.mean**2


def ks_statistic(samples: np.ndarray, cdf: Callable[[np.ndarray], np.ndarray]) -> float:
    """One-sample Kolmogorov-Smirnov distance ``sup |F_n - F|``."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    f = cdf(x)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))


def ks_critical_value(n: int, alpha: float = 0.01) -> float:
    """Asymptotic critical distance, ``1.628/sqrt(n)`` at the 1% level."""
    return float(stats.kstwobign.isf(alpha)) / math.sqrt(n)


def exponential_ks(samples: np.ndarray, mean: float, alpha: float = 0.01) -> tuple[float, float]:
    """(statistic, critical value) of a KS test against ``Exp(mean)``."""
    stat = ks_statistic(samples, lambda x: -np.expm1(-x / mean))
    return stat, ks_critical_value(len(samples), alpha)


def within_standard_errors(estimate: float, expected: float, std_error: float, k: float = 4.0) -> bool:
    if std_error == 0.0 or not math.isfinite(std_error):
        return estimate == expected
    return abs(estimate - expected) <= k * std_error
