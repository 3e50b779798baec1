"""Monte Carlo averaging of photon-pair density matrices.

Events are drawn in fixed-size batches. Batch ``b`` draws from its own
generator seeded by ``(seed, b)``, and batch sums are folded in ascending
order, so results do not depend on how many workers computed them.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cascade import CascadeParams, sample_emissions
from .compensation import RampParams, total_phase_array
from .core_state import DensityMatrix

__all__ = ["McConfig", "McResult", "average_density", "batch_rng", "convergence_metric"]

logger = logging.getLogger(__name__)

_SQ = 1.0 / np.sqrt(2.0)
_DENOM_FLOOR = 1e-12


@dataclass(frozen=True)
class McConfig:
    seed: int = 0
    batch_size: int = 10_000
    rel_tol: float = 1e-6
    max_samples: int = 100_000_000

    def __post_init__(self):
        if int(self.seed) != self.seed:
            raise ValueError(f"seed must be an integer, got {self.seed!r}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size!r}")
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol!r}")
        if self.max_samples < self.batch_size:
            raise ValueError("max_samples must be >= batch_size")


@dataclass(frozen=True)
class McResult:
    rho: DensityMatrix
    n_samples: int
    converged: bool
    last_rel_change: float


def convergence_metric(prev, curr) -> float:
    """Largest elementwise change relative to the largest previous element."""
    a = np.asarray(prev, dtype=complex)
    b = np.asarray(curr, dtype=complex)
    denom = max(float(np.max(np.abs(a))), _DENOM_FLOOR)
    return float(np.max(np.abs(b - a))) / denom


def batch_rng(seed: int, batch: int) -> np.random.Generator:
    """Independent stream for batch ``batch`` of a run seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence([int(seed) % 2**64, batch]))


def _batch_sum(p: CascadeParams, r: RampParams, cfg: McConfig, b: int) -> np.ndarray:
    t1, t2 = sample_emissions(p, batch_rng(cfg.seed, b), cfg.batch_size)
    phi = total_phase_array(r, p, t1, t2)
    kets = np.zeros((cfg.batch_size, 4), dtype=complex)
    kets[:, 0] = _SQ
    kets[:, 3] = np.exp(1j * phi) * _SQ
    return np.einsum("ni,nj->ij", kets, kets.conj())


class _PairwiseSum:
    """Online pairwise summation: partial sums merged like a binary counter."""

    def __init__(self):
        self._stack: list[tuple[int, np.ndarray]] = []

    def add(self, x: np.ndarray):
        size, value = 1, x
        while self._stack and self._stack[-1][0] == size:
            prev_size, prev = self._stack.pop()
            value = prev + value
            size += prev_size
        self._stack.append((size, value))

    def total(self) -> np.ndarray:
        acc = np.zeros((4, 4), dtype=complex)
        for _, value in self._stack:
            acc = acc + value
        return acc


def average_density(
    p: CascadeParams, r: RampParams, cfg: McConfig = McConfig(), n_jobs: int = 1
) -> McResult:
    """Average the compensated pair density matrix over sampled emission events.

    Stops once successive running means differ by less than ``cfg.rel_tol``
    (see :func:`convergence_metric`) or when ``cfg.max_samples`` is reached;
    the latter is reported with ``converged=False``.
    """
    n_jobs = max(1, int(n_jobs))
    max_batches = cfg.max_samples // cfg.batch_size
    acc = _PairwiseSum()
    prev_mean = None
    change = float("inf")
    n_batches = 0
    converged = False

    def batches(start, stop):
        idx = range(start, stop)
        if n_jobs == 1:
            return map(lambda b: _batch_sum(p, r, cfg, b), idx)
        return pool.map(lambda b: _batch_sum(p, r, cfg, b), idx)

    pool = ThreadPoolExecutor(max_workers=n_jobs) if n_jobs > 1 else None
    chunk = 4 * n_jobs
    try:
        while n_batches < max_batches and not converged:
            stop = min(n_batches + chunk, max_batches)
            for s in batches(n_batches, stop):
                acc.add(s)
                n_batches += 1
                mean = acc.total() / (n_batches * cfg.batch_size)
                if prev_mean is not None:
                    change = convergence_metric(prev_mean, mean)
                    if change < cfg.rel_tol:
                        converged = True
                        break
                prev_mean = mean
    finally:
        if pool is not None:
            pool.shutdown(wait=True, cancel_futures=True)

    if not converged:
        logger.warning(
            "Monte Carlo average not converged after %d samples (last change %.3g)",
            n_batches * cfg.batch_size,
            change,
        )
    rho = 0.5 * (mean + mean.conj().T)
    return McResult(
        rho=DensityMatrix(rho),
        n_samples=n_batches * cfg.batch_size,
        converged=converged,
        last_rel_change=change,
    )
