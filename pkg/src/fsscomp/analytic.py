"""Closed-form phase average over exponential emission delays.

For ``t ~ Exp(mean tau)`` the characteristic function is
``E[exp(i*w*t)] = 1 / (1 - i*w*tau)``. The total phase is affine in two
independent delays, so the averaged coherence is a product of two such
factors times the constant phase.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from .cascade import CascadeParams
from .core_state import DensityMatrix

__all__ = [
    "analytic_coherence",
    "analytic_density",
    "coherence_density",
    "gated_coherence",
]


def analytic_coherence(
    d_omega1: float, d_omega2: float, const_phase: float, p: CascadeParams
) -> complex:
    """Expected ``exp(i*Phi)`` for residual slopes on t2 (d_omega1) and t1 (d_omega2)."""
    return cmath.exp(1j * const_phase) / (
        (1 - 1j * d_omega2 * p.tau_xx) * (1 - 1j * d_omega1 * p.tau_x)
    )


def coherence_density(c: complex) -> DensityMatrix:
    """Density matrix of the phase-averaged ``(|HH> + e^{i Phi}|VV>)/sqrt(2)``.

    The ket outer product puts ``<e^{-i Phi}>`` on the HH,VV entry, so ``c``
    sits below the diagonal and its conjugate above.
    """
    if abs(c) > 1 + 1e-12:
        raise ValueError(f"|c| must not exceed 1, got {abs(c)!r}")
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[3, 3] = 0.5
    m[0, 3] = 0.5 * np.conj(c)
    m[3, 0] = 0.5 * c
    return DensityMatrix(m)


def analytic_density(
    d_omega1: float, d_omega2: float, const_phase: float, p: CascadeParams
) -> DensityMatrix:
    return coherence_density(analytic_coherence(d_omega1, d_omega2, const_phase, p))


def gated_coherence(t_gate: float, omega: float, tau: float) -> tuple[complex, float]:
    """Coherence and acceptance when keeping only pairs with ``t2 < t_gate``.

    Returns ``(c, acceptance)`` where ``c = E[exp(i*omega*t2) | t2 < t_gate]``.
    """
    if not t_gate > 0:
        raise ValueError(f"t_gate must be > 0, got {t_gate!r}")
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau!r}")
    if math.isinf(t_gate):
        return 1 / (1 - 1j * omega * tau), 1.0
    x = t_gate / tau
    acceptance = -math.expm1(-x)
    numer = -_expm1c(complex(-x, omega * t_gate))
    c = numer / (1 - 1j * omega * tau) / acceptance
    return c, acceptance


def _expm1c(z: complex) -> complex:
    """``exp(z) - 1`` without cancellation for small ``|z|``."""
    x, y = z.real, z.imag
    em1 = math.expm1(x)
    s = math.sin(0.5 * y)
    return complex(em1 * math.cos(y) - 2.0 * s * s, math.exp(x) * math.sin(y))
