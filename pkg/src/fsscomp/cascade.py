"""Quantum-dot biexciton-exciton cascade with fine structure splitting.

Units: time in ns, energy in ueV, angular frequency in rad/ns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core_state import TwoPhotonKet, ket_from_phase

__all__ = [
    "HBAR_UEV_NS",
    "CascadeParams",
    "EmissionEvent",
    "precession_rate",
    "raw_pair_state",
    "sample_emission",
    "sample_emissions",
]

#: Reduced Planck constant in ueV*ns (CODATA 2018).
HBAR_UEV_NS = 0.6582119569


@dataclass(frozen=True)
class CascadeParams:
    """Emitter parameters.

    ``fss`` is the magnitude of the splitting; its orientation is carried by
    the sign of the compensating ramp. ``exciton_energy`` is only needed for
    :func:`fsscomp.compensation.instantaneous_frequencies`.
    """

    fss: float
    tau_x: float = 1.0
    tau_xx: float = 0.5
    exciton_energy: Optional[float] = None

    def __post_init__(self):
        for name in ("fss", "tau_x", "tau_xx"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.fss < 0:
            raise ValueError(f"fss must be >= 0, got {self.fss!r}")
        if self.tau_x <= 0:
            raise ValueError(f"tau_x must be > 0, got {self.tau_x!r}")
        if self.tau_xx <= 0:
            raise ValueError(f"tau_xx must be > 0, got {self.tau_xx!r}")


@dataclass(frozen=True)
class EmissionEvent:
    t1: float
    t2: float

    def __post_init__(self):
        if not (self.t1 >= 0 and self.t2 >= 0):
            raise ValueError(f"emission delays must be >= 0, got {self.t1!r}, {self.t2!r}")


def precession_rate(p: CascadeParams) -> float:
    """Spin precession rate FSS/hbar in rad/ns."""
    return p.fss / HBAR_UEV_NS


def _exponential(rng: np.random.Generator, tau: float, size=None):
    # inverse transform on u in (0, 1]
    u = 1.0 - rng.random(size)
    return -tau * np.log(u)


def sample_emission(p: CascadeParams, rng: np.random.Generator) -> EmissionEvent:
    """Draw one (t1, t2) pair: t1 from the biexciton, t2 from the exciton lifetime."""
    t1 = float(_exponential(rng, p.tau_xx))
    t2 = float(_exponential(rng, p.tau_x))
    return EmissionEvent(t1, t2)


def sample_emissions(p: CascadeParams, rng: np.random.Generator, n: int):
    """Vectorized :func:`sample_emission`; returns arrays ``(t1, t2)``.

    Draws are interleaved per event so that the first ``k`` events match ``k``
    successive calls to :func:`sample_emission` on the same stream.
    """
    u = 1.0 - rng.random((n, 2))
    t1 = -p.tau_xx * np.log(u[:, 0])
    t2 = -p.tau_x * np.log(u[:, 1])
    return t1, t2


def raw_pair_state(p: CascadeParams, e: EmissionEvent) -> TwoPhotonKet:
    """Photon-pair state without compensation; depends only on t2."""
    return ket_from_phase(precession_rate(p) * e.t2)
