"""Time-dependent differential phase ramps that cancel the FSS phase.

Each photon (biexciton XX, exciton X) and polarization (H, V) receives a
phase ``k * t + phi0`` from the compensating modulators. The pair state is
``(|HH> + exp(i*Phi)|VV>)/sqrt(2)`` with ``Phi`` affine in the random
emission delays; :func:`mismatch_of` returns the two slopes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .cascade import HBAR_UEV_NS, CascadeParams, EmissionEvent, precession_rate
from .core_state import TwoPhotonKet, ket_from_phase

__all__ = [
    "MismatchSpec",
    "RampParams",
    "compensated_pair_state",
    "constant_phase",
    "exciton_splitting",
    "ideal_ramp",
    "instantaneous_frequencies",
    "mismatch_of",
    "ramp_from_mismatch",
    "total_phase",
    "total_phase_array",
]


@dataclass(frozen=True)
class RampParams:
    k_vxx: float = 0.0
    k_hxx: float = 0.0
    k_vx: float = 0.0
    k_hx: float = 0.0
    phi0_vxx: float = 0.0
    phi0_hxx: float = 0.0
    phi0_vx: float = 0.0
    phi0_hx: float = 0.0
    t_prop_xx: float = 0.0
    t_prop_x: float = 0.0
    t_start_xx: float = 0.0
    t_start_x: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"ramp field {f.name} must be finite, got {value!r}")

    @property
    def dk_xx(self) -> float:
        return self.k_vxx - self.k_hxx

    @property
    def dk_x(self) -> float:
        return self.k_vx - self.k_hx


@dataclass(frozen=True)
class MismatchSpec:
    """Deviation from perfect compensation.

    ``d_omega1`` is the residual slope on the exciton delay t2, ``d_omega2``
    the residual slope on the biexciton delay t1, ``delta_t`` the timing
    offset between the two ramps.
    """

    d_omega1: float = 0.0
    d_omega2: float = 0.0
    delta_t: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value!r}")


def constant_phase(r: RampParams) -> float:
    """The part of the total phase that does not depend on t1, t2."""
    return (
        r.dk_xx * (r.t_prop_xx - r.t_start_xx)
        + r.dk_x * (r.t_prop_x - r.t_start_x)
        + (r.phi0_vxx - r.phi0_hxx + r.phi0_vx - r.phi0_hx)
    )


def total_phase(r: RampParams, p: CascadeParams, e: EmissionEvent) -> float:
    """Relative phase of |VV> against |HH> after the modulators."""
    return (
        (r.dk_xx + r.dk_x) * e.t1
        + (r.dk_x + precession_rate(p)) * e.t2
        + constant_phase(r)
    )


def total_phase_array(r: RampParams, p: CascadeParams, t1, t2) -> np.ndarray:
    """:func:`total_phase` over arrays of delays, same operation order."""
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    return (r.dk_xx + r.dk_x) * t1 + (r.dk_x + precession_rate(p)) * t2 + constant_phase(r)


def compensated_pair_state(r: RampParams, p: CascadeParams, e: EmissionEvent) -> TwoPhotonKet:
    return ket_from_phase(total_phase(r, p, e))


def ideal_ramp(p: CascadeParams, k_hx: float = 0.0, k_hxx: float = 0.0) -> RampParams:
    """Slopes that remove every dependence on t1 and t2, zero offsets.

    The exciton V slope trails its H baseline by FSS/hbar; the biexciton
    branch gets the opposite differential slope.
    """
    w = precession_rate(p)
    return RampParams(k_vxx=k_hxx + w, k_hxx=k_hxx, k_vx=k_hx - w, k_hx=k_hx)


def mismatch_of(r: RampParams, p: CascadeParams) -> tuple[float, float]:
    """Residual slopes ``(d_omega1, d_omega2)`` on t2 and t1 respectively.

    Sign convention: ``d_omega1 = 0`` exactly when the exciton ramp cancels
    the precession.
    """
    d_omega1 = r.dk_x + precession_rate(p)
    d_omega2 = r.dk_xx + r.dk_x
    return d_omega1, d_omega2


def ramp_from_mismatch(m: MismatchSpec, p: CascadeParams) -> RampParams:
    """Build a ramp with the requested mismatches, H slopes at zero.

    The timing offset is placed on the biexciton branch only.
    """
    k_vx = m.d_omega1 - precession_rate(p)
    k_vxx = m.d_omega2 - k_vx
    return RampParams(k_vxx=k_vxx, k_vx=k_vx, t_prop_xx=m.delta_t)


def instantaneous_frequencies(r: RampParams, p: CascadeParams) -> tuple[float, float]:
    """Angular frequencies ``(omega_h, omega_v)`` of the ramped exciton photon."""
    if p.exciton_energy is None:
        raise ValueError("instantaneous_frequencies needs CascadeParams.exciton_energy")
    carrier = p.exciton_energy / HBAR_UEV_NS
    half = p.fss / (2.0 * HBAR_UEV_NS)
    omega_v = carrier + half + r.k_vx
    omega_h = carrier - half + r.k_hx
    return omega_h, omega_v


def exciton_splitting(r: RampParams, p: CascadeParams) -> float:
    """``omega_v - omega_h`` without forming the optical carrier.

    Equal to ``mismatch_of(r, p)[0]``; avoids the cancellation error of
    subtracting the two outputs of :func:`instantaneous_frequencies`.
    """
    return p.fss / HBAR_UEV_NS + (r.k_vx - r.k_hx)
