"""Electro-optic modulator drive design for the compensating ramps."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cascade import HBAR_UEV_NS
from .compensation import RampParams

__all__ = [
    "EomSpec",
    "phase_slopes",
    "pockels_index_shift",
    "ramp_from_drive",
    "required_ramp_slope",
]


@dataclass(frozen=True)
class EomSpec:
    """Half-wave voltages (V) seen by V- (TM) and H- (TE) polarized light."""

    v_pi_v: float
    v_pi_h: float

    def __post_init__(self):
        if not (self.v_pi_v > 0 and self.v_pi_h > 0):
            raise ValueError("half-wave voltages must be positive")

    @property
    def differential(self) -> float:
        """Differential phase per volt, in rad/V."""
        return math.pi * (1.0 / self.v_pi_v - 1.0 / self.v_pi_h)


def required_ramp_slope(e: EomSpec, fss: float) -> float:
    """Voltage slope dV/dt (V/ns) whose differential phase rate equals FSS/hbar."""
    if e.v_pi_v == e.v_pi_h:
        raise ValueError("equal half-wave voltages give no differential phase")
    return (fss / HBAR_UEV_NS) / e.differential


def phase_slopes(e: EomSpec, dv_dt: float) -> tuple[float, float]:
    """Phase slopes ``(k_v, k_h)`` in rad/ns for a linear drive of ``dv_dt`` V/ns."""
    return math.pi * dv_dt / e.v_pi_v, math.pi * dv_dt / e.v_pi_h


def ramp_from_drive(e: EomSpec, dv_dt: float) -> RampParams:
    """Two modulators driven with opposite ramps: +dv_dt on XX, -dv_dt on X."""
    k_v, k_h = phase_slopes(e, dv_dt)
    return RampParams(k_vxx=k_v, k_hxx=k_h, k_vx=-k_v, k_hx=-k_h)


def pockels_index_shift(n: float, r_row, e_field) -> float:
    """First-order Pockels index change ``-(n**3 / 2) * sum_k r_k E_k``.

    ``r_row`` is one row of the electro-optic tensor (m/V), ``e_field`` the
    applied field (V/m).
    """
    if not n > 0:
        raise ValueError(f"refractive index must be positive, got {n!r}")
    r = np.asarray(r_row, dtype=float)
    f = np.asarray(e_field, dtype=float)
    if r.shape != (3,) or f.shape != (3,):
        raise ValueError("r_row and e_field must both have 3 components")
    return float(-(n**3) / 2.0 * np.dot(r, f))
