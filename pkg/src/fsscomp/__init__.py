"""Restoring polarization entanglement of quantum-dot photon pairs with
time-dependent differential phase ramps."""

from .analytic import analytic_coherence, analytic_density, gated_coherence
from .cascade import (
    HBAR_UEV_NS,
    CascadeParams,
    EmissionEvent,
    precession_rate,
    raw_pair_state,
    sample_emission,
)
from .compensation import (
    MismatchSpec,
    RampParams,
    compensated_pair_state,
    ideal_ramp,
    instantaneous_frequencies,
    mismatch_of,
    ramp_from_mismatch,
    total_phase,
)
from .core_state import (
    BellTarget,
    DensityMatrix,
    TwoPhotonKet,
    bell_state,
    density_from_ket,
    ket_from_phase,
    validate_density,
)
from .eom import EomSpec, phase_slopes, pockels_index_shift, required_ramp_slope
from .estimators import CompensatedSource, EntanglementMetrics, MismatchResponse
from .experiments import gating_tradeoff, sweep_delay, sweep_mismatch
from .metrics import MetricsReport, concurrence, fidelity, metrics_report, purity
from .montecarlo import McConfig, McResult, average_density

__version__ = "0.1.0"

__all__ = [
    "analytic_coherence",
    "analytic_density",
    "average_density",
    "bell_state",
    "BellTarget",
    "CascadeParams",
    "compensated_pair_state",
    "CompensatedSource",
    "concurrence",
    "density_from_ket",
    "DensityMatrix",
    "EmissionEvent",
    "EntanglementMetrics",
    "EomSpec",
    "fidelity",
    "gated_coherence",
    "gating_tradeoff",
    "HBAR_UEV_NS",
    "ideal_ramp",
    "instantaneous_frequencies",
    "ket_from_phase",
    "McConfig",
    "McResult",
    "metrics_report",
    "MetricsReport",
    "mismatch_of",
    "MismatchResponse",
    "MismatchSpec",
    "phase_slopes",
    "pockels_index_shift",
    "precession_rate",
    "purity",
    "ramp_from_mismatch",
    "RampParams",
    "raw_pair_state",
    "required_ramp_slope",
    "sample_emission",
    "sweep_delay",
    "sweep_mismatch",
    "total_phase",
    "TwoPhotonKet",
    "validate_density",
]
