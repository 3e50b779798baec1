"""Parameter sweeps over compensation errors, ramp timing and time gating."""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass
from typing import Sequence, Union

import numpy as np

from .analytic import analytic_density, coherence_density, gated_coherence
from .cascade import CascadeParams, precession_rate
from .compensation import MismatchSpec, constant_phase, mismatch_of, ramp_from_mismatch
from .core_state import DensityMatrix
from .metrics import metrics_report
from .montecarlo import McConfig, average_density

__all__ = [
    "METHODS",
    "GatingRow",
    "SweepResult",
    "SweepRow",
    "evaluate_mismatch",
    "gating_tradeoff",
    "sweep_delay",
    "sweep_mismatch",
]

METHODS = ("analytic", "monte_carlo")
SWEEP_COLUMNS = (
    "d_omega1_rad_ns",
    "d_omega2_rad_ns",
    "delta_t_ns",
    "fidelity_phi_plus",
    "fidelity_phi_minus",
    "concurrence",
    "purity",
    "n_samples",
    "method",
)
GATING_COLUMNS = ("t_gate_ns", "acceptance", "fidelity_phi_plus", "concurrence")


@dataclass(frozen=True)
class SweepRow:
    d_omega1: float
    d_omega2: float
    delta_t: float
    fidelity_phi_plus: float
    fidelity_phi_minus: float
    concurrence: float
    purity: float
    n_samples: int
    method: str


@dataclass(frozen=True)
class GatingRow:
    t_gate: float
    acceptance: float
    fidelity_phi_plus: float
    concurrence: float


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return f"{float(value):.9g}"


@dataclass
class SweepResult:
    rows: list
    columns: tuple = SWEEP_COLUMNS

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def column(self, name: str) -> np.ndarray:
        """Values of one field across rows, by dataclass field name."""
        return np.array([getattr(r, name) for r in self.rows])

    def to_csv(self, target=None) -> str:
        """Write the table as CSV (UTF-8, LF); returns the text as well."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in astuple(row)])
        text = buf.getvalue()
        if target is not None:
            if hasattr(target, "write"):
                target.write(text)
            else:
                with open(target, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(text)
        return text


def _check_method(method: str) -> str:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    return method


def evaluate_mismatch(
    p: CascadeParams,
    m: MismatchSpec,
    cfg: McConfig = McConfig(),
    method: str = "analytic",
    n_jobs: int = 1,
) -> tuple[SweepRow, DensityMatrix]:
    """Metrics for one mismatch point, plus the density matrix they came from."""
    _check_method(method)
    ramp = ramp_from_mismatch(m, p)
    if method == "analytic":
        d1, d2 = mismatch_of(ramp, p)
        rho = analytic_density(d1, d2, constant_phase(ramp), p)
        n = 0
    else:
        res = average_density(p, ramp, cfg, n_jobs=n_jobs)
        rho, n = res.rho, res.n_samples
    rep = metrics_report(rho)
    row = SweepRow(
        m.d_omega1,
        m.d_omega2,
        m.delta_t,
        rep.fidelity_phi_plus,
        rep.fidelity_phi_minus,
        rep.concurrence,
        rep.purity,
        n,
        method,
    )
    return row, rho


def _axis(bounds: Sequence[float], steps: int, name: str) -> np.ndarray:
    lo, hi = (float(b) for b in bounds)
    if not (np.isfinite(lo) and np.isfinite(hi)) or hi <= lo:
        raise ValueError(f"{name} range must be a non-empty interval, got {bounds!r}")
    if int(steps) < 2:
        raise ValueError(f"{name} needs at least 2 steps, got {steps!r}")
    return np.linspace(lo, hi, int(steps))


def sweep_mismatch(
    p: CascadeParams,
    d_omega1_range: Sequence[float] = (-5.0, 5.0),
    d_omega2_range: Sequence[float] = (-5.0, 5.0),
    steps: Union[int, tuple[int, int]] = 41,
    cfg: McConfig = McConfig(),
    method: str = "analytic",
    n_jobs: int = 1,
) -> SweepResult:
    """Metrics on a grid of ramp-slope errors; d_omega1 is the outer loop."""
    _check_method(method)
    n1, n2 = (steps, steps) if np.isscalar(steps) else steps
    axis1 = _axis(d_omega1_range, n1, "d_omega1")
    axis2 = _axis(d_omega2_range, n2, "d_omega2")
    rows = [
        evaluate_mismatch(p, MismatchSpec(float(a), float(b), 0.0), cfg, method, n_jobs)[0]
        for a in axis1
        for b in axis2
    ]
    return SweepResult(rows)


def sweep_delay(
    p: CascadeParams,
    dt_range: Sequence[float] = (0.0, 3.0),
    steps: int = 121,
    cfg: McConfig = McConfig(),
    method: str = "analytic",
    n_jobs: int = 1,
) -> SweepResult:
    """Metrics against ramp timing offset with both slope errors at zero."""
    _check_method(method)
    axis = _axis(dt_range, steps, "delta_t")
    rows = [
        evaluate_mismatch(p, MismatchSpec(0.0, 0.0, float(dt)), cfg, method, n_jobs)[0]
        for dt in axis
    ]
    return SweepResult(rows)


def gating_tradeoff(
    p: CascadeParams,
    t_gate_range: Sequence[float] = (0.05, 10.0),
    steps: int = 50,
    log: bool = False,
) -> SweepResult:
    """Uncompensated emitter with exciton photons post-selected on ``t2 < t_gate``."""
    lo, hi = (float(b) for b in t_gate_range)
    if not lo > 0:
        raise ValueError(f"gate times must be positive, got {t_gate_range!r}")
    gates = np.geomspace(lo, hi, int(steps)) if log else _axis((lo, hi), steps, "t_gate")
    omega = precession_rate(p)
    rows = []
    for t in gates:
        c, acc = gated_coherence(float(t), omega, p.tau_x)
        rep = metrics_report(coherence_density(c))
        rows.append(GatingRow(float(t), acc, rep.fidelity_phi_plus, rep.concurrence))
    return SweepResult(rows, GATING_COLUMNS)

