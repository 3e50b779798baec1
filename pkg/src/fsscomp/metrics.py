"""Entanglement quantifiers for two-photon density matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_state import (
    BellTarget,
    DensityMatrix,
    NumericalError,
    bell_state,
    clamp_psd_eigenvalues,
    density_from_ket,
    hermitian_eigs,
    psd_sqrt,
    validate_density,
)

__all__ = [
    "SIGMA",
    "MetricsReport",
    "concurrence",
    "concurrence_xstate",
    "fidelity",
    "metrics_report",
    "pure_state_fidelity",
    "purity",
    "uhlmann_fidelity",
]

# Spin-flip matrix for the Wootters formula, sigma_y x sigma_y.
SIGMA = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=complex,
)

_VALID_TOL = 1e-8
_PURE_AGREEMENT = 1e-9
_XSTATE_TOL = 1e-9


def _checked(rho, name="rho") -> np.ndarray:
    report = validate_density(rho, _VALID_TOL)
    if not report.passed:
        raise ValueError(
            f"{name} is not a valid density matrix "
            f"(hermiticity {report.hermiticity_residual:.2e}, "
            f"trace {report.trace_deviation:.2e}, min eig {report.min_eigenvalue:.2e})"
        )
    a = np.array(rho, dtype=complex)
    return 0.5 * (a + a.conj().T)


def _target_matrix(target) -> DensityMatrix:
    if isinstance(target, (BellTarget, str)):
        return density_from_ket(bell_state(target))
    return target


def _clip01(x: float) -> float:
    return float(min(1.0, max(0.0, x)))


def uhlmann_fidelity(rho, target) -> float:
    """``(Tr sqrt(sqrt(target) rho sqrt(target)))**2`` for arbitrary states."""
    a = _checked(rho)
    b = _checked(_target_matrix(target), "target")
    s = psd_sqrt(b)
    w = clamp_psd_eigenvalues(hermitian_eigs(s @ a @ s))
    return _clip01(float(np.sum(np.sqrt(w))) ** 2)


def pure_state_fidelity(rho, target) -> float:
    """``<psi|rho|psi>`` written as ``Tr(rho target)``; target must be pure."""
    a = _checked(rho)
    b = _checked(_target_matrix(target), "target")
    if purity(b) < 1 - 1e-10:
        raise ValueError("pure_state_fidelity needs a rank-1 target")
    return _clip01(float(np.real(np.trace(a @ b))))


def fidelity(rho, target=BellTarget.PhiPlus) -> float:
    """Uhlmann fidelity of ``rho`` to ``target`` (a density matrix or Bell tag).

    For pure targets the overlap shortcut is evaluated as well and the two
    must agree to 1e-9.
    """
    f = uhlmann_fidelity(rho, target)
    b = _target_matrix(target)
    if purity(b) >= 1 - 1e-10:
        f_pure = pure_state_fidelity(rho, b)
        if abs(f - f_pure) > _PURE_AGREEMENT:
            raise NumericalError(
                f"fidelity paths disagree: uhlmann {f!r} vs overlap {f_pure!r}"
            )
    return f


def concurrence(rho) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``.

    The ``l_i`` are square roots of the eigenvalues of
    ``rho Sigma rho^T Sigma``, obtained from the Hermitian matrix
    ``sqrt(rho) Sigma conj(rho) Sigma sqrt(rho)`` which has the same spectrum.
    """
    a = _checked(rho)
    s = psd_sqrt(a)
    m = s @ SIGMA @ a.conj() @ SIGMA @ s
    m = 0.5 * (m + m.conj().T)
    lam = np.sqrt(clamp_psd_eigenvalues(hermitian_eigs(m)))
    return _clip01(lam[0] - lam[1] - lam[2] - lam[3])


def concurrence_xstate(rho) -> float:
    """Closed-form concurrence of a matrix supported on diagonal and anti-diagonal."""
    a = np.array(rho, dtype=complex)
    mask = np.eye(4, dtype=bool) | np.fliplr(np.eye(4, dtype=bool))
    if np.max(np.abs(a[~mask]), initial=0.0) > _XSTATE_TOL:
        raise ValueError("matrix is not X-shaped")
    d = np.real(np.diag(a))
    c = 2 * max(
        0.0,
        abs(a[0, 3]) - np.sqrt(max(d[1] * d[2], 0.0)),
        abs(a[1, 2]) - np.sqrt(max(d[0] * d[3], 0.0)),
    )
    return _clip01(c)


def purity(rho) -> float:
    a = np.array(rho, dtype=complex)
    return float(np.real(np.trace(a @ a)))


@dataclass(frozen=True)
class MetricsReport:
    fidelity_phi_plus: float
    fidelity_phi_minus: float
    concurrence: float
    purity: float

    def as_dict(self) -> dict:
        return {
            "fidelity_phi_plus": self.fidelity_phi_plus,
            "fidelity_phi_minus": self.fidelity_phi_minus,
            "concurrence": self.concurrence,
            "purity": self.purity,
        }


def metrics_report(rho) -> MetricsReport:
    return MetricsReport(
        fidelity_phi_plus=fidelity(rho, BellTarget.PhiPlus),
        fidelity_phi_minus=fidelity(rho, BellTarget.PhiMinus),
        concurrence=concurrence(rho),
        purity=purity(_checked(rho)),
    )
