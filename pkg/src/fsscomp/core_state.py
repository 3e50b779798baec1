"""Two-photon polarization states: kets, density matrices, Bell states.

Basis order is fixed to (|HH>, |HV>, |VH>, |VV>) everywhere in the package.
Also holds the small Hermitian eigensolver and PSD square root used by the
entanglement metrics.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "BASIS",
    "BellTarget",
    "DensityMatrix",
    "NumericalError",
    "TwoPhotonKet",
    "ValidityReport",
    "bell_state",
    "clamp_psd_eigenvalues",
    "density_from_ket",
    "format_density",
    "hermitian_eigh",
    "hermitian_eigs",
    "ket_from_phase",
    "parse_density",
    "psd_sqrt",
    "validate_density",
]

BASIS = ("HH", "HV", "VH", "VV")

NORM_TOL = 1e-12
EIG_CLAMP = 1e-9
_JACOBI_TOL = 1e-12
_JACOBI_MAX_SWEEPS = 60
# Eigenvalues below this fraction of the spectral radius are rounding noise.
_NOISE_FLOOR = 64 * np.finfo(float).eps


class NumericalError(ArithmeticError):
    """Raised when a numerical routine fails to reach its tolerance."""


class BellTarget(str, enum.Enum):
    PhiPlus = "PhiPlus"
    PhiMinus = "PhiMinus"
    PsiPlus = "PsiPlus"
    PsiMinus = "PsiMinus"


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TwoPhotonKet:
    """Normalized pure polarization state of a photon pair."""

    amp: np.ndarray = field(repr=True)

    def __post_init__(self):
        amp = _frozen(self.amp).reshape(-1)
        if amp.shape != (4,):
            raise ValueError(f"a two-photon ket has 4 amplitudes, got shape {amp.shape}")
        if not np.all(np.isfinite(amp)):
            raise ValueError("ket amplitudes must be finite")
        norm = float(np.sum(np.abs(amp) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"ket is not normalized (norm^2 = {norm!r})")
        object.__setattr__(self, "amp", amp)

    def __eq__(self, other):
        if not isinstance(other, TwoPhotonKet):
            return NotImplemented
        return bool(np.array_equal(self.amp, other.amp))

    __hash__ = None

    def allclose(self, other: "TwoPhotonKet", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.amp, other.amp, rtol=0.0, atol=atol))


@dataclass(frozen=True)
class DensityMatrix:
    """4x4 two-photon density matrix.

    Construction only checks shape and finiteness, so that invalid matrices
    can still be handed to :func:`validate_density` for a report.
    """

    m: np.ndarray

    def __post_init__(self):
        m = _frozen(self.m)
        if m.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("density matrix entries must be finite")
        object.__setattr__(self, "m", m)

    def __eq__(self, other):
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return bool(np.array_equal(self.m, other.m))

    __hash__ = None

    def __array__(self, dtype=None, copy=None):
        return np.array(self.m, dtype=dtype)

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(np.eye(4) / 4)


_SQ = 1.0 / math.sqrt(2.0)
_BELL = {
    BellTarget.PhiPlus: (_SQ, 0, 0, _SQ),
    BellTarget.PhiMinus: (_SQ, 0, 0, -_SQ),
    BellTarget.PsiPlus: (0, _SQ, _SQ, 0),
    BellTarget.PsiMinus: (0, _SQ, -_SQ, 0),
}


def bell_state(target: Union[BellTarget, str]) -> TwoPhotonKet:
    return TwoPhotonKet(_BELL[BellTarget(target)])


def ket_from_phase(phi: float) -> TwoPhotonKet:
    """Return ``(|HH> + exp(i*phi)|VV>)/sqrt(2)``."""
    phi = float(phi)
    if not math.isfinite(phi):
        raise ValueError(f"phase must be finite, got {phi!r}")
    return TwoPhotonKet((_SQ, 0.0, 0.0, complex(math.cos(phi), math.sin(phi)) * _SQ))


def density_from_ket(k) -> DensityMatrix:
    """Projector ``|k><k|``; accepts a :class:`TwoPhotonKet` or 4 raw amplitudes."""
    if not isinstance(k, TwoPhotonKet):
        k = TwoPhotonKet(k)
    return DensityMatrix(np.outer(k.amp, k.amp.conj()))


def _as_matrix(h) -> np.ndarray:
    if isinstance(h, DensityMatrix):
        return np.array(h.m)
    arr = np.array(h, dtype=complex)
    if arr.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {arr.shape}")
    return arr


def _hermiticity_residual(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - a.conj().T)))


@dataclass(frozen=True)
class ValidityReport:
    hermiticity_residual: float
    trace_deviation: float
    min_eigenvalue: float
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.hermiticity_residual < self.tol
            and self.trace_deviation < self.tol
            and self.min_eigenvalue >= -self.tol
        )

    def __bool__(self):
        return self.passed


def validate_density(rho, tol: float = 1e-10) -> ValidityReport:
    """Report Hermiticity residual, trace deviation and smallest eigenvalue."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = _as_matrix(rho)
    herm = _hermiticity_residual(a)
    tr = np.trace(a)
    trace_dev = float(max(abs(tr.real - 1.0), abs(tr.imag)))
    # eigenvalues of the Hermitian part; the residual above covers the rest
    sym = 0.5 * (a + a.conj().T)
    min_eig = float(hermitian_eigs(sym)[-1])
    return ValidityReport(herm, trace_dev, min_eig, tol)


def _jacobi(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi sweeps on a Hermitian matrix.

    Returns unsorted eigenvalues and the unitary whose columns are the
    eigenvectors.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(_JACOBI_MAX_SWEEPS):
        off = float(np.linalg.norm(a[offdiag]))
        if off <= _JACOBI_TOL * scale:
            return np.real(np.diag(a)).copy(), v
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = a[p, q]
                ag = abs(g)
                if ag == 0.0:
                    continue
                phase = g / ag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * ag)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # J = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                cols = [p, q]
                a[:, cols] = a[:, cols] @ j
                a[cols, :] = j.conj().T @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, cols] = v[:, cols] @ j
    raise NumericalError("Jacobi eigensolver did not converge")


def hermitian_eigh(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a 4x4 Hermitian matrix, eigenvalues descending."""
    a = _as_matrix(h)
    if _hermiticity_residual(a) >= 1e-8:
        raise ValueError("matrix is not Hermitian")
    a = 0.5 * (a + a.conj().T)
    w, v = _jacobi(a)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigs(h) -> np.ndarray:
    """The 4 real eigenvalues of a Hermitian matrix, sorted descending."""
    return hermitian_eigh(h)[0]


def clamp_psd_eigenvalues(w) -> np.ndarray:
    """Zero out rounding noise in a descending PSD spectrum.

    Raises ``ValueError`` if any eigenvalue is below ``-EIG_CLAMP``.
    """
    w = np.asarray(w, dtype=float)
    if w.min() < -EIG_CLAMP:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {w.min():.3e})")
    floor = _NOISE_FLOOR * max(float(np.max(np.abs(w))), 0.0)
    return np.where(w <= floor, 0.0, w)


def psd_sqrt(h) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in [-1e-9, 0) are clamped to zero, as are positive values at
    the rounding-noise level relative to the largest eigenvalue.
    """
    w, v = hermitian_eigh(h)
    w = clamp_psd_eigenvalues(w)
    r = (v * np.sqrt(w)) @ v.conj().T
    return 0.5 * (r + r.conj().T)


def format_density(rho) -> str:
    """Serialize as 4 lines of 4 ``re+imj`` entries, 12 significant digits."""
    a = _as_matrix(rho)
    lines = []
    for row in a:
        lines.append(" ".join(f"{z.real:.11e}{z.imag:+.11e}j" for z in row))
    return "\n".join(lines) + "\n"


def parse_density(text: str) -> DensityMatrix:
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("density matrix file must contain 4 lines of 4 entries")
    try:
        return DensityMatrix([[complex(tok) for tok in r] for r in rows])
    except ValueError as exc:
        raise ValueError(f"malformed matrix entry: {exc}") from None
