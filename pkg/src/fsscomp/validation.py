"""Input validation helpers for the estimator layer."""

from __future__ import annotations

import numbers

import numpy as np

from .core_state import DensityMatrix

__all__ = ["check_density_stack", "check_mismatch_array", "check_positive", "check_nonneg"]


def check_density_stack(X) -> np.ndarray:
    """Coerce one or many 4x4 matrices into a complex array of shape (n, 4, 4).

    Accepts a :class:`DensityMatrix`, a sequence of them, a (4, 4) or
    (n, 4, 4) array, or flattened rows of shape (n, 16).
    """
    if isinstance(X, DensityMatrix):
        return np.array(X.m)[None]
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], DensityMatrix):
        return np.stack([np.array(x.m) for x in X])
    arr = np.asarray(X, dtype=complex)
    if arr.ndim == 2 and arr.shape == (4, 4):
        arr = arr[None]
    elif arr.ndim == 2 and arr.shape[1] == 16:
        arr = arr.reshape(-1, 4, 4)
    if arr.ndim != 3 or arr.shape[1:] != (4, 4):
        raise ValueError(
            f"expected density matrices of shape (n, 4, 4) or (n, 16), got {arr.shape}"
        )
    if arr.shape[0] == 0:
        raise ValueError("found an empty stack of density matrices")
    if not np.all(np.isfinite(arr)):
        raise ValueError("density matrices contain NaN or infinity")
    return arr


def check_mismatch_array(X) -> np.ndarray:
    """Rows of ``(d_omega1, d_omega2[, delta_t])`` as a float array (n, 3)."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[None]
    if arr.ndim != 2 or arr.shape[1] not in (2, 3):
        raise ValueError(f"expected mismatch rows with 2 or 3 columns, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("found an empty mismatch array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("mismatch array contains NaN or infinity")
    if arr.shape[1] == 2:
        arr = np.column_stack([arr, np.zeros(len(arr))])
    return arr


def check_positive(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return float(value)


def check_nonneg(value, name: str) -> float:
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value < 0:
        raise ValueError(f"{name} must be a non-negative finite number, got {value!r}")
    return float(value)
