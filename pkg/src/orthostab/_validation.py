"""Input validation helpers shared by every module."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array


def as_vector(x, name="x", dim=None):
    """Return ``x`` as a finite 1-D float64 array."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite coordinates")
    if dim is not None and arr.shape[0] != dim:
        raise ValueError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    return arr


def as_points(X, name="X", dim=None):
    """Return ``X`` as a finite (n, d) float64 array; a single vector becomes one row."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    arr = check_array(arr, dtype=np.float64, ensure_all_finite=True, input_name=name)
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"{name} has dimension {arr.shape[1]}, expected {dim}")
    return arr


def as_matrix(A, name="A", symmetric_tol=None):
    arr = np.asarray(A, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    if symmetric_tol is not None:
        if arr.shape[0] != arr.shape[1]:
            raise ValueError(f"{name} must be square")
        if np.max(np.abs(arr - arr.T), initial=0.0) > symmetric_tol:
            raise ValueError(f"{name} is not symmetric within {symmetric_tol}")
    return arr
