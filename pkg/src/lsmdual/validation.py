"""Input validation helpers shared across the package."""

import numpy as np


def as_float_array(x, name, allow_empty=False):
    """Coerce to a float64 ndarray and reject non-finite entries."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.size == 0 and not allow_empty:
        raise ValueError(f"{name} must not be empty")
    if arr.size and not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_states(states, dim=None):
    """Validate a state matrix of shape [n, dim]; 1-D input is treated as one component."""
    arr = as_float_array(states, "states")
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"states must be 2-D [n, dim], got shape {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"states have {arr.shape[1]} components, expected {dim}")
    return arr


def check_panel(panel, dim=None, n_dec=None):
    """Validate a path panel of shape [n_path, dim, n_dec]."""
    arr = as_float_array(panel, "path panel")
    if arr.ndim != 3:
        raise ValueError(f"path panel must be 3-D [n_path, dim, n_dec], got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("path panel needs at least one path")
    if dim is not None and arr.shape[1] != dim:
        raise ValueError(f"path panel has dim {arr.shape[1]}, expected {dim}")
    if n_dec is not None and arr.shape[2] != n_dec:
        raise ValueError(f"path panel has {arr.shape[2]} decision epochs, expected {n_dec}")
    return arr


def check_subsim(subsim, panel):
    """Validate a nested one-step panel [n_subsim, dim, n_path, n_dec - 1] against its parent."""
    arr = as_float_array(subsim, "nested panel")
    if arr.ndim != 4:
        raise ValueError(f"nested panel must be 4-D, got shape {arr.shape}")
    n_path, dim, n_dec = panel.shape
    if arr.shape[1:] != (dim, n_path, n_dec - 1):
        raise ValueError(
            f"nested panel shape {arr.shape} inconsistent with parent panel {panel.shape}: "
            f"expected [*, {dim}, {n_path}, {n_dec - 1}]"
        )
    return arr


def check_positive_int(value, name, minimum=1):
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
