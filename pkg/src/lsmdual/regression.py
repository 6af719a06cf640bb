"""Least-squares backends for the per-epoch regressions.

The default is rank-aware SVD (minimum-norm solution); a pivoted-QR
alternative mirrors classic linear-model fitting where columns judged
linearly dependent get a zero coefficient. Arbitrary user regressors plug in
through a (X, y, t) -> coefficients callable whose non-finite outputs are
forced to zero.
"""

import numpy as np
import scipy.linalg

from .validation import as_float_array


def _check_xy(X, y):
    X = as_float_array(X, "X")
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D [n, m], got shape {X.shape}")
    y = as_float_array(y, "y")
    if y.ndim not in (1, 2) or y.shape[0] != X.shape[0]:
        raise ValueError(f"y shape {y.shape} incompatible with X shape {X.shape}")
    return X, y


def fit_svd(X, y, rcond=None):
    """Minimum-norm least squares via SVD.

    Singular values below rcond times the largest are treated as zero;
    rcond=None uses max(n, m) times machine epsilon. ``y`` may be [n] or
    [n, k]; with a matrix target all columns share one factorization.
    """
    X, y = _check_xy(X, y)
    if rcond is not None and rcond < 0:
        raise ValueError(f"rcond must be >= 0, got {rcond}")
    coef, _, _, _ = np.linalg.lstsq(X, y, rcond=rcond)
    return coef


def fit_qr(X, y, tol=None):
    """Pivoted-QR least squares; dependent columns get coefficient 0.

    The effective rank counts pivoted diagonal entries above tol times the
    leading one (tol=None uses max(n, m) times machine epsilon), so exactly
    replicated columns resolve to one fitted column and zeros elsewhere.
    """
    X, y = _check_xy(X, y)
    n, m = X.shape
    if tol is None:
        tol = max(n, m) * np.finfo(np.float64).eps
    q, r, piv = scipy.linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    rank = 0
    if diag.size and diag[0] > 0.0:
        rank = int(np.count_nonzero(diag > tol * diag[0]))
    coef = np.zeros((m,) + y.shape[1:])
    if rank:
        rhs = q[:, :rank].T @ y
        coef[piv[:rank]] = scipy.linalg.solve_triangular(r[:rank, :rank], rhs)
    return coef


def apply_regressor(contract, X, y, t):
    """Run a user regressor and enforce its contract: length m, non-finite -> 0."""
    X, y = _check_xy(X, y)
    if y.ndim != 1:
        raise ValueError("user regressors take a single target vector")
    out = np.array(contract(X, y, t), dtype=np.float64).reshape(-1)
    m = X.shape[1]
    if out.shape != (m,):
        raise ValueError(f"regressor returned {out.shape[0]} coefficients, expected {m}")
    out[~np.isfinite(out)] = 0.0
    return out


def resolve_backend(regressor, rcond=None):
    """Normalize a backend spec to a (X, Y, t) -> [m, k] coefficient function.

    ``regressor`` is "svd", "qr", or a callable (X, y, t) -> coefficient
    vector; builtin backends solve all target columns against one
    factorization, callables are applied column by column.
    """
    if regressor == "svd":
        return lambda X, Y, t: fit_svd(X, Y, rcond=rcond)
    if regressor == "qr":
        return lambda X, Y, t: fit_qr(X, Y, tol=rcond)
    if callable(regressor):
        def run(X, Y, t):
            return np.column_stack(
                [apply_regressor(regressor, X, Y[:, p], t) for p in range(Y.shape[1])]
            )
        return run
    raise ValueError(f"regressor must be 'svd', 'qr' or a callable, got {regressor!r}")
