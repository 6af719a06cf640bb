"""Declarative regression bases and their realized design matrices.

A BasisSpec lists per-component power/Laguerre transforms, an optional
intercept, linear-spline knots and an optional custom feature block. Columns
are realized in that fixed order, each block row-wise, so a spec pins down the
meaning of every coefficient index.
"""

from dataclasses import dataclass

import numpy as np

from .validation import as_float_array, check_states

BTYPES = ("power", "laguerre")


class BasisSpec:
    """Feature description for the per-epoch regressions.

    Parameters
    ----------
    flags : array-like [dim, max_degree] or None
        Nonzero entry [i, j] includes degree j+1 of component i (a power
        z**(j+1), or the (j+1)-th Laguerre polynomial under btype="laguerre").
    btype : {"power", "laguerre"}
    intercept : bool
        Include a constant 1 column.
    knots : array-like [dim, n_knots] or None
        Entry [i, j] = B adds the linear-spline feature max(z_i - B, 0).
    custom : callable or None
        ``custom(states) -> [n, n_custom]`` block appended after all others.
    n_custom : int
        Number of columns the custom callable returns; required with custom.
    """

    def __init__(self, flags=None, btype="power", intercept=True, knots=None,
                 custom=None, n_custom=0):
        if btype not in BTYPES:
            raise ValueError(f"btype must be one of {BTYPES}, got {btype!r}")
        self.btype = btype
        self.intercept = bool(intercept)
        self.flags = self._as_block(flags, "flags")
        self.knots = self._as_block(knots, "knots")
        if (custom is None) != (n_custom == 0):
            raise ValueError("n_custom must be 0 exactly when no custom callable is given")
        if custom is not None and not callable(custom):
            raise ValueError("custom must be callable")
        if n_custom < 0:
            raise ValueError(f"n_custom must be >= 0, got {n_custom}")
        self.custom = custom
        self.n_custom = int(n_custom)
        if basis_dimension(self) < 1:
            raise ValueError("basis spec is empty: at least one column is required")

    @staticmethod
    def _as_block(block, name):
        if block is None:
            arr = np.zeros((0, 0))
        else:
            arr = as_float_array(block, name, allow_empty=True)
            if arr.ndim != 2:
                raise ValueError(f"{name} must be a 2-D matrix, got shape {arr.shape}")
        arr.setflags(write=False)
        return arr


@dataclass
class DesignMatrix:
    """Realized [n, m] feature matrix with one label per column."""

    data: np.ndarray
    column_labels: list


def basis_dimension(spec):
    """Total column count, in processing order flags, intercept, knots, custom."""
    return (
        int(np.count_nonzero(spec.flags))
        + (1 if spec.intercept else 0)
        + spec.knots.size
        + spec.n_custom
    )


def laguerre_values(x, degree):
    """Standard (unweighted) Laguerre polynomial L_degree evaluated elementwise."""
    x = np.asarray(x, dtype=np.float64)
    prev = np.ones_like(x)
    if degree == 0:
        return prev
    cur = 1.0 - x
    for k in range(1, degree):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur


def build_design_matrix(states, spec):
    """Evaluate the basis over a state matrix, columns in the spec's fixed order."""
    states = check_states(states)
    n, dim = states.shape
    for block, name in ((spec.flags, "flags"), (spec.knots, "knots")):
        if block.size and block.shape[0] != dim:
            raise ValueError(f"{name} describe {block.shape[0]} components but states have {dim}")

    cols = []
    labels = []
    for i in range(spec.flags.shape[0]):
        z = states[:, i]
        for j in range(spec.flags.shape[1]):
            if spec.flags[i, j] != 0:
                degree = j + 1
                if spec.btype == "power":
                    cols.append(z**degree)
                    labels.append(f"z{i}^{degree}")
                else:
                    cols.append(laguerre_values(z, degree))
                    labels.append(f"L{degree}(z{i})")
    if spec.intercept:
        cols.append(np.ones(n))
        labels.append("1")
    for i in range(spec.knots.shape[0]):
        z = states[:, i]
        for j in range(spec.knots.shape[1]):
            knot = spec.knots[i, j]
            cols.append(np.maximum(z - knot, 0.0))
            labels.append(f"(z{i}-{knot:g})+")
    if spec.custom is not None:
        block = np.asarray(spec.custom(states), dtype=np.float64)
        if block.ndim != 2 or block.shape != (n, spec.n_custom):
            raise ValueError(
                f"custom features returned shape {block.shape}, expected ({n}, {spec.n_custom})"
            )
        for q in range(spec.n_custom):
            cols.append(block[:, q])
            labels.append(f"custom{q}")

    data = np.column_stack(cols)
    if not np.isfinite(data).all():
        bad = labels[int(np.argwhere(~np.isfinite(data))[0][1])]
        raise ValueError(f"non-finite feature value in column {bad!r}")
    return DesignMatrix(data=data, column_labels=labels)


def evaluate_basis_row(z, spec):
    """Basis features of a single state; equals the matching design-matrix row."""
    z = np.asarray(z, dtype=np.float64)
    if z.ndim == 0:
        z = z[None]
    if z.ndim != 1:
        raise ValueError(f"z must be a vector [dim], got shape {z.shape}")
    return build_design_matrix(z[None, :], spec).data[0]
