"""Least squares Monte Carlo valuation by backward induction.

LeastSquaresMC regresses the realized next-epoch values on the basis at every
(epoch, position), turns the fitted conditional expectations into a decision
rule, and rolls the realized values back along the paths. The fitted
coefficient tensor is the reusable product: it prices the panel, extracts
policies on fresh panels and drives the duality bounds.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .basis import basis_dimension, build_design_matrix
from .model import validate_model
from .regression import resolve_backend
from .validation import check_panel, check_states


class LeastSquaresMC(BaseEstimator):
    """Backward-induction valuer for MDPs with an uncontrolled continuous state.

    Parameters
    ----------
    model : MdpModel
        Problem definition (positions, actions, kernel, reward/scrap handles).
    basis : BasisSpec
        Regression features evaluated on the continuous state.
    regressor : {"svd", "qr"} or callable
        Least-squares backend, or a user contract ``(X, y, t) -> coefficients``
        (non-finite coefficients are forced to zero).
    rcond : float or None
        Truncation threshold for the builtin backends; None picks
        max(n, m) * machine epsilon.

    Attributes (after fit)
    ----------------------
    coefficients_ : ndarray [n_dec - 1, n_pos, m]
        Entry [t, p] holds the weights of the regression predicting the epoch
        t+1 value of position p from the basis at epoch t.
    path_values_ : ndarray [n_path, n_pos]
        Rolled-back epoch-0 value realized by each path.
    value_estimate_ : ndarray [n_pos]
        Mean of path_values_ per starting position.
    value_se_ : ndarray [n_pos]
        Standard error of that mean.
    policy_at_0_ : ndarray [n_path, n_pos]
        Fitted action at epoch 0 (identical across paths sharing the start state).
    """

    def __init__(self, model, basis, regressor="svd", rcond=None):
        self.model = model
        self.basis = basis
        self.regressor = regressor
        self.rcond = rcond

    # ------------------------------------------------------------------
    # fitting
    # ------------------------------------------------------------------
    def fit(self, X, y=None):
        """Run the backward induction over a path panel [n_path, dim, n_dec]."""
        model = self.model
        validate_model(model)
        panel = check_panel(X, dim=model.dim, n_dec=model.n_dec)
        n_path = panel.shape[0]
        horizon = model.n_dec - 1
        m = basis_dimension(self.basis)
        solve = resolve_backend(self.regressor, self.rcond)

        values = model.scrap_values(panel[:, :, horizon])
        coeffs = np.empty((horizon, model.n_pos, m))
        policy0 = None
        for t in range(horizon - 1, -1, -1):
            states = panel[:, :, t]
            design = build_design_matrix(states, self.basis).data
            coeffs[t] = solve(design, values, t).T
            rewards = model.reward_values(states, t)
            continuation = design @ coeffs[t].T
            action_values = rewards + model.kernel.expected_values(continuation)
            policy = np.argmax(action_values, axis=2)
            realized = model.kernel.expected_values(values)
            values = np.take_along_axis(rewards + realized, policy[:, :, None], axis=2)[:, :, 0]
            if t == 0:
                policy0 = policy

        self.coefficients_ = coeffs
        self.path_values_ = values
        self.value_estimate_ = values.mean(axis=0)
        if n_path > 1:
            self.value_se_ = values.std(axis=0, ddof=1) / np.sqrt(n_path)
        else:
            self.value_se_ = np.zeros(model.n_pos)
        self.policy_at_0_ = policy0
        for attr in (self.coefficients_, self.path_values_, self.value_estimate_,
                     self.value_se_, self.policy_at_0_):
            attr.setflags(write=False)
        return self

    @classmethod
    def from_coefficients(cls, model, basis, coefficients, regressor="svd", rcond=None):
        """Rebuild a fitted valuer from a stored coefficient tensor."""
        est = cls(model, basis, regressor=regressor, rcond=rcond)
        coefficients = np.asarray(coefficients, dtype=np.float64)
        expected = (model.n_dec - 1, model.n_pos, basis_dimension(basis))
        if coefficients.shape != expected:
            raise ValueError(f"coefficient tensor shape {coefficients.shape}, expected {expected}")
        if not np.isfinite(coefficients).all():
            raise ValueError("coefficient tensor contains non-finite values")
        est.coefficients_ = coefficients
        return est

    # ------------------------------------------------------------------
    # fitted-function evaluation
    # ------------------------------------------------------------------
    def _check_epoch(self, t, upper):
        if not 0 <= t <= upper:
            raise IndexError(f"epoch {t} out of range [0, {upper}]")

    def continuation_values(self, t, states):
        """Fitted conditional expectation of the epoch t+1 value of each position,
        given the epoch-t state; shape [n, n_pos]."""
        check_is_fitted(self, "coefficients_")
        self._check_epoch(t, self.model.n_dec - 2)
        states = check_states(states, self.model.dim)
        design = build_design_matrix(states, self.basis).data
        return design @ self.coefficients_[t].T

    def action_values(self, t, states):
        """Reward plus kernel-mixed fitted continuation per action; shape [n, n_pos, n_action]."""
        rewards = self.model.reward_values(states, t)
        mix = self.model.kernel.expected_values(self.continuation_values(t, states))
        return rewards + mix

    def state_values(self, t, states):
        """Fitted value of every position at epoch t for a batch of states.

        At the horizon this is the scrap; earlier it maximizes the fitted
        action values. Shape [n, n_pos].
        """
        check_is_fitted(self, "coefficients_")
        horizon = self.model.n_dec - 1
        self._check_epoch(t, horizon)
        states = check_states(states, self.model.dim)
        if t == horizon:
            return self.model.scrap_values(states)
        return self.action_values(t, states).max(axis=2)

    def policy(self, t, states):
        """Fitted action per position at epoch t; ties resolve to the lowest index."""
        check_is_fitted(self, "coefficients_")
        self._check_epoch(t, self.model.n_dec - 2)
        states = check_states(states, self.model.dim)
        return np.argmax(self.action_values(t, states), axis=2)

    def fitted_value(self, t, p, z):
        """Fitted value of position p at epoch t in state z (scalar convenience)."""
        values = self.state_values(t, np.atleast_1d(np.asarray(z, dtype=np.float64))[None, :])
        return float(values[0, p])

    def fitted_policy_at(self, t, p, z):
        """Fitted action of position p at epoch t in state z (scalar convenience)."""
        actions = self.policy(t, np.atleast_1d(np.asarray(z, dtype=np.float64))[None, :])
        return int(actions[0, p])


# ---------------------------------------------------------------------------
# Coefficient persistence: header "n_dec n_pos m", then one line of m values
# per (epoch, position), row-major. %.17g keeps float64 round trips exact.
# ---------------------------------------------------------------------------

def save_fit(path, coefficients):
    """Write a coefficient tensor [n_dec - 1, n_pos, m] to a flat text file."""
    coefficients = np.asarray(coefficients, dtype=np.float64)
    if coefficients.ndim != 3:
        raise ValueError(f"coefficient tensor must be 3-D, got shape {coefficients.shape}")
    horizon, n_pos, m = coefficients.shape
    lines = [f"{horizon + 1} {n_pos} {m}"]
    for t in range(horizon):
        for p in range(n_pos):
            lines.append(" ".join(f"{v:.17g}" for v in coefficients[t, p]))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_fit(path):
    """Read a coefficient tensor written by save_fit."""
    with open(path) as fh:
        header = fh.readline().split()
        try:
            n_dec, n_pos, m = (int(v) for v in header)
        except ValueError:
            raise ValueError(f"bad fit header {header!r} in {path}") from None
        coeffs = np.empty((n_dec - 1, n_pos, m))
        for t in range(n_dec - 1):
            for p in range(n_pos):
                row = fh.readline().split()
                if len(row) != m:
                    raise ValueError(f"bad fit row length in {path}")
                coeffs[t, p] = [float(v) for v in row]
    return coeffs
