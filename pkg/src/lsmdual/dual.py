"""Pathwise duality bounds around the fitted policy value.

On a fresh evaluation panel: extract the prescribed policy from a fitted
valuer, turn nested one-step simulations into zero-mean martingale increments,
and run two per-path backward recursions - one following the prescribed
policy (lower bound realizations) and one with perfect foresight over actions
(upper bound realizations). Their means bracket the true value, and normal
confidence intervals quantify the bracket.
"""

from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .validation import check_panel, check_subsim


def path_policy(paths, estimator):
    """Prescribed action for every (path, epoch, position) on an evaluation panel.

    Returns an integer array [n_path, n_dec - 1, n_pos].
    """
    model = estimator.model
    paths = check_panel(paths, dim=model.dim, n_dec=model.n_dec)
    horizon = model.n_dec - 1
    actions = np.empty((paths.shape[0], horizon, model.n_pos), dtype=np.intp)
    for t in range(horizon):
        actions[:, t, :] = estimator.policy(t, paths[:, :, t])
    return actions


def additive_duals(paths, subsim, estimator):
    """Martingale increments from nested simulation.

    Entry [i, t, p] is the nested-mean fitted value of position p at epoch t+1
    minus the fitted value at the realized next state:

        mean_s v(t+1, p, subsim[s, :, i, t]) - v(t+1, p, paths[i, :, t+1])

    so each increment has zero conditional mean under the true transition law.
    Shape [n_path, n_dec - 1, n_pos].
    """
    model = estimator.model
    paths = check_panel(paths, dim=model.dim, n_dec=model.n_dec)
    subsim = check_subsim(subsim, paths)
    n_path, dim, n_dec = paths.shape
    n_subsim = subsim.shape[0]
    horizon = n_dec - 1
    delta = np.empty((n_path, horizon, model.n_pos))
    for t in range(horizon):
        nested_states = subsim[:, :, :, t].transpose(0, 2, 1).reshape(n_subsim * n_path, dim)
        nested_values = estimator.state_values(t + 1, nested_states)
        nested_mean = nested_values.reshape(n_subsim, n_path, model.n_pos).mean(axis=0)
        realized = estimator.state_values(t + 1, paths[:, :, t + 1])
        delta[:, t, :] = nested_mean - realized
    return delta


@dataclass
class BoundResult:
    """Per-path lower/upper bound realizations, [n_path, n_pos] each."""

    lower: np.ndarray
    upper: np.ndarray

    @property
    def n_path(self):
        return self.lower.shape[0]

    @property
    def mean_lower(self):
        return self.lower.mean(axis=0)

    @property
    def mean_upper(self):
        return self.upper.mean(axis=0)

    @property
    def se_lower(self):
        return self._se(self.lower)

    @property
    def se_upper(self):
        return self._se(self.upper)

    def _se(self, values):
        if self.n_path < 2:
            return np.zeros(values.shape[1])
        return values.std(axis=0, ddof=1) / np.sqrt(self.n_path)


def bounds(paths, model, mart, policy):
    """Lower/upper bound realizations for every path and starting position.

    Both are backward recursions in (epoch, position) along each path, with
    the martingale increments added to the kernel-mixed successor values. The
    lower recursion follows the prescribed policy (position uncertainty is
    integrated through the kernel rather than sampled); the upper recursion
    maximizes over actions, realizing the perfect-foresight pathwise maximum.
    Upper dominates lower path by path.
    """
    paths = check_panel(paths, dim=model.dim, n_dec=model.n_dec)
    n_path = paths.shape[0]
    horizon = model.n_dec - 1
    mart = np.asarray(mart, dtype=np.float64)
    if mart.shape != (n_path, horizon, model.n_pos):
        raise ValueError(
            f"martingale increments shape {mart.shape}, expected {(n_path, horizon, model.n_pos)}"
        )
    policy = np.asarray(policy)
    if not np.issubdtype(policy.dtype, np.integer):
        raise ValueError("policy table must hold integer action indices")
    if policy.shape != (n_path, horizon, model.n_pos):
        raise ValueError(
            f"policy table shape {policy.shape}, expected {(n_path, horizon, model.n_pos)}"
        )
    if policy.size and (policy.min() < 0 or policy.max() >= model.n_action):
        raise ValueError("policy table contains out-of-range actions")

    upper = model.scrap_values(paths[:, :, horizon])
    lower = upper.copy()
    for t in range(horizon - 1, -1, -1):
        rewards = model.reward_values(paths[:, :, t], t)
        shift = mart[:, t, :]
        q_upper = rewards + model.kernel.expected_values(shift + upper)
        q_lower = rewards + model.kernel.expected_values(shift + lower)
        upper = q_upper.max(axis=2)
        lower = np.take_along_axis(q_lower, policy[:, t, :, None], axis=2)[:, :, 0]
    return BoundResult(lower=lower, upper=upper)


def confidence_interval(result, alpha, position):
    """Two-sided (1 - alpha) normal confidence interval for one starting position.

    Returns (mean lower - q * se lower, mean upper + q * se upper) with q the
    standard normal quantile at 1 - alpha / 2.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if result.n_path < 2:
        raise ValueError("confidence interval needs at least 2 paths")
    q = norm.ppf(1.0 - alpha / 2.0)
    lo = result.mean_lower[position] - q * result.se_lower[position]
    hi = result.mean_upper[position] + q * result.se_upper[position]
    return float(lo), float(hi)


def save_bounds_csv(path, result):
    """Write bound realizations as CSV rows (path, position, lower, upper)."""
    lines = ["path,position,lower,upper"]
    n_path, n_pos = result.lower.shape
    for i in range(n_path):
        for p in range(n_pos):
            lines.append(f"{i},{p},{result.lower[i, p]:.17g},{result.upper[i, p]:.17g}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
