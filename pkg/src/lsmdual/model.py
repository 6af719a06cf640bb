"""Finite-horizon MDP with a discrete position component and an uncontrolled continuous one.

The state is (position, z) where position lives in {0, ..., n_pos - 1} and z in R^dim.
Actions move the position through a transition kernel; z evolves on its own.
Rewards are batch callables and any time discounting is baked into their values.
"""

import numpy as np

from .validation import check_positive_int, check_states

PROB_TOL = 1e-12


class DeterministicKernel:
    """Position transitions given by a control map: control[p, a] is the next position."""

    def __init__(self, control):
        control = np.asarray(control)
        if control.ndim != 2:
            raise ValueError(f"control matrix must be 2-D [n_pos, n_action], got shape {control.shape}")
        if not np.issubdtype(control.dtype, np.integer):
            rounded = np.rint(np.asarray(control, dtype=np.float64))
            if control.size and not np.array_equal(rounded, np.asarray(control, dtype=np.float64)):
                raise ValueError("control matrix entries must be integer position indices")
            control = rounded.astype(np.intp)
        self.control = np.ascontiguousarray(control, dtype=np.intp)
        self.control.setflags(write=False)

    @property
    def n_pos(self):
        return self.control.shape[0]

    @property
    def n_action(self):
        return self.control.shape[1]

    def validate(self, n_pos, n_action):
        if self.control.shape != (n_pos, n_action):
            raise ValueError(
                f"control matrix shape {self.control.shape} does not match "
                f"(n_pos, n_action) = ({n_pos}, {n_action})"
            )
        if self.control.size and (self.control.min() < 0 or self.control.max() >= n_pos):
            bad = self.control[(self.control < 0) | (self.control >= n_pos)][0]
            raise ValueError(f"control matrix contains invalid position index {bad}")

    def probability(self, p, a, p2):
        return 1.0 if self.control[p, a] == p2 else 0.0

    def mix(self, p, a, values):
        # exact lookup, no floating mix
        return values[self.control[p, a]]

    def expected_values(self, values):
        """Map per-successor values [..., n_pos] to [..., n_pos, n_action] under each action."""
        return values[..., self.control]


class StochasticKernel:
    """Position transitions given by probabilities alpha[p, a, p2]."""

    def __init__(self, alpha):
        alpha = np.ascontiguousarray(alpha, dtype=np.float64)
        if alpha.ndim != 3:
            raise ValueError(f"transition tensor must be 3-D [n_pos, n_action, n_pos], got shape {alpha.shape}")
        self.alpha = alpha
        self.alpha.setflags(write=False)

    @property
    def n_pos(self):
        return self.alpha.shape[0]

    @property
    def n_action(self):
        return self.alpha.shape[1]

    def validate(self, n_pos, n_action):
        if self.alpha.shape != (n_pos, n_action, n_pos):
            raise ValueError(
                f"transition tensor shape {self.alpha.shape} does not match "
                f"(n_pos, n_action, n_pos) = ({n_pos}, {n_action}, {n_pos})"
            )
        if not np.isfinite(self.alpha).all():
            raise ValueError("transition tensor contains non-finite entries")
        if self.alpha.size and (self.alpha.min() < 0.0 or self.alpha.max() > 1.0):
            raise ValueError("transition probabilities must lie in [0, 1]")
        row_sums = self.alpha.sum(axis=2)
        if self.alpha.size and np.abs(row_sums - 1.0).max() > PROB_TOL:
            p, a = np.unravel_index(np.abs(row_sums - 1.0).argmax(), row_sums.shape)
            raise ValueError(
                f"row sum != 1: probabilities for (position {p}, action {a}) sum to {row_sums[p, a]!r}"
            )

    def probability(self, p, a, p2):
        return float(self.alpha[p, a, p2])

    def mix(self, p, a, values):
        return float(self.alpha[p, a] @ values)

    def expected_values(self, values):
        """Map per-successor values [..., n_pos] to [..., n_pos, n_action] under each action."""
        return np.einsum("paq,...q->...pa", self.alpha, values)


class MdpModel:
    """Container for the decision problem: sizes, position kernel and reward handles.

    Parameters
    ----------
    n_pos, n_action : int
        Number of positions and actions.
    kernel : DeterministicKernel or StochasticKernel
        Position transition kernel.
    reward : callable
        ``reward(states, t) -> [n, n_pos, n_action]`` array of finite values, where
        ``states`` is the [n, dim] slice of the path panel at epoch ``t``.
    scrap : callable
        ``scrap(states) -> [n, n_pos]`` terminal values.
    n_dec : int
        Number of decision epochs (horizon T plus one).
    dim : int
        Number of components of the continuous state.

    The model is immutable after construction and reward/scrap handles must be pure.
    """

    def __init__(self, n_pos, n_action, kernel, reward, scrap, n_dec, dim=1):
        self.n_pos = check_positive_int(n_pos, "n_pos")
        self.n_action = check_positive_int(n_action, "n_action")
        self.n_dec = check_positive_int(n_dec, "n_dec", minimum=2)
        self.dim = check_positive_int(dim, "dim")
        if not isinstance(kernel, (DeterministicKernel, StochasticKernel)):
            raise ValueError("kernel must be a DeterministicKernel or StochasticKernel")
        self.kernel = kernel
        if not callable(reward) or not callable(scrap):
            raise ValueError("reward and scrap must be callable")
        self.reward = reward
        self.scrap = scrap

    def reward_values(self, states, t):
        """Evaluate the reward handle and enforce its output contract."""
        states = check_states(states, self.dim)
        out = np.asarray(self.reward(states, t), dtype=np.float64)
        expected = (states.shape[0], self.n_pos, self.n_action)
        if out.shape != expected:
            raise ValueError(f"reward output shape {out.shape}, expected {expected}")
        if not np.isfinite(out).all():
            raise ValueError(f"reward output contains non-finite values at t={t}")
        return out

    def scrap_values(self, states):
        """Evaluate the scrap handle and enforce its output contract."""
        states = check_states(states, self.dim)
        out = np.asarray(self.scrap(states), dtype=np.float64)
        expected = (states.shape[0], self.n_pos)
        if out.shape != expected:
            raise ValueError(f"scrap output shape {out.shape}, expected {expected}")
        if not np.isfinite(out).all():
            raise ValueError("scrap output contains non-finite values")
        return out


def validate_model(model):
    """Raise ValueError describing the first violated model invariant, if any."""
    if model.n_pos < 1 or model.n_action < 1:
        raise ValueError("n_pos and n_action must be >= 1")
    if model.n_dec < 2:
        raise ValueError("n_dec must be >= 2")
    if model.dim < 1:
        raise ValueError("dim must be >= 1")
    model.kernel.validate(model.n_pos, model.n_action)


def _check_indices(model, p, a, p2=None):
    if not 0 <= p < model.n_pos:
        raise IndexError(f"position {p} out of range [0, {model.n_pos})")
    if not 0 <= a < model.n_action:
        raise IndexError(f"action {a} out of range [0, {model.n_action})")
    if p2 is not None and not 0 <= p2 < model.n_pos:
        raise IndexError(f"position {p2} out of range [0, {model.n_pos})")


def transition_prob(model, p, a, p2):
    """Probability of moving from position p to p2 under action a."""
    _check_indices(model, p, a, p2)
    return model.kernel.probability(p, a, p2)


def successor_mix(model, p, a, values):
    """Kernel-weighted mix of per-position values; exact lookup for control maps."""
    _check_indices(model, p, a)
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (model.n_pos,):
        raise ValueError(f"values must have length n_pos = {model.n_pos}, got shape {values.shape}")
    return model.kernel.mix(p, a, values)
