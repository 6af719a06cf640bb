"""Independent reference computations used to pin expected test values.

Everything here is deliberately written against the math, not against the
package internals: plain loops, enumeration and textbook formulas.
"""

import itertools

import numpy as np

# ---------------------------------------------------------------------------
# Cox-Ross-Rubinstein binomial tree for the put, with exercise optionally
# restricted to a stride of tree steps (a Bermudan date grid).
# ---------------------------------------------------------------------------

def crr_binomial_put(start, strike, rate, sigma, maturity, n_steps, exercise_stride=1):
    dt = maturity / n_steps
    up = np.exp(sigma * np.sqrt(dt))
    down = 1.0 / up
    disc = np.exp(-rate * dt)
    q = (np.exp(rate * dt) - down) / (up - down)
    j = np.arange(n_steps + 1)
    prices = start * up**j * down**(n_steps - j)
    values = np.maximum(strike - prices, 0.0)
    for step in range(n_steps - 1, -1, -1):
        values = disc * (q * values[1:] + (1.0 - q) * values[:-1])
        if step % exercise_stride == 0:
            j = np.arange(step + 1)
            prices = start * up**j * down**(step - j)
            values = np.maximum(values, strike - prices)
    return float(values[0])


# Tree value for the worked put (start 36, strike 40, rate 6%, vol 20%, one
# year split into 50 exercise dates), computed with 10,000 tree steps and
# exercise restricted to every 200th step. Frozen from crr_binomial_put.
TREE_REFERENCE = 4.477869970829013
TREE_STEPS = 10000
TREE_STRIDE = 200


# ---------------------------------------------------------------------------
# Finite-lattice toy: the continuous state walks +-1 from 0 with probability
# one half each; two positions, two actions, a generic stochastic kernel and
# generic smooth rewards chosen to avoid argmax ties. With three epochs the
# walk stays inside the five-point lattice {-2, ..., 2}.
# ---------------------------------------------------------------------------

TOY_N_DEC = 3
TOY_LATTICE = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
TOY_ALPHA = np.array(
    [
        [[0.8, 0.2], [0.25, 0.75]],
        [[0.55, 0.45], [0.1, 0.9]],
    ]
)


def toy_reward(states, t):
    z = states[:, 0]
    out = np.empty((states.shape[0], 2, 2))
    out[:, 0, 0] = 1.1 * z + 0.05 * t
    out[:, 0, 1] = 0.3 - 0.2 * z
    out[:, 1, 0] = 1.9 * z + 0.1
    out[:, 1, 1] = 1.1 - 0.45 * z + 0.07 * t
    return out


def toy_scrap(states):
    z = states[:, 0]
    out = np.empty((states.shape[0], 2))
    out[:, 0] = 0.4 * z
    out[:, 1] = 1.3 + 0.6 * z
    return out


def toy_indicators(states):
    """One indicator column per lattice point: a saturating basis for the walk."""
    return (states[:, 0][:, None] == TOY_LATTICE[None, :]).astype(float)


def toy_panel():
    """All 2^(n_dec - 1) equally likely walk trajectories, one path each."""
    rows = []
    for steps in itertools.product((1.0, -1.0), repeat=TOY_N_DEC - 1):
        rows.append(np.concatenate([[0.0], np.cumsum(steps)]))
    return np.asarray(rows)[:, None, :]


def toy_exact_values():
    """Exhaustive-enumeration Bellman values: dict (t, z) -> [value of p=0, p=1]."""
    horizon = TOY_N_DEC - 1
    values = {}
    for z in range(-horizon, horizon + 1):
        values[(horizon, z)] = toy_scrap(np.array([[float(z)]]))[0]
    for t in range(horizon - 1, -1, -1):
        for z in range(-t, t + 1):
            rew = toy_reward(np.array([[float(z)]]), t)[0]
            succ = 0.5 * (values[(t + 1, z - 1)] + values[(t + 1, z + 1)])
            best = np.empty(2)
            for p in range(2):
                action_vals = [
                    rew[p, a] + sum(TOY_ALPHA[p, a, p2] * succ[p2] for p2 in range(2))
                    for a in range(2)
                ]
                best[p] = max(action_vals)
            values[(t, z)] = best
    return values


def toy_exact_policy(panel, values):
    """Optimal action per (path, epoch, position) from the exact values."""
    n_path, _, n_dec = panel.shape
    horizon = n_dec - 1
    actions = np.empty((n_path, horizon, 2), dtype=np.intp)
    for i in range(n_path):
        for t in range(horizon):
            z = int(panel[i, 0, t])
            rew = toy_reward(np.array([[float(z)]]), t)[0]
            succ = 0.5 * (values[(t + 1, z - 1)] + values[(t + 1, z + 1)])
            for p in range(2):
                action_vals = [
                    rew[p, a] + sum(TOY_ALPHA[p, a, p2] * succ[p2] for p2 in range(2))
                    for a in range(2)
                ]
                actions[i, t, p] = int(np.argmax(action_vals))
    return actions


def toy_opt_mart(panel, values):
    """Ideal martingale increments built from the exact values and transitions."""
    n_path, _, n_dec = panel.shape
    horizon = n_dec - 1
    delta = np.empty((n_path, horizon, 2))
    for i in range(n_path):
        for t in range(horizon):
            z = int(panel[i, 0, t])
            z_next = int(panel[i, 0, t + 1])
            expected = 0.5 * (values[(t + 1, z - 1)] + values[(t + 1, z + 1)])
            delta[i, t] = expected - values[(t + 1, z_next)]
    return delta
