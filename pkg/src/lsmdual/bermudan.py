"""Built-in Bermudan put model.

Positions: 0 = exercised (absorbing), 1 = unexercised. Actions: 0 = don't
exercise, 1 = exercise. Exercising while unexercised pays the discounted
payoff and moves to the absorbing position; every other (position, action)
pays zero. Discounting is baked into the reward values via the per-step rate.
"""

import numpy as np

from .model import DeterministicKernel, MdpModel
from .simulate import GbmParams

EXERCISED, UNEXERCISED = 0, 1
DONT_EXERCISE, EXERCISE = 0, 1


def bermudan_put_model(strike, rate, step, n_dec):
    """MdpModel for a Bermudan put on a single underlying.

    ``rate`` and ``step`` set the per-epoch discount factor exp(-rate * step);
    epoch t therefore carries discount exp(-rate * step * t).
    """
    if strike <= 0:
        raise ValueError(f"strike must be positive, got {strike}")
    kappa = rate * step

    def reward(states, t):
        out = np.zeros((states.shape[0], 2, 2))
        out[:, UNEXERCISED, EXERCISE] = np.exp(-kappa * t) * np.maximum(strike - states[:, 0], 0.0)
        return out

    def scrap(states):
        out = np.zeros((states.shape[0], 2))
        out[:, UNEXERCISED] = np.exp(-kappa * (n_dec - 1)) * np.maximum(strike - states[:, 0], 0.0)
        return out

    kernel = DeterministicKernel([[EXERCISED, EXERCISED], [UNEXERCISED, EXERCISED]])
    return MdpModel(
        n_pos=2, n_action=2, kernel=kernel, reward=reward, scrap=scrap, n_dec=n_dec, dim=1
    )


def bermudan_gbm_params(start, rate, vol, step, antithetic=True):
    """Step-scaled GBM parameters for the risk-neutral underlying."""
    return GbmParams(
        start=start, drift=rate * step, vol=vol * np.sqrt(step), antithetic=antithetic
    )
