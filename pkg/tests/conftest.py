import time

import numpy as np
import pytest

import lsmdual as ld

SEED_TRAIN = 1234
SEED_EVAL = 1235

PUT_CONFIG = dict(strike=40.0, start=36.0, rate=0.06, vol=0.2, step=0.02, n_dec=51)


def inverse_price(states):
    return 1.0 / states


@pytest.fixture(scope="session")
def put_model():
    return ld.bermudan_put_model(PUT_CONFIG["strike"], PUT_CONFIG["rate"], PUT_CONFIG["step"], PUT_CONFIG["n_dec"])


@pytest.fixture(scope="session")
def put_params():
    return ld.bermudan_gbm_params(
        PUT_CONFIG["start"], PUT_CONFIG["rate"], PUT_CONFIG["vol"], PUT_CONFIG["step"], antithetic=True
    )


@pytest.fixture(scope="session")
def put_basis():
    return ld.BasisSpec(
        flags=[[1, 1]],
        btype="power",
        intercept=True,
        knots=[[30.0, 40.0, 50.0]],
        custom=inverse_price,
        n_custom=1,
    )


@pytest.fixture(scope="session")
def put_panel(put_params):
    return ld.gbm_paths(put_params, PUT_CONFIG["n_dec"], 10000, SEED_TRAIN)


@pytest.fixture(scope="session")
def put_fit(put_model, put_basis, put_panel):
    return ld.LeastSquaresMC(put_model, put_basis).fit(put_panel)


@pytest.fixture(scope="session")
def put_bounds_run(put_model, put_params, put_fit):
    eval_panel = ld.gbm_paths(put_params, PUT_CONFIG["n_dec"], 100, SEED_EVAL)
    subsim = ld.nested_gbm(eval_panel, put_params, 100, SEED_EVAL)
    policy = ld.path_policy(eval_panel, put_fit)
    mart = ld.additive_duals(eval_panel, subsim, put_fit)
    result = ld.bounds(eval_panel, put_model, mart, policy)
    return dict(
        eval_panel=eval_panel, subsim=subsim, policy=policy, mart=mart, result=result
    )


@pytest.fixture(scope="session")
def twenty_seed_cis(put_model, put_params, put_fit):
    """Twenty independent evaluation runs: (seed, lo, hi, result, elapsed seconds)."""
    runs = []
    for k in range(20):
        seed = 5000 + k
        start = time.perf_counter()
        eval_panel = ld.gbm_paths(put_params, PUT_CONFIG["n_dec"], 100, seed)
        subsim = ld.nested_gbm(eval_panel, put_params, 100, seed)
        policy = ld.path_policy(eval_panel, put_fit)
        mart = ld.additive_duals(eval_panel, subsim, put_fit)
        result = ld.bounds(eval_panel, put_model, mart, policy)
        lo, hi = ld.confidence_interval(result, 0.01, 1)
        elapsed = time.perf_counter() - start
        runs.append(dict(seed=seed, lo=lo, hi=hi, result=result, elapsed=elapsed))
    return runs
