"""Command-line front end: value, bounds and simulate pipelines from a YAML config.

Exit codes: 0 success, 1 numerical failure, 2 config errors. All printed
estimates use six decimal places and are deterministic for a given config and
seed, independent of --threads.
"""

import argparse
import os
import sys

import numpy as np
import yaml

from .basis import BasisSpec
from .bermudan import bermudan_gbm_params, bermudan_put_model
from .dual import additive_duals, bounds, confidence_interval, path_policy, save_bounds_csv
from .lsm import LeastSquaresMC, load_fit, save_fit
from .simulate import gbm_paths, load_panel, nested_gbm, save_panel


class ConfigError(Exception):
    """Invalid or missing configuration."""


MODEL_REGISTRY = ("bermudan_put",)


def _section(config, name, required=True):
    block = config.get(name)
    if block is None:
        if required:
            raise ConfigError(f"missing config section '{name}'")
        return {}
    if not isinstance(block, dict):
        raise ConfigError(f"config section '{name}' must be a mapping")
    return block


def _get(block, key, kind, default=None, required=False, section=""):
    value = block.get(key, default)
    if value is None:
        if required:
            raise ConfigError(f"missing config field '{section}.{key}'")
        return None
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"config field '{section}.{key}' must be an integer, got {value!r}")
        return value
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"config field '{section}.{key}' must be a number, got {value!r}")
        return float(value)
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"config field '{section}.{key}' must be a boolean, got {value!r}")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"config field '{section}.{key}' must be a string, got {value!r}")
        return value
    return value


class RunConfig:
    """Validated run configuration built from the YAML mapping."""

    def __init__(self, raw):
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a mapping")

        model = _section(raw, "model")
        name = _get(model, "name", str, required=True, section="model")
        if name not in MODEL_REGISTRY:
            raise ConfigError(f"unknown model '{name}'; built-ins: {', '.join(MODEL_REGISTRY)}")
        self.model_name = name
        self.strike = _get(model, "strike", float, required=True, section="model")
        self.start = _get(model, "start", float, required=True, section="model")
        self.rate = _get(model, "rate", float, required=True, section="model")
        self.vol = _get(model, "vol", float, required=True, section="model")
        self.step = _get(model, "step", float, required=True, section="model")
        self.n_dec = _get(model, "n_dec", int, required=True, section="model")
        if self.n_dec < 2:
            raise ConfigError("model.n_dec must be >= 2")
        if self.step <= 0:
            raise ConfigError("model.step must be positive")

        sim = _section(raw, "simulation")
        self.n_path = _get(sim, "n_path", int, required=True, section="simulation")
        self.n_path_eval = _get(sim, "n_path_eval", int, default=100, section="simulation")
        self.n_subsim = _get(sim, "n_subsim", int, default=100, section="simulation")
        self.seed = _get(sim, "seed", int, required=True, section="simulation")
        self.eval_seed = _get(sim, "eval_seed", int, section="simulation")
        self.antithetic = _get(sim, "antithetic", bool, default=True, section="simulation")
        for field in ("n_path", "n_path_eval", "n_subsim"):
            if getattr(self, field) < 1:
                raise ConfigError(f"simulation.{field} must be >= 1")

        basis = _section(raw, "basis")
        self.btype = _get(basis, "btype", str, default="power", section="basis")
        self.flags = basis.get("flags")
        self.intercept = _get(basis, "intercept", bool, default=True, section="basis")
        self.knots = basis.get("knots")

        reg = _section(raw, "regression", required=False)
        self.backend = _get(reg, "backend", str, default="svd", section="regression")
        if self.backend not in ("svd", "qr"):
            raise ConfigError(f"regression.backend must be 'svd' or 'qr', got '{self.backend}'")
        self.rcond = _get(reg, "rcond", float, section="regression")

        out = _section(raw, "output", required=False)
        self.out_dir = _get(out, "dir", str, default=".", section="output")
        self.paths_file = _get(out, "paths_file", str, section="output")
        self.fit_file = _get(out, "fit_file", str, section="output")
        self.bounds_file = _get(out, "bounds_file", str, section="output")

        self.alpha = _get(raw, "alpha", float, default=0.01, section="")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie in (0, 1)")
        self.position = _get(raw, "position", int, default=1, section="")

    def resolve_eval_seed(self):
        return self.eval_seed if self.eval_seed is not None else self.seed + 1

    def build_model(self):
        return bermudan_put_model(self.strike, self.rate, self.step, self.n_dec)

    def build_gbm_params(self):
        return bermudan_gbm_params(self.start, self.rate, self.vol, self.step, self.antithetic)

    def build_basis(self):
        try:
            return BasisSpec(
                flags=self.flags, btype=self.btype, intercept=self.intercept, knots=self.knots
            )
        except ValueError as exc:
            raise ConfigError(f"invalid basis: {exc}") from exc

    def artifact_path(self, filename):
        if filename is None:
            return None
        return os.path.join(self.out_dir, filename)


def load_config(path):
    try:
        with open(path) as fh:
            raw = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file is not valid YAML: {exc}") from exc
    return RunConfig(raw)


def _training_panel(config):
    """Reuse a cached panel artifact when present, otherwise simulate fresh."""
    paths_file = config.artifact_path(config.paths_file)
    if paths_file and os.path.exists(paths_file):
        panel = load_panel(paths_file)
        expected = (config.n_path, 1, config.n_dec)
        if panel.shape != expected:
            raise ConfigError(
                f"cached panel {paths_file} has shape {panel.shape}, expected {expected}"
            )
        return panel, False
    panel = gbm_paths(config.build_gbm_params(), config.n_dec, config.n_path, config.seed)
    return panel, True


def _fit_estimator(config):
    model = config.build_model()
    spec = config.build_basis()
    panel, fresh = _training_panel(config)
    est = LeastSquaresMC(model, spec, regressor=config.backend, rcond=config.rcond).fit(panel)
    return est, panel, fresh


def cmd_value(config):
    est, panel, fresh = _fit_estimator(config)
    for p in range(est.model.n_pos):
        print(f"value[{p}] {est.value_estimate_[p]:.6f} (se {est.value_se_[p]:.6f})")
    paths_file = config.artifact_path(config.paths_file)
    if paths_file and fresh:
        save_panel(paths_file, panel)
    fit_file = config.artifact_path(config.fit_file)
    if fit_file:
        save_fit(fit_file, est.coefficients_)
    return 0


def cmd_bounds(config):
    fit_file = config.artifact_path(config.fit_file)
    if fit_file and os.path.exists(fit_file):
        model = config.build_model()
        spec = config.build_basis()
        est = LeastSquaresMC.from_coefficients(
            model, spec, load_fit(fit_file), regressor=config.backend, rcond=config.rcond
        )
    else:
        est, _, _ = _fit_estimator(config)
    model = est.model
    if not 0 <= config.position < model.n_pos:
        raise ConfigError(f"position {config.position} out of range [0, {model.n_pos})")

    params = config.build_gbm_params()
    eval_seed = config.resolve_eval_seed()
    eval_panel = gbm_paths(params, config.n_dec, config.n_path_eval, eval_seed)
    subsim = nested_gbm(eval_panel, params, config.n_subsim, eval_seed)
    policy = path_policy(eval_panel, est)
    mart = additive_duals(eval_panel, subsim, est)
    result = bounds(eval_panel, model, mart, policy)

    p = config.position
    print(f"lower[{p}] {result.mean_lower[p]:.6f} (se {result.se_lower[p]:.6f})")
    print(f"upper[{p}] {result.mean_upper[p]:.6f} (se {result.se_upper[p]:.6f})")
    lo, hi = confidence_interval(result, config.alpha, p)
    print(f"{lo:.6f} {hi:.6f}")
    bounds_file = config.artifact_path(config.bounds_file)
    if bounds_file:
        save_bounds_csv(bounds_file, result)
    return 0


def cmd_simulate(config):
    panel = gbm_paths(config.build_gbm_params(), config.n_dec, config.n_path, config.seed)
    paths_file = config.artifact_path(config.paths_file or "paths.bin")
    save_panel(paths_file, panel)
    print(f"wrote {paths_file}")
    return 0


COMMANDS = {"value": cmd_value, "bounds": cmd_bounds, "simulate": cmd_simulate}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lsmdual",
        description="Value finite-horizon MDPs by least squares Monte Carlo "
        "and certify the estimate with duality bounds.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("config", help="YAML run configuration")
    parser.add_argument("--seed", type=int, help="override simulation.seed")
    parser.add_argument("--threads", type=int, default=1,
                        help="cap worker threads (results are identical for any value)")
    parser.add_argument("--out-dir", help="override output.dir for artifacts")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config.seed = args.seed
        if args.out_dir is not None:
            config.out_dir = args.out_dir
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if config.out_dir:
            os.makedirs(config.out_dir, exist_ok=True)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, IndexError, np.linalg.LinAlgError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
