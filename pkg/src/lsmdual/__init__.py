"""Least squares Monte Carlo valuation with pathwise duality bounds."""

from .basis import BasisSpec, DesignMatrix, basis_dimension, build_design_matrix, evaluate_basis_row
from .bermudan import bermudan_gbm_params, bermudan_put_model
from .dual import (
    BoundResult,
    additive_duals,
    bounds,
    confidence_interval,
    path_policy,
    save_bounds_csv,
)
from .lsm import LeastSquaresMC, load_fit, save_fit
from .model import (
    DeterministicKernel,
    MdpModel,
    StochasticKernel,
    successor_mix,
    transition_prob,
    validate_model,
)
from .regression import apply_regressor, fit_qr, fit_svd
from .simulate import GbmParams, gbm_paths, load_panel, nested_gbm, rng_stream, save_panel

__version__ = "0.1.0"

__all__ = [
    "BasisSpec",
    "BoundResult",
    "DesignMatrix",
    "DeterministicKernel",
    "GbmParams",
    "LeastSquaresMC",
    "MdpModel",
    "StochasticKernel",
    "additive_duals",
    "apply_regressor",
    "basis_dimension",
    "bermudan_gbm_params",
    "bermudan_put_model",
    "bounds",
    "build_design_matrix",
    "confidence_interval",
    "evaluate_basis_row",
    "fit_qr",
    "fit_svd",
    "gbm_paths",
    "load_fit",
    "load_panel",
    "nested_gbm",
    "path_policy",
    "rng_stream",
    "save_bounds_csv",
    "save_fit",
    "save_panel",
    "successor_mix",
    "transition_prob",
    "validate_model",
]
