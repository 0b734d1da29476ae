from ._build import PredictorParams, build_predictor
from ._cache import read_predictor, write_predictor
from ._design import KINDS, RegularizerDesign, eps_reg, gamma_bar, resolve_design
from ._predict import (
    AffineMaps,
    PredictionResult,
    predict,
    predict_affine_maps,
    uncertainty_covariance,
)
from ._reference import qp_reference_solve

__all__ = [
    "KINDS",
    "RegularizerDesign",
    "resolve_design",
    "eps_reg",
    "gamma_bar",
    "PredictorParams",
    "build_predictor",
    "PredictionResult",
    "AffineMaps",
    "predict",
    "predict_affine_maps",
    "uncertainty_covariance",
    "qp_reference_solve",
    "read_predictor",
    "write_predictor",
]
