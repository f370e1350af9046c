"""Critical points of polynomial optimization problems, solved by homotopy continuation."""

from .degrees import cegm_ml_degree, ed_degree_ci, ed_degree_curve, ml_degree_ci, polar_degrees_surface
from .homotopy import Solution, SolutionSet, TrackerConfig, count_real, select_minimizer, solve
from .poly import Polynomial, PolyMatrix, PolySystem, det, jacobian, minors, parse
from .systems import (
    LSSM,
    ModelSpec,
    SquareSystem,
    build_cegm_scattering,
    build_discrete_mle,
    build_ed_system,
    build_gaussian_concentration,
    build_gaussian_covariance,
    build_linear_section_system,
)

__all__ = [
    "LSSM",
    "ModelSpec",
    "Polynomial",
    "PolyMatrix",
    "PolySystem",
    "Solution",
    "SolutionSet",
    "SquareSystem",
    "TrackerConfig",
    "build_cegm_scattering",
    "build_discrete_mle",
    "build_ed_system",
    "build_gaussian_concentration",
    "build_gaussian_covariance",
    "build_linear_section_system",
    "cegm_ml_degree",
    "count_real",
    "det",
    "ed_degree_ci",
    "ed_degree_curve",
    "jacobian",
    "minors",
    "ml_degree_ci",
    "parse",
    "polar_degrees_surface",
    "select_minimizer",
    "solve",
]
