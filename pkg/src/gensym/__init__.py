"""Curvature, Weyl decomposition and induced structures of four-dimensional metrics."""

from .curvature import (
    Curvature, DegenerateMetricError, MetricField, MetricJet, christoffel, curvature_at,
    kulkarni_nomizu, metric_jet, riemann,
)
from .extension import AffineSurface, PhiTensor, riemannian_extension
from .hodge import Frame, Lambda2Frame, eigen3, hodge_star, orthonormalize, selfdual_basis
from .lie import BracketParams, LieAlgebra4, builtin_algebra, jacobi_system
from .models import CATALOG, ClassificationLabel, build_report, classify, get_model
from .structures import TwoFormField, j_from_omega

__version__ = "0.1.0"

__all__ = [
    "AffineSurface", "BracketParams", "CATALOG", "ClassificationLabel", "Curvature",
    "DegenerateMetricError", "Frame", "Lambda2Frame", "LieAlgebra4", "MetricField", "MetricJet",
    "PhiTensor", "TwoFormField", "build_report", "builtin_algebra", "christoffel", "classify",
    "curvature_at", "eigen3", "get_model", "hodge_star", "j_from_omega", "jacobi_system",
    "kulkarni_nomizu", "metric_jet", "orthonormalize", "riemann", "riemannian_extension",
    "selfdual_basis",
]
