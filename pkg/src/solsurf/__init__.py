"""Invariant surfaces in Sol geometry: curvature conditions, generating curves and their classification."""

from .catalog import ClosedFormSolution, catalog_entries, find_entry, quadrature_y
from .classifier import CaseLabel, Prop, classify, verify_label
from .curvature import CurvatureProfile, CurveState, curvature_profile, fundamental_forms, graph_curvatures
from .kernel import SolPoint, SolTangent, christoffel, sectional_curvature
from .ode import (CMC, ExtrinsicK, IntegratorOptions, IntrinsicK, LinearWeingartenHK, LinearWeingartenKappa,
                  PrincipalRatio, ReachedRangeEnd, SingularEndpoint, StepFailure, Trajectory, integrate,
                  integrate_span, make_condition, residual)

__version__ = "0.1.0"

__all__ = [
    "ClosedFormSolution", "catalog_entries", "find_entry", "quadrature_y",
    "CaseLabel", "Prop", "classify", "verify_label",
    "CurvatureProfile", "CurveState", "curvature_profile", "fundamental_forms", "graph_curvatures",
    "SolPoint", "SolTangent", "christoffel", "sectional_curvature",
    "CMC", "ExtrinsicK", "IntegratorOptions", "IntrinsicK", "LinearWeingartenHK", "LinearWeingartenKappa",
    "PrincipalRatio", "ReachedRangeEnd", "SingularEndpoint", "StepFailure", "Trajectory", "integrate",
    "integrate_span", "make_condition", "residual",
]
