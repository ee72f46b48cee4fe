"""Projection of linearized power-flow regions onto renewable outputs."""

from ._core import (
    DepaExhausted,
    Error,
    InteriorPointInvalid,
    LinearRegion,
    ParseError,
    PhiResult,
    PhiStats,
    Polytope,
    SizeGuardExceeded,
    UnboundedRegion,
    ValidationError,
    build_region,
    classify_samples,
    enumerate_vertices,
    facet_support_audit,
    fme_project,
    make_region,
    membership,
    phi_run,
    regions_equivalent,
    support_value,
)

__all__ = [
    "DepaExhausted",
    "Error",
    "InteriorPointInvalid",
    "LinearRegion",
    "ParseError",
    "PhiResult",
    "PhiStats",
    "Polytope",
    "SizeGuardExceeded",
    "UnboundedRegion",
    "ValidationError",
    "build_region",
    "classify_samples",
    "enumerate_vertices",
    "facet_support_audit",
    "fme_project",
    "make_region",
    "membership",
    "phi_run",
    "regions_equivalent",
    "support_value",
]
