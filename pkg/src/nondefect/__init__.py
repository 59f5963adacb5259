"""Nondefectivity bounds and exact Terracini rank certificates for joins of reducible cones."""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    expected_dim,
    fatpoint_report,
    filling_criterion,
    froberg_report,
    mixture_identifiable,
    nondefective_criterion,
    partition_bounds,
    secant_bounds,
    two_component_criterion,
)
from .bundle import FatPoints, Froberg, Moments, Partition, family_from_dict  # noqa: E402
from .certify import certify_alpha, certify_r, defect_evidence_scan  # noqa: E402
from .linalg import BACKEND  # noqa: E402

__all__ = [
    "BACKEND",
    "FatPoints",
    "Froberg",
    "Moments",
    "Partition",
    "certify_alpha",
    "certify_r",
    "defect_evidence_scan",
    "expected_dim",
    "family_from_dict",
    "fatpoint_report",
    "filling_criterion",
    "froberg_report",
    "mixture_identifiable",
    "nondefective_criterion",
    "partition_bounds",
    "secant_bounds",
    "two_component_criterion",
]
