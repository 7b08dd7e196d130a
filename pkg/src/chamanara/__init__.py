"""Exact arithmetic for the Chamanara surface and the affine map ``phi``."""

from .dyadic import (DigitStream, DyadicRational, SparseExponentSequence, digit_at,
                     explicit_sequence, exponential_sequence, polynomial_sequence,
                     sparse_complement_digits, sparse_sum_digits, to_dyadic_approx,
                     verify_divergence)
from .dynamics import (PHI, PHI_INVERSE, TAU, AffineMapDescriptor, InconclusiveError,
                       PeriodicPoint, iterate, periodic_points, phi, phi_digits, phi_inverse,
                       phi_power, tau, verify_isolation)
from .orbits import (AccumulationReport, OrbitReport, PuncturedSurfaceDescription,
                     SpecialPoint, accumulation_clusters, build_punctured_surface,
                     certified_separation, forward_orbit_digits, make_special_point,
                     stabilizer_proxy_check)
from .surface import (DistanceBound, EdgeSegment, PointClass, PointKind, RemovedPointError,
                      SquarePoint, boundary_distance, canonical_rep, classify_point,
                      distance_lower_bound, identify_edge)

__version__ = "0.1.0"

__all__ = [
    "AccumulationReport", "AffineMapDescriptor", "DigitStream", "DistanceBound",
    "DyadicRational", "EdgeSegment", "InconclusiveError", "OrbitReport", "PHI",
    "PHI_INVERSE", "PeriodicPoint", "PointClass", "PointKind", "PuncturedSurfaceDescription",
    "RemovedPointError", "SparseExponentSequence", "SpecialPoint", "SquarePoint", "TAU",
    "accumulation_clusters", "boundary_distance", "build_punctured_surface",
    "canonical_rep", "certified_separation", "classify_point", "digit_at",
    "distance_lower_bound", "explicit_sequence", "exponential_sequence",
    "forward_orbit_digits", "identify_edge", "iterate", "make_special_point",
    "periodic_points", "phi", "phi_digits", "phi_inverse", "phi_power",
    "polynomial_sequence", "sparse_complement_digits", "sparse_sum_digits",
    "stabilizer_proxy_check", "tau", "to_dyadic_approx", "verify_divergence",
    "verify_isolation",
]
