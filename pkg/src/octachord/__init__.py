"""Chord-length probability density of the regular octahedron."""

__version__ = "0.1.0"

from octachord.geometry import (
    OctahedronGeometry,
    PairClass,
    RangeId,
    classify_pair,
    classify_range,
    contains,
    make_octahedron,
)
from octachord.densities import gamma2_edge, gamma2_parallel, gamma2_vertex
from octachord.assembly import (
    QuadratureConfig,
    clpd,
    discontinuity,
    gamma0,
    gamma1,
    gamma2_total,
    intensity,
    sum_rules,
)

__all__ = [
    "OctahedronGeometry",
    "PairClass",
    "QuadratureConfig",
    "RangeId",
    "classify_pair",
    "classify_range",
    "clpd",
    "contains",
    "discontinuity",
    "gamma0",
    "gamma1",
    "gamma2_edge",
    "gamma2_parallel",
    "gamma2_total",
    "gamma2_vertex",
    "intensity",
    "make_octahedron",
    "sum_rules",
]
