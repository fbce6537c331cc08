"""Second-derivative densities of the three facet-pair classes (unit edge).

Each class density is split into four analytic branches, one per distance
range a = [0, sqrt(2/3)), b = [sqrt(2/3), sqrt(3)/2), c = [sqrt(3)/2, 1),
d = [1, sqrt(2)].  Branch functions take unit-edge distances (scalars or
arrays) and do no range checking; the ``gamma2_*`` dispatchers do.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from octachord.geometry import (
    ALPHA,
    DIAMETER,
    SQRT2,
    SQRT3,
    SUPPORT_TOL,
    OutOfRangeError,
    PairClass,
    RangeId,
    clamped_arcsin,
    classify_range,
    lambda_c,
    lambda_d,
    make_octahedron,
    r11,
    r23,
    r34,
    range_index,
)

PI = np.pi
SQRT6 = np.sqrt(6.0)


# --- facets sharing an edge -------------------------------------------------


def edge_a(r):
    return (2 * SQRT2 - PI + ALPHA) / (8 * PI) - (18 + (7 * SQRT3 - 9) * PI) * r / (
        96 * SQRT2 * PI
    )


def edge_b(r):
    return (
        1 / (12 * SQRT6 * r**3)
        - 1 / (2 * SQRT6 * r)
        + (4 + SQRT2 * (PI + ALPHA)) / (8 * SQRT2 * PI)
        - (18 - (9 - 13 * SQRT3) * PI) * r / (96 * SQRT2 * PI)
    )


def edge_c(r):
    R23 = r23(r)
    r2 = r * r
    poly8 = 27 - 90 * r2 + 96 * r2**2 - 34 * r2**3 + 2 * r2**4
    bracket = (
        -4 * SQRT3 * PI
        - 36 * (4 + SQRT2 * ALPHA) * r**3
        + 3 * (18 - 9 * PI + 10 * SQRT3 * PI) * r**4
        + 6 * (25 * r2 - 6) * r34(r)
        + 8 * SQRT3 * clamped_arcsin((9 * r2 - 7) / (2 * R23**3), "edge_c[1]")
        + 96 * SQRT3 * r2 * clamped_arcsin(1 / (2 * R23), "edge_c[2]")
        - 72 * SQRT2 * r**3 * clamped_arcsin(r / (SQRT3 * R23), "edge_c[3]")
        - 18
        * SQRT3
        * r**4
        * clamped_arcsin(SQRT3 * poly8 / (2 * r**7 * R23), "edge_c[4]")
    )
    return -bracket / (288 * SQRT2 * PI * r**3)


def edge_d(r):
    R11 = r11(r)
    R23 = r23(r)
    r2 = r * r
    bracket = (
        -16 * SQRT2
        + 8 * SQRT2 * (3 + SQRT3 * PI) * r2
        - 12 * PI * r**3
        + 3 * SQRT2 * (4 * SQRT3 - 3) * PI * r**4
        - 4 * SQRT2 * (5 * r2 - 2) * R11
        - 24 * r**3 * clamped_arcsin((4 + 4 * r2 - 7 * r2**2) / R23**4, "edge_d[1]")
        + 36 * SQRT2 * r**4 * clamped_arcsin(R11 / r, "edge_d[2]")
        - 8
        * SQRT6
        * r2
        * (2 + 3 * r2)
        * clamped_arcsin((1 + 3 * R11) / (2 * R23), "edge_d[3]")
    )
    return -bracket / (192 * PI * r**3)


# --- facets sharing a vertex ------------------------------------------------


def vertex_a(r):
    return (9 + SQRT3) * r / (96 * SQRT2)


def vertex_b(r):
    return -1 / (4 * SQRT6 * r**3) + 1 / (SQRT6 * r) + (9 - 29 * SQRT3) * r / (96 * SQRT2)


def vertex_c(r):
    R23 = r23(r)
    r2 = r * r
    s_cubic = clamped_arcsin((7 - 9 * r2) / (2 * R23**3), "vertex_c[1]")
    inner = (
        18 * clamped_arcsin(SQRT3 / (2 * r), "vertex_c[2]")
        + 8 * clamped_arcsin((2 * r2 - 3) / (2 * r2), "vertex_c[3]")
        + clamped_arcsin((9 - 12 * r2 + 2 * r2**2) / (2 * r2**2), "vertex_c[4]")
        - 30 * s_cubic
        - 24 * clamped_arcsin((6 * r2 - 5) / (2 * R23**2), "vertex_c[5]")
    )
    bracket = (
        -8 * SQRT3 * PI
        + 4 * r2 * (10 * SQRT3 * PI + 3 * r34(r) - 4 * SQRT3 * lambda_c(r))
        - 9 * (7 * SQRT3 - 2) * PI * r**4
        + 16 * SQRT3 * (4 * r2 - 1) * s_cubic
        + 2 * SQRT3 * r**4 * inner
    )
    return bracket / (192 * SQRT2 * PI * r**3)


def vertex_d(r):
    R11 = r11(r)
    R23 = r23(r)
    r2 = r * r
    poly = 3 * (
        -16
        + 8 * (12 + SQRT3 * PI) * r2
        - 16 * (5 + SQRT3 * PI) * r2**2
        - 2 * (18 + 5 * SQRT3 * PI) * r2**3
        + 9 * (3 + 2 * SQRT3 * PI) * r2**4
    )
    poly_r11 = (
        6
        * (8 + 12 * r2 - 2 * (31 + 6 * SQRT3 * PI) * r2**2 + 3 * (9 + 4 * SQRT3 * PI) * r2**3)
        * R11
    )
    angles = (
        -2 * SQRT3 * clamped_arcsin((4 - 3 * r2) / R23**2, "vertex_d[1]")
        + 3
        * r2
        * (
            3 * clamped_arcsin((R11 - 1) / (SQRT2 * r), "vertex_d[2]")
            + 2 * SQRT3 * clamped_arcsin(1 / R23, "vertex_d[3]")
        )
        - 2 * SQRT3 * R23**2 * lambda_d(r)
    )
    bracket = poly - poly_r11 + 2 * r2 * (-4 + 9 * r2**2 + r2 * (4 - 12 * R11)) * angles
    return -bracket / (48 * SQRT2 * PI * r**3 * (3 * r2 - 2 * R11) ** 2)


# --- opposite (parallel) facets ---------------------------------------------


def parallel_a(r):
    return np.zeros_like(np.asarray(r, dtype=float))


def parallel_b(r):
    return SQRT3 * (1 - r * r) / (2 * SQRT2 * r**3)


def parallel_c(r):
    return (
        SQRT3 * PI
        - 3 * r34(r)
        - 2 * SQRT3 * (2 * r * r - 1) * clamped_arcsin(1 / (2 * r23(r)), "parallel_c")
    ) / (4 * SQRT2 * PI * r**3)


def parallel_d(r):
    R11 = r11(r)
    R23 = r23(r)
    r2 = r * r
    bracket = (
        6 * SQRT3 * PI
        + (27 - 11 * SQRT3 * PI) * r2
        - 54 * R11
        + 6 * SQRT3 * (5 * r2 - 6) * clamped_arcsin(1 / R23, "parallel_d[1]")
        + 12 * SQRT3 * r2 * clamped_arcsin((1 + 3 * R11) / (2 * R23), "parallel_d[2]")
    )
    return -bracket / (36 * SQRT2 * PI * r**3)


BRANCHES = {
    PairClass.EDGE: (edge_a, edge_b, edge_c, edge_d),
    PairClass.VERTEX: (vertex_a, vertex_b, vertex_c, vertex_d),
    PairClass.PARALLEL: (parallel_a, parallel_b, parallel_c, parallel_d),
}


def _dispatch(branches, r, side: str):
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    if np.any(np.isnan(r)) or np.any(r < -SUPPORT_TOL) or np.any(r > DIAMETER * (1 + SUPPORT_TOL)):
        raise OutOfRangeError(f"distance outside [0, {DIAMETER}] (unit edge)")
    r = np.clip(r, 0.0, DIAMETER)
    idx = range_index(r, side)
    out = np.empty_like(r)
    for k, branch in enumerate(branches):
        mask = idx == k
        if np.any(mask):
            out[mask] = branch(r[mask])
    return float(out[0]) if scalar else out


def gamma2_edge(r, side: str = "right"):
    """Density of one ordered pair of facets sharing an edge (unit edge)."""
    return _dispatch(BRANCHES[PairClass.EDGE], r, side)


def gamma2_vertex(r, side: str = "right"):
    """Density of one ordered pair of facets sharing only a vertex (unit edge)."""
    return _dispatch(BRANCHES[PairClass.VERTEX], r, side)


def gamma2_parallel(r, side: str = "right"):
    """Density of one ordered pair of opposite facets (unit edge).

    Zero below sqrt(2/3), where it jumps to 3/8.
    """
    return _dispatch(BRANCHES[PairClass.PARALLEL], r, side)


def gamma2_class(pair_class: PairClass, r, side: str = "right"):
    return _dispatch(BRANCHES[pair_class], r, side)


@dataclass(frozen=True)
class PairDensityValue:
    r: float
    pair_class: PairClass
    value: float
    range: RangeId | None


_UNIT = make_octahedron(1.0)


def pair_density(pair_class: PairClass, r: float, side: str = "right") -> PairDensityValue:
    """Evaluate one class density at a unit-edge distance; zero past the diameter."""
    if r > DIAMETER * (1 + SUPPORT_TOL):
        return PairDensityValue(float(r), pair_class, 0.0, None)
    rng = classify_range(r, _UNIT, side)
    return PairDensityValue(float(r), pair_class, gamma2_class(pair_class, r, side), rng)
