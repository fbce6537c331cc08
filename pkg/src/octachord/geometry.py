"""Geometry of the regular octahedron and the special-function helpers
shared by the closed-form densities.

All closed forms work with unit edge.  Lengths for an arbitrary edge are
rescaled at the API boundary (``gamma''_l(r) = gamma''(r / l) / l**2``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)

# Unit-edge critical distances.
H_PARALLEL = math.sqrt(2.0 / 3.0)  # distance between opposite facets
H_FACET = SQRT3 / 2.0  # facet height
DIAMETER = SQRT2
LAMBDA_C_BRANCH = math.sqrt(5.0 / 6.0)
LAMBDA_D_BRANCH = math.sqrt(10.0) / 3.0

ALPHA = math.acos(-1.0 / 3.0)
ALPHA_C = math.pi - ALPHA

# Half-open range boundaries, unit edge.
RANGE_BOUNDS = (0.0, H_PARALLEL, H_FACET, 1.0, DIAMETER)

# Slack allowed on radical / arcsine arguments and on the support ends.
RADICAL_TOL = 1e-9
ASIN_TOL = 1e-9
SUPPORT_TOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OutOfRangeError(ValueError):
    """A distance lies outside the interval an operation is defined on."""


class EvaluationError(ArithmeticError):
    """A closed-form term could not be evaluated (e.g. arcsine argument > 1)."""


class PairClass(Enum):
    EDGE = "edge"
    VERTEX = "vertex"
    PARALLEL = "parallel"

    @property
    def multiplicity(self) -> int:
        return _MULTIPLICITY[self]

    @property
    def shared_vertices(self) -> int:
        return {PairClass.EDGE: 2, PairClass.VERTEX: 1, PairClass.PARALLEL: 0}[self]


_MULTIPLICITY = {PairClass.EDGE: 24, PairClass.VERTEX: 24, PairClass.PARALLEL: 8}


@dataclass(frozen=True)
class RangeId:
    """One of the four distance ranges a, b, c, d (scaled to the edge)."""

    tag: str
    lower: float
    upper: float

    def __contains__(self, r: float) -> bool:
        if self.tag == "D":
            return self.lower <= r <= self.upper
        return self.lower <= r < self.upper


@dataclass(frozen=True)
class Facet:
    vertices: np.ndarray  # (3, 3), one vertex per row
    normal: np.ndarray  # outward unit normal
    signs: tuple[int, int, int]

    @property
    def area(self) -> float:
        a, b, c = self.vertices
        return 0.5 * float(np.linalg.norm(np.cross(b - a, c - a)))


@dataclass(frozen=True)
class OctahedronGeometry:
    edge: float
    volume: float
    surface: float
    circumradius: float
    H: float
    h: float
    alpha: float
    alpha_c: float
    minimax: tuple[float, float, float, float]
    vertices: np.ndarray = field(repr=False)
    facets: tuple[Facet, ...] = field(repr=False)

    @property
    def diameter(self) -> float:
        return self.minimax[-1]

    @property
    def inradius(self) -> float:
        return self.circumradius / SQRT3

    def ranges(self) -> tuple[RangeId, ...]:
        b = [x * self.edge for x in RANGE_BOUNDS]
        return tuple(RangeId(t, b[i], b[i + 1]) for i, t in enumerate("ABCD"))


def make_octahedron(edge: float = 1.0) -> OctahedronGeometry:
    """Build the octahedron with vertices on the coordinate axes."""
    edge = float(edge)
    if not math.isfinite(edge) or edge <= 0.0:
        raise DomainError(f"edge must be positive and finite, got {edge!r}")

    a = edge / SQRT2
    vertices = np.array(
        [[a, 0, 0], [-a, 0, 0], [0, a, 0], [0, -a, 0], [0, 0, a], [0, 0, -a]],
        dtype=float,
    )
    facets = []
    # facet k <-> sign octant; (+,+,+) is index 0, (-,-,-) is index 7
    for signs in itertools.product((1, -1), repeat=3):
        verts = np.diag(np.array(signs, dtype=float) * a)
        facets.append(Facet(verts, np.array(signs, dtype=float) / SQRT3, signs))

    return OctahedronGeometry(
        edge=edge,
        volume=SQRT2 * edge**3 / 3.0,
        surface=2.0 * SQRT3 * edge**2,
        circumradius=a,
        H=H_FACET * edge,
        h=H_PARALLEL * edge,
        alpha=ALPHA,
        alpha_c=ALPHA_C,
        minimax=(H_PARALLEL * edge, H_FACET * edge, edge, SQRT2 * edge),
        vertices=vertices,
        facets=tuple(facets),
    )


def classify_range(r: float, geom: OctahedronGeometry, side: str = "right") -> RangeId:
    """Return the range holding ``r``.

    Ranges are half-open on the right, so a breakpoint belongs to the upper
    range.  ``side="left"`` gives the range approached from below instead,
    which is how left limits at breakpoints are evaluated.
    """
    ranges = geom.ranges()
    if not (-SUPPORT_TOL * geom.edge <= r <= geom.diameter * (1 + SUPPORT_TOL)):
        raise OutOfRangeError(f"r={r!r} outside [0, {geom.diameter}]")
    for rng in ranges:
        if side == "left" and rng.lower < r <= rng.upper:
            return rng
        if side == "right" and r in rng:
            return rng
    if side == "left" and r <= 0.0:
        return ranges[0]
    return ranges[-1]


def range_index(r: np.ndarray, side: str = "right") -> np.ndarray:
    """Vectorised unit-edge range lookup: 0..3 for A..D."""
    inner = np.asarray(RANGE_BOUNDS[1:-1])
    if side == "left":
        idx = np.searchsorted(inner, r, side="left")
    else:
        idx = np.searchsorted(inner, r, side="right")
    return idx


def _radical(name: str, arg):
    arg = np.asarray(arg, dtype=float)
    if np.any(arg < -RADICAL_TOL) or np.any(np.isnan(arg)):
        worst = float(np.nanmin(arg)) if not np.all(np.isnan(arg)) else float("nan")
        raise DomainError(f"{name}: negative argument {worst:.3e} under the radical")
    out = np.sqrt(np.maximum(arg, 0.0))
    return float(out) if out.ndim == 0 else out


def r11(r):
    """sqrt(r**2 - 1)"""
    r = np.asarray(r, dtype=float)
    return _radical("R11", r * r - 1.0)


def r23(r):
    """sqrt(3 r**2 - 2)"""
    r = np.asarray(r, dtype=float)
    return _radical("R23", 3.0 * r * r - 2.0)


def r34(r):
    """sqrt(4 r**2 - 3)"""
    r = np.asarray(r, dtype=float)
    return _radical("R34", 4.0 * r * r - 3.0)


def radicals(r):
    return r11(r), r23(r), r34(r)


def clamped_arcsin(x, term: str = "arcsin"):
    """arcsin that forgives rounding noise just past +-1 and nothing more."""
    x = np.asarray(x, dtype=float)
    bad = ~(np.abs(x) <= 1.0 + ASIN_TOL)
    if np.any(bad):
        worst = x[bad].flat[0] if x.ndim else float(x)
        raise EvaluationError(f"{term}: argument {worst!r} outside [-1, 1]")
    out = np.arcsin(np.clip(x, -1.0, 1.0))
    return float(out) if out.ndim == 0 else out


def _check_interval(r: np.ndarray, lo: float, hi: float, name: str) -> None:
    tol = 1e-12
    if np.any(r < lo - tol) or np.any(r > hi + tol) or np.any(np.isnan(r)):
        raise OutOfRangeError(f"{name} defined on [{lo}, {hi}]")


def lambda_c(r):
    """Piecewise arcsine used by the vertex-pair density in range c.

    The arcsine argument touches -1 at sqrt(5/6); switching branch there
    keeps the function smooth.
    """
    r = np.asarray(r, dtype=float)
    _check_interval(r, H_FACET, 1.0, "lambda_C")
    r2 = r * r
    arg = (17.0 + 18.0 * r2 * (r2 - 2.0)) / (2.0 * r23(r) ** 4)
    s = clamped_arcsin(arg, "lambda_C")
    out = np.where(r < LAMBDA_C_BRANCH, s, -np.pi - s)
    return float(out) if out.ndim == 0 else out


def lambda_d(r):
    """Piecewise arcsine used by the vertex-pair density in range d.

    The argument equals sqrt(3)/2 at both ends of [1, sqrt(2)] and peaks at
    exactly 1 for r = sqrt(10)/3, where the branch switches.
    """
    r = np.asarray(r, dtype=float)
    _check_interval(r, 1.0, DIAMETER, "lambda_D")
    arg = SQRT3 * (r11(r) + 1.0) / (2.0 * r23(r))
    s = clamped_arcsin(arg, "lambda_D")
    out = np.where(r < LAMBDA_D_BRANCH, s, np.pi - s)
    return float(out) if out.ndim == 0 else out


def contains(point, geom: OctahedronGeometry) -> bool:
    p = np.asarray(point, dtype=float)
    return bool(np.abs(p).sum() <= geom.circumradius)


def contains_many(points: np.ndarray, geom: OctahedronGeometry) -> np.ndarray:
    return np.abs(points).sum(axis=-1) <= geom.circumradius


def classify_pair(f1: int, f2: int, geom: OctahedronGeometry) -> PairClass:
    if f1 == f2:
        raise DomainError("a facet paired with itself contributes nothing")
    if not (0 <= f1 < 8 and 0 <= f2 < 8):
        raise DomainError(f"facet indices must be in 0..7, got {f1}, {f2}")
    a, b = geom.facets[f1], geom.facets[f2]
    if np.allclose(a.normal, -b.normal):
        return PairClass.PARALLEL
    shared = sum(
        any(np.allclose(u, v) for v in b.vertices) for u in a.vertices
    )
    if shared == 2:
        return PairClass.EDGE
    if shared == 1:
        return PairClass.VERTEX
    raise DomainError(f"facets {f1}, {f2} share no vertex yet are not opposite")


# One ordered pair per class; every other pair of the class is congruent.
REPRESENTATIVE_PAIRS = {
    PairClass.EDGE: (0, 1),  # (+,+,+) / (+,+,-)
    PairClass.VERTEX: (0, 3),  # (+,+,+) / (+,-,-)
    PairClass.PARALLEL: (0, 7),  # (+,+,+) / (-,-,-)
}
