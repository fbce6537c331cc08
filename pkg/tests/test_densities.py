import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from octachord.densities import (
    BRANCHES,
    PairDensityValue,
    edge_a,
    gamma2_class,
    gamma2_edge,
    gamma2_parallel,
    gamma2_vertex,
    pair_density,
    parallel_b,
    parallel_c,
    parallel_d,
)
from octachord.geometry import H_FACET, H_PARALLEL, OutOfRangeError, PairClass
from octachord.montecarlo import McConfig
from octachord.validation import compare_pair

# Frozen with mpmath at 30 digits from the printed closed forms.
EDGE_AT_0 = 0.063561220515812349923
EDGE_AT_HALF = 0.030953530454514574209
VERTEX_AT_HALF = 0.039524509906617274837
PARALLEL_AT_1 = 0.035314835952474120142

DENSITIES = [gamma2_edge, gamma2_vertex, gamma2_parallel]


def test_edge_at_zero():
    assert gamma2_edge(0.0) == pytest.approx(EDGE_AT_0, abs=1e-15)


def test_edge_range_a_linear():
    # two-term linear expression, evaluated independently
    alpha = math.acos(-1 / 3)
    r = 0.5
    expected = (2 * math.sqrt(2) - math.pi + alpha) / (8 * math.pi) - (
        18 + (7 * math.sqrt(3) - 9) * math.pi
    ) * r / (96 * math.sqrt(2) * math.pi)
    assert gamma2_edge(r) == pytest.approx(expected, rel=1e-14)
    assert gamma2_edge(r) == pytest.approx(EDGE_AT_HALF, rel=1e-13)


def test_vertex_values():
    assert gamma2_vertex(0.0) == 0.0
    assert gamma2_vertex(0.5) == pytest.approx(VERTEX_AT_HALF, rel=1e-13)


def test_parallel_values():
    assert gamma2_parallel(0.5) == 0.0
    assert gamma2_parallel(H_PARALLEL) == pytest.approx(0.375, abs=1e-14)
    assert gamma2_parallel(H_PARALLEL, side="left") == 0.0
    assert parallel_c(1.0) == pytest.approx(PARALLEL_AT_1, abs=1e-14)
    assert parallel_d(1.0) == pytest.approx(PARALLEL_AT_1, abs=1e-14)


CONTINUOUS_JUNCTIONS = [
    (pc, k) for pc in PairClass for k in range(3) if not (pc is PairClass.PARALLEL and k == 0)
]


@pytest.mark.parametrize("pc,k", CONTINUOUS_JUNCTIONS)
def test_branch_continuity(pc, k):
    point = [H_PARALLEL, H_FACET, 1.0][k]
    left = gamma2_class(pc, point - 1e-7)
    right = gamma2_class(pc, point + 1e-7)
    assert abs(left - right) < 1e-6


@pytest.mark.parametrize("pc,k", CONTINUOUS_JUNCTIONS)
def test_adjacent_branches_agree_at_breakpoint(pc, k):
    point = [H_PARALLEL, H_FACET, 1.0][k]
    lo, hi = BRANCHES[pc][k], BRANCHES[pc][k + 1]
    # evaluate each branch slightly inside its own range
    assert lo(point - 1e-9) == pytest.approx(hi(point + 1e-9), abs=1e-6)


def test_parallel_jump_is_three_eighths():
    assert parallel_b(H_PARALLEL) - 0.0 == pytest.approx(3 / 8, abs=1e-15)


@pytest.mark.parametrize("f", DENSITIES)
def test_nonnegative_on_grid(f):
    r = np.linspace(0.0, math.sqrt(2), 10_000)
    # cancellation in the range-d forms leaves ~1e-13 noise where the value is ~0
    assert f(r).min() >= -1e-12


@pytest.mark.parametrize("f", DENSITIES)
def test_vanish_at_diameter(f):
    assert abs(f(math.sqrt(2))) < 1e-6


@pytest.mark.parametrize("f", DENSITIES)
@pytest.mark.parametrize("r", [-0.01, 1.5, math.nan])
def test_out_of_range(f, r):
    with pytest.raises(OutOfRangeError):
        f(r)


@given(st.floats(min_value=0.0, max_value=math.sqrt(2)))
def test_vectorised_matches_scalar(r):
    for f in DENSITIES:
        assert f(np.array([r]))[0] == f(r)


@given(st.floats(min_value=1e-3, max_value=math.sqrt(2)))
def test_finite(r):
    for f in DENSITIES:
        assert math.isfinite(f(r))


def test_pair_density_value():
    v = pair_density(PairClass.EDGE, 0.3)
    assert isinstance(v, PairDensityValue)
    assert v.range.tag == "A"
    assert v.value == gamma2_edge(0.3)
    assert pair_density(PairClass.VERTEX, 2.0).value == 0.0


def test_edge_a_scalar_array_agree():
    x = np.linspace(0, 0.8, 7)
    assert np.allclose(edge_a(x), [edge_a(float(v)) for v in x])


@pytest.mark.parametrize("pc", list(PairClass))
def test_closed_forms_match_surface_sampling(pc):
    """Per-bin check of each transcribed closed form against direct sampling."""
    cmp = compare_pair(pc, McConfig(seed=7, samples=2_000_000, bins=20, split_at_jump=False))
    assert cmp.count_within(3.0) >= 18
    assert cmp.max_abs_z < 5
