import math

import numpy as np
import pytest

from octachord.assembly import gamma0, integrate
from octachord.densities import gamma2_class
from octachord.geometry import H_PARALLEL, PairClass, make_octahedron
from octachord.montecarlo import (
    McConfig,
    interior_moments,
    iur_chords,
    mc_pair_density,
    stick_counts,
    stick_gamma,
)
from octachord.validation import compare_stick

SMALL = dict(samples=300_000, block_size=1 << 15)


def test_config_validation():
    for bad in (dict(samples=0), dict(bins=0), dict(workers=0), dict(block_size=0), dict(edge=-1.0)):
        with pytest.raises(ValueError):
            McConfig(**bad)


def test_bin_edges_split_at_jump():
    edges = McConfig(bins=20).bin_edges()
    assert len(edges) == 22
    assert np.any(edges == make_octahedron(1.0).h)
    assert len(McConfig(bins=20, split_at_jump=False).bin_edges()) == 21


@pytest.mark.parametrize(
    "fn",
    [
        lambda c: iur_chords(c).density,
        lambda c: mc_pair_density(PairClass.EDGE, c).density,
        lambda c: np.array(stick_counts(0.5, c)),
        lambda c: np.array([interior_moments(c).second_moment]),
    ],
)
def test_deterministic_across_workers(fn):
    one = fn(McConfig(seed=3, bins=30, workers=1, **SMALL))
    four = fn(McConfig(seed=3, bins=30, workers=4, **SMALL))
    assert np.array_equal(one, four)


def test_seed_changes_result():
    a = iur_chords(McConfig(seed=1, bins=30, **SMALL)).density
    b = iur_chords(McConfig(seed=2, bins=30, **SMALL)).density
    assert not np.array_equal(a, b)


def test_stick_limits():
    cfg = McConfig(seed=0, samples=20_000)
    assert stick_gamma(0.0, cfg)[0] == 1.0
    assert stick_gamma(1.5, cfg)[0] == 0.0
    with pytest.raises(ValueError):
        stick_counts(-0.1, cfg)


def test_stick_matches_gamma():
    cmp = compare_stick([0.3, 0.8, 1.2], McConfig(seed=5, **SMALL))
    assert cmp.max_abs_z < 4
    assert np.allclose(cmp.analytic, gamma0(np.array([0.3, 0.8, 1.2])))


def test_iur_mean_chord_and_support():
    geom = make_octahedron(1.0)
    h = iur_chords(McConfig(seed=11, bins=40, **SMALL))
    assert h.extra["longest"] <= geom.diameter * (1 + 1e-12)
    assert h.extra["overflow"] == 0
    assert abs(h.mean - 4 * geom.volume / geom.surface) < 4 * h.mean_err
    assert h.total_weight == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("edge", [1.0, 2.5])
def test_iur_edge_scaling(edge):
    geom = make_octahedron(edge)
    h = iur_chords(McConfig(seed=4, bins=20, edge=edge, **SMALL))
    assert abs(h.mean - 4 * geom.volume / geom.surface) < 4 * h.mean_err


def test_parallel_class_below_jump_is_empty():
    h = mc_pair_density(PairClass.PARALLEL, McConfig(seed=2, bins=40, **SMALL))
    below = h.bin_edges[1:] <= H_PARALLEL + 1e-15
    assert np.all(h.density[below] == 0.0)
    assert h.negative_weights == 0


@pytest.mark.parametrize("pc", list(PairClass))
def test_pair_integral_matches_quadrature(pc):
    h = mc_pair_density(pc, McConfig(seed=9, bins=20, **SMALL))
    est, err = h.integral()
    exact = integrate(lambda x: gamma2_class(pc, x))
    assert abs(est - exact) < 3.5 * err
    assert h.negative_weights == 0


def test_pair_density_edge_scaling():
    h1 = mc_pair_density(PairClass.VERTEX, McConfig(seed=1, bins=10, **SMALL))
    h2 = mc_pair_density(PairClass.VERTEX, McConfig(seed=1, bins=10, edge=2.0, **SMALL))
    # same random stream, so the rescaled histogram matches to round-off
    assert np.allclose(h2.density * 4.0, h1.density, rtol=1e-9, atol=1e-12)


def test_interior_moments():
    cfg = McConfig(seed=0, samples=2_000_000)
    m = interior_moments(cfg)
    assert abs(m.second_moment - 0.15) < 4 * m.second_moment_err
    assert abs(m.volume - math.sqrt(2) / 3) < 4 * m.volume_err
    m2 = interior_moments(McConfig(seed=0, samples=2_000_000, edge=2.0))
    assert m2.second_moment == pytest.approx(4 * m.second_moment, rel=1e-12)


def test_standard_error_scaling():
    """Quadrupling the sample count halves the standard error."""
    se1 = interior_moments(McConfig(seed=1, samples=250_000)).second_moment_err
    se4 = interior_moments(McConfig(seed=1, samples=1_000_000)).second_moment_err
    assert 1.6 <= se1 / se4 <= 2.4
    s1 = stick_gamma(0.5, McConfig(seed=1, samples=250_000))[1]
    s4 = stick_gamma(0.5, McConfig(seed=1, samples=1_000_000))[1]
    assert 1.6 <= s1 / s4 <= 2.4
