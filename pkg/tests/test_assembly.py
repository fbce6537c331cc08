import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octachord.assembly import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    clpd,
    density_table,
    discontinuity,
    gamma0,
    gamma1,
    gamma2_total,
    integrate,
    intensity,
    moment,
    sum_rules,
)
from octachord.geometry import H_PARALLEL, OutOfRangeError, make_octahedron
from octachord.validation import finite_difference_gap, linearity_residual

TOTAL_AT_0 = 1.52546929237949639815
S_OVER_4V = 1.8371173070873836
SQRT2 = math.sqrt(2)


def test_total_at_zero():
    assert gamma2_total(0.0) == pytest.approx(TOTAL_AT_0, abs=1e-14)


def test_zeroth_moment():
    assert moment(0) == pytest.approx(S_OVER_4V, abs=1e-12)


@settings(max_examples=40)
@given(
    st.integers(min_value=-3, max_value=3),
    st.floats(min_value=0.0, max_value=SQRT2),
)
def test_scaling_law_powers_of_two(k, x):
    ell = 2.0**k
    # with a power-of-two edge the rescaling is exact in floating point
    assert gamma2_total(x * ell, ell) == gamma2_total(x) / ell**2


@settings(max_examples=30)
@given(
    st.floats(min_value=0.1, max_value=10.0),
    st.floats(min_value=0.0, max_value=SQRT2),
)
def test_scaling_law_any_edge(ell, x):
    assert gamma2_total(x * ell, ell) * ell**2 == pytest.approx(gamma2_total(x), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("ell", [1.0, 0.5, 3.0])
def test_clpd_normalised(ell):
    geom = make_octahedron(ell)
    total = integrate(lambda x: clpd(x * ell, ell)) * ell
    mean = integrate(lambda x: x * ell * clpd(x * ell, ell)) * ell
    assert total == pytest.approx(1.0, abs=1e-10)
    assert mean == pytest.approx(4 * geom.volume / geom.surface, rel=1e-10)


def test_clpd_zero_past_diameter_and_rejects_negative():
    assert clpd(1.5) == 0.0
    assert np.all(clpd(np.array([2.0, 5.0]), 1.0) == 0.0)
    with pytest.raises(OutOfRangeError):
        clpd(-0.1)


def test_bad_edge():
    with pytest.raises(ValueError):
        gamma2_total(0.1, edge=0.0)
    with pytest.raises(ValueError):
        clpd(0.1, edge=-1.0)


def test_gamma_boundary_values():
    assert gamma1(0.0) == pytest.approx(-S_OVER_4V, abs=1e-12)
    assert gamma0(0.0) == pytest.approx(1.0, abs=1e-12)
    assert gamma0(SQRT2) == 0.0
    assert gamma1(SQRT2) == 0.0


def test_gamma_shape():
    r = np.linspace(0, SQRT2, 2001)
    g = gamma0(r)
    g1 = gamma1(r)
    assert np.all((g >= -1e-14) & (g <= 1 + 1e-14))
    assert np.all(np.diff(g) <= 1e-15)
    assert np.all(g1 <= 1e-15)


def test_gamma_scaling():
    r = np.array([0.1, 0.5, 1.0])
    assert np.allclose(gamma0(2 * r, 2.0), gamma0(r), atol=1e-14)
    assert np.allclose(gamma1(2 * r, 2.0), gamma1(r) / 2, atol=1e-14)


def test_gamma_out_of_range():
    with pytest.raises(OutOfRangeError):
        gamma0(1.5)


def test_finite_difference_consistency():
    assert finite_difference_gap() < 1e-6


def test_linearity_on_first_range():
    assert linearity_residual() < 1e-9


def test_sum_rules_tight():
    rep = sum_rules()
    for name, dev in rep.deviations().items():
        assert dev < 1e-10, name
    assert rep.converged
    assert rep.guinier_lhs == pytest.approx(1 / (5 * SQRT2), rel=1e-12)
    assert rep.printed_rg_vs_sixth_moment_dev < 1e-12
    assert rep.printed_rg_rg2_dev == pytest.approx(0.13, abs=1e-12)


@pytest.mark.parametrize("ell", [0.5, 2.0])
def test_sum_rules_other_edges(ell):
    rep = sum_rules(edge=ell)
    for name, dev in rep.deviations().items():
        assert dev < 1e-10 * max(1.0, ell**5), name


def test_discontinuity():
    d = discontinuity()
    assert d.location == pytest.approx(H_PARALLEL)
    assert d.jump_closed_form == pytest.approx(3.0, abs=1e-13)
    assert d.jump_geometric == pytest.approx(3.0, abs=1e-13)
    assert discontinuity(2.0).jump_closed_form == pytest.approx(0.75, abs=1e-13)
    left = gamma2_total(H_PARALLEL, side="left")
    right = gamma2_total(H_PARALLEL)
    assert right - left == pytest.approx(3.0, abs=1e-13)


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(nodes_per_panel=4)
    with pytest.raises(ValueError):
        QuadratureConfig(panel_breakpoints=(0.0, 1.0, SQRT2))
    with pytest.raises(ValueError):
        QuadratureConfig(panel_breakpoints=DEFAULT_QUADRATURE.panel_breakpoints[::-1])
    extra = tuple(sorted(DEFAULT_QUADRATURE.panel_breakpoints + (0.3,)))
    assert QuadratureConfig(panel_breakpoints=extra).nodes_per_panel == 32


def test_quadrature_converges_with_nodes():
    a = moment(4, config=QuadratureConfig(nodes_per_panel=16))
    b = moment(4, config=QuadratureConfig(nodes_per_panel=64))
    assert a == pytest.approx(b, abs=1e-10)


def test_intensity_forward_value():
    assert intensity(0.0) == pytest.approx(make_octahedron(1.0).volume, rel=1e-12)
    assert intensity(0.0, edge=2.0) == pytest.approx(make_octahedron(2.0).volume, rel=1e-12)


def test_intensity_positive_and_decreasing_start():
    q = np.linspace(0, 20, 81)
    iq = intensity(q)
    assert np.all(iq > 0)
    assert np.all(np.diff(iq[:10]) < 0)


def test_intensity_guinier_curvature():
    geom = make_octahedron(1.0)
    q = 0.05
    rg2 = 3 / 20
    approx = geom.volume * (1 - q * q * rg2 / 3)
    assert intensity(q) == pytest.approx(approx, rel=1e-6)


def test_intensity_porod_limit():
    geom = make_octahedron(1.0)
    q = np.linspace(50, 100, 101)
    avg = float(np.mean(q**4 * intensity(q)))
    assert avg == pytest.approx(2 * math.pi * geom.surface / geom.volume, rel=0.05)


@pytest.mark.parametrize("q", [0.7, 3.0, 12.0])
def test_intensity_matches_direct_transform(q):
    """Independent route: 4 pi int r^2 gamma(r) sinc(qr) dr with tabulated gamma."""
    r = np.linspace(0, SQRT2, 40_001)
    f = r**2 * gamma0(r) * np.sinc(q * r / math.pi)
    direct = 4 * math.pi * float(np.sum((f[1:] + f[:-1]) * np.diff(r)) / 2)
    assert intensity(q) == pytest.approx(direct, rel=1e-6, abs=1e-9)


def test_intensity_rejects_negative_q():
    with pytest.raises(ValueError):
        intensity(-1.0)


def test_density_table_jump_rows():
    t = density_table(0.0, SQRT2, 101)
    assert len(t.r) == 103  # h is off-grid, so two extra rows
    i = t.side.index("left")
    assert t.side[i + 1] == "right"
    assert t.r[i] == t.r[i + 1] == pytest.approx(H_PARALLEL)
    assert t.g2_total[i + 1] - t.g2_total[i] == pytest.approx(3.0, abs=1e-13)
    assert np.all(np.diff(t.r) >= 0)
    assert all(s == "both" for k, s in enumerate(t.side) if k not in (i, i + 1))
    assert t.gamma0[0] == pytest.approx(1.0, abs=1e-12)


def test_density_table_without_jump():
    t = density_table(0.9, 1.2, 11)
    assert t.side == ["both"] * 11
    assert np.allclose(t.eta, clpd(t.r))
