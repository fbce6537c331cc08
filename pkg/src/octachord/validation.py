"""Closed form versus Monte Carlo comparisons, and the deterministic checks
run by ``octachord validate``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from octachord.assembly import (
    DEFAULT_QUADRATURE,
    QuadratureConfig,
    clpd,
    gamma0,
    gamma1,
    gamma2_total,
    integrate,
)
from octachord.densities import gamma2_class
from octachord.geometry import (
    H_FACET,
    H_PARALLEL,
    LAMBDA_C_BRANCH,
    LAMBDA_D_BRANCH,
    PairClass,
    lambda_c,
    lambda_d,
)
from octachord.montecarlo import McConfig, McHistogram, iur_chords, mc_pair_density, stick_counts


@dataclass
class Comparison:
    name: str
    lo: np.ndarray
    hi: np.ndarray
    analytic: np.ndarray
    estimate: np.ndarray
    std_err: np.ndarray
    z: np.ndarray

    @property
    def max_abs_z(self) -> float:
        """Largest |z| over assessable entries (nan entries are skipped)."""
        z = np.abs(self.z[~np.isnan(self.z)])
        return float(z.max()) if z.size else 0.0

    @property
    def unassessed(self) -> int:
        return int(np.sum(np.isnan(self.z)))

    def count_within(self, limit: float) -> int:
        """Entries with |z| < limit; unassessed entries never count."""
        return int(np.sum(np.abs(np.nan_to_num(self.z, nan=np.inf)) < limit))


def bin_averages(f, edges: np.ndarray, edge: float = 1.0, config: QuadratureConfig = DEFAULT_QUADRATURE) -> np.ndarray:
    """Mean of f over each bin; f takes physical lengths."""
    out = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        val = integrate(lambda x: f(x * edge), lo / edge, hi / edge, config) * edge
        out.append(val / (hi - lo))
    return np.array(out)


def z_scores(hist: McHistogram, reference: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """z-scores of a histogram against bin-averaged reference values.

    Counting histograms (chord lengths) use the binomial error implied by
    the reference bin probability, which stays defined for empty bins.
    Weighted histograms use their own per-bin error.  A zero-error bin
    scores 0 when it matches the reference exactly and nan (unassessed)
    otherwise: an empty weighted bin carries no variance information.
    """
    widths = hist.widths
    if "hits" in hist.extra:
        n = hist.extra["hits"]
        p = np.clip(reference * widths, 0.0, 1.0)
        se = np.sqrt(p * (1.0 - p) / n) / widths
    else:
        se = hist.std_err
    diff = hist.density - reference
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, diff / se, np.where(np.abs(diff) <= 1e-15, 0.0, np.nan))
    return z, se


def compare_chords(cfg: McConfig) -> Comparison:
    hist = iur_chords(cfg)
    ref = bin_averages(lambda r: clpd(r, cfg.edge), hist.bin_edges, cfg.edge)
    z, se = z_scores(hist, ref)
    return Comparison("iur_chords", hist.bin_edges[:-1], hist.bin_edges[1:], ref, hist.density, se, z)


def compare_pair(pair_class: PairClass, cfg: McConfig) -> Comparison:
    hist = mc_pair_density(pair_class, cfg)
    e = cfg.edge
    ref = bin_averages(lambda r: gamma2_class(pair_class, r / e) / e**2, hist.bin_edges, e)
    z, se = z_scores(hist, ref)
    return Comparison(
        f"pair_{pair_class.value}", hist.bin_edges[:-1], hist.bin_edges[1:], ref, hist.density, se, z
    )


def compare_stick(radii, cfg: McConfig) -> Comparison:
    """Stick estimates against gamma(r); z uses the binomial error at the reference."""
    radii = np.asarray(radii, dtype=float)
    counts = np.array([stick_counts(r, cfg) for r in radii], dtype=float).reshape(-1, 2)
    n_in, n_both = counts[:, 0], counts[:, 1]
    est = n_both / n_in
    ref = np.clip(gamma0(np.minimum(radii, cfg.geometry.diameter), cfg.edge), 0.0, 1.0)
    ref[radii > cfg.geometry.diameter] = 0.0
    se = np.sqrt(ref * (1.0 - ref) / n_in)
    diff = est - ref
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, diff / se, np.where(np.abs(diff) <= 1e-12, 0.0, np.inf))
    return Comparison("stick_gamma", radii, radii, ref, est, se, z)


def one_sided_limits(f, point: float, offset: float = 1e-7) -> tuple[float, float]:
    """Left and right limits of f at point, linearly extrapolated from
    f(point -+ offset) and f(point -+ 2 offset)."""
    left = 2 * f(point - offset) - f(point - 2 * offset)
    right = 2 * f(point + offset) - f(point + 2 * offset)
    return left, right


def continuity_checks(offset: float = 1e-7) -> dict[str, float]:
    """Two-sided differences at every continuous branch junction.

    The gamma'' parts are compared raw at point -+ offset.  lambda_C and
    lambda_D have slopes of about -22 and 4 at their branch points, so a raw
    difference would measure the slope; their one-sided limits are
    extrapolated instead.
    """
    out = {}
    for pc, points in (
        (PairClass.EDGE, (H_PARALLEL, H_FACET, 1.0)),
        (PairClass.VERTEX, (H_PARALLEL, H_FACET, 1.0)),
        (PairClass.PARALLEL, (H_FACET, 1.0)),
    ):
        for p in points:
            d = abs(gamma2_class(pc, p + offset) - gamma2_class(pc, p - offset))
            out[f"{pc.value}@{p:.6f}"] = d
    for name, f, p in (("lambda_C", lambda_c, LAMBDA_C_BRANCH), ("lambda_D", lambda_d, LAMBDA_D_BRANCH)):
        left, right = one_sided_limits(f, p, offset)
        out[f"{name}@{p:.6f}"] = abs(right - left)
    return out


def linearity_residual(lo: float = 0.01, hi: float = 0.75, n: int = 200) -> float:
    """Max residual of a least-squares line through total gamma'' on [lo, hi]."""
    r = np.linspace(lo, hi, n)
    g = gamma2_total(r)
    coef = np.polyfit(r, g, 1)
    return float(np.max(np.abs(np.polyval(coef, r) - g)))


def finite_difference_gap(n: int = 100, step: float = 1e-5, exclude: float = 1e-3) -> float:
    """Max |central difference of gamma - gamma'| on n interior points away from h."""
    r = np.linspace(0.005, math.sqrt(2) - 0.005, n)
    near = np.abs(r - H_PARALLEL) <= exclude
    r[near] = H_PARALLEL + np.sign(r[near] - H_PARALLEL) * 2 * exclude
    fd = (gamma0(r + step) - gamma0(r - step)) / (2 * step)
    return float(np.max(np.abs(fd - gamma1(r))))
