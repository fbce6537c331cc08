"""Monte Carlo ground truth for the closed forms.

Four estimators, all independent of the closed-form code path:

* ``stick_gamma``: gamma(r) as the probability that a stick of length r
  with one end uniform in the body has its other end inside too.
* ``iur_chords``: histogram of chord lengths cut by isotropic uniform
  random lines, which estimates eta(r).
* ``mc_pair_density``: direct sampling of the double surface integral for
  one facet pair, which estimates that class's gamma''.
* ``interior_moments``: volume and mean squared radius by rejection.

Samples are drawn in fixed-size blocks.  Block k always uses the Philox
stream keyed by (seed, estimator, k), and block partial sums are reduced in
block order, so results are bit-identical for any number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from octachord.geometry import (
    REPRESENTATIVE_PAIRS,
    SUPPORT_TOL,
    OctahedronGeometry,
    PairClass,
    make_octahedron,
)

DEFAULT_BLOCK = 1 << 18

_STREAM_IDS = {
    "stick": 1,
    "iur": 2,
    PairClass.EDGE: 3,
    PairClass.VERTEX: 4,
    PairClass.PARALLEL: 5,
    "interior": 6,
}


@dataclass(frozen=True)
class McConfig:
    seed: int = 0
    samples: int = 1_000_000
    bins: int = 200
    r_max: float | None = None  # defaults to the diameter
    edge: float = 1.0
    split_at_jump: bool = True
    block_size: int = DEFAULT_BLOCK
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.bins < 1:
            raise ValueError("bins must be >= 1")
        if self.block_size < 1 or self.workers < 1:
            raise ValueError("block_size and workers must be >= 1")
        if not (math.isfinite(self.edge) and self.edge > 0):
            raise ValueError("edge must be positive")

    @property
    def geometry(self) -> OctahedronGeometry:
        return make_octahedron(self.edge)

    def bin_edges(self) -> np.ndarray:
        geom = self.geometry
        r_max = geom.diameter if self.r_max is None else float(self.r_max)
        edges = np.linspace(0.0, r_max, self.bins + 1)
        if self.split_at_jump and 0.0 < geom.h < r_max:
            if not np.any(np.isclose(edges, geom.h, rtol=0, atol=1e-12 * r_max)):
                edges = np.sort(np.append(edges, geom.h))
        return edges


@dataclass
class McHistogram:
    bin_edges: np.ndarray
    density: np.ndarray
    std_err: np.ndarray
    total_weight: float
    samples: int
    seed: int
    discarded: int = 0
    negative_weights: int = 0
    mean: float = float("nan")
    mean_err: float = float("nan")
    extra: dict = field(default_factory=dict)

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    def integral(self) -> tuple[float, float]:
        """Integral of the density over all bins and its standard error.

        Bins share samples, so the error comes from the stored totals.
        """
        return self.total_weight, self.extra.get("total_err", float("nan"))


def _blocks(n: int, size: int) -> list[tuple[int, int]]:
    out = []
    k = 0
    start = 0
    while start < n:
        m = min(size, n - start)
        out.append((k, m))
        k += 1
        start += m
    return out


def _rng(seed: int, stream, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(_STREAM_IDS[stream], block))
    return np.random.Generator(np.random.Philox(ss))


def _run(cfg: McConfig, stream, work):
    """Apply ``work(rng, m)`` to every block and return results in block order."""
    blocks = _blocks(cfg.samples, cfg.block_size)

    def task(b):
        k, m = b
        return work(_rng(cfg.seed, stream, k), m)

    if cfg.workers == 1:
        return [task(b) for b in blocks]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(task, blocks))


def _directions(rng: np.random.Generator, m: int) -> np.ndarray:
    z = rng.uniform(-1.0, 1.0, m)
    phi = rng.uniform(0.0, 2.0 * np.pi, m)
    s = np.sqrt(1.0 - z * z)
    return np.column_stack((s * np.cos(phi), s * np.sin(phi), z))


def _inside(p: np.ndarray, a: float) -> np.ndarray:
    return np.abs(p).sum(axis=1) <= a


def stick_gamma(r: float, cfg: McConfig) -> tuple[float, float]:
    """Estimate gamma(r) with the binomial standard error.

    ``cfg.samples`` points are drawn in the bounding cube; those inside the
    body each get one random direction.
    """
    n_in, n_both = stick_counts(r, cfg)
    est = n_both / n_in
    return est, math.sqrt(est * (1.0 - est) / n_in)


def stick_counts(r: float, cfg: McConfig) -> tuple[int, int]:
    """(points inside, sticks with both ends inside) for stick length r."""
    r = float(r)
    if r < 0 or not math.isfinite(r):
        raise ValueError("stick length must be finite and >= 0")
    a = cfg.geometry.circumradius

    def work(rng, m):
        p = rng.uniform(-a, a, size=(m, 3))
        w = _directions(rng, m)
        inside = _inside(p, a)
        both = inside & _inside(p + r * w, a)
        return int(inside.sum()), int(both.sum())

    parts = _run(cfg, "stick", work)
    n_in = sum(p[0] for p in parts)
    n_both = sum(p[1] for p in parts)
    if n_in == 0:
        raise RuntimeError("no sample landed inside the body; increase samples")
    return n_in, n_both


def _clip_lines(p: np.ndarray, w: np.ndarray, geom: OctahedronGeometry) -> np.ndarray:
    """Length of the intersection of lines p + s w with the body (0 on miss)."""
    normals = np.array([f.normal for f in geom.facets])
    offset = geom.inradius
    d = w @ normals.T
    num = offset - p @ normals.T
    with np.errstate(divide="ignore", invalid="ignore"):
        t = num / d
    s_in = np.max(np.where(d < 0, t, -np.inf), axis=1)
    s_out = np.min(np.where(d > 0, t, np.inf), axis=1)
    parallel_miss = np.any((d == 0) & (num < 0), axis=1)
    chord = s_out - s_in
    chord[parallel_miss] = 0.0
    return np.maximum(chord, 0.0)


def _orthonormal_frame(w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.where(np.abs(w[:, :1]) < 0.9, [[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]])
    u = np.cross(w, helper)
    u /= np.linalg.norm(u, axis=1)[:, None]
    v = np.cross(w, u)
    return u, v


def iur_chords(cfg: McConfig) -> McHistogram:
    """Histogram of chord lengths from isotropic uniform random lines.

    Lines are drawn with a uniform direction and a uniform point on the
    disk of radius a (circumradius) normal to it; misses are rejected.
    ``cfg.samples`` counts drawn lines, hits or not.
    """
    geom = cfg.geometry
    edges = cfg.bin_edges()
    a = geom.circumradius
    top = geom.diameter

    def work(rng, m):
        w = _directions(rng, m)
        u, v = _orthonormal_frame(w)
        rho = a * np.sqrt(rng.uniform(0.0, 1.0, m))
        psi = rng.uniform(0.0, 2.0 * np.pi, m)
        p = (rho * np.cos(psi))[:, None] * u + (rho * np.sin(psi))[:, None] * v
        chord = _clip_lines(p, w, geom)
        hit = chord > 0
        c = chord[hit]
        overflow = int(np.sum(c > top * (1 + SUPPORT_TOL)))
        counts, _ = np.histogram(np.minimum(c, edges[-1]), bins=edges)
        return counts, c.size, float(c.sum()), float(np.dot(c, c)), float(c.max(initial=0.0)), overflow

    parts = _run(cfg, "iur", work)
    counts = np.zeros(len(edges) - 1, dtype=np.int64)
    n_hit, s1, s2, longest, overflow = 0, 0.0, 0.0, 0.0, 0
    for c, n, a1, a2, mx, of in parts:
        counts += c
        n_hit += n
        s1 += a1
        s2 += a2
        longest = max(longest, mx)
        overflow += of
    widths = np.diff(edges)
    if n_hit == 0:
        zeros = np.zeros_like(widths)
        return McHistogram(edges, zeros, zeros, 0.0, cfg.samples, cfg.seed)
    p = counts / n_hit
    mean = s1 / n_hit
    var = max(s2 / n_hit - mean * mean, 0.0)
    return McHistogram(
        bin_edges=edges,
        density=p / widths,
        std_err=np.sqrt(p * (1.0 - p) / n_hit) / widths,
        total_weight=float(p.sum()),
        samples=cfg.samples,
        seed=cfg.seed,
        mean=mean,
        mean_err=math.sqrt(var / n_hit),
        extra={"hits": n_hit, "longest": longest, "overflow": overflow, "total_err": 0.0},
    )


def _triangle_points(rng, verts: np.ndarray, m: int) -> np.ndarray:
    u = rng.uniform(0.0, 1.0, m)
    v = rng.uniform(0.0, 1.0, m)
    flip = u + v > 1.0
    u[flip], v[flip] = 1.0 - u[flip], 1.0 - v[flip]
    a, b, c = verts
    return a + u[:, None] * (b - a) + v[:, None] * (c - a)


def mc_pair_density(pair_class: PairClass, cfg: McConfig) -> McHistogram:
    """Histogram estimate of one facet-pair class density gamma''_class(r).

    A point r1 uniform on facet S1 and a direction w uniform on the sphere
    define a ray; where it meets the plane of S2 inside the facet, at
    distance t > 0, the weight -(A1 / V) (n1.w)(n2.w) / |n2.w| is deposited
    at t.  Rays with |n2.w| < 1e-12 are discarded and counted.  For a convex
    body every connecting ray enters through S1 (n1.w < 0) and leaves
    through S2 (n2.w > 0), so weights are positive; negative ones are
    counted in ``negative_weights`` as a sign-convention check.
    """
    geom = cfg.geometry
    i1, i2 = REPRESENTATIVE_PAIRS[pair_class]
    f1, f2 = geom.facets[i1], geom.facets[i2]
    area1 = f1.area
    scale = area1 / geom.volume
    signs2 = np.asarray(f2.signs, dtype=float)
    a = geom.circumradius
    edges = cfg.bin_edges()
    nb = len(edges) - 1

    def work(rng, m):
        r1 = _triangle_points(rng, f1.vertices, m)
        w = _directions(rng, m)
        c1 = w @ f1.normal
        c2 = w @ f2.normal
        ok = np.abs(c2) >= 1e-12
        discarded = int(np.sum(~ok))
        # plane of S2: signs2 . x = a
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (a - r1 @ signs2) / (w @ signs2)
        hit_pt = r1 + t[:, None] * w
        on_facet = np.all(hit_pt * signs2 >= -1e-12 * a, axis=1)
        hit = ok & (t > 0) & on_facet
        weight = -scale * c1[hit] * np.sign(c2[hit])
        idx = np.clip(np.searchsorted(edges, t[hit], side="right") - 1, 0, nb - 1)
        keep = t[hit] <= edges[-1] * (1 + SUPPORT_TOL)
        sw = np.bincount(idx[keep], weights=weight[keep], minlength=nb)
        sw2 = np.bincount(idx[keep], weights=weight[keep] ** 2, minlength=nb)
        tot = float(weight[keep].sum())
        tot2 = float(np.dot(weight[keep], weight[keep]))
        return sw, sw2, tot, tot2, discarded, int(np.sum(weight < 0))

    parts = _run(cfg, pair_class, work)
    sw = np.zeros(nb)
    sw2 = np.zeros(nb)
    tot = tot2 = 0.0
    discarded = negative = 0
    for a1, a2, b1, b2, d, neg in parts:
        sw += a1
        sw2 += a2
        tot += b1
        tot2 += b2
        discarded += d
        negative += neg
    n = cfg.samples
    widths = np.diff(edges)
    mean = sw / n
    var = np.maximum(sw2 / n - mean * mean, 0.0)
    tmean = tot / n
    tvar = max(tot2 / n - tmean * tmean, 0.0)
    return McHistogram(
        bin_edges=edges,
        density=mean / widths,
        std_err=np.sqrt(var / n) / widths,
        total_weight=tmean,
        samples=n,
        seed=cfg.seed,
        discarded=discarded,
        negative_weights=negative,
        extra={"total_err": math.sqrt(tvar / n), "pair": (i1, i2)},
    )


@dataclass(frozen=True)
class InteriorMoments:
    volume: float
    volume_err: float
    second_moment: float
    second_moment_err: float
    accepted: int
    samples: int


def interior_moments(cfg: McConfig) -> InteriorMoments:
    """Volume and mean squared distance from the centre by cube rejection."""
    a = cfg.geometry.circumradius

    def work(rng, m):
        p = rng.uniform(-a, a, size=(m, 3))
        inside = _inside(p, a)
        q = np.einsum("ij,ij->i", p[inside], p[inside])
        return int(inside.sum()), float(q.sum()), float(np.dot(q, q))

    parts = _run(cfg, "interior", work)
    n_in = sum(p[0] for p in parts)
    s1 = sum(p[1] for p in parts)
    s2 = sum(p[2] for p in parts)
    n = cfg.samples
    frac = n_in / n
    cube = (2.0 * a) ** 3
    if n_in == 0:
        return InteriorMoments(0.0, cube / n, float("nan"), float("nan"), 0, n)
    m2 = s1 / n_in
    var = max(s2 / n_in - m2 * m2, 0.0)
    return InteriorMoments(
        volume=cube * frac,
        volume_err=cube * math.sqrt(frac * (1.0 - frac) / n),
        second_moment=m2,
        second_moment_err=math.sqrt(var / n_in),
        accepted=n_in,
        samples=n,
    )
