"""Busemann functions of the corner growth model, KPZ scaling and lattice Busemann geodesics."""
import math
from dataclasses import dataclass

import numpy as np

from . import rng
from ._kernels import lpp_table
from .errors import DomainError, ParameterError
from .horizon import Grid, HorizonSample, grid_function
from .lattice_lpp import (BoundaryProfile, GeodesicPath, PassageTable, halfplane_rows,
                          sample_weight_field, stationary_profile, trace_geodesic)
from .queueing import sample_mu

INCREMENT_STREAM = 0x6963


@dataclass(frozen=True)
class ScalingFrame:
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ParameterError("N must be positive")

    @property
    def space_unit(self):
        return 2 ** (5 / 3) * self.N ** (2 / 3)

    @property
    def height_unit(self):
        return self.N

    @property
    def value_scale(self):
        return 2 ** (4 / 3) * self.N ** (1 / 3)

    def center(self, x, s, y, t):
        return 4 * self.N * (t - s) + 2 ** (8 / 3) * self.N ** (2 / 3) * (y - x)

    def lattice_point(self, x, s):
        return (int(round(s * self.N + self.space_unit * x)), int(round(s * self.N)))

    def rho(self, xi):
        return 0.5 - 2 ** (-4 / 3) * xi * self.N ** (-1 / 3)


def direction_vector(rho):
    if not (0.0 < rho < 1.0):
        raise ParameterError(f"rho must lie in (0,1), got {rho}")
    a, b = rho * rho, (1 - rho) ** 2
    return (a / (a + b), b / (a + b))


# ---------------------------------------------------------- Busemann limits --

@dataclass
class BusemannEstimate:
    rho: float
    pairs: list
    n_used: int
    stabilized: bool
    history: dict

    def value(self, p, q):
        for (a, b), v in self.pairs:
            if (a, b) == (tuple(p), tuple(q)):
                return v
            if (a, b) == (tuple(q), tuple(p)):
                return -v
        raise KeyError((p, q))


def _corner(n, u):
    return (-int(math.floor(n * u[0])), -int(math.floor(n * u[1])))


def busemann_estimate(rho, point_pairs, n_schedule=None, seed=0):
    """d(c_n, q) - d(c_n, p) from corners c_n = -floor(n u(rho)) for each n in the schedule.

    Weights are keyed by absolute site, so all corners see the same
    environment. ``stabilized`` is set when the last two schedule entries
    agree for every pair.
    """
    u = direction_vector(rho)
    pairs = [(tuple(map(int, p)), tuple(map(int, q))) for p, q in point_pairs]
    pts = np.array([s for pq in pairs for s in pq]).reshape(-1, 2)
    w = max(int(np.abs(pts).max()), 1)
    sched = list(n_schedule) if n_schedule is not None else [2 * w, 4 * w, 8 * w]
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise ParameterError("schedule must be increasing")
    hi_c, hi_r = pts.max(axis=0)
    history = {}
    for n in sched:
        cc, cr = _corner(n, u)
        if pts[:, 0].min() < cc or pts[:, 1].min() < cr:
            raise DomainError(f"points not up-right of the corner at n={n}")
        f = sample_weight_field(seed, (cc, cr), hi_c - cc + 1, hi_r - cr + 1)
        d = lpp_table(f.weights)
        history[n] = [d[q[1] - cr, q[0] - cc] - d[p[1] - cr, p[0] - cc] for p, q in pairs]
    last = history[sched[-1]]
    stable = len(sched) > 1 and bool(np.all(np.abs(np.subtract(last, history[sched[-2]])) <= 1e-9))
    return BusemannEstimate(rho, list(zip(pairs, last)), sched[-1], stable, history)


# ------------------------------------------------------------ KPZ scaling --

def scaled_landscape(N, queries, seed, max_cells=None):
    """L_N(x,s;y,t) = [d(lattice(x,s), lattice(y,t)) - center] / scale for each query."""
    fr = ScalingFrame(N)
    out = {}
    by_source = {}
    for q in queries:
        x, s, y, t = map(float, q)
        if (t - s) * N < 1:
            raise DomainError("time levels must be at least one lattice row apart")
        by_source.setdefault(fr.lattice_point(x, s), []).append(q)
    for src, qs in by_source.items():
        tg = [fr.lattice_point(q[2], q[3]) for q in qs]
        hi_c = max(c for c, _ in tg)
        hi_r = max(r for _, r in tg)
        if any(c < src[0] for c, _ in tg):
            raise DomainError("target left of source")
        f = sample_weight_field(seed, src, hi_c - src[0] + 1, hi_r - src[1] + 1, max_cells)
        d = lpp_table(f.weights)
        for q, (c, r) in zip(qs, tg):
            x, s, y, t = map(float, q)
            out[tuple(q)] = (d[r - src[1], c - src[0]] - fr.center(x, s, y, t)) / fr.value_scale
    return out


def _cumulative_from_zero(I, a):
    """F on indices a..b with F(0) = 0 and F(j) - F(j-1) = I_j."""
    F = np.concatenate(([0.0], np.cumsum(I[1:])))
    return F - F[-a]


def scaled_busemann_line(N, xi_list, grid, seed, burn_in=None):
    """G^N lines for increasing xi from a multiclass stationary sample.

    rho_i = 1/2 - 2^{-4/3} xi_i N^{-1/3}; the cumulative Busemann function is
    linearly interpolated and centred and scaled on the SH frame.
    """
    fr = ScalingFrame(N)
    xi = np.asarray(xi_list, dtype=float)
    if np.any(np.diff(xi) <= 0):
        raise ParameterError("directions must be strictly increasing")
    rates = [fr.rho(v) for v in xi]
    if any(not (0 < r < 1) for r in rates):
        raise ParameterError("N too small for these directions")
    grid.zero_index()
    a = int(math.floor(fr.space_unit * grid.xmin)) - 1
    b = int(math.ceil(fr.space_unit * grid.xmax)) + 1
    st = sample_mu(rates, (min(a, -1), max(b, 1)), seed, burn_in)
    idx = np.arange(st.window[0], st.window[1] + 1)
    u = fr.space_unit * grid.x
    lines = []
    for comp in st.components:
        F = _cumulative_from_zero(comp, st.window[0])
        G = (np.interp(u, idx, F) - 2 ** (8 / 3) * N ** (2 / 3) * grid.x) / fr.value_scale
        G[grid.zero_index()] = 0.0
        lines.append(grid_function(grid, G))
    return HorizonSample(tuple(xi), lines, seed)


def increment_samples(N, xi, length, replicas, seed):
    """G^N(length) - G^N(0) for a single direction, drawn directly.

    With one rate the Busemann increments are i.i.d. Exp(rho), so the
    interpolated sum is Gamma(m) plus a fractional piece of one more term.
    """
    fr = ScalingFrame(N)
    rho = fr.rho(xi)
    u = fr.space_unit * length
    m = int(math.floor(u))
    frac = u - m
    g = rng.generator(seed, INCREMENT_STREAM, N)
    F = (g.standard_gamma(m, replicas) + frac * g.standard_exponential(replicas)) / rho if m else \
        frac * g.standard_exponential(replicas) / rho
    return (F - 2 ** (8 / 3) * N ** (2 / 3) * length) / fr.value_scale


def diff_profile(sample, i):
    """Adjacent-line difference lines[i-1] - lines[i-2] (1-based, i >= 2)."""
    if not (2 <= i <= len(sample.lines)):
        raise DomainError(f"index {i} outside 2..{len(sample.lines)}")
    g = sample.lines[0].grid
    return grid_function(g, sample.lines[i - 1].values - sample.lines[i - 2].values)


# --------------------------------------------------- profiles and geodesics --

def kpz_fixed_point_step(h, levels, seed):
    """m -> d^h(m, levels) - d^h(0, levels) on h's window."""
    a, b = h.window
    if not (a <= 0 <= b):
        raise DomainError("profile window must contain 0")
    if levels == 0:
        if not h.present[-a]:
            raise DomainError("profile absent at 0")
        v = np.where(h.present, h.values - h.values[-a], 0.0)
        return BoundaryProfile(h.window, v, h.present.copy(), h.left_rate_hint, h.truncated)
    f = sample_weight_field(seed, (a, 1), b - a + 1, levels)
    d, z = halfplane_rows(f, h, levels)
    top, ztop = d[-1], z[-1]
    present = np.isfinite(top)
    if not present[-a]:
        raise DomainError("d^h(0, levels) is -inf")
    v = np.where(present, top - top[-a], 0.0)
    edge = bool(h.truncated and np.any(ztop[present] == a))
    return BoundaryProfile(h.window, v, present, h.left_rate_hint, h.truncated, edge)


def busemann_profile(seed, rho, window):
    """Decreasing profile W(z) = -B(kmin, z) with Exp(rho) horizontal increments."""
    p = stationary_profile(seed, rho, window)
    return BoundaryProfile(p.window, -p.values, left_rate_hint=rho, truncated=True)


def busemann_geodesic(start, profile, field, top, side="left"):
    """Geodesic from ``start`` to the maximizer z* of d(start; (z, top)) + W(z)."""
    if side not in ("left", "right"):
        raise ParameterError("side must be left or right")
    sc, sr = int(start[0]), int(start[1])
    if sr >= top:
        raise DomainError("start must lie below the top level")
    a, b = profile.window
    if b < sc:
        raise DomainError("profile lies left of the start")
    W = b - sc + 1
    H = top - sr + 1
    Y = field.block(sc, sr, W, H)
    d = lpp_table(Y)
    lo = max(a, sc)
    cand = np.arange(lo, b + 1)
    score = d[-1, cand - sc] + profile.as_array()[cand - a]
    m = score.max()
    hits = np.nonzero(score == m)[0]
    z = int(cand[hits[0] if side == "left" else hits[-1]])
    edge = z == b or (z == a and a > sc)
    table = PassageTable(f"point{(sc, sr)}", "point", (sc, sr), d, Y)
    path = trace_geodesic(table, (z, top))
    return GeodesicPath(path.sites, ("top", z), bool(edge))


def shares_site(p, q):
    a = {tuple(s) for s in p.sites}
    return any(tuple(s) in a for s in q.sites)
