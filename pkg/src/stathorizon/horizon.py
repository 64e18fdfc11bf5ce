"""Stationary horizon sampler: Brownian inputs, the Phi / Phi^k maps,
difference profiles, splitting times and the jump point process.
"""
import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import rng
from ._kernels import running_max
from .errors import ContractError, DomainError, ParameterError

BM_STREAM = 0x626D
BRIDGE_STREAM = 0x6272
JUMP_STREAM = 0x6A70
TAU_EPS = 1e-9
SH_VARIANCE = 2.0          # diffusivity sqrt(2)
DIFF_VARIANCE = 4.0        # difference of two independent lines


@dataclass(frozen=True)
class Grid:
    xmin: float
    xmax: float
    step: float

    def __post_init__(self):
        if not self.step > 0 or self.xmax < self.xmin:
            raise DomainError("bad grid")

    @property
    def n(self):
        return int(round((self.xmax - self.xmin) / self.step)) + 1

    @property
    def x(self):
        return self.xmin + self.step * np.arange(self.n)

    def zero_index(self):
        j = -self.xmin / self.step
        if self.xmin > 0 or self.xmax < 0 or abs(j - round(j)) > 1e-9:
            raise DomainError("0 is not a grid point")
        return int(round(j))

    def as_dict(self):
        return {"min": self.xmin, "max": self.xmax, "step": self.step}


@dataclass
class GridFunction:
    grid_min: float
    grid_max: float
    step: float
    values: np.ndarray
    anchored: bool = True
    edge_flag: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n,):
            raise DomainError("values do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("values must be finite")
        if self.anchored and self.values[self.grid.zero_index()] != 0.0:
            raise ContractError("anchored function must vanish at 0")

    @property
    def grid(self):
        return Grid(self.grid_min, self.grid_max, self.step)

    @property
    def x(self):
        return self.grid.x

    def at(self, x):
        j = int(round((x - self.grid_min) / self.step))
        return self.values[j]

    def increment(self, a, b):
        return self.at(b) - self.at(a)

    def to_csv(self, path):
        from .lattice_lpp import fmt_real
        with open(path, "w") as fh:
            fh.write("x,value\n")
            for x, v in zip(self.x, self.values):
                fh.write(f"{fmt_real(x)},{fmt_real(v)}\n")


def grid_function(grid, values, anchored=True, edge_flag=False):
    return GridFunction(grid.xmin, grid.xmax, grid.step, values, anchored, edge_flag)


@dataclass
class HorizonSample:
    directions: tuple
    lines: list
    seed: int
    edge_flag: bool = False

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float)
        if np.any(np.diff(d) <= 0):
            raise ParameterError("directions must be strictly increasing")

    @property
    def grid(self):
        return self.lines[0].grid

    def to_json(self, path=None):
        doc = {"directions": [float(v) for v in self.directions], "grid": self.grid.as_dict(),
               "lines": [ln.values.tolist() for ln in self.lines]}
        s = json.dumps(doc)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(s)
        return s


@dataclass
class JumpRecord:
    xi: float
    tau: float
    restarted: Optional[GridFunction]
    left_tau: float = math.inf
    left_restarted: Optional[GridFunction] = None


# ------------------------------------------------------------------ inputs --

def _bm_values(drift, diffusivity, grid, g):
    j0 = grid.zero_index()
    n = grid.n
    sd = diffusivity * math.sqrt(grid.step)
    right = g.standard_normal(n - 1 - j0)
    left = g.standard_normal(j0)
    out = np.empty(n)
    out[j0] = 0.0
    out[j0 + 1:] = np.cumsum(drift * grid.step + sd * right)
    out[:j0] = -np.cumsum(drift * grid.step + sd * left)[::-1]
    return out


def sample_two_sided_bm(drift, diffusivity, grid, seed, tag=0):
    """diffusivity * B(x) + drift * x on the grid, generated outward from 0."""
    if diffusivity < 0:
        raise ParameterError("diffusivity must be nonnegative")
    grid.zero_index()
    g = rng.generator(seed, BM_STREAM, tag)
    return grid_function(grid, _bm_values(drift, diffusivity, grid, g))


def bridge_max(a, b, variance_dt, u):
    """Max of a Brownian bridge from a to b with total variance variance_dt, by inversion."""
    return 0.5 * (a + b + np.sqrt((b - a) ** 2 - 2.0 * variance_dt * np.log(u)))


# --------------------------------------------------------------------- Phi --

def _check_pair(f, g):
    if (f.grid_min, f.grid_max, f.step) != (g.grid_min, g.grid_max, g.step):
        raise DomainError("Phi needs a common grid")
    if not (f.anchored and g.anchored):
        raise ContractError("Phi needs anchored inputs")


def phi(f, g, cell_min=None, tail_min=None):
    """Phi(f, g) by the two-branch definition with W_y(h) = sup_{x<=y}[h(y) - h(x)].

    Suprema over x <= y run over the grid, widened by optional continuum
    information on D = f - g: ``cell_min[j]`` is the infimum of D on
    [x_j, x_{j+1}] and ``tail_min`` its infimum on (-inf, grid_min]. Without
    ``tail_min`` the half-line is truncated at grid_min and ``edge_flag``
    reports whether the infimum over x <= 0 sits at the edge.
    """
    _check_pair(f, g)
    D = f.values - g.values
    n = D.size
    j0 = f.grid.zero_index()
    pt = D.copy()
    if cell_min is not None:
        pt[1:] = np.minimum(pt[1:], cell_min)          # D(x_j) with the cell to its left
    lead = -np.inf if tail_min is None else -tail_min
    run = -running_max(np.concatenate(([lead], -pt)))[1:]
    if tail_min is not None:
        run = np.minimum(run, tail_min)
    # runmin over x <= y_j, continuum-widened
    out = f.values.copy()
    # y >= 0: f(y) + [W_0(D) + inf_{0<=x<=y} D]^-
    W0 = D[j0] - run[j0]
    seg = D[j0:].copy()
    if cell_min is not None:
        seg[1:] = np.minimum(seg[1:], cell_min[j0:])
    inf_right = -running_max(-seg)
    out[j0:] = f.values[j0:] + np.maximum(-(W0 + inf_right), 0.0)
    if j0 > 0:
        # y < 0: f(y) - [W_y(D) + inf_{y<x<=0}(D(x) - D(y))]^-
        back = D[1:j0 + 1].copy()
        if cell_min is not None:
            back = np.minimum(back, cell_min[:j0])
        inf_after = -running_max(-back[::-1])[::-1]   # inf over (y_j, 0] for j < j0
        Wy = D[:j0] - run[:j0]
        out[:j0] = f.values[:j0] - np.maximum(-(Wy + inf_after - D[:j0]), 0.0)
    edge = False
    if tail_min is None:
        edge = bool(np.argmin(pt[: j0 + 1]) == 0) and j0 > 0
    out[j0] = 0.0
    return grid_function(f.grid, out, True, edge or f.edge_flag or g.edge_flag)


def phi_alt(f, g):
    """f(y) + sup_{x<=y}(g - f) - sup_{x<=0}(g - f) on the grid."""
    _check_pair(f, g)
    j0 = f.grid.zero_index()
    m = running_max(g.values - f.values)
    return grid_function(f.grid, f.values + m - m[j0])


def phi_k(inputs):
    """Phi^k by the recursion: first entry f_1, entry j is Phi(f_1, [Phi^{k-1}(f_2..f_k)]_{j-1})."""
    k = len(inputs)
    if k == 0:
        raise ParameterError("Phi^k needs at least one input")
    if k == 1:
        return [inputs[0]]
    inner = phi_k(inputs[1:])
    return [inputs[0]] + [phi(inputs[0], h) for h in inner]


def _exact_pair(f1, f2, gap, g):
    """Phi(f1, f2) exact at grid points: bridge extrema between points, exact left tail."""
    B = f2.values - f1.values
    u = 1.0 - g.random(B.size - 1)
    cell_max = bridge_max(B[:-1], B[1:], DIFF_VARIANCE * f1.step, u)
    tail = B[0] + g.exponential(1.0 / gap)      # sup of B on (-inf, grid_min]
    return phi(f1, f2, cell_min=-cell_max, tail_min=-tail)


def sample_horizon(directions, grid, seed, exact_pair=True):
    """Lines G_{xi_1} <= ... <= G_{xi_k} on the grid.

    Inputs are independent BMs with drift 2 xi_i and diffusivity sqrt(2).
    With two directions the pair is exact at grid points; otherwise Phi^k is
    applied on the grid with the half-line truncated at grid_min.
    """
    d = np.asarray(directions, dtype=float)
    if d.ndim != 1 or d.size == 0 or np.any(np.diff(d) <= 0):
        raise ParameterError("directions must be strictly increasing")
    fs = [sample_two_sided_bm(2.0 * xi, math.sqrt(SH_VARIANCE), grid, seed, tag=i)
          for i, xi in enumerate(d)]
    if d.size == 2 and exact_pair:
        g = rng.generator(seed, BRIDGE_STREAM)
        lines = [fs[0], _exact_pair(fs[0], fs[1], d[1] - d[0], g)]
    else:
        lines = phi_k(fs)
    return HorizonSample(tuple(d), lines, seed, any(ln.edge_flag for ln in lines))


# ------------------------------------------------------ difference profiles --

def _split(values, step):
    """(tau, restarted values) for a nondecreasing profile on [0, L] sampled at step."""
    pos = np.nonzero(values > TAU_EPS)[0]
    if pos.size == 0:
        return math.inf, None
    j = max(pos[0] - 1, 0)
    return j * step, values[j:] - values[j]


def _half_record(values, step):
    tau, rest = _split(values, step)
    if rest is None:
        return tau, None
    L = (rest.size - 1) * step
    return tau, GridFunction(0.0, L, step, rest, anchored=True)


def difference_process(sample, i):
    """Difference profile of lines i and i-1 (1-based, i >= 2) with splitting times.

    tau is the last grid point x >= 0 before H first exceeds 1e-9; the
    restarted profile H(tau + u) - H(tau) is anchored there. The left side
    uses Hbar(x) = -H(-x).
    """
    k = len(sample.lines)
    if not (2 <= i <= k):
        raise DomainError(f"index {i} outside 2..{k}")
    H = sample.lines[i - 1].values - sample.lines[i - 2].values
    grid = sample.grid
    j0 = grid.zero_index()
    tau, rest = _half_record(H[j0:], grid.step)
    ltau, lrest = _half_record(-H[: j0 + 1][::-1], grid.step)
    return JumpRecord(float(sample.directions[i - 1]), tau, rest, ltau, lrest)


def diff_values(sample, i):
    return sample.lines[i - 1].values - sample.lines[i - 2].values


# ------------------------------------------------------ jump point process --

def dyadic_mesh(c, d, level):
    n = int(round((d - c) * 2 ** level))
    return c + np.arange(n + 1) / 2 ** level


def _pair_profile(tau_true, x_max, step, drift, g):
    """H on the grid [0, x_max] for a pair whose lines split at tau_true."""
    n = int(round(x_max / step)) + 1
    x = step * np.arange(n)
    j1 = int(np.searchsorted(x, tau_true, side="left"))
    H = np.zeros(n)
    if j1 < n:
        offs = x[j1:] - tau_true
        dt = np.diff(np.concatenate(([0.0], offs)))
        W = np.cumsum(drift * dt + math.sqrt(DIFF_VARIANCE) * np.sqrt(dt) * g.standard_normal(dt.size))
        prev = np.concatenate(([0.0], W[:-1]))
        cm = bridge_max(prev, W, DIFF_VARIANCE * dt, 1.0 - g.random(dt.size))
        H[j1:] = np.maximum.accumulate(cm)
    return H


def _pair_jumps(mesh, x_max, step, g, keep_profiles):
    gaps = np.diff(mesh)
    S0 = g.exponential(1.0 / gaps)                       # sup of the difference on x <= 0
    drift = 2.0 * gaps
    tau = g.wald(S0 / drift, S0 ** 2 / DIFF_VARIANCE)    # first passage of S0 to the right
    points, records = [], []
    for i in np.nonzero(tau <= x_max)[0]:
        H = _pair_profile(tau[i], x_max, step, drift[i], g)
        t, rest = _half_record(H, step)
        if math.isinf(t):
            continue
        points.append((t, mesh[i + 1]))
        if keep_profiles:
            records.append(JumpRecord(float(mesh[i + 1]), t, rest))
    return np.array(points).reshape(-1, 2), records


def _joint_jumps(mesh, x_max, step, left, seed, replica, keep_profiles):
    grid = Grid(-left, x_max, step)
    s = sample_horizon(mesh, grid, rng.substream(seed, replica), exact_pair=False)
    points, records = [], []
    for i in range(2, len(mesh) + 1):
        rec = difference_process(s, i)
        if math.isfinite(rec.tau):
            points.append((rec.tau, rec.xi))
            if keep_profiles:
                records.append(rec)
    return np.array(points).reshape(-1, 2), records, s.edge_flag


@dataclass
class JumpProcess:
    points: list                     # per replica, array of (tau, xi)
    records: list = field(default_factory=list)
    edge_flags: int = 0

    def counts(self, rect):
        (a, b), (c, d) = rect
        return np.array([np.sum((p[:, 0] > a) & (p[:, 0] <= b) & (p[:, 1] > c) & (p[:, 1] <= d))
                         for p in self.points])


def jump_point_process(directions, x_max, step, seed, replicas, method="pair",
                       keep_profiles=False, left=8.0, replica_offset=0):
    """Points (tau, xi) of splitting times for adjacent directions of the mesh.

    method "pair" draws each adjacent pair exactly and independently: the
    pair's left supremum is Exp(gap), its right splitting time the
    inverse-Gaussian first passage of that level, and the profile after it a
    fresh running maximum. Mean counts and per-point laws are exact; the
    dependence between pairs is not kept. method "joint" applies Phi^k to
    all directions on [-left, x_max] (cost grows like k^2).
    """
    mesh = np.asarray(directions, dtype=float)
    if mesh.size < 2 or np.any(np.diff(mesh) <= 0):
        raise ParameterError("need an increasing mesh with at least two directions")
    out = JumpProcess([])
    for r in range(replica_offset, replica_offset + replicas):
        if method == "pair":
            g = rng.generator(seed, JUMP_STREAM, r)
            p, recs = _pair_jumps(mesh, x_max, step, g, keep_profiles)
        elif method == "joint":
            p, recs, flag = _joint_jumps(mesh, x_max, step, left, seed, r, keep_profiles)
            out.edge_flags += int(flag)
        else:
            raise ParameterError(f"unknown method {method}")
        out.points.append(p)
        out.records.extend(recs)
    return out


def pair_count_mean(gap, a, b):
    """Expected number of pair splits with tau in (a, b] for one pair with this gap.

    P(a < tau <= b) with S0 ~ Exp(gap) and tau the first passage of S0 by a BM
    with drift 2 gap and variance 4 per unit; by quadrature over S0.
    """
    from scipy import integrate, stats

    def cdf(t):
        if t <= 0:
            return 0.0
        mu = 2.0 * gap
        s = math.sqrt(DIFF_VARIANCE * t)

        def integrand(level):
            # P(first passage of level <= t) for drift mu, sd s at time t
            p = stats.norm.cdf((mu * t - level) / s) + math.exp(2 * mu * level / DIFF_VARIANCE) * \
                stats.norm.cdf((-mu * t - level) / s)
            return p * gap * math.exp(-gap * level)
        return integrate.quad(integrand, 0, np.inf, limit=200)[0]
    return cdf(b) - cdf(a)


# ---------------------------------------------------------------- helpers --

def increment_ordered(f, g, tol=1e-9):
    """f <=_inc g on the grid: g - f nondecreasing."""
    return bool(np.all(np.diff(g.values - f.values) >= -tol))


def argmax_lr(values):
    """Leftmost and rightmost maximizer indices."""
    m = values.max()
    idx = np.nonzero(values == m)[0]
    return int(idx[0]), int(idx[-1])


def coarsen_points(points, mesh):
    """Jump points of the mesh with every other direction removed.

    The difference of a coarse pair is the sum of its two fine differences,
    so its splitting time is the smaller of the two fine ones.
    """
    mesh = np.asarray(mesh, dtype=float)
    if (mesh.size - 1) % 2:
        raise ParameterError("mesh must have an even number of gaps")
    if points.size == 0:
        return points.reshape(0, 2)
    j = np.searchsorted(mesh, points[:, 1] - 1e-12 * max(1.0, abs(mesh[-1])))
    coarse = (j + 1) // 2
    out = {}
    for t, c in zip(points[:, 0], coarse):
        out[c] = min(out.get(c, math.inf), t)
    keys = sorted(out)
    return np.array([(out[c], mesh[2 * c]) for c in keys]).reshape(-1, 2)
