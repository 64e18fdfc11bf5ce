"""Exponential corner growth: weights, passage tables, geodesics, boundary models.

Lattice points are (col, row) pairs; arrays are indexed [row, col] relative
to an origin. Passage values count the weights of both endpoints.
"""
import csv
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import rng
from ._kernels import boundary_dp, boundary_dp_stream, lpp_table
from .errors import DomainError, ParameterError, SizeError

MAX_CELLS = 200_000_000

HORIZONTAL_STREAM = 1
VERTICAL_STREAM = 2
PROFILE_STREAM = 3


@dataclass(frozen=True)
class WeightField:
    seed: int
    origin: tuple
    width: int
    height: int
    weights: np.ndarray

    def contains(self, col, row):
        c0, r0 = self.origin
        return c0 <= col < c0 + self.width and r0 <= row < r0 + self.height

    def weight(self, col, row):
        if not self.contains(col, row):
            raise DomainError(f"site {(col, row)} outside field")
        return self.weights[row - self.origin[1], col - self.origin[0]]

    def block(self, col0, row0, width, height):
        """Sub-array for the rectangle with lower-left corner (col0, row0)."""
        if width <= 0 or height <= 0:
            return np.zeros((max(height, 0), max(width, 0)))
        if not (self.contains(col0, row0) and self.contains(col0 + width - 1, row0 + height - 1)):
            raise DomainError("requested block not inside field")
        c, r = col0 - self.origin[0], row0 - self.origin[1]
        return self.weights[r:r + height, c:c + width]


@dataclass
class PassageTable:
    """Last-passage values on a lattice rectangle.

    ``kind`` is "point" (single source at ``origin``), "quadrant" (row 0 and
    column 0 carry the stationary boundary) or "halfplane" (row 0 carries the
    boundary profile, -inf where absent).
    """
    source: str
    kind: str
    origin: tuple
    values: np.ndarray
    weights: np.ndarray

    @property
    def shape(self):
        return self.values.shape

    def index(self, site):
        c, r = site[0] - self.origin[0], site[1] - self.origin[1]
        H, W = self.values.shape
        if not (0 <= c < W and 0 <= r < H):
            raise DomainError(f"site {tuple(site)} outside table domain")
        return r, c

    def value(self, site):
        return self.values[self.index(site)]

    def to_csv(self, path):
        H, W = self.values.shape
        c0, r0 = self.origin
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["col", "row", "d"])
            for r in range(H):
                for c in range(W):
                    w.writerow([c0 + c, r0 + r, fmt_real(self.values[r, c])])


@dataclass
class GeodesicPath:
    sites: np.ndarray            # (L, 2) of (col, row), source first
    exit_record: Optional[tuple] = None
    edge_flag: bool = False

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["row", "col"])
            for c, r in self.sites:
                w.writerow([int(r), int(c)])


@dataclass
class BoundaryProfile:
    """Initial profile h on an integer window; ``present`` False means h = -inf there.

    ``truncated`` says the window cuts off a longer profile, so a maximizer
    at the left edge is suspicious.
    """
    window: tuple
    values: np.ndarray
    present: Optional[np.ndarray] = None
    left_rate_hint: Optional[float] = None
    truncated: bool = True
    edge_flag: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        a, b = self.window
        if b < a or self.values.shape != (b - a + 1,):
            raise DomainError("profile values must cover the window")
        if self.present is None:
            self.present = np.ones(self.values.shape, dtype=bool)
        self.present = np.asarray(self.present, dtype=bool)
        if not np.all(np.isfinite(self.values[self.present])):
            raise DomainError("profile values must be finite where present")

    @property
    def kmin(self):
        return self.window[0]

    @property
    def kmax(self):
        return self.window[1]

    def as_array(self):
        """Values with -inf where absent, for the kernels."""
        return np.where(self.present, self.values, -np.inf)

    def value(self, k):
        i = k - self.kmin
        return self.values[i] if self.present[i] else -np.inf

    def increments(self):
        return np.diff(self.values)


def fmt_real(x):
    return format(float(x), ".17g")


# ------------------------------------------------------------------ fields --

def sample_weight_field(seed, origin, width, height, max_cells=None):
    """Unit exponential weights on [c0, c0+width) x [r0, r0+height), keyed per site."""
    width, height = int(width), int(height)
    if width < 0 or height < 0:
        raise DomainError("negative field dimensions")
    budget = MAX_CELLS if max_cells is None else max_cells
    if width * height > budget:
        raise SizeError(f"{width}x{height} exceeds the cell budget {budget}")
    c0, r0 = int(origin[0]), int(origin[1])
    w = rng.exp_field(seed, c0, r0, width, height)
    w.setflags(write=False)
    return WeightField(int(seed), (c0, r0), width, height, w)


# ----------------------------------------------------------- point source --

def passage_table(field, source):
    """Point-to-point passage values from ``source`` to every site up-right of it."""
    sc, sr = int(source[0]), int(source[1])
    if not field.contains(sc, sr):
        raise DomainError(f"source {(sc, sr)} outside field")
    c0, r0 = field.origin
    W = c0 + field.width - sc
    H = r0 + field.height - sr
    Y = field.block(sc, sr, W, H)
    return PassageTable(f"point{(sc, sr)}", "point", (sc, sr), lpp_table(Y), Y)


def point_to_point(field, source, target):
    """d(source, target); -inf when target is not up-right of source."""
    if target[0] < source[0] or target[1] < source[1]:
        return -np.inf
    W = target[0] - source[0] + 1
    H = target[1] - source[1] + 1
    Y = field.block(source[0], source[1], W, H)
    return lpp_table(Y)[-1, -1]


def trace_geodesic(table, target):
    """Backtrack the recurrence from ``target``; ties go to the e2-predecessor."""
    r, c = table.index(target)
    v = table.values
    if not np.isfinite(v[r, c]):
        raise DomainError(f"target {tuple(target)} unreachable")
    kind = table.kind
    if kind == "quadrant" and (r == 0 or c == 0):
        raise DomainError("target lies on the boundary; it has no bulk geodesic")
    if kind == "halfplane" and r == 0:
        raise DomainError("target must sit strictly above the boundary row")
    sites = []
    exit_record = None
    while True:
        sites.append((c, r))
        if kind == "point":
            if r == 0 and c == 0:
                break
            if r == 0:
                c -= 1
            elif c == 0:
                r -= 1
            elif v[r - 1, c] >= v[r, c - 1]:
                r -= 1
            else:
                c -= 1
            continue
        down = v[r - 1, c]
        left = v[r, c - 1] if c > 0 else -np.inf
        if down >= left:
            if r == 1:
                k = c if kind == "quadrant" else table.origin[0] + c
                exit_record = ("horizontal", k)
                break
            r -= 1
        else:
            if kind == "quadrant" and c == 1:
                exit_record = ("vertical", r)
                break
            c -= 1
    sites = np.array(sites[::-1], dtype=np.int64) + np.array(table.origin, dtype=np.int64)
    return GeodesicPath(sites, exit_record)


def path_weight(table, path):
    """Sum of weights along the path plus the boundary value it leaves from."""
    idx = [table.index(s) for s in path.sites]
    total = float(sum(table.weights[i] for i in idx))
    if path.exit_record is None:
        return total
    axis, k = path.exit_record
    if table.kind == "quadrant":
        return total + (table.values[0, k] if axis == "horizontal" else table.values[k, 0])
    return total + table.values[0, k - table.origin[0]]


# ------------------------------------------------------ stationary quadrant --

@dataclass
class QuadrantResult:
    table: PassageTable
    tau1: np.ndarray
    tau2: np.ndarray
    rho: float


def _check_rho(rho):
    if not (0.0 < rho < 1.0):
        raise ParameterError(f"rho must lie in (0,1), got {rho}")


def quadrant_boundary(seed, corner, rho, width, height):
    """Horizontal Exp(rho) and vertical Exp(1-rho) increments, keyed by absolute site."""
    cx, cy = corner
    I = rng.exp_field(rng.substream(seed, HORIZONTAL_STREAM), cx + 1, cy, width, 1)[0] / rho
    J = rng.exp_field(rng.substream(seed, VERTICAL_STREAM), cx, cy + 1, 1, height)[:, 0] / (1.0 - rho)
    return I, J


def stationary_quadrant(seed, corner, rho, width, height):
    """Increment-stationary LPP on corner + [0,width] x [0,height].

    Returns the table (corner value 0, boundary row and column included) and
    exit times. Exactly one of tau1, tau2 is positive at each bulk site.
    """
    _check_rho(rho)
    cx, cy = int(corner[0]), int(corner[1])
    width, height = int(width), int(height)
    if width * height > MAX_CELLS:
        raise SizeError("quadrant exceeds the cell budget")
    I, J = quadrant_boundary(seed, (cx, cy), rho, width, height)
    Y = sample_weight_field(seed, (cx + 1, cy + 1), width, height).weights
    bottom = np.cumsum(I)
    left = np.cumsum(J)
    d, z = boundary_dp(Y, bottom, np.arange(1, width + 1), left, -np.arange(1, height + 1))
    values = np.zeros((height + 1, width + 1))
    values[0, 1:] = bottom
    values[1:, 0] = left
    values[1:, 1:] = d
    weights = np.zeros_like(values)
    weights[1:, 1:] = Y
    tau1 = np.zeros(values.shape, dtype=np.int64)
    tau2 = np.zeros(values.shape, dtype=np.int64)
    tau1[1:, 1:] = np.maximum(z, 0)
    tau2[1:, 1:] = np.maximum(-z, 0)
    tau1[0, :] = np.arange(width + 1)
    tau2[:, 0] = np.arange(height + 1)
    table = PassageTable(f"quadrant{(cx, cy)} rho={rho}", "quadrant", (cx, cy), values, weights)
    return QuadrantResult(table, tau1, tau2, rho)


# --------------------------------------------------------------- half-plane --

def stationary_profile(seed, rho, window):
    """h(kmin) = 0 with i.i.d. Exp(rho) increments keyed by absolute index."""
    _check_rho(rho)
    a, b = window
    inc = rng.exp_field(rng.substream(seed, HORIZONTAL_STREAM), a + 1, 0, b - a, 1)[0] / rho
    return BoundaryProfile((a, b), np.concatenate(([0.0], np.cumsum(inc))), left_rate_hint=rho)


def narrow_wedge(k, window):
    a, b = window
    present = np.zeros(b - a + 1, dtype=bool)
    present[k - a] = True
    return BoundaryProfile((a, b), np.zeros(b - a + 1), present, truncated=False)


def truncation_width(height):
    """Default left margin for half-infinite suprema (near-1/2 rates only)."""
    height = max(int(height), 2)
    return max(int(math.ceil(8 * height ** (2 / 3) * math.log(height))), 64)


@dataclass
class HalfPlaneResult:
    values: dict
    exits: dict
    edge_flags: dict
    table: PassageTable
    exit_table: np.ndarray = field(repr=False, default=None)

    @property
    def any_edge(self):
        return any(self.edge_flags.values())


def _halfplane_tables(Y, h, col_hi):
    hb = h.as_array()[: col_hi - h.kmin + 1]
    ks = np.arange(h.kmin, col_hi + 1)
    H = Y.shape[0]
    d, z = boundary_dp(Y, hb, ks, np.full(H, -np.inf), np.full(H, h.kmin - 1))
    return hb, d, z


def halfplane_with_boundary(field, h, targets):
    """d^h(m,n) = max_k h(k) + d((k,1),(m,n)) over the profile window, with exit points.

    The field must cover columns kmin..max target column on rows 1..max target row.
    """
    targets = [(int(m), int(n)) for m, n in targets]
    if not targets:
        raise DomainError("no targets")
    if any(n < 1 for _, n in targets):
        raise DomainError("targets must lie strictly above the boundary row")
    if any(m < h.kmin or m > h.kmax for m, _ in targets):
        raise DomainError("target column outside the profile window")
    col_hi = max(m for m, _ in targets)
    n_hi = max(n for _, n in targets)
    Y = field.block(h.kmin, 1, col_hi - h.kmin + 1, n_hi)
    hb, d, z = _halfplane_tables(Y, h, col_hi)
    values, exits, flags = {}, {}, {}
    for m, n in targets:
        v = d[n - 1, m - h.kmin]
        values[(m, n)] = v
        zz = int(z[n - 1, m - h.kmin]) if np.isfinite(v) else None
        exits[(m, n)] = zz
        flags[(m, n)] = bool(h.truncated and zz == h.kmin)
    full = np.vstack([hb[None, :], d])
    weights = np.vstack([np.zeros((1, Y.shape[1])), Y])
    table = PassageTable(f"halfplane[{h.kmin},{h.kmax}]", "halfplane", (h.kmin, 0), full, weights)
    return HalfPlaneResult(values, exits, flags, table, z)


def halfplane_rows(field, h, levels):
    """Full table of d^h on rows 1..levels over the whole window (values, exits)."""
    Y = field.block(h.kmin, 1, h.kmax - h.kmin + 1, levels)
    _, d, z = _halfplane_tables(Y, h, h.kmax)
    return d, z


# -------------------------------------------------------------- exit points --

def exit_point(seed, n_rows, target_col, rho, k0):
    """Exit point Z of the stationary half-plane model at (target_col, n_rows).

    Uses the projection of the stationary quadrant with corner (k0, 0): inside
    the open quadrant both models share geodesics, so Z = k0 + tau1 whenever
    the quadrant geodesic leaves through the horizontal axis. Otherwise Z <= k0
    and None is returned. Weights are hashed on the fly; memory is O(width).
    """
    _check_rho(rho)
    width = int(target_col) - int(k0)
    if width < 1:
        raise DomainError("target must lie right of the corner")
    I, J = quadrant_boundary(seed, (k0, 0), rho, width, n_rows)
    _, z = boundary_dp_stream(seed, k0 + 1, 1, n_rows, np.cumsum(I), np.arange(1, width + 1),
                              np.cumsum(J), -np.arange(1, n_rows + 1))
    code = int(z[-1])
    return k0 + code if code > 0 else None


def quadrant_from_halfplane(field, h, k0, levels):
    """The quadrant with corner (k0, 0) cut out of a half-plane sample.

    Its horizontal boundary is h to the right of k0 and its vertical boundary
    is d^h along column k0, both shifted by h(k0). Returns (d, labels) on
    columns k0+1..kmax and rows 1..levels, with the quadrant exit codes
    (positive: horizontal offset, negative: vertical row).
    """
    if not (h.kmin <= k0 < h.kmax) or not h.present[k0 - h.kmin]:
        raise DomainError("corner must be a present point inside the window")
    d, _ = halfplane_rows(field, h, levels)
    base = h.values[k0 - h.kmin]
    j = k0 - h.kmin
    bottom = h.as_array()[j + 1:] - base
    left = d[:, j] - base
    Y = field.block(k0 + 1, 1, h.kmax - k0, levels)
    W = bottom.size
    return boundary_dp(Y, bottom, np.arange(1, W + 1), left, -np.arange(1, levels + 1))
