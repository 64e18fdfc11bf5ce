"""Hot loops, each in a numba flavour and a vectorized numpy flavour.

The public wrappers at the bottom pick one according to ``_accel.USE_NUMBA``.
Both flavours are importable directly so the benchmark and the equivalence
tests can run them side by side.

Conventions shared by all DP kernels: arrays are indexed [row, col], a value
of -inf marks an absent predecessor, and on an exact tie the predecessor
below (the e2 step) wins while the carried label is the larger of the two.
"""
import numpy as np

from . import rng
from ._accel import USE_NUMBA, njit

NEG_INF = -np.inf


# ---------------------------------------------------------------- numba ----

@njit
def lpp_table_nb(Y):
    H, W = Y.shape
    d = np.empty((H, W))
    acc = 0.0
    for c in range(W):
        acc += Y[0, c]
        d[0, c] = acc
    for r in range(1, H):
        left = NEG_INF
        for c in range(W):
            b = d[r - 1, c]
            m = b if b >= left else left
            left = m + Y[r, c]
            d[r, c] = left
    return d


@njit
def boundary_dp_nb(Y, bottom, zb, left, zl):
    H, W = Y.shape
    d = np.empty((H, W))
    z = np.empty((H, W), dtype=np.int64)
    for r in range(H):
        lv = left[r]
        lz = zl[r]
        for c in range(W):
            if r == 0:
                b = bottom[c]
                bz = zb[c]
            else:
                b = d[r - 1, c]
                bz = z[r - 1, c]
            if b > lv:
                lv = b
                lz = bz
            elif b == lv:
                if bz > lz:
                    lz = bz
            lv = lv + Y[r, c]
            d[r, c] = lv
            z[r, c] = lz
    return d, z


@njit
def _gen_rows(smix, col0, row0, nrows, keys, y, zx, zf):
    # split loops so the hash and the ziggurat fast path vectorize
    W = keys.shape[1]
    cm = np.uint64(rng.COL_MULT)
    for j in range(nrows):
        rk = rng._row_key(smix, row0 + j)
        kr = keys[j]
        yr = y[j]
        for c in range(W):
            kr[c] = rng._mix(rk + np.uint64(col0 + c) * cm)
        for c in range(W):
            k = kr[c]
            yr[c] = rng._u01(k) * zx[np.int64(k & np.uint64(255))]
        for c in range(W):
            k = kr[c]
            if yr[c] >= zx[np.int64(k & np.uint64(255)) + 1]:
                yr[c] = rng._zexp(k, zx, zf)


@njit(inline="always")
def _step(b, bz, lv, lz, y):
    if b > lv:
        lv = b
        lz = bz
    elif b == lv:
        if bz > lz:
            lz = bz
    return lv + y, lz


@njit
def boundary_dp_stream_nb(seed, col0, row0, height, bottom, zb, left, zl, zx, zf):
    """Same recurrence as boundary_dp_nb with weights hashed on the fly.

    Only the current row is kept; returns the top row values and labels.
    Rows go in blocks of four along a skewed front so that the four
    max-plus dependency chains overlap.
    """
    W = bottom.shape[0]
    d = bottom.copy()
    z = zb.copy()
    smix = rng._mix(np.uint64(seed))
    keys = np.empty((4, W), dtype=np.uint64)
    y = np.empty((4, W))
    r = 0
    while r + 4 <= height:
        _gen_rows(smix, col0, row0 + r, 4, keys, y, zx, zf)
        y0, y1, y2, y3 = y[0], y[1], y[2], y[3]
        l0, z0 = left[r], zl[r]
        l1, z1 = left[r + 1], zl[r + 1]
        l2, z2 = left[r + 2], zl[r + 2]
        l3, z3 = left[r + 3], zl[r + 3]
        o0, o1, o2 = 0.0, 0.0, 0.0
        q0, q1, q2 = np.int64(0), np.int64(0), np.int64(0)
        for c in range(W + 3):
            # row j sits at column c - j and reads row j-1 from the last pass
            if c >= 3:
                l3, z3 = _step(o2, q2, l3, z3, y3[c - 3])
                d[c - 3] = l3
                z[c - 3] = z3
            if 2 <= c < W + 2:
                l2, z2 = _step(o1, q1, l2, z2, y2[c - 2])
                o2, q2 = l2, z2
            if 1 <= c < W + 1:
                l1, z1 = _step(o0, q0, l1, z1, y1[c - 1])
                o1, q1 = l1, z1
            if c < W:
                l0, z0 = _step(d[c], z[c], l0, z0, y0[c])
                o0, q0 = l0, z0
        r += 4
    while r < height:
        _gen_rows(smix, col0, row0 + r, 1, keys, y, zx, zf)
        lv, lz = left[r], zl[r]
        yr = y[0]
        for c in range(W):
            lv, lz = _step(d[c], z[c], lv, lz, yr[c])
            d[c] = lv
            z[c] = lz
        r += 1
    return d, z


@njit
def lindley_nb(omega, F):
    n = omega.shape[0]
    Ft = np.empty(n)
    arg = np.empty(n, dtype=np.int64)
    prev = NEG_INF
    k = -1
    for i in range(n):
        if F[i] >= prev:
            prev = F[i]
            k = i
        prev = prev + omega[i]
        Ft[i] = prev
        arg[i] = k
    return Ft, arg


@njit
def running_max_nb(a):
    out = np.empty_like(a)
    m = NEG_INF
    for i in range(a.shape[0]):
        if a[i] > m:
            m = a[i]
        out[i] = m
    return out


# ---------------------------------------------------------------- numpy ----

def _last_record(v):
    """Index of the last k <= i at which v[k] equals the running max."""
    rm = np.maximum.accumulate(v)
    idx = np.where(v == rm, np.arange(v.size), 0)
    return rm, np.maximum.accumulate(idx)


def lpp_table_np(Y):
    H, W = Y.shape
    d = np.empty((H, W))
    d[0] = np.cumsum(Y[0])
    for r in range(1, H):
        S = np.cumsum(Y[r])
        shifted = np.concatenate(([0.0], S[:-1]))
        d[r] = S + np.maximum.accumulate(d[r - 1] - shifted)
    return d


def _boundary_row_np(Yr, prev, zprev, lv, lz):
    S = np.cumsum(Yr)
    shifted = np.concatenate(([0.0], S[:-1]))
    v = np.concatenate(([lv], prev - shifted))
    labels = np.concatenate(([lz], zprev))
    rm, k = _last_record(v)
    return S + rm[1:], labels[k[1:]]


def boundary_dp_np(Y, bottom, zb, left, zl):
    H, W = Y.shape
    d = np.empty((H, W))
    z = np.empty((H, W), dtype=np.int64)
    prev, zprev = np.asarray(bottom, float), np.asarray(zb, np.int64)
    for r in range(H):
        prev, zprev = _boundary_row_np(Y[r], prev, zprev, left[r], zl[r])
        d[r], z[r] = prev, zprev
    return d, z


def boundary_dp_stream_np(seed, col0, row0, height, bottom, zb, left, zl, chunk=64):
    W = bottom.shape[0]
    prev, zprev = np.asarray(bottom, float).copy(), np.asarray(zb, np.int64).copy()
    for r0 in range(0, height, chunk):
        h = min(chunk, height - r0)
        Y = rng.field_numpy(seed, col0, row0 + r0, W, h)
        for j in range(h):
            prev, zprev = _boundary_row_np(Y[j], prev, zprev, left[r0 + j], zl[r0 + j])
    return prev, zprev


def lindley_np(omega, F):
    S = np.cumsum(omega)
    shifted = np.concatenate(([0.0], S[:-1]))
    rm, k = _last_record(np.asarray(F, float) - shifted)
    return S + rm, k


def running_max_np(a):
    return np.maximum.accumulate(a)


# ------------------------------------------------------------- dispatch ----

def lpp_table(Y):
    Y = np.ascontiguousarray(Y, dtype=float)
    return lpp_table_nb(Y) if USE_NUMBA else lpp_table_np(Y)


def boundary_dp(Y, bottom, zb, left, zl):
    args = (np.ascontiguousarray(Y, dtype=float), np.asarray(bottom, float),
            np.asarray(zb, np.int64), np.asarray(left, float), np.asarray(zl, np.int64))
    return boundary_dp_nb(*args) if USE_NUMBA else boundary_dp_np(*args)


def boundary_dp_stream(seed, col0, row0, height, bottom, zb, left, zl):
    bottom = np.asarray(bottom, float)
    zb = np.asarray(zb, np.int64)
    left = np.asarray(left, float)
    zl = np.asarray(zl, np.int64)
    if USE_NUMBA:
        return boundary_dp_stream_nb(np.uint64(int(seed) & rng.MASK64), np.int64(col0),
                                     np.int64(row0), int(height), bottom, zb, left, zl,
                                     rng.ZIG_X, rng.ZIG_F)
    return boundary_dp_stream_np(seed, col0, row0, height, bottom, zb, left, zl)


def lindley(omega, F):
    omega = np.asarray(omega, float)
    F = np.asarray(F, float)
    return lindley_nb(omega, F) if USE_NUMBA else lindley_np(omega, F)


def running_max(a):
    a = np.asarray(a, float)
    return running_max_nb(a) if USE_NUMBA else running_max_np(a)
