"""Counter-based exponential streams.

Every lattice site gets a 64-bit key from (seed, row, col) through a
SplitMix64 finalizer, and the key alone decides its weight. Overlapping
windows therefore agree site by site, and the numba and numpy paths produce
identical bits. Exponentials come from a 256-layer ziggurat whose rare slow
path draws fresh keys by rehashing with an attempt counter.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

ROW_MULT = 0x9E3779B97F4A7C15
COL_MULT = 0xD1B54A32D192ED03
RETRY_MULT = 0x632BE59BD9B4E019
SLOW_XOR = 0x5851F42D4C957F2D
STREAM_MULT = 0xA0761D6478BD642F
MASK64 = (1 << 64) - 1

# Marsaglia-Tsang exponential ziggurat, 256 layers
ZIG_R = 7.69711747013104972
ZIG_V = 0.0039496598225815571993


def _zig_tables(n=256):
    x = np.zeros(n + 1)
    x[0] = ZIG_V / math.exp(-ZIG_R)
    x[1] = ZIG_R
    for i in range(1, n - 1):
        x[i + 1] = -math.log(ZIG_V / x[i] + math.exp(-x[i]))
    x[n] = 0.0
    return x, np.exp(-x)


ZIG_X, ZIG_F = _zig_tables()


def mix64_int(z):
    """SplitMix64 finalizer on a python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def substream(seed, tag):
    """Independent 64-bit seed for a tagged stream derived from ``seed``."""
    return mix64_int((int(seed) & MASK64) + (int(tag) + 1) * STREAM_MULT)


def mix64(z):
    """Vectorized SplitMix64 finalizer on uint64 arrays (wraps mod 2^64)."""
    z = np.asarray(z, dtype=np.uint64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def _as_u64(a):
    return np.asarray(a, dtype=np.int64).astype(np.uint64)


def site_keys(seed, cols, rows):
    """Keys for sites (cols[j], rows[i]); returns shape (len(rows), len(cols))."""
    s = np.uint64(mix64_int(int(seed)))
    rk = mix64(s + _as_u64(rows) * np.uint64(ROW_MULT))
    ck = _as_u64(cols) * np.uint64(COL_MULT)
    return mix64(rk[:, None] + ck[None, :])


def _unit(k):
    return ((k >> np.uint64(11)).astype(np.float64) + 0.5) * (1.0 / 9007199254740992.0)


def exp_from_keys_numpy(keys):
    """Unit exponentials from uint64 keys, vectorized ziggurat."""
    keys = np.asarray(keys, dtype=np.uint64)
    flat = keys.ravel()
    out = np.empty(flat.size)
    todo = np.arange(flat.size)
    k = flat.copy()
    attempt = 0
    while todo.size:
        if attempt:
            k = mix64(flat[todo] + np.uint64((attempt * RETRY_MULT) & MASK64))
        i = (k & np.uint64(255)).astype(np.intp)
        z = _unit(k) * ZIG_X[i]
        fast = z < ZIG_X[i + 1]
        out[todo[fast]] = z[fast]
        slow = ~fast
        if not slow.any():
            break
        todo, k, i, z = todo[slow], k[slow], i[slow], z[slow]
        u2 = _unit(mix64(k ^ np.uint64(SLOW_XOR)))
        tail = i == 0
        out[todo[tail]] = ZIG_R - np.log(u2[tail])
        wedge = ~tail
        acc = np.zeros(todo.size, dtype=bool)
        iw = i[wedge]
        acc[wedge] = ZIG_F[iw + 1] + u2[wedge] * (ZIG_F[iw] - ZIG_F[iw + 1]) < np.exp(-z[wedge])
        out[todo[acc]] = z[acc]
        keep = wedge & ~acc
        todo = todo[keep]
        attempt += 1
    return out.reshape(keys.shape)


@njit(inline="always")
def _mix(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(inline="always")
def _u01(k):
    return (np.float64(k >> np.uint64(11)) + 0.5) * (1.0 / 9007199254740992.0)


@njit
def _zexp(key, zx, zf):
    k = key
    attempt = np.uint64(0)
    while True:
        i = np.int64(k & np.uint64(255))
        z = _u01(k) * zx[i]
        if z < zx[i + 1]:
            return z
        u2 = _u01(_mix(k ^ np.uint64(SLOW_XOR)))
        if i == 0:
            return ZIG_R - math.log(u2)
        if zf[i + 1] + u2 * (zf[i] - zf[i + 1]) < math.exp(-z):
            return z
        attempt += np.uint64(1)
        k = _mix(key + attempt * np.uint64(RETRY_MULT))


@njit
def _row_key(smix, row):
    return _mix(smix + np.uint64(row) * np.uint64(ROW_MULT))


@njit
def _field_nb(seed, col0, row0, width, height, zx, zf):
    out = np.empty((height, width))
    smix = _mix(np.uint64(seed))
    for r in range(height):
        rk = _row_key(smix, row0 + r)
        for c in range(width):
            key = _mix(rk + np.uint64(col0 + c) * np.uint64(COL_MULT))
            out[r, c] = _zexp(key, zx, zf)
    return out


def field_numpy(seed, col0, row0, width, height):
    keys = site_keys(seed, np.arange(col0, col0 + width), np.arange(row0, row0 + height))
    return exp_from_keys_numpy(keys)


def field_numba(seed, col0, row0, width, height):
    return _field_nb(np.uint64(int(seed) & MASK64), np.int64(col0), np.int64(row0),
                     int(width), int(height), ZIG_X, ZIG_F)


def exp_field(seed, col0, row0, width, height):
    """Unit exponentials on the rectangle, shape (height, width), [row, col]."""
    if width <= 0 or height <= 0:
        return np.zeros((max(height, 0), max(width, 0)))
    if USE_NUMBA:
        return field_numba(seed, col0, row0, width, height)
    return field_numpy(seed, col0, row0, width, height)


def exp_line(seed, start, length):
    """Unit exponentials on indices start..start+length-1 of a 1-D stream."""
    return exp_field(seed, start, 0, length, 1)[0]


def generator(seed, *tags):
    """numpy Generator keyed by (seed, tags); used for non-lattice streams."""
    return np.random.default_rng([int(seed) & MASK64] + [int(t) & MASK64 for t in tags])
