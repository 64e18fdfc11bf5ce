"""Registered verification suites, one per checked identity or property.

Every suite splits its replicas into fixed blocks. A block's randomness is
keyed by (seed, block index) and the blocks are reduced in order, so the
result does not depend on how many workers ran them.
"""
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import busemann_scaling as bs
from . import horizon as hz
from . import lattice_lpp as lp
from . import queueing as qu
from . import rng
from . import verify as vf
from ._kernels import lpp_table
from .errors import InsufficientDataError, UsageError


@dataclass
class SuiteResult:
    reports: list
    per_replica: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.reports if r.gating)


@dataclass
class Suite:
    name: str
    run: object
    replicas: int
    gating: bool = True
    doc: str = ""


def fan_out(fn, seed, replicas, block, parallelism, params):
    """Run fn(seed, start, count, params) over fixed blocks; results in block order."""
    starts = list(range(0, replicas, block))
    jobs = [(fn, seed, s, min(block, replicas - s), params) for s in starts]
    if parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as ex:
            return list(ex.map(_call, jobs))
    return [_call(j) for j in jobs]


def _call(job):
    fn, seed, start, count, params = job
    return fn(seed, start, count, params)


def _cat(blocks, key):
    return np.concatenate([b[key] for b in blocks])


def _p(params, key, default, cast=float):
    v = params.get(key, default)
    return cast(v) if v is not None else None


# ----------------------------------------------------------- queue / LPP --

def _dp_block(seed, start, count, params):
    window = (0, _p(params, "window", 512, int) - 1)
    levels = _p(params, "levels", 50, int)
    worst = np.empty(count)
    for j in range(count):
        r = start + j
        s = rng.substream(seed, r)
        rho = 0.3 + 0.4 * rng.generator(seed, 0x7268, r).random()
        h = lp.stationary_profile(s, rho, window)
        f = lp.sample_weight_field(s, (window[0], 1), window[1] - window[0] + 1, levels)
        d, _ = lp.halfplane_rows(f, h, levels)
        state = qu.Sequence(window, np.concatenate(([0.0], h.increments())))
        rows = qu.rows_from_field(f, window, levels)
        err = 0.0
        for n, row in enumerate(rows):
            state = qu.queue_D(row, state)
            err = max(err, float(np.max(np.abs(state.values[1:] - np.diff(d[n])))))
        worst[j] = err
    return {"max_abs_diff": worst}


def suite_queue_dp(seed, replicas, parallelism, params):
    blocks = fan_out(_dp_block, seed, replicas, 10, parallelism, params)
    worst = _cat(blocks, "max_abs_diff")
    m = float(worst.max())
    rep = vf.TestReport("queue-dp-equivalence", m, 0.0, 1e-9, m, m <= 1e-9, replicas, seed)
    return SuiteResult([rep], {"max_abs_diff": worst})


MU_RATES = (0.6, 0.5, 0.4)


def _mu_block(seed, start, count, params):
    rates = params.get("rates", MU_RATES)
    levels = _p(params, "levels", 50, int)
    width = _p(params, "window", 2000, int)
    coords = np.arange(width // 2, width, width // 20)[:10]
    out = np.empty((count, len(rates), coords.size))
    for j in range(count):
        r = start + j
        st = qu.sample_mu(rates, (0, width - 1), rng.substream(seed, r))
        f = lp.sample_weight_field(rng.substream(seed, r + (1 << 40)), (0, 1), width, levels)
        st = qu.evolve_levels(st, qu.rows_from_field(f, (0, width - 1), levels))
        for i in range(len(rates)):
            out[j, i] = st.components[i][coords]
    return {"values": out}


def suite_mu_invariance(seed, replicas, parallelism, params):
    rates = tuple(params.get("rates", MU_RATES))
    vals = _cat(fan_out(_mu_block, seed, replicas, 50, parallelism, params), "values")
    reports = []
    ok = True
    worst = 1.0
    for i, rho in enumerate(rates):
        ps = [stats.kstest(vals[:, i, c], "expon", args=(0, 1 / rho)).pvalue for c in range(vals.shape[2])]
        adj = min(1.0, min(ps) * len(ps))
        worst = min(worst, adj)
        ok &= adj > vf.KS_LEVEL
    rep = vf.TestReport("mu-invariance", worst, vf.KS_LEVEL, 0.0, worst, bool(ok), replicas, seed)
    return SuiteResult([rep], {f"component{i + 1}_coord0": vals[:, i, 0] for i in range(len(rates))})


def _qlaw_block(seed, start, count, params):
    rho = _p(params, "rho", 0.4)
    tau = _p(params, "tau", 1.0)
    burn = _p(params, "burn_in", 400, int)
    out_I = np.empty(count)
    out_J = np.empty(count)
    for j in range(count):
        g = rng.generator(seed, 0x716C, start + j)
        w = qu.Sequence((0, burn), g.standard_exponential(burn + 1) / tau)
        a = qu.Sequence((0, burn), g.standard_exponential(burn + 1) / rho)
        out_I[j] = qu.queue_D(w, a).values[-1]
        out_J[j] = qu.queue_S(w, a).values[-1]
    return {"I": out_I, "J": out_J}


def suite_queue_law(seed, replicas, parallelism, params):
    rho = _p(params, "rho", 0.4)
    tau = _p(params, "tau", 1.0)
    blocks = fan_out(_qlaw_block, seed, replicas, 1000, parallelism, params)
    I, J = _cat(blocks, "I"), _cat(blocks, "J")
    rI = vf.ks_test(I, stats.expon(scale=1 / rho).cdf, "queue-output-law:I", seed)
    rJ = vf.ks_test(J, stats.expon(scale=1 / (tau - rho)).cdf, "queue-output-law:J", seed)
    return SuiteResult([rI, rJ], {"interdeparture": I, "sojourn": J})


# ------------------------------------------------------- stationary horizon --

SH_DIRECTIONS = (-1.0, 0.0, 1.0)


def _marg_block(seed, start, count, params):
    step = _p(params, "step", 2.0 ** -10)
    left = _p(params, "left", 6.0)
    dirs = params.get("directions", SH_DIRECTIONS)
    g = hz.Grid(-left, 1.0, step)
    j1 = g.zero_index() + int(round(1 / step))
    inc = np.empty((count, len(dirs)))
    flag = np.zeros(count, dtype=bool)
    for j in range(count):
        s = hz.sample_horizon(dirs, g, rng.substream(seed, start + j))
        inc[j] = [ln.values[j1] for ln in s.lines]
        flag[j] = s.edge_flag
    return {"inc": inc, "flag": flag}


def suite_sh_marginals(seed, replicas, parallelism, params):
    dirs = params.get("directions", SH_DIRECTIONS)
    blocks = fan_out(_marg_block, seed, replicas, 500, parallelism, params)
    inc, flag = _cat(blocks, "inc"), _cat(blocks, "flag")
    keep = inc[~flag]
    reports = []
    for i, xi in enumerate(dirs):
        r = vf.moment_check(keep[:, i], 2 * xi, 2.0, suite=f"sh-marginals:xi={xi:g}", seed=seed)
        r.details["discarded"] = int(flag.sum())
        reports.append(r)
    return SuiteResult(reports, {f"increment_xi{xi:g}": inc[:, i] for i, xi in enumerate(dirs)})


SEP_GRID = [(xi, x, z) for xi in (0.5, 1.0) for x in (0.5, 1.0) for z in (0.0, 0.5, 1.0)]


def _sep_block(seed, start, count, params):
    step = _p(params, "step", 2.0 ** -10)
    g = hz.Grid(-1.0, 1.0, step)
    j0 = g.zero_index()
    h = int(round(0.5 / step))
    out = {}
    for xi in sorted({p[0] for p in SEP_GRID}):
        a = np.empty((count, 2))
        for j in range(count):
            s = hz.sample_horizon([0.0, xi], g, rng.substream(seed, (start + j) * 8 + int(4 * xi)))
            H = hz.diff_values(s, 2)
            a[j] = (H[j0 + 2 * h] - H[j0 - 2 * h], H[j0 + h] - H[j0 - h])
        out[f"xi{xi:g}"] = a
    return out


def suite_separation(seed, replicas, parallelism, params):
    blocks = fan_out(_sep_block, seed, replicas, 500, parallelism, params)
    reports = []
    per = {}
    for xi, x, z in SEP_GRID:
        d = _cat(blocks, f"xi{xi:g}")[:, 0 if x == 1.0 else 1]
        per[f"xi{xi:g}_x{x:g}"] = d
        reports.append(vf.proportion_check(d <= z + 1e-9, vf.separation_formula(xi, x, z),
                                           f"separation:xi={xi:g},x={x:g},z={z:g}", seed))
    return SuiteResult(reports, per)


def _jump_block(seed, start, count, params):
    level = _p(params, "level", 8, int)
    x_max = _p(params, "x_max", 2.0)
    step = _p(params, "step", 2.0 ** -10)
    mesh = hz.dyadic_mesh(0.0, 1.0, level)
    fine = hz.dyadic_mesh(0.0, 1.0, level + 1)
    p = hz.jump_point_process(mesh, x_max, step, seed, count, replica_offset=start)
    q = hz.jump_point_process(fine, x_max, step, rng.substream(seed, 0x6669), count, replica_offset=start)
    coarse = [hz.coarsen_points(pts, fine) for pts in q.points]
    return {"points": p.points, "fine": q.points, "coarse": coarse}


def _jump_data(seed, replicas, parallelism, params):
    blocks = fan_out(_jump_block, seed, replicas, 100, parallelism, params)
    return {k: hz.JumpProcess([p for b in blocks for p in b[k]]) for k in ("points", "fine", "coarse")}


def suite_jump_count(seed, replicas, parallelism, params, data=None):
    data = data or _jump_data(seed, replicas, parallelism, params)
    rect = ((0.0, 1.0), (0.0, 1.0))
    main = vf.intensity_check(data["points"], rect, bins=0, suite="jump-count", seed=seed)
    c9 = data["fine"].counts(rect)
    c8 = data["coarse"].counts(rect)
    diff = float(c9.mean() - c8.mean())
    se8 = float(c8.std(ddof=1) / math.sqrt(c8.size))
    stab = vf.TestReport("jump-count:refine", float(c9.mean()), float(c8.mean()), se8,
                         diff / se8 if se8 > 0 else 0.0, abs(diff) <= se8, replicas, seed)
    return SuiteResult([main, stab], {"count": data["points"].counts(rect).astype(float),
                                      "count_fine": c9.astype(float)})


def suite_jump_intensity(seed, replicas, parallelism, params, data=None):
    data = data or _jump_data(seed, replicas, parallelism, params)
    rep = vf.intensity_check(data["points"], ((0.0, 2.0), (0.0, 1.0)), bins=8,
                             suite="jump-intensity", seed=seed)
    rep.score = rep.details["max_abs_z"]
    taus = np.concatenate([p[:, 0] for p in data["points"].points])
    return SuiteResult([rep], {"tau": taus})


def _palm_block(seed, start, count, params):
    level = _p(params, "level", 8, int)
    step = _p(params, "step", 2.0 ** -10)
    u_max = 1.0
    x_max = _p(params, "x_max", 3.0)
    mesh = hz.dyadic_mesh(0.0, 1.0, level)
    p = hz.jump_point_process(mesh, x_max, step, seed, count, keep_profiles=True, replica_offset=start)
    recs = [r for r in p.records if r.tau + u_max <= x_max]
    return {"u0.25": np.array([r.restarted.at(0.25) for r in recs]),
            "u1": np.array([r.restarted.at(1.0) for r in recs])}


def _lr_block(seed, start, count, params):
    gap = _p(params, "lr_gap", 0.5)
    X = _p(params, "lr_window", 6.0)
    g = hz.Grid(-X, X, 2.0 ** -8)
    out = []
    for j in range(count):
        s = hz.sample_horizon([0.0, gap], g, rng.substream(seed, (1 << 41) + start + j))
        rec = hz.difference_process(s, 2)
        if rec.tau + 1 <= X and rec.left_tau + 1 <= X:
            out.append((rec.left_restarted.at(1.0), rec.restarted.at(1.0)))
    return {"pairs": np.array(out).reshape(-1, 2)}


def suite_palm(seed, replicas, parallelism, params):
    blocks = fan_out(_palm_block, seed, replicas, 200, parallelism, params)
    vals = {0.25: _cat(blocks, "u0.25"), 1.0: _cat(blocks, "u1")}
    if vals[1.0].size < _p(params, "min_records", 10_000, int):
        raise InsufficientDataError(f"only {vals[1.0].size} finite-tau records")
    palm = vf.palm_values_check(vals, "palm-running-max", seed)
    lr_reps = _p(params, "lr_replicas", 3000, int)
    lr = _cat(fan_out(_lr_block, seed, lr_reps, 500, parallelism, params), "pairs")
    corr = vf.correlation_check(lr[:, 0], lr[:, 1], "palm-left-right", seed)
    return SuiteResult([palm, corr], {"restarted_u1": vals[1.0], "left_u1": lr[:, 0], "right_u1": lr[:, 1]})


# -------------------------------------------------------------- exit tails --

EXIT_M = (0.5, 1.0, 1.5, 2.0)


def _exit_block(seed, start, count, params):
    N = _p(params, "N", 10_000, int)
    t = _p(params, "t", 1.0)
    rho = 0.5 + _p(params, "c", 0.0) * N ** (-1 / 3)
    n = int(round(t * N))
    k0 = -int(math.ceil(max(EXIT_M) * N ** (2 / 3))) - 1
    out = np.empty(count)
    for j in range(count):
        z = lp.exit_point(rng.substream(seed, start + j), n, n, rho, k0)
        out[j] = -math.inf if z is None else z
    return {"Z": out}


def suite_exit_tails(seed, replicas, parallelism, params):
    N = _p(params, "N", 10_000, int)
    Z = _cat(fan_out(_exit_block, seed, replicas, 10, parallelism, params), "Z")
    scale = N ** (2 / 3)
    probs = [float(np.mean(np.abs(Z) >= M * scale)) for M in EXIT_M]
    decreasing = all(a > b for a, b in zip(probs, probs[1:]))
    rep = vf.TestReport("exit-tails", probs[-1], 0.05, math.sqrt(max(probs[-1] * (1 - probs[-1]), 1e-12) / Z.size),
                        probs[-1], bool(decreasing and probs[-1] < 0.05), replicas, seed)
    rep.details = {"M": list(EXIT_M), "P": probs, "strictly_decreasing": decreasing}
    Zf = np.where(np.isfinite(Z), Z, np.nan)
    return SuiteResult([rep], {"exit_point": Zf, "tail_prob": np.array(probs)})


# --------------------------------------------------------- deterministic --

def _crossing(g, seed):
    f = lp.sample_weight_field(seed, (0, 0), 14, 14)
    s, t = sorted(g.choice(14, 2, replace=False))
    x1, x2, y1, y2 = sorted(g.choice(14, 4, replace=False))
    def d(a, b):
        return lp.point_to_point(f, (a, s), (b, t))
    return d(x2, y1) - d(x1, y1) <= d(x2, y2) - d(x1, y2) + 1e-9


def _superadditive(g, seed):
    w = 16
    f = lp.sample_weight_field(seed, (0, 1), w, 10)
    h = lp.BoundaryProfile((0, w - 1), np.cumsum(g.normal(size=w)))
    d, _ = lp.halfplane_rows(f, h, 10)
    xm, xn = int(g.integers(0, w - 1)), int(g.integers(1, 9))
    e = (1, 0) if g.random() < 0.5 else (0, 1)
    sm, sn = xm + e[0], xn + e[1]
    zm, zn = int(g.integers(sm, w)), int(g.integers(sn, 11))
    if zn > 10:
        zn = 10
    if zn < sn:
        return True
    rest = lp.point_to_point(f, (sm, sn), (zm, zn))
    return d[zn - 1, zm] >= d[xn - 1, xm] + rest - 1e-9


def _attractive(g, seed):
    w = 24
    f = lp.sample_weight_field(seed, (0, 1), w, 12)
    h1 = np.cumsum(g.normal(size=w))
    h2 = h1 + np.cumsum(g.exponential(size=w) * (g.random(w) < 0.5))
    d1, _ = lp.halfplane_rows(f, lp.BoundaryProfile((0, w - 1), h1), 12)
    d2, _ = lp.halfplane_rows(f, lp.BoundaryProfile((0, w - 1), h2), 12)
    return bool(np.all(np.diff(d2 - d1, axis=1) >= -1e-9))


def _row_span(path):
    span = {}
    for c, r in path.sites:
        lo, hi = span.get(r, (c, c))
        span[r] = (min(lo, c), max(hi, c))
    return span


def _geo_order(g, seed):
    f = lp.sample_weight_field(seed, (0, 0), 20, 20)
    tab = lp.passage_table(f, (0, 0))
    n = int(g.integers(1, 20))
    a, b = sorted(g.choice(20, 2, replace=False))
    pa, pb = _row_span(lp.trace_geodesic(tab, (a, n))), _row_span(lp.trace_geodesic(tab, (b, n)))
    return all(pa[r][0] <= pb[r][0] and pa[r][1] <= pb[r][1] for r in pa)


def _busemann(g, seed):
    pts = [tuple(int(v) for v in g.integers(0, 6, 2)) for _ in range(3)]
    rho = 0.2 + 0.6 * g.random()
    e = bs.busemann_estimate(rho, [(pts[0], pts[1]), (pts[1], pts[2]), (pts[0], pts[2])],
                             n_schedule=[12, 24], seed=seed)
    v = [val for _, val in e.pairs]
    anti = e.value(pts[1], pts[0]) == -v[0]
    return abs(v[0] + v[1] - v[2]) <= 1e-9 and anti


def _argmax_mono(g, seed):
    n = 201
    x = np.linspace(-5, 5, n)
    f = np.cumsum(g.normal(size=n) * 0.3)
    inc = np.cumsum(g.exponential(size=n) * (g.random(n) < 0.3))
    pen = -float(g.uniform(0.1, 2.0)) * x * x
    fl, fr = hz.argmax_lr(np.round(f + pen, 6))
    gl, gr = hz.argmax_lr(np.round(f + inc + pen, 6))
    return fl <= gl and fr <= gr


DETERMINISTIC = {"crossing": _crossing, "superadditivity": _superadditive, "attractiveness": _attractive,
                 "geodesic-ordering": _geo_order, "busemann-additivity": _busemann,
                 "argmax-monotonicity": _argmax_mono}


def _det_block(seed, start, count, params):
    out = {}
    for k, (name, fn) in enumerate(DETERMINISTIC.items()):
        bad = 0
        for j in range(count):
            r = start + j
            g = rng.generator(seed, 0x6474, k, r)
            bad += not fn(g, rng.substream(seed, (k << 32) + r))
        out[name] = np.array([bad])
    return out


def suite_deterministic(seed, replicas, parallelism, params):
    blocks = fan_out(_det_block, seed, replicas, 250, parallelism, params)
    reports = []
    for name in DETERMINISTIC:
        bad = int(_cat(blocks, name).sum())
        reports.append(vf.TestReport(f"deterministic:{name}", bad, 0, 0, bad, bad == 0, replicas, seed))
    return SuiteResult(reports)


# ------------------------------------------------------------ finite N SH --

def _conv_block(seed, start, count, params):
    out = {}
    for N in (100, 10_000):
        x = bs.increment_samples(N, 0.0, 1.0, count, rng.substream(seed, (N << 32) + start))
        out[f"N{N}"] = np.array([x.sum(), (x * x).sum(), x.size])
    return out


def suite_sh_convergence(seed, replicas, parallelism, params):
    blocks = fan_out(_conv_block, seed, replicas, 1_000_000, parallelism, params)
    var = {}
    for N in (100, 10_000):
        s = np.sum([b[f"N{N}"] for b in blocks], axis=0)
        m = s[0] / s[2]
        var[N] = (s[1] - s[2] * m * m) / (s[2] - 1)
    rel = abs(var[10_000] - 2) / 2
    closer = abs(var[10_000] - 2) < abs(var[100] - 2)
    rep = vf.TestReport("sh-convergence", float(var[10_000]), 2.0, float(2 * math.sqrt(2 / replicas)),
                        float(rel), bool(rel <= vf.VAR_TOL_N and closer), replicas, seed)
    rep.details = {"variance_N100": float(var[100]), "variance_N10000": float(var[10_000]), "closer": closer}
    return SuiteResult([rep], {"variance": np.array([var[100], var[10_000]])})


# ------------------------------------------------------------ coalescence --

def _coal_block(seed, start, count, params):
    T = _p(params, "T", 80, int)
    K = _p(params, "starts", 10, int)
    width = K + 2 * T + 60
    frac = np.empty(count)
    edges = 0
    for j in range(count):
        s = rng.substream(seed, start + j)
        f = lp.sample_weight_field(s, (0, 0), width, T + 1)
        W = bs.busemann_profile(s, 0.5, (0, width - 1))
        paths = [bs.busemann_geodesic((c, 0), W, f, T) for c in range(K)]
        edges += sum(p.edge_flag for p in paths)
        pairs = [(a, b) for a in range(K) for b in range(a + 1, K)]
        frac[j] = np.mean([bs.shares_site(paths[a], paths[b]) for a, b in pairs])
    return {"frac": frac, "edges": np.array([edges])}


def suite_coalescence(seed, replicas, parallelism, params):
    blocks = fan_out(_coal_block, seed, replicas, 25, parallelism, params)
    frac = _cat(blocks, "frac")
    m = float(frac.mean())
    rep = vf.TestReport("coalescence", m, 0.95, float(frac.std(ddof=1) / math.sqrt(frac.size)), m,
                        m > 0.95, replicas, seed)
    rep.details = {"edge_flags": int(_cat(blocks, "edges").sum())}
    return SuiteResult([rep], {"pair_fraction": frac})


# -------------------------------------------------------------- dimension --

def support_points(profile, eps=1e-12):
    v = profile.values
    j = np.nonzero(np.diff(v) > eps)[0]
    return profile.x[j]


def _dim_block(seed, start, count, params):
    step = _p(params, "step", 2.0 ** -16)
    L = _p(params, "length", 1.0)
    level = _p(params, "level", 6, int)
    mesh = hz.dyadic_mesh(0.0, 1.0, level)
    scales = L * 2.0 ** -np.arange(3, 13)
    est = []
    for r in range(start, start + count):
        p = hz.jump_point_process(mesh, L, step, seed, 1, keep_profiles=True, replica_offset=r)
        for rec in p.records:
            if rec.tau <= L / 2:
                pts = support_points(rec.restarted)
                if pts.size >= 50:
                    est.append(vf.box_dimension(pts, scales).estimate)
    return {"dim": np.array(est)}


def suite_dimension(seed, replicas, parallelism, params):
    dims = _cat(fan_out(_dim_block, seed, replicas, 20, parallelism, params), "dim")
    if dims.size == 0:
        raise InsufficientDataError("no jump profiles with enough support points")
    m = float(dims.mean())
    rep = vf.TestReport("dimension", m, 0.5, float(dims.std(ddof=1) / math.sqrt(dims.size)) if dims.size > 1 else 0.0,
                        abs(m - 0.5), abs(m - 0.5) <= 0.15, int(dims.size), seed, gating=False)
    return SuiteResult([rep], {"box_dimension": dims})


# ---------------------------------------------------------- horizon trace --

def suite_horizon_trace(seed, replicas, parallelism, params):
    dirs = params.get("directions", (-1.5, -0.9, -0.3, 0.3, 0.9, 1.5))
    g = hz.Grid(-_p(params, "left", 8.0), _p(params, "right", 4.0), _p(params, "step", 2.0 ** -8))
    s = hz.sample_horizon(dirs, g, seed)
    bad = sum(not hz.increment_ordered(a, b) for a, b in zip(s.lines, s.lines[1:]))
    rep = vf.TestReport("horizon-trace", bad, 0, 0, bad, bad == 0, 1, seed)
    return SuiteResult([rep], artifacts={"horizon": s})


def suite_jump(seed, replicas, parallelism, params):
    data = _jump_data(seed, replicas, parallelism, params)
    a = suite_jump_count(seed, replicas, parallelism, params, data)
    b = suite_jump_intensity(seed, replicas, parallelism, params, data)
    return SuiteResult(a.reports + b.reports, {**a.per_replica, **b.per_replica})


REGISTRY = {s.name: s for s in [
    Suite("queue-dp-equivalence", suite_queue_dp, 100, doc="queue output equals half-plane DP increments"),
    Suite("mu-invariance", suite_mu_invariance, 1000, doc="multiclass measure preserved by 50 levels"),
    Suite("queue-output-law", suite_queue_law, 10_000, doc="interdeparture Exp(rho), sojourn Exp(tau-rho)"),
    Suite("sh-marginals", suite_sh_marginals, 10_000, doc="each SH line is BM with drift 2 xi, variance 2"),
    Suite("separation", suite_separation, 10_000, doc="separation probability on [-x, x]"),
    Suite("jump-count", suite_jump_count, 1000, doc="mean number of jump directions"),
    Suite("jump-intensity", suite_jump_intensity, 1000, doc="tau histogram against sqrt(2/(pi tau))"),
    Suite("jumps", suite_jump, 1000, doc="jump-count and jump-intensity on shared data"),
    Suite("palm-running-max", suite_palm, 4600, doc="restarted profile is a running max of BM"),
    Suite("exit-tails", suite_exit_tails, 1000, doc="exit point tails at N = 10^4"),
    Suite("deterministic", suite_deterministic, 1000, doc="deterministic lattice and argmax properties"),
    Suite("sh-convergence", suite_sh_convergence, 10_000_000, doc="finite-N variance trend"),
    Suite("coalescence", suite_coalescence, 100, doc="Busemann geodesic pairs meet by height 80"),
    Suite("dimension", suite_dimension, 200, gating=False, doc="box dimension of jump supports"),
    Suite("horizon-trace", suite_horizon_trace, 1, doc="k = 6 SH lines for plotting"),
]}


def run_suite(name, seed, replicas=None, parallelism=1, params=None):
    if name not in REGISTRY:
        raise UsageError(f"unknown suite {name!r}; known: {', '.join(REGISTRY)}")
    s = REGISTRY[name]
    reps = s.replicas if replicas is None else int(replicas)
    if reps < 1:
        raise UsageError("replicas must be at least 1")
    res = s.run(int(seed), reps, int(parallelism), dict(params or {}))
    for r in res.reports:
        r.gating = r.gating and s.gating
    return res


def default_parallelism():
    return max(1, len(os.sched_getaffinity(0)))
