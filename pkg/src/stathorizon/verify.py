"""Statistical checks that turn distributional identities into pass/fail reports."""
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import InsufficientDataError, ParameterError

KS_LEVEL = 0.01
Z_MAX = 3.0
VAR_TOL = 0.10
VAR_TOL_N = 0.15


@dataclass
class TestReport:
    suite: str
    statistic: float
    expected: float
    dispersion: float
    score: float
    passed: bool
    replicas: int
    seed: int
    gating: bool = True
    details: dict = field(default_factory=dict)

    __test__ = False   # keep pytest from collecting it

    def as_dict(self):
        return {"suite": self.suite, "statistic": _num(self.statistic), "expected": _num(self.expected),
                "dispersion": _num(self.dispersion), "score": _num(self.score),
                "pass": bool(self.passed), "replicas": int(self.replicas), "seed": int(self.seed)}

    @classmethod
    def from_dict(cls, d):
        return cls(d["suite"], d["statistic"], d["expected"], d["dispersion"], d["score"],
                   d["pass"], d["replicas"], d["seed"])

    def line(self):
        return (f"{self.suite:<28} stat={self.statistic:<12.6g} expected={self.expected:<12.6g} "
                f"score={self.score:<10.4g} {'PASS' if self.passed else 'FAIL'}")


def _num(v):
    v = float(v)
    return v if math.isfinite(v) else None


def ks_test(samples, cdf, suite="ks", seed=0, level=KS_LEVEL):
    """Two-sided KS against ``cdf``; pass at p > level."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise InsufficientDataError("no samples")
    r = stats.kstest(x, cdf)
    return TestReport(suite, float(r.statistic), 0.0, _ks_critical(x.size, level),
                      float(r.pvalue), bool(r.pvalue > level), int(x.size), seed)


def _ks_critical(n, level):
    return math.sqrt(-0.5 * math.log(level / 2) / n)


def moment_check(samples, target_mean, target_var, tol_mean_se=Z_MAX, tol_var_rel=VAR_TOL,
                 suite="moments", seed=0):
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 100:
        raise InsufficientDataError(f"need at least 100 samples, got {x.size}")
    m, v = x.mean(), x.var(ddof=1)
    se = math.sqrt(v / x.size)
    z = (m - target_mean) / se if se > 0 else (0.0 if m == target_mean else math.inf)
    rel = abs(v - target_var) / target_var if target_var > 0 else abs(v)
    ok = abs(z) <= tol_mean_se and rel <= tol_var_rel
    return TestReport(suite, float(m), float(target_mean), se, float(z), bool(ok), int(x.size), seed,
                      details={"variance": float(v), "target_variance": float(target_var),
                               "variance_rel_error": float(rel)})


def proportion_check(hits, expected, suite="proportion", seed=0, z_max=Z_MAX):
    """Empirical frequency vs a probability, z-scored with the binomial SE under the null."""
    h = np.asarray(hits, dtype=bool).ravel()
    n = h.size
    p = h.mean()
    se = math.sqrt(max(expected * (1 - expected), 1e-300) / n)
    z = (p - expected) / se
    return TestReport(suite, float(p), float(expected), se, float(z), bool(abs(z) <= z_max), n, seed)


def _check_sep(xi, x, z):
    if not (x > 0) or z < 0 or xi < 0:
        raise ParameterError("need x > 0, z >= 0, xi >= 0")


def separation_formula(xi, x, z):
    """P(G_{xi0+xi}(-x, x) - G_{xi0}(-x, x) <= z) for the stationary horizon.

    Lines carry drift 2 xi and diffusivity sqrt(2), so the difference is the
    running max over a window of length 2x of a BM with drift 2 xi and
    variance 4, started from an independent Exp(xi) deficit.
    """
    _check_sep(xi, x, z)
    N = stats.norm.cdf
    s = 2 * math.sqrt(2 * x)
    c = z + 4 * xi * x
    if xi == 0:
        return float(N(z / s) + N(-z / s))
    tail = (1 + xi * c) * N(-c / s) - 2 * xi * math.sqrt(x / math.pi) * math.exp(-c * c / (16 * x))
    return float(N((z - 4 * xi * x) / s) + math.exp(xi * z) * tail)


def separation_formula_printed(xi, x, z):
    """The same probability in the drift-xi normalization as it is commonly printed.

    Equals separation_formula(xi / 2, x, z) except for the Gaussian factor,
    which carries 8x where 16x is needed; kept for comparison only.
    """
    _check_sep(xi, x, z)
    N = stats.norm.cdf
    s = 2 * math.sqrt(2 * x)
    a = N((z - 2 * xi * x) / s)
    c = (1 + 0.5 * xi * z + xi * xi * x) * N(-(z + 2 * xi * x) / s)
    d = xi * math.sqrt(x / math.pi) * math.exp(-(z + 2 * xi * x) ** 2 / (8 * x))
    return float(a + math.exp(xi * z / 2) * (c - d))


@dataclass
class DimensionEstimate:
    estimate: float
    stderr: float
    middle: float
    counts: np.ndarray


def box_dimension(points, scales):
    """Slope of log(occupied boxes) against log(1/scale), with the middle-half slope."""
    p = np.asarray(points, dtype=float).ravel()
    s = np.asarray(scales, dtype=float).ravel()
    if p.size == 0:
        raise InsufficientDataError("no points")
    if s.size < 4 or np.any(s <= 0) or np.unique(s).size != s.size:
        raise ParameterError("need at least 4 distinct positive scales")
    counts = np.array([np.unique(np.floor(p / e)).size for e in s])
    X, Y = np.log(1 / s), np.log(counts)
    fit = stats.linregress(X, Y)
    q = s.size // 4
    mid = slice(q, s.size - q)
    mfit = stats.linregress(X[mid], Y[mid]) if s.size - 2 * q >= 2 else fit
    return DimensionEstimate(float(fit.slope), float(fit.stderr), float(mfit.slope), counts)


def running_max_cdf(u):
    """CDF of the running maximum at time u of a BM with diffusivity 2."""
    return lambda m: np.where(np.asarray(m) > 0, 2 * stats.norm.cdf(np.asarray(m) / (2 * math.sqrt(u))) - 1, 0.0)


def palm_running_max_check(records, u_probes, suite="palm-running-max", seed=0, min_records=20):
    """KS of restarted(u) against the running-max law, Bonferroni over the probes."""
    vals = {}
    for u in u_probes:
        vals[u] = np.array([r.restarted.at(u) for r in records
                            if r.restarted is not None and r.restarted.grid_max >= u - 1e-12])
    return palm_values_check(vals, suite, seed, min_records)


def palm_values_check(values_by_u, suite="palm-running-max", seed=0, min_records=20):
    subs = []
    for u, vals in values_by_u.items():
        if len(vals) < min_records:
            raise InsufficientDataError(f"only {len(vals)} records reach u={u}")
        subs.append(ks_test(vals, running_max_cdf(u), f"{suite}@{u}", seed))
    adj = min(1.0, min(s.score for s in subs) * len(subs))
    rep = TestReport(suite, max(s.statistic for s in subs), 0.0, max(s.dispersion for s in subs),
                     adj, bool(adj > KS_LEVEL), min(s.replicas for s in subs), seed)
    rep.details = {"probes": {str(u): {"D": s.statistic, "p": s.score, "n": s.replicas}
                              for u, s in zip(values_by_u, subs)}}
    return rep


def intensity_mean(rect):
    (a, b), (c, d) = rect
    return 2 * math.sqrt(2 / math.pi) * (d - c) * (math.sqrt(b) - math.sqrt(a))


def intensity_density(tau):
    return math.sqrt(2 / (math.pi * tau))


def intensity_check(process, rect, bins=8, suite="intensity", seed=0, z_max=Z_MAX):
    """Mean count in the rectangle and a per-bin tau histogram against sqrt(2/(pi tau)).

    Each bin must sit within z_max standard errors; the report score is the
    largest |z| over the total and the bins.
    """
    (a, b), (c, d) = rect
    counts = process.counts(rect)
    n = counts.size
    mean = counts.mean()
    se = counts.std(ddof=1) / math.sqrt(n) if n > 1 else math.inf
    exp_total = intensity_mean(rect)
    z_total = (mean - exp_total) / se if se > 0 else (0.0 if mean == exp_total else math.inf)
    edges = np.linspace(a, b, bins + 1) if bins else np.array([a, b])
    binz = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        cb = process.counts(((lo, hi), (c, d)))
        sb = cb.std(ddof=1) / math.sqrt(n)
        eb = intensity_mean(((lo, hi), (c, d)))
        binz.append({"lo": float(lo), "hi": float(hi), "mean": float(cb.mean()), "expected": eb,
                     "z": float((cb.mean() - eb) / sb) if sb > 0 else 0.0})
    worst = max([abs(z_total)] + [abs(bz["z"]) for bz in binz])
    rep = TestReport(suite, float(mean), exp_total, float(se), float(z_total),
                     bool(worst <= z_max), n, seed)
    rep.details = {"bins": binz, "max_abs_z": float(worst)}
    return rep


def correlation_check(x, y, suite="correlation", seed=0, z_max=Z_MAX):
    """Pearson correlation against 0 with z = r sqrt(n)."""
    x, y = np.asarray(x, float), np.asarray(y, float)
    n = x.size
    if n < 20:
        raise InsufficientDataError("too few pairs")
    r = float(np.corrcoef(x, y)[0, 1])
    z = r * math.sqrt(n)
    return TestReport(suite, r, 0.0, 1 / math.sqrt(n), z, bool(abs(z) <= z_max), n, seed)


def emit_report(reports, path):
    """Write the JSON array to ``path`` and a summary table next to it; return the table."""
    if not reports:
        raise ParameterError("no reports")
    with open(path, "w") as fh:
        json.dump([r.as_dict() for r in reports], fh, indent=1)
    table = summary_table(reports)
    with open(str(path) + ".txt", "w") as fh:
        fh.write(table)
    return table


def summary_table(reports):
    rows = [f"{'suite':<28} {'score':>12}  pass"]
    for r in reports:
        rows.append(f"{r.suite:<28} {r.score if r.score is not None else float('nan'):>12.5g}  "
                    f"{'yes' if r.passed else 'no'}{'' if r.gating else ' (non-gating)'}")
    gating = [r for r in reports if r.gating]
    ok = sum(r.passed for r in gating)
    rows.append(f"{ok}/{len(gating)} pass")
    if ok < len(gating):
        rows.append(f"{len(gating) - ok} gating failure(s)")
    return "\n".join(rows) + "\n"


def load_reports(path):
    with open(path) as fh:
        return [TestReport.from_dict(d) for d in json.load(fh)]
