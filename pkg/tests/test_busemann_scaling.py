import math

import numpy as np
import pytest
from scipy import stats

from stathorizon import busemann_scaling as bs
from stathorizon import horizon as hz
from stathorizon import lattice_lpp as lp
from stathorizon.errors import ParameterError


def test_direction_vector():
    assert bs.direction_vector(0.5) == pytest.approx((0.5, 0.5))
    assert bs.direction_vector(2 / 3) == pytest.approx((0.8, 0.2))
    for r in (0.1, 0.37, 0.9):
        assert sum(bs.direction_vector(r)) == pytest.approx(1.0)
    with pytest.raises(ParameterError):
        bs.direction_vector(0.0)


def test_frame_constants():
    fr = bs.ScalingFrame(1)
    assert fr.center(0, 0, 0, 1) == 4
    assert fr.value_scale == pytest.approx(2.5198, abs=1e-4)
    assert bs.ScalingFrame(1000).rho(0) == 0.5


@pytest.mark.parametrize("seed", range(5))
def test_reverse_triangle_with_seam(seed):
    N = 64
    fr = bs.ScalingFrame(N)
    q = [(0.0, 0.0, 0.3, 0.5), (0.3, 0.5, 0.5, 1.0), (0.0, 0.0, 0.5, 1.0)]
    L = bs.scaled_landscape(N, q, seed)
    mid = fr.lattice_point(0.3, 0.5)
    seam = lp.sample_weight_field(seed, mid, 1, 1).weights[0, 0] / fr.value_scale
    assert L[q[0]] + L[q[1]] <= L[q[2]] + seam + 1e-9


def test_busemann_additivity_and_antisymmetry():
    pairs = [((0, 0), (1, 0)), ((1, 0), (2, 0)), ((0, 0), (2, 0)), ((3, 3), (3, 3))]
    e = bs.busemann_estimate(0.5, pairs, seed=4)
    for hist in e.history.values():
        assert hist[0] + hist[1] == pytest.approx(hist[2], abs=1e-9)
        assert hist[3] == 0
    assert e.value((1, 0), (0, 0)) == -e.value((0, 0), (1, 0))


def test_busemann_increments_are_exp():
    vals = []
    for s in range(300):
        e = bs.busemann_estimate(0.5, [((0, 0), (1, 0))], n_schedule=[60, 120], seed=s)
        if e.stabilized:
            vals.append(e.pairs[0][1])
    assert len(vals) > 200
    assert stats.kstest(vals, stats.expon(scale=2).cdf).pvalue > 0.001


def test_kpz_step_levels_zero_and_wedge():
    h = lp.stationary_profile(1, 0.5, (-20, 20))
    out = bs.kpz_fixed_point_step(h, 0, 1)
    assert out.values[20] == 0 and np.allclose(np.diff(out.values), np.diff(h.values))
    w = lp.narrow_wedge(0, (-10, 10))
    step = bs.kpz_fixed_point_step(w, 6, 2)
    f = lp.sample_weight_field(2, (0, 1), 11, 6)
    d0 = lp.point_to_point(f, (0, 1), (0, 6))
    for m in (1, 4, 10):
        assert step.values[10 + m] == pytest.approx(lp.point_to_point(f, (0, 1), (m, 6)) - d0)
    assert not step.present[0]


def test_scaled_line_ordering_and_diff_profile():
    s = bs.scaled_busemann_line(1000, [-0.5, 0.0, 0.5], hz.Grid(-1, 1, 1 / 64), 3)
    for i in (2, 3):
        d = bs.diff_profile(s, i)
        assert np.all(np.diff(d.values) >= -1e-9)
    same = hz.HorizonSample((0.0, 1.0), [s.lines[0], s.lines[0]], 0)
    assert np.all(bs.diff_profile(same, 2).values == 0)


def test_increment_samples_moments():
    x = bs.increment_samples(1000, 0.0, 1.0, 20000, 1)
    assert abs(x.mean()) < 3 * x.std() / math.sqrt(x.size)
    assert abs(x.var() - 2) < 0.3


@pytest.mark.parametrize("seed", range(4))
def test_busemann_geodesics_ordered(seed):
    T, width = 20, 60
    f = lp.sample_weight_field(seed, (0, 0), width, T + 1)
    W = bs.busemann_profile(seed, 0.5, (0, width - 1))
    p = bs.busemann_geodesic((2, 0), W, f, T, side="right")
    q = bs.busemann_geodesic((5, 0), W, f, T, side="left")
    for row in range(T + 1):
        assert q.sites[q.sites[:, 1] == row, 0].min() >= p.sites[p.sites[:, 1] == row, 0].min()
    same = bs.busemann_geodesic((2, 0), W, f, T, side="right")
    assert np.array_equal(same.sites, p.sites)
