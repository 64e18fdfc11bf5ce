import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stathorizon import horizon as hz
from stathorizon.errors import ContractError, DomainError, ParameterError

G3 = hz.Grid(-1.0, 1.0, 1.0)


def gf(vals, grid=G3, anchored=True):
    return hz.grid_function(grid, np.asarray(vals, float), anchored)


def test_phi_hand_example():
    out = hz.phi(gf([-1, 0, 2]), gf([-2, 0, 1]))
    assert out.values.tolist() == [-2.0, 0.0, 2.0]


def test_phi_identity_when_equal():
    f = hz.sample_two_sided_bm(0.3, 1.4, hz.Grid(-2, 2, 1 / 64), 1)
    assert np.allclose(hz.phi(f, f).values, f.values)


def test_phi_needs_anchored_inputs():
    grid = hz.Grid(-1, 1, 1)
    f = hz.GridFunction(-1, 1, 1, np.array([1.0, 1.0, 1.0]), anchored=False)
    with pytest.raises(ContractError):
        hz.phi(f, f)


@pytest.mark.parametrize("seed", range(8))
def test_phi_agrees_with_alternate_form(seed):
    grid = hz.Grid(-3, 3, 1 / 32)
    f = hz.sample_two_sided_bm(-0.5, math.sqrt(2), grid, seed, 0)
    g = hz.sample_two_sided_bm(0.5, math.sqrt(2), grid, seed, 1)
    assert np.allclose(hz.phi(f, g).values, hz.phi_alt(f, g).values, atol=1e-9)


def test_phi_k_small_cases():
    f = [hz.sample_two_sided_bm(2 * x, math.sqrt(2), hz.Grid(-2, 2, 1 / 16), 3, i)
         for i, x in enumerate((0.0, 1.0))]
    assert hz.phi_k(f[:1])[0] is f[0]
    out = hz.phi_k(f)
    assert out[0] is f[0]
    assert np.array_equal(out[1].values, hz.phi(f[0], f[1]).values)
    with pytest.raises(ParameterError):
        hz.phi_k([])


def test_bm_degenerate_and_deterministic():
    grid = hz.Grid(-1, 1, 0.25)
    line = hz.sample_two_sided_bm(1.5, 0.0, grid, 9)
    assert np.allclose(line.values, 1.5 * grid.x)
    a = hz.sample_two_sided_bm(0.0, 1.0, grid, 9).values
    b = hz.sample_two_sided_bm(0.0, 1.0, grid, 9).values
    assert np.array_equal(a, b)
    with pytest.raises(DomainError):
        hz.sample_two_sided_bm(0.0, 1.0, hz.Grid(0.5, 2, 0.5), 1)


def test_bridge_max_bounds():
    a, b = np.array([0.0, 1.0]), np.array([1.0, -1.0])
    m = hz.bridge_max(a, b, 1.0, np.array([1.0, 1e-9]))
    assert m[0] == pytest.approx(1.0)
    assert m[1] > 1.0


def test_bridge_max_law():
    # P(max > m) = exp(-2 m (m - b) / v) for a bridge 0 -> b
    u = np.random.default_rng(0).random(200_000)
    m = hz.bridge_max(0.0, 0.5, 2.0, 1 - u)
    level = 1.2
    assert abs(np.mean(m > level) - math.exp(-2 * level * (level - 0.5) / 2.0)) < 0.005


@pytest.mark.parametrize("seed", range(4))
def test_horizon_lines_ordered(seed):
    s = hz.sample_horizon([-1.0, 0.0, 0.5, 1.0], hz.Grid(-4, 2, 1 / 64), seed)
    for f, g in zip(s.lines, s.lines[1:]):
        assert hz.increment_ordered(f, g)
    pair = hz.sample_horizon([0.0, 1.0], hz.Grid(-1, 1, 1 / 64), seed)
    assert hz.increment_ordered(*pair.lines)
    assert not pair.edge_flag


def test_single_direction_is_plain_bm():
    grid = hz.Grid(-1, 1, 1 / 8)
    s = hz.sample_horizon([0.7], grid, 4)
    assert np.array_equal(s.lines[0].values, hz.sample_two_sided_bm(1.4, math.sqrt(2), grid, 4, 0).values)
    with pytest.raises(ParameterError):
        hz.sample_horizon([1.0, 0.0], grid, 4)


def _sample_from(lines, grid):
    return hz.HorizonSample((0.0, 1.0), [hz.grid_function(grid, v) for v in lines], 0)


def test_split_example():
    grid = hz.Grid(-1, 2, 1 / 64)
    H = np.maximum(grid.x - 0.5, 0.0)
    rec = hz.difference_process(_sample_from([np.zeros(grid.n), H], grid), 2)
    assert rec.tau == 0.5
    assert np.allclose(rec.restarted.values, rec.restarted.x)
    assert math.isinf(rec.left_tau)


def test_identical_lines_never_split():
    grid = hz.Grid(-1, 1, 1 / 16)
    rec = hz.difference_process(_sample_from([np.zeros(grid.n)] * 2, grid), 2)
    assert math.isinf(rec.tau) and rec.restarted is None
    with pytest.raises(DomainError):
        hz.difference_process(_sample_from([np.zeros(grid.n)] * 2, grid), 1)


def test_dyadic_mesh_and_empty_rectangle():
    mesh = hz.dyadic_mesh(0, 1, 3)
    assert mesh.size == 9 and mesh[-1] == 1
    jp = hz.jump_point_process(mesh, 1.0, 1 / 64, 1, 20)
    assert jp.counts(((0.5, 0.5), (0, 1))).sum() == 0


def test_pair_count_mean_sums_to_limit():
    # summed over a fine mesh the per-pair means approach 2 sqrt(2/pi)
    mesh = hz.dyadic_mesh(0, 1, 8)
    tot = sum(hz.pair_count_mean(g, 0, 1) for g in np.diff(mesh)[:1]) * (mesh.size - 1)
    assert abs(tot - 2 * math.sqrt(2 / math.pi)) < 0.05


def test_coarsen_takes_min_tau():
    mesh = np.array([0.0, 0.5, 1.0])
    pts = np.array([[0.7, 0.5], [0.2, 1.0]])
    assert hz.coarsen_points(pts, mesh).tolist() == [[0.2, 1.0]]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.floats(0.1, 2.0))
def test_argmax_monotone(seed, shift):
    g = np.random.default_rng(seed)
    x = np.linspace(-3, 3, 61)
    f = np.cumsum(g.normal(size=61)) - x ** 2
    h = f + np.cumsum(np.abs(g.normal(size=61))) * shift      # f <=_inc h
    (fl, fr), (hl, hr) = hz.argmax_lr(f), hz.argmax_lr(h)
    assert fl <= hl and fr <= hr
