import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stathorizon import lattice_lpp as lp
from stathorizon import queueing as q
from stathorizon.errors import ParameterError, ShapeError


def seq(vals, a=0):
    return q.Sequence((a, a + len(vals) - 1), np.asarray(vals, float))


def test_small_window_example():
    omega, I = seq([5, 0, 0]), seq([0, 1, 1])
    Ft, F, _ = q.departures(omega, I)
    assert Ft.tolist() == [5, 5, 5]
    assert q.queue_D(omega, I).values[1:].tolist() == [0, 0]
    assert q.queue_S(omega, I).values.tolist() == [5, 4, 3]


def test_zero_service_is_identity():
    I = seq(np.random.default_rng(0).exponential(size=50))
    zero = seq(np.zeros(50))
    assert np.allclose(q.queue_D(zero, I).values, I.values)
    assert np.allclose(q.queue_S(zero, I).values, 0)


def test_window_mismatch():
    with pytest.raises(ShapeError):
        q.queue_D(seq([1, 2]), seq([1, 2], a=1))


def test_rate_checks():
    for bad in ([0.5, 0.6], [1.2, 0.5], []):
        with pytest.raises(ParameterError):
            q.check_rates(bad)


def test_single_class_mu_is_input():
    s = q.sample_mu([0.4], (0, 99), 3)
    assert s.components[0].shape == (100,)
    assert s.components[0].min() > 0


def test_mu_json_roundtrip():
    s = q.sample_mu([0.6, 0.4], (0, 9), 1, burn_in=20)
    t = q.MulticlassState.from_json(s.to_json())
    assert np.array_equal(np.array(t.components), np.array(s.components))


def test_mu_components_increment_ordered():
    s = q.sample_mu([0.6, 0.5, 0.4], (0, 499), 4)
    # smaller rate means larger increments: component i+1 dominates i termwise
    for a, b in zip(s.components, s.components[1:]):
        assert q.is_increment_ordered(a, b)


def test_zero_rows_identity():
    s = q.sample_mu([0.6, 0.4], (0, 30), 2, burn_in=10)
    t = q.evolve_levels(s, [])
    assert all(np.array_equal(a, b) for a, b in zip(s.components, t.components))


@pytest.mark.parametrize("seed", range(5))
def test_levels_match_halfplane_dp(seed):
    window, levels = (0, 127), 12
    h = lp.stationary_profile(seed, 0.5, window)
    f = lp.sample_weight_field(seed, (0, 1), 128, levels)
    d, _ = lp.halfplane_rows(f, h, levels)
    state = q.MulticlassState((0.5,), window, [np.concatenate(([0.0], h.increments()))])
    for n, row in enumerate(q.rows_from_field(f, window, levels)):
        state = q.evolve_levels(state, [row])
        assert np.allclose(state.components[0][1:], np.diff(d[n]), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 5), min_size=2, max_size=30), st.integers(0, 2**32 - 1))
def test_lindley_matches_direct_max(omega, seed):
    n = len(omega)
    I = np.random.default_rng(seed).exponential(size=n)
    om, ia = seq(omega), seq(I)
    Ft, F, _ = q.departures(om, ia)
    direct = [max(F[k] + sum(omega[k:l + 1]) for k in range(l + 1)) for l in range(n)]
    assert np.allclose(Ft, direct)
    assert np.all(q.queue_S(om, ia).values >= -1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_queue_monotone_in_arrivals(seed):
    g = np.random.default_rng(seed)
    omega = seq(g.exponential(size=40))
    I1 = g.exponential(size=40)
    I2 = I1 + g.exponential(size=40)
    a, b = q.queue_D(omega, seq(I1)), q.queue_D(omega, seq(I2))
    assert q.is_increment_ordered(a.values, b.values)
