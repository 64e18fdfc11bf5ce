import numpy as np
from scipy import stats

from stathorizon import rng


def test_substreams_distinct():
    tags = {rng.substream(7, t) for t in range(1000)}
    assert len(tags) == 1000
    assert rng.substream(7, 1) != rng.substream(8, 1)


def test_exp_field_law_and_independence():
    f = rng.exp_field(1, 0, 0, 300, 300)
    assert stats.kstest(f.ravel()[:20000], "expon").pvalue > 0.001
    r = np.corrcoef(f[:, :-1].ravel(), f[:, 1:].ravel())[0, 1]
    assert abs(r) < 4 / 300


def test_generator_tags():
    a = rng.generator(1, 2, 3).random(5)
    b = rng.generator(1, 2, 3).random(5)
    c = rng.generator(1, 2, 4).random(5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
