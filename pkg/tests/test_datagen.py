import math

import numpy as np
import pytest

from histclass import HistClassError, RunConfig, classify, find_cics, scale, split_training
from histclass.datagen import GeneratorSpec, Planted, generate, planted_spec


def test_same_seed_bit_identical():
    a = generate(planted_spec(m=500, n=10, seed=7))
    b = generate(planted_spec(m=500, n=10, seed=7))
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])
    assert not np.array_equal(a[0], generate(planted_spec(m=500, n=10, seed=8))[0])


@pytest.mark.parametrize("noise", ["normal", "laplace"])
def test_label_rate_and_finiteness(noise):
    p, m = 0.05, 20_000
    X, labels, _ = generate(planted_spec(m=m, n=8, positive_rate=p, noise=noise, seed=1))
    assert abs(labels.mean() - p) <= 2 * math.sqrt(p * (1 - p) / m) * 1.5
    assert np.all(np.isfinite(X))


def test_null_model_has_no_signal():
    X, labels, cols = generate(GeneratorSpec(m=4000, n=10, seed=2, decimals=None))
    assert cols == []
    rep = classify(X, labels, RunConfig(cic_mode="auto", t=2, seed=0))
    assert abs(rep.confusion.kappa) < 0.1


def test_large_shift_recovered():
    spec = GeneratorSpec(m=3000, n=12, planted=[Planted(2, 10.0, 1e-5), Planted(9, 10.0, 1e-5)], seed=3)
    X, labels, cols = generate(spec)
    assert cols == [2, 9]
    split = split_training(labels, 0.2, 0.05, seed=0)
    assert list(find_cics(scale(X), split, 0.5, 0.01, 1000).cols) == [2, 9]


def test_discrete_columns_are_integers():
    spec = planted_spec(m=300, n=10, n_planted=2, discrete_cols=3, seed=4)
    X, _, cols = generate(spec)
    assert len(spec.discrete_col_indices) == 3
    assert not set(spec.discrete_col_indices) & set(cols)
    d = X[:, spec.discrete_col_indices]
    np.testing.assert_array_equal(d, np.round(d))
    assert d.min() >= 0 and d.max() < spec.discrete_levels


def test_planted_positions_are_spread():
    assert planted_spec(n=50, n_planted=4).planted_cols == [10, 20, 29, 39]


def test_spec_validation():
    with pytest.raises(HistClassError):
        GeneratorSpec(positive_rate=1.0)
    with pytest.raises(HistClassError):
        GeneratorSpec(n=5, planted=[(1,), (1,)])
    with pytest.raises(HistClassError):
        GeneratorSpec(n=5, planted=[(5,)])
    with pytest.raises(HistClassError):
        GeneratorSpec(noise="cauchy")
    with pytest.raises(HistClassError):
        GeneratorSpec(n=3, planted=[(0,)], discrete_cols=3)
