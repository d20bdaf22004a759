import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from histclass import HistClassError, compute_column_stats, scale
from histclass.dataio import load_iris
from histclass.scaling import FULL, TRAIN, TRAIN_N15, ColumnStats, round_significant


def welford(xs):
    """Single-pass running mean / population variance."""
    n, mean, m2 = 0, 0.0, 0.0
    for x in xs:
        n += 1
        d = x - mean
        mean += d / n
        m2 += d * (x - mean)
    return mean, math.sqrt(m2 / n)


def test_constant_column_stats():
    st_ = compute_column_stats([[1.0], [1.0], [1.0]])
    assert st_.mean[0] == 1.0
    assert st_.std[0] == 0.0


def test_two_point_column_stats():
    st_ = compute_column_stats([[0.0], [2.0]])
    assert st_.mean[0] == 1.0
    assert st_.std[0] == 1.0


def test_iris_sepal_length_matches_streaming_oracle():
    X = load_iris("setosa").X
    st_ = compute_column_stats(X)
    mean, std = welford(X[:, 0].tolist())
    assert abs(st_.mean[0] - mean) <= 1e-9
    assert abs(st_.std[0] - std) <= 1e-9
    # frozen from the oracle above
    assert st_.mean[0] == pytest.approx(5.843333333333334, abs=1e-12)
    assert st_.std[0] == pytest.approx(0.8253012917851409, abs=1e-12)


def test_training_modes_use_sample_divisors():
    X = np.array([[1.0], [2.0], [4.0], [7.0], [100.0]])
    rows = [0, 1, 2, 3]
    x = np.array([1.0, 2.0, 4.0, 7.0])
    ss = ((x - x.mean()) ** 2).sum()
    train = compute_column_stats(X, rows=rows, mode=TRAIN)
    n15 = compute_column_stats(X, rows=rows, mode=TRAIN_N15)
    assert train.mean[0] == pytest.approx(3.5)
    assert train.std[0] == pytest.approx(math.sqrt(ss / 3))
    assert n15.std[0] == pytest.approx(math.sqrt(ss / 2.5))
    assert train.source == TRAIN


def test_empty_row_selection():
    with pytest.raises(HistClassError, match="empty stats sample"):
        compute_column_stats([[1.0, 2.0]], rows=[])


def test_single_row_sample_mode_rejected():
    with pytest.raises(HistClassError):
        compute_column_stats([[1.0], [2.0]], rows=[0], mode=TRAIN)


def test_scale_constant_column_is_zero():
    S = scale([[1.0], [1.0], [1.0]])
    np.testing.assert_array_equal(S.values, [[0.0], [0.0], [0.0]])


def test_scale_two_points():
    S = scale([[0.0], [2.0]])
    np.testing.assert_array_equal(S.values, [[-1.0], [1.0]])


def test_quantize_three_digits():
    np.testing.assert_array_equal(round_significant([0.123456], 3), [0.123])


@pytest.mark.parametrize("x, expected", [
    (0.1235, 0.124), (-0.1235, -0.124), (12345.0, 12300.0), (0.0, 0.0), (9.996, 10.0), (-2.5e-7, -2.5e-7),
])
def test_round_significant_half_away_from_zero(x, expected):
    assert round_significant([x], 3)[0] == pytest.approx(expected, rel=1e-12, abs=0)


def test_scale_with_quantization_keeps_stats():
    X = np.array([[0.0], [1.0], [3.0]])
    S = scale(X, quantize_digits=2)
    raw = scale(X).values
    np.testing.assert_allclose(S.values, round_significant(raw, 2))
    assert S.quantize_digits == 2


def test_stats_width_mismatch():
    stats = ColumnStats(mean=np.zeros(2), std=np.ones(2))
    with pytest.raises(HistClassError):
        scale(np.zeros((3, 3)), stats)


def test_nan_rejected():
    with pytest.raises(HistClassError):
        scale([[1.0], [np.nan]])


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 30), st.integers(1, 5)), elements=finite))
def test_scaled_columns_standardized(X):
    # keep only columns with a spread comfortably above rounding noise
    spread = np.ptp(X, axis=0)
    ok = spread > 1e-3 * (1 + np.abs(X).max(axis=0))
    S = scale(X).values
    const = spread == 0
    assert np.all(S[:, const] == 0.0)
    assert np.all(np.isfinite(S))
    if ok.any():
        np.testing.assert_allclose(S[:, ok].mean(axis=0), 0.0, atol=1e-9)
        np.testing.assert_allclose(S[:, ok].std(axis=0), 1.0, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 30), st.integers(1, 5)), elements=finite))
def test_scaling_idempotent(X):
    spread = np.ptp(X, axis=0)
    X = X[:, spread > 1e-3 * (1 + np.abs(X).max(axis=0))]
    if X.shape[1] == 0:
        return
    once = scale(X).values
    twice = scale(once).values
    np.testing.assert_allclose(twice, once, atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=-1e12, max_value=1e12, allow_nan=False).filter(lambda v: abs(v) > 1e-12),
       st.integers(1, 8))
def test_round_significant_digit_count(x, d):
    r = round_significant([x], d)[0]
    assert abs(r - x) <= 0.5 * 10 ** (math.floor(math.log10(abs(x))) - d + 1) * (1 + 1e-9)
    assert r == 0 or np.sign(r) == np.sign(x)


def test_stats_mode_names():
    assert FULL == "full"
    with pytest.raises(HistClassError):
        compute_column_stats([[1.0]], mode="bogus")
