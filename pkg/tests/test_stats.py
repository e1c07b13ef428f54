import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrtrend import (HarmonicSpectrum, Summary, amplitude_phase, dft, ensemble_mean_series,
                     reconstruct, rms, select_top, successive_L_rms, summarize)
from mrtrend.stats import histogram_mode, root_rms


def test_summary_singleton():
    assert summarize([5.0]) == Summary(5.0, 5.0, 5.0, 0.0)


def test_summary_hand_values():
    s = summarize([1, 2, 3, 4])
    assert s.mean == 2.5 and s.median == 2.5
    assert s.std == pytest.approx(math.sqrt(5 / 3), rel=1e-14)


def test_summary_of_normal_draws():
    s = summarize(np.random.default_rng(7).standard_normal(10000))
    assert abs(s.mean) < 0.04
    assert abs(s.std - 1.0) < 0.03
    assert abs(s.mode) < 0.5


def test_mode_picks_fullest_bin():
    x = np.concatenate([np.zeros(3), np.full(10, 7.0), [10.0]])
    assert histogram_mode(x) == pytest.approx(7.05)


def test_summary_csv_round_trip():
    s = summarize([0.1, 0.7, 0.3])
    buf = io.StringIO()
    s.to_csv(buf)
    assert buf.getvalue().splitlines()[0] == "statistic,value"
    assert Summary.from_csv(io.StringIO(buf.getvalue())) == s


def test_rms_values():
    assert rms([1, 2], [1, 2]) == 0.0
    assert rms([1, 1], [0, 2]) == 1.0
    assert root_rms([0, 0], [3, 3]) == 3.0
    with pytest.raises(ValueError):
        rms([1, 2], [1])


def test_successive_rms():
    a = np.arange(5.0)
    assert successive_L_rms({6: a, 7: a}) == {7: 0.0}
    with pytest.raises(ValueError):
        successive_L_rms({6: a, 8: a})
    with pytest.raises(ValueError):
        successive_L_rms({6: a})


def test_successive_rms_vanishes_past_true_harmonic_count():
    n = 512
    hs = HarmonicSpectrum([0, 3, 5, 8, 13, 21, 34, 55],
                          [4.0, 1.0, 0.9, 0.8, 0.7, 0.6, 0.5, 0.4],
                          np.linspace(-2, 2, 8), n)
    spec = amplitude_phase(dft(reconstruct(hs)))
    recon = {l: reconstruct(select_top(spec, l), n + 1) for l in range(6, 14)}
    out = successive_L_rms(recon)
    assert out[8] > 1e-3
    assert all(out[l] < 1e-25 for l in range(9, 14))


def test_ensemble_mean():
    np.testing.assert_array_equal(ensemble_mean_series([[1.0, 2.0]]), [1.0, 2.0])
    np.testing.assert_array_equal(ensemble_mean_series([[1, 1], [3, 3]]), [2.0, 2.0])
    with pytest.raises(ValueError):
        ensemble_mean_series([[1, 2], [1]])
    with pytest.raises(ValueError):
        ensemble_mean_series([])


floats = st.floats(-1e6, 1e6, allow_nan=False)


@settings(max_examples=60, deadline=None)
@given(st.lists(floats, min_size=1, max_size=50), st.randoms(use_true_random=False))
def test_summary_permutation_invariant(xs, rnd):
    ys = list(xs)
    rnd.shuffle(ys)
    assert summarize(xs) == summarize(ys)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(floats, floats), min_size=1, max_size=30))
def test_rms_symmetric_nonnegative(pairs):
    a, b = np.array(pairs).T
    assert rms(a, b) == rms(b, a) >= 0
    assert rms(a, a) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 20), st.floats(-10, 10), st.floats(-10, 10))
def test_ensemble_mean_commutes_with_affine_maps(k, n, c, d):
    paths = np.random.default_rng(k * 100 + n).normal(size=(k, n))
    lhs = ensemble_mean_series([c * p + d for p in paths])
    np.testing.assert_allclose(lhs, c * ensemble_mean_series(paths) + d, atol=1e-9)
