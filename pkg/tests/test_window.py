"""Window evaluation, diagnostics, and serialization."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaborcert import window as W
from gaborcert.errors import DegenerateFit, EmptyCore


# ---------------------------------------------------------------------------
# evaluation

def test_bump_outside_support_is_exact_zero():
    assert W.evaluate(W.bump(), 2.0) == 0.0


def test_bump_at_origin():
    assert W.evaluate(W.bump(), 0.0) == pytest.approx(math.exp(-1.0), rel=1e-15)


def test_odd_bump_at_origin():
    assert W.evaluate(W.odd_bump(), 0.0) == 0.0


def test_characteristic_is_one_inside():
    w = W.characteristic()
    assert W.evaluate(w, 0.5) == 1.0
    assert W.evaluate(w, 0.0) == 0.0   # open interval: endpoint is outside


def test_support_annihilation_all_kinds():
    rng = np.random.default_rng(0)
    wins = [W.bump(), W.gevrey(4), W.characteristic(), W.odd_bump(),
            W.poly_bump(0.0, 2.0)]
    for w in wins:
        span = w.support_length
        left = w.support_lo - 1.0 - span * rng.random(5000)
        right = w.support_hi + 1.0 + span * rng.random(5000)
        xs = np.concatenate([left, right, [w.support_lo, w.support_hi]])
        assert np.all(W.evaluate(w, xs) == 0.0)


def test_bump_bounded_by_its_peak():
    w = W.bump()
    xs = np.linspace(-1, 1, 10001)
    vals = W.evaluate(w, xs)
    assert np.all(vals.imag == 0.0)
    assert np.all(vals.real >= 0.0)
    # strictly positive away from the edges (the extreme tail underflows)
    core = vals.real[np.abs(xs) <= 0.99]
    assert np.all(core > 0.0)
    assert np.max(np.abs(vals)) <= math.exp(-1.0)


@given(st.floats(min_value=-2.0, max_value=2.0, allow_nan=False))
@settings(max_examples=200)
def test_odd_bump_is_odd(x):
    w = W.odd_bump()
    assert W.evaluate(w, -x) == pytest.approx(-W.evaluate(w, x), abs=1e-15)


def test_sampled_round_trip_at_nodes():
    xs = np.linspace(-1.0, 1.0, 1000)
    vals = W.evaluate(W.bump(), xs)
    w = W.sampled(xs, vals)
    assert np.array_equal(W.evaluate(w, xs[1:-1]), vals[1:-1])


def test_sampled_rejects_bad_grids():
    with pytest.raises(ValueError):
        W.sampled([0.0, 0.0, 1.0], [0, 0, 0])
    with pytest.raises(ValueError):
        W.sampled([0.0, 1.0], [0, 0, 0])


def test_window_call_is_evaluate():
    w = W.bump()
    assert w(0.3) == W.evaluate(w, 0.3)


# ---------------------------------------------------------------------------
# sup norms

def test_sup_norm_hints():
    assert W.sup_norm(W.bump()) == math.exp(-1.0)
    assert W.sup_norm(W.characteristic()) == 1.0
    assert W.sup_norm(W.poly_bump(0.0, 1.0)) == 0.25


def test_inv_sup_characteristic():
    assert W.inv_sup_on_core(W.characteristic(), 0.2, 101) == 1.0


def test_inv_sup_bump_attained_at_core_edges():
    got = W.inv_sup_on_core(W.bump(), 0.5, 1001)
    assert got == pytest.approx(math.exp(16.0 / 15.0), rel=1e-12)


def test_inv_sup_odd_bump_hits_zero():
    assert W.inv_sup_on_core(W.odd_bump(), 0.1, 1001) == math.inf


def test_inv_sup_empty_core():
    with pytest.raises(EmptyCore):
        W.inv_sup_on_core(W.characteristic(), 0.6, 101)


def test_inv_sup_monotone_in_eps():
    w = W.bump()
    vals = [W.inv_sup_on_core(w, eps, 2001) for eps in (0.1, 0.3, 0.5, 0.7)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------------------
# Fourier diagnostics

def test_fourier_transform_at_zero_is_integral():
    # trapezoid on 2^14 nodes with the open-interval endpoints at 0:
    # error is one node weight, (b-a)/2^14
    w = W.characteristic()
    assert W.fourier_transform(w, 0.0) == pytest.approx(1.0, abs=1e-4)


def test_fourier_transform_char_is_sinc():
    # |ghat(xi)| = |sin(pi xi)/(pi xi)| for the indicator of (0, 1)
    w = W.characteristic()
    for xi in (0.5, 1.5, 2.25):
        expect = abs(math.sin(math.pi * xi) / (math.pi * xi))
        assert abs(W.fourier_transform(w, xi)) == pytest.approx(expect, abs=1e-4)


def test_fourier_decay_fit_bump():
    # oracle: stable to 6 digits between 2^14 and 10*2^14 quadrature nodes
    s_hat, c_hat = W.fourier_decay_fit(W.bump(), 80.0, 200)
    assert s_hat == pytest.approx(0.6428031, abs=0.1)
    assert c_hat > 0.0


def test_fourier_decay_fit_char_below_stretched_range():
    # polynomial (sinc) decay: the stretched-exponential model bottoms out
    # near s ~ 0.33, clearly below every smooth window in the zoo
    s_hat, _ = W.fourier_decay_fit(W.characteristic(), 80.0, 200)
    assert s_hat < 0.45


def test_fourier_decay_fit_degenerate():
    zero = W.sampled([0.0, 0.5, 1.0], [0.0, 0.0, 0.0])
    with pytest.raises(DegenerateFit):
        W.fourier_decay_fit(zero, 80.0, 200)


# ---------------------------------------------------------------------------
# CSV round-trip

def test_sampled_csv_round_trip(tmp_path):
    xs = np.linspace(0.0, 1.0, 257)
    vals = W.evaluate(W.poly_bump(), xs) + 1j * xs
    w = W.sampled(xs, vals)
    path = tmp_path / "w.csv"
    W.sampled_to_csv(w, path)
    back = W.sampled_from_csv(path)
    assert np.array_equal(back.grid_x, w.grid_x)
    assert np.array_equal(back.grid_vals, w.grid_vals)


def test_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,c\n0,0,0\n")
    with pytest.raises(ValueError):
        W.sampled_from_csv(path)
