"""Determinant scans, certified intervals, block decompositions, rational analysis."""

import math
from fractions import Fraction

import numpy as np
import pytest

from gaborcert import certify as C
from gaborcert import lattice as L
from gaborcert import window as W
from gaborcert.errors import HypothesisViolated, TooCloseToForbiddenRatio

SQRT2 = math.sqrt(2.0)


@pytest.fixture(scope="module")
def flagship():
    """Bump window at the paper-scale showcase lattice alpha=1, beta=1/sqrt(2)."""
    params = L.lattice_params(1.0, 1.0 / SQRT2)
    w = W.bump()
    cert = C.certify_frame(params, w)
    return params, w, cert


# ---------------------------------------------------------------------------
# determinant scan

def test_scan_samples_avoid_breakpoints():
    p = L.lattice_params(0.7, 1.0)
    w = W.characteristic()
    prof = C.scan_determinant(p, w, 16)
    edges = np.concatenate(([0.0], prof.breakpoints, [p.alpha]))
    gaps = np.diff(edges)
    for x in prof.x_samples:
        dist = np.min(np.abs(edges - x))
        gi = np.searchsorted(edges, x) - 1
        assert dist >= gaps[gi] / 1000.0 * (1 - 1e-12)


def test_scan_poly_bump_matches_hand_product():
    p = L.lattice_params(0.7, 1.0)
    w = W.poly_bump(0.0, 1.0)
    prof = C.scan_determinant(p, w, 16)
    # on the gap (0, 0.1) the block is diag(g(x), g(x+0.3), g(x+0.6), g(x+0.9))
    sel = prof.x_samples < 0.1
    xs = prof.x_samples[sel]
    expect = (xs * (1 - xs) * (xs + 0.3) * (0.7 - xs)
              * (xs + 0.6) * (0.4 - xs) * (xs + 0.9) * (0.1 - xs))
    assert np.allclose(np.abs(prof.det_values[sel]), expect, rtol=1e-12)


def test_scan_characteristic_unit_determinants():
    rng = np.random.default_rng(2)
    for _ in range(5):
        alpha = rng.uniform(0.4, 0.9)
        beta = rng.uniform(1.05, 0.98 / alpha)
        p = L.lattice_params(alpha, beta)
        prof = C.scan_determinant(p, W.characteristic(), 8)
        assert np.allclose(prof.abs_det, 1.0, atol=1e-12)


def test_scan_fingerprints_constant_per_gap():
    p = L.lattice_params(1.0, 1.0 / SQRT2)
    prof = C.scan_determinant(p, W.bump(), 8)
    for gi in np.unique(prof.gap_index):
        fps = {prof.fingerprints[i] for i in np.flatnonzero(prof.gap_index == gi)}
        assert len(fps) == 1


def test_scan_rejects_wide_alpha():
    with pytest.raises(HypothesisViolated):
        C.scan_determinant(L.lattice_params(1.2, 0.5), W.characteristic(), 8)


# ---------------------------------------------------------------------------
# certified interval

def test_interval_characteristic_widest_gap():
    p = L.lattice_params(0.7, 1.0)
    prof = C.scan_determinant(p, W.characteristic(), 16)
    found = C.find_certified_interval(prof, 1e-8)
    assert found is not None
    assert found.delta == pytest.approx(1.0, abs=1e-12)
    # widest gap of the 0.1-spaced breakpoints in (0, 0.7) has width 0.1;
    # the run spans one gap
    edges = np.concatenate(([0.0], prof.breakpoints, [p.alpha]))
    assert np.searchsorted(edges, found.lo) == np.searchsorted(edges, found.hi)


def test_interval_not_found_for_zero_profile():
    p = L.lattice_params(0.7, 1.0)
    prof = C.scan_determinant(p, W.characteristic(), 16)
    zero = C.DeterminantProfile(prof.x_samples, np.zeros_like(prof.det_values),
                                prof.fingerprints, prof.gap_index,
                                prof.breakpoints)
    assert C.find_certified_interval(zero, 1e-8) is None


def test_interval_delta_stable_under_doubling(flagship):
    params, w, cert = flagship
    prof64 = C.scan_determinant(params, w, 64)
    in_interval = ((prof64.x_samples >= cert.interval_lo)
                   & (prof64.x_samples <= cert.interval_hi))
    refined = float(np.min(prof64.abs_det[in_interval]))
    assert refined == pytest.approx(cert.delta, rel=0.01)


# ---------------------------------------------------------------------------
# block decomposition

def test_decomposition_extent_zero_is_single_anchor(flagship):
    params, w, cert = flagship
    mid = 0.5 * (cert.interval_lo + cert.interval_hi)
    dec = C.build_block_decomposition(params, w, mid, 0,
                                      (cert.interval_lo, cert.interval_hi))
    assert len(dec.blocks) == 1
    assert dec.blocks[0].kind == "anchor"
    spec = L.anchor_block(params, w, mid)
    assert np.array_equal(dec.blocks[0].matrix, L.build_Mx(params, w, spec))


def test_decomposition_characteristic_irrational_unit_blocks():
    # char window with alpha = 1/sqrt(2): every block is 0/1 with unit
    # diagonal and sigma_min exactly 1; 7 blocks cover extent 16
    p = L.lattice_params(1.0 / SQRT2, 1.0)
    w = W.characteristic()
    cert = C.certify_frame(p, w, C.CertifyConfig(extent=16))
    assert cert.certified
    assert cert.delta == pytest.approx(1.0)
    assert cert.block_sigma_min == pytest.approx(1.0)
    assert cert.n_blocks == 7
    mid = 0.5 * (cert.interval_lo + cert.interval_hi)
    dec = C.build_block_decomposition(p, w, mid, 16,
                                      (cert.interval_lo, cert.interval_hi))
    for b in dec.blocks:
        assert np.all(np.isin(np.abs(b.matrix), [0.0, 1.0]))
        assert np.all(np.abs(np.diag(b.matrix)) == 1.0)


def test_decomposition_rows_ordered_and_disjoint(flagship):
    params, w, cert = flagship
    mid = 0.5 * (cert.interval_lo + cert.interval_hi)
    dec = C.build_block_decomposition(params, w, mid, 32,
                                      (cert.interval_lo, cert.interval_hi))
    prev_row = prev_col = -10 ** 9
    for b in dec.blocks:
        assert b.row_lo > prev_row
        assert b.col_lo > prev_col
        prev_row, prev_col = b.row_hi, b.col_hi
    used = [n for b in dec.blocks for n in range(b.row_lo, b.row_hi + 1)]
    assert len(used) == len(set(used))
    assert set(used).isdisjoint(dec.discarded_rows)
    assert set(used) | set(dec.discarded_rows) >= set(range(-32, 33))


def test_decomposition_requires_x_in_interval(flagship):
    params, w, cert = flagship
    with pytest.raises(ValueError):
        C.build_block_decomposition(params, w, cert.interval_hi + 0.05, 8,
                                    (cert.interval_lo, cert.interval_hi))


def test_composite_block_determinant_law(flagship):
    params, w, cert = flagship
    mid = 0.5 * (cert.interval_lo + cert.interval_hi)
    dec = C.build_block_decomposition(params, w, mid, 16,
                                      (cert.interval_lo, cert.interval_hi))
    composite = C.assemble_composite(params, w, dec)
    det = complex(np.linalg.det(composite))
    prod = 1.0 + 0j
    for b in dec.blocks:
        prod *= complex(np.linalg.det(b.matrix))
    assert abs(det - prod) <= 1e-10 * abs(prod)


# ---------------------------------------------------------------------------
# certify_frame

def test_certify_flagship_bump(flagship):
    _, _, cert = flagship
    assert cert.certified
    assert cert.delta > 1e-8
    assert cert.block_sigma_min > 0.0
    # frozen first-run values (samples_per_gap 32, extent 32)
    assert cert.delta == pytest.approx(0.08181551228643852, rel=1e-9)
    assert cert.block_sigma_min == pytest.approx(0.17686582769498943, rel=1e-9)
    assert cert.n_blocks == 29


def test_certify_refuses_wide_alpha():
    cert = C.certify_frame(L.lattice_params(1.2, 0.5), W.characteristic())
    assert not cert.certified
    assert cert.reason == "rational density class"
    assert cert.hypothesis_report["alpha_lt_support"] is False


def test_certify_refuses_rational_class():
    cert = C.certify_frame(L.lattice_params(1.0, 0.5), W.odd_bump())
    assert not cert.certified
    assert cert.reason == "rational density class"


def test_certify_refuses_vanishing_window():
    # odd bump vanishes at an interior point: 1/g unbounded on the core
    cert = C.certify_frame(L.lattice_params(1.0, 1.0 / SQRT2), W.odd_bump())
    assert not cert.certified
    assert cert.reason == "window vanishes on the shrunken core"


def test_certify_refuses_uncovered_anchor_row():
    # 1/beta = 3.54 > support length 2 and alpha > 1: for x in [1, alpha)
    # row 0 has no good column, so the anchor construction cannot start
    cert = C.certify_frame(L.lattice_params(1.2, 0.4 / SQRT2), W.bump())
    assert not cert.certified
    assert cert.hypothesis_report["anchor_row_covered"] is False
    assert cert.reason == "row 0 has no good pair on part of (0, alpha)"


def test_anchor_row_covered_despite_large_inv_beta():
    # support (0,1) with alpha < 1: m = 0 is good for every x in (0, alpha)
    # even though 1/beta = sqrt(2) exceeds the support length
    cert = C.certify_frame(L.lattice_params(0.8, 1.0 / SQRT2),
                           W.characteristic())
    assert cert.hypothesis_report["anchor_row_covered"] is True


def test_certify_monotone_in_extent(flagship):
    params, w, _ = flagship
    c16 = C.certify_frame(params, w, C.CertifyConfig(extent=16))
    c48 = C.certify_frame(params, w, C.CertifyConfig(extent=48))
    assert c16.certified and c48.certified
    assert c48.interval_lo == c16.interval_lo
    assert c48.delta == c16.delta


def test_hypothesis_report_keys(flagship):
    _, _, cert = flagship
    assert set(cert.hypothesis_report) == {
        "density_lt_one", "irrational_class", "alpha_lt_support",
        "anchor_row_covered", "sup_norm_finite", "inv_sup_finite"}
    assert all(cert.hypothesis_report.values())


# ---------------------------------------------------------------------------
# rational machinery

def test_forbidden_ratios_small_orders():
    p = L.lattice_params(0.7, 1.0)
    w = W.characteristic()
    assert C.forbidden_ratios(p, w, order=2) == [Fraction(1, 2)]
    assert C.forbidden_ratios(p, w, order=3) == [
        Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)]
    assert C.forbidden_ratios(p, w, order=4) == [
        Fraction(1, 4), Fraction(1, 3), Fraction(1, 2),
        Fraction(2, 3), Fraction(3, 4)]


def test_rational_analysis_requires_rational_class():
    with pytest.raises(HypothesisViolated):
        C.rational_analysis(L.lattice_params(1.0, 1.0 / SQRT2), W.bump())


def test_rational_analysis_separation_guard():
    p = L.lattice_params(0.6, 10.0 / 9.0)     # alpha*beta = 2/3, forbidden
    with pytest.raises(TooCloseToForbiddenRatio):
        C.rational_analysis(p, W.characteristic())


def test_rational_analysis_characteristic_zero_free():
    p = L.lattice_params(0.6, 10.0 / 9.0)
    cfg = C.CertifyConfig(delta_sep=0.0)
    rep = C.rational_analysis(p, W.characteristic(), samples=1024, config=cfg)
    assert (rep.p, rep.q) == (2, 3)
    assert rep.zero_count == 0
    assert rep.certified_subinterval is not None
    lo, hi = rep.certified_subinterval
    j_lo, j_hi = rep.interval
    assert hi - lo >= (j_hi - j_lo) / (rep.zero_count + 1) * 0.99
    assert rep.denominator_threshold == pytest.approx(
        1.0 / (0.6 * (j_hi - j_lo)), rel=1e-12)
    assert rep.frame_supported


def test_rational_analysis_odd_bump_not_supported():
    p = L.lattice_params(1.0, 0.5)
    cfg = C.CertifyConfig(delta_sep=0.0)
    rep = C.rational_analysis(p, W.odd_bump(), samples=1024, config=cfg)
    assert rep.zero_count >= 1
    assert not rep.frame_supported
