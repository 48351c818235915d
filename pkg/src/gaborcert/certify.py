"""Determinant scans, certified intervals, and block decompositions.

The positive verdict rests on three computable facts: an interval I of x
values where |det M_x| stays above a floor delta, a block decomposition of
the row-reduced Ron-Shen matrix whose diagonal blocks all have positive
smallest singular value, and the hypothesis checklist (density, support
length, irrationality class, boundedness of g and 1/g on the core).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import HopNotFound, HypothesisViolated, TooCloseToForbiddenRatio
from .lattice import (LatticeParams, anchor_block, build_Mx, epsilon, is_good,
                      separator_row, size_bound, structure_breakpoints,
                      structure_fingerprint)
from .linalg import svdvals_accurate
from .window import Window, evaluate, inv_sup_on_core, sup_norm

__all__ = [
    "CertifyConfig",
    "DeterminantProfile",
    "CertifiedInterval",
    "DecompBlock",
    "BlockDecomposition",
    "FrameCertificate",
    "RationalReport",
    "scan_determinant",
    "find_certified_interval",
    "build_block_decomposition",
    "assemble_composite",
    "certify_frame",
    "forbidden_ratios",
    "rational_analysis",
]


@dataclass(frozen=True)
class CertifyConfig:
    samples_per_gap: int = 32
    delta_floor: float = 1e-8
    extent: int = 32
    hop_bound: int = 10_000
    zero_tol: float = 1e-10
    delta_sep: float = 1e-3       # <= 0 disables the forbidden-ratio separation check
    sup_grid_n: int = 4096
    period_oversample: int = 8


@dataclass(frozen=True, eq=False)
class DeterminantProfile:
    """Sampled map x -> det(M_x) over the gaps between structure breakpoints."""

    x_samples: np.ndarray
    det_values: np.ndarray
    fingerprints: list
    gap_index: np.ndarray
    breakpoints: np.ndarray

    @property
    def abs_det(self) -> np.ndarray:
        return np.abs(self.det_values)


@dataclass(frozen=True)
class CertifiedInterval:
    lo: float
    hi: float
    delta: float


@dataclass(frozen=True, eq=False)
class DecompBlock:
    kind: str                     # "anchor" or "separator"
    row_lo: int
    col_lo: int
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def row_hi(self) -> int:
        return self.row_lo + self.size - 1

    @property
    def col_hi(self) -> int:
        return self.col_lo + self.size - 1


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    x: float
    extent: int
    blocks: list              # DecompBlock, ascending in rows and columns
    discarded_rows: list

    @property
    def matrices(self) -> list:
        return [b.matrix for b in self.blocks]

    @property
    def sigma_min(self) -> float:
        return min(float(svdvals_accurate(b.matrix)[-1]) for b in self.blocks)


@dataclass(frozen=True)
class FrameCertificate:
    verdict: str                  # "certified" or "not_certified"
    reason: Optional[str]
    hypothesis_report: dict
    interval_lo: Optional[float] = None
    interval_hi: Optional[float] = None
    delta: Optional[float] = None
    block_sigma_min: Optional[float] = None
    extent: int = 0
    n_blocks: Optional[int] = None

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"


@dataclass(frozen=True, eq=False)
class RationalReport:
    p: int
    q: int
    forbidden: list
    zero_count: int
    certified_subinterval: Optional[tuple]
    denominator_threshold: float
    interval: tuple
    min_abs_det_period: float
    frame_supported: bool


def _chebyshev_nodes(lo: float, hi: float, k: int) -> np.ndarray:
    # nodes pulled inward so samples stay a gap/1000 margin away from breakpoints
    margin = (hi - lo) / 1000.0
    a, b = lo + margin, hi - margin
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    j = np.arange(1, k + 1)
    return np.sort(mid + half * np.cos((2 * j - 1) * np.pi / (2 * k)))


def scan_determinant(params: LatticeParams, w: Window,
                     samples_per_gap: int = 32) -> DeterminantProfile:
    """Evaluate det(M_x) at Chebyshev nodes of every breakpoint gap in (0, alpha)."""
    if params.alpha >= w.support_length:
        raise HypothesisViolated("alpha must be < support length")
    bps = structure_breakpoints(params, w)
    edges = np.concatenate(([0.0], bps, [params.alpha]))
    xs, dets, fps, gaps = [], [], [], []
    for gi in range(len(edges) - 1):
        lo, hi = edges[gi], edges[gi + 1]
        if hi - lo <= 0:
            continue
        for x in _chebyshev_nodes(lo, hi, samples_per_gap):
            spec = anchor_block(params, w, x)
            M = build_Mx(params, w, spec)
            xs.append(x)
            dets.append(complex(np.linalg.det(M)))
            fps.append(structure_fingerprint(params, w, x))
            gaps.append(gi)
    return DeterminantProfile(np.array(xs), np.array(dets, dtype=complex),
                              fps, np.array(gaps), bps)


def find_certified_interval(profile: DeterminantProfile,
                            delta_floor: float) -> Optional[CertifiedInterval]:
    """Widest run of >= 3 consecutive samples in one gap with |det| >= delta_floor."""
    best = None
    absdet = profile.abs_det
    n = len(absdet)
    i = 0
    while i < n:
        if absdet[i] < delta_floor:
            i += 1
            continue
        j = i
        while (j + 1 < n and absdet[j + 1] >= delta_floor
               and profile.gap_index[j + 1] == profile.gap_index[i]):
            j += 1
        if j - i + 1 >= 3:
            lo, hi = float(profile.x_samples[i]), float(profile.x_samples[j])
            if best is None or hi - lo > best.hi - best.lo:
                best = CertifiedInterval(lo, hi, float(np.min(absdet[i:j + 1])))
        i = j + 1
    return best


def _landing_ms(params: LatticeParams, base: float, lo: float, hi: float):
    """Integers m with lo < base + m/beta < hi."""
    m_lo = math.floor(params.beta * (lo - base)) + 1
    m_hi = math.ceil(params.beta * (hi - base)) - 1
    return [m for m in range(m_lo, m_hi + 1) if lo < base + m * params.inv_beta < hi]


def _separators(params: LatticeParams, w: Window, x: float, col_lo: int,
                col_hi: int, row_lo: int, row_hi: int):
    """Separator blocks for columns col_lo..col_hi, rows constrained to (row_lo, row_hi).

    Returns None when the rows collide with the bounding rows or each other;
    the caller then rejects the hop candidate.
    """
    seps = []
    prev_n = row_lo
    for m in range(col_lo, col_hi + 1):
        n, arg = separator_row(params, w, x, m)
        if not (prev_n < n < row_hi):
            return None
        entry = np.array([[evaluate(w, arg)]], dtype=complex)
        seps.append(DecompBlock("separator", n, m, entry))
        prev_n = n
    return seps


def build_block_decomposition(params: LatticeParams, w: Window, x: float,
                              extent: int, interval: tuple,
                              hop_bound: int = 10_000) -> BlockDecomposition:
    """Replay the glueing argument: anchor blocks landing in the certified
    interval, joined by separator rows, covering rows [-extent, extent].

    Rows between consecutive blocks that are neither block rows nor separator
    rows are discarded (removing rows only weakens the lower bound, never the
    verdict's validity).
    """
    lo, hi = interval
    if not lo <= x <= hi:
        raise ValueError("x must lie in the certified interval")
    spec0 = anchor_block(params, w, x)
    blocks = [DecompBlock("anchor", 0, spec0.anchor_m, build_Mx(params, w, spec0))]

    # forward: next anchor strictly below and to the right
    last = blocks[-1]
    while last.row_hi < extent:
        placed = False
        for nt in range(last.row_hi + 1, last.row_hi + 1 + hop_bound):
            if nt > extent:
                break
            base = x - params.alpha * nt
            for mt in _landing_ms(params, base, lo, hi):
                xt = base + mt * params.inv_beta
                spec = anchor_block(params, w, xt)
                col0 = mt + spec.anchor_m
                if col0 <= last.col_hi:
                    continue
                seps = _separators(params, w, x, last.col_hi + 1, col0 - 1,
                                   last.row_hi, nt)
                if seps is None:
                    continue
                idx = np.arange(spec.size)
                mat = evaluate(w, x - params.alpha * (nt + idx)[:, None]
                               + (col0 + idx)[None, :] * params.inv_beta)
                blocks.extend(seps)
                blocks.append(DecompBlock("anchor", nt, col0, mat))
                placed = True
                break
            if placed:
                break
        else:
            raise HopNotFound("no forward landing in the interval within hop_bound")
        if not placed:
            break
        last = blocks[-1]

    # backward: previous anchor strictly above and to the left
    first = blocks[0]
    while first.row_lo > -extent:
        placed = False
        for nt in range(first.row_lo - 1, first.row_lo - 1 - hop_bound, -1):
            if nt < -extent:
                break
            base = x - params.alpha * nt
            for mt in _landing_ms(params, base, lo, hi):
                xt = base + mt * params.inv_beta
                spec = anchor_block(params, w, xt)
                col0 = mt + spec.anchor_m
                if nt + spec.size - 1 >= first.row_lo:
                    continue
                if col0 + spec.size - 1 >= first.col_lo:
                    continue
                seps = _separators(params, w, x, col0 + spec.size,
                                   first.col_lo - 1, nt + spec.size - 1,
                                   first.row_lo)
                if seps is None:
                    continue
                idx = np.arange(spec.size)
                mat = evaluate(w, x - params.alpha * (nt + idx)[:, None]
                               + (col0 + idx)[None, :] * params.inv_beta)
                blocks = [DecompBlock("anchor", nt, col0, mat)] + seps + blocks
                placed = True
                break
            if placed:
                break
        else:
            raise HopNotFound("no backward landing in the interval within hop_bound")
        if not placed:
            break
        first = blocks[0]

    used = set()
    for b in blocks:
        used.update(range(b.row_lo, b.row_hi + 1))
    discarded = [n for n in range(-extent, extent + 1) if n not in used]
    return BlockDecomposition(x, extent, blocks, discarded)


def assemble_composite(params: LatticeParams, w: Window,
                       decomp: BlockDecomposition) -> np.ndarray:
    """Square matrix over the decomposition's rows and contiguous column range.

    Block lower triangular by construction, so its determinant equals the
    product of the diagonal block determinants.
    """
    rows = []
    for b in decomp.blocks:
        rows.extend(range(b.row_lo, b.row_hi + 1))
    col_lo = decomp.blocks[0].col_lo
    col_hi = decomp.blocks[-1].col_hi
    cols = np.arange(col_lo, col_hi + 1)
    rows = np.array(rows)
    if len(rows) != len(cols):
        raise AssertionError("composite matrix is not square")
    args = (decomp.x - params.alpha * rows[:, None]
            + cols[None, :] * params.inv_beta)
    return evaluate(w, args)


def _anchor_row_covered(params: LatticeParams, w: Window,
                        tol: float = 1e-12) -> bool:
    """True iff row 0 has a good column for every x in (0, alpha).

    x is bad exactly when (x - a) mod (1/beta) falls in [b-a, 1/beta); the
    anchor construction needs the bad set to miss (0, alpha) entirely.
    """
    a, b = w.support_lo, w.support_hi
    if params.inv_beta <= w.support_length:
        return True
    k_lo = math.floor((0.0 - b) * params.beta) - 1
    k_hi = math.ceil((params.alpha - b) * params.beta) + 1
    for k in range(k_lo, k_hi + 1):
        lo = max(0.0, b + k * params.inv_beta)
        hi = min(params.alpha, a + (k + 1) * params.inv_beta)
        if hi - lo > tol:
            return False
    return True


def _hypothesis_report(params: LatticeParams, w: Window,
                       config: CertifyConfig) -> dict:
    report = {
        "density_lt_one": params.density < 1.0,
        "irrational_class": not params.rational_class.is_rational,
        "alpha_lt_support": params.alpha < w.support_length,
        "anchor_row_covered": _anchor_row_covered(params, w),
        "sup_norm_finite": math.isfinite(sup_norm(w, config.sup_grid_n)),
    }
    if report["density_lt_one"] and report["alpha_lt_support"]:
        eps = epsilon(params, w)
        report["inv_sup_finite"] = math.isfinite(
            inv_sup_on_core(w, eps, config.sup_grid_n))
    else:
        report["inv_sup_finite"] = False
    return report


_REASONS = {
    "density_lt_one": "density alpha*beta >= 1",
    "irrational_class": "rational density class",
    "alpha_lt_support": "support too short",
    "anchor_row_covered": "row 0 has no good pair on part of (0, alpha)",
    "sup_norm_finite": "window unbounded",
    "inv_sup_finite": "window vanishes on the shrunken core",
}


def certify_frame(params: LatticeParams, w: Window,
                  config: CertifyConfig = CertifyConfig()) -> FrameCertificate:
    """Full pipeline: hypotheses, determinant scan, interval, block bounds."""
    report = _hypothesis_report(params, w, config)
    for key, ok in report.items():
        if not ok:
            return FrameCertificate("not_certified", _REASONS[key], report,
                                    extent=config.extent)
    profile = scan_determinant(params, w, config.samples_per_gap)
    found = find_certified_interval(profile, config.delta_floor)
    if found is None:
        return FrameCertificate("not_certified", "no determinant floor found",
                                report, extent=config.extent)
    mid = 0.5 * (found.lo + found.hi)
    try:
        decomp = build_block_decomposition(params, w, mid, config.extent,
                                           (found.lo, found.hi),
                                           config.hop_bound)
    except HopNotFound as exc:
        return FrameCertificate("not_certified", str(exc), report,
                                interval_lo=found.lo, interval_hi=found.hi,
                                delta=found.delta, extent=config.extent)
    sigma = decomp.sigma_min
    verdict = "certified" if sigma > 0.0 else "not_certified"
    reason = None if sigma > 0.0 else "singular block in the decomposition"
    return FrameCertificate(verdict, reason, report,
                            interval_lo=found.lo, interval_hi=found.hi,
                            delta=found.delta, block_sigma_min=sigma,
                            extent=config.extent, n_blocks=len(decomp.blocks))


def forbidden_ratios(params: LatticeParams, w: Window,
                     order: Optional[int] = None) -> list:
    """Farey fractions m/n in (0, 1) with n up to the anchor-block size bound.

    These are the densities at which distinct matrix arguments collide."""
    if order is None:
        order = size_bound(params, w)
    out = {Fraction(m, n) for n in range(2, order + 1)
           for m in range(1, n) if math.gcd(m, n) == 1}
    return sorted(out)


def rational_analysis(params: LatticeParams, w: Window, samples: int = 4096,
                      config: CertifyConfig = CertifyConfig()) -> RationalReport:
    """Zero-count and certified-subinterval analysis at rational density p/q."""
    rc = params.rational_class
    if not rc.is_rational:
        raise HypothesisViolated("rational_analysis requires a rational density class")
    ratios = forbidden_ratios(params, w)
    if config.delta_sep > 0:
        sep = min(abs(params.density - float(r)) for r in ratios)
        if sep < config.delta_sep:
            raise TooCloseToForbiddenRatio(
                f"alpha*beta within {sep:.3g} of a forbidden ratio")

    bps = structure_breakpoints(params, w)
    edges = np.concatenate(([0.0], bps, [params.alpha]))
    widths = np.diff(edges)
    gi = int(np.argmax(widths))
    j_lo, j_hi = float(edges[gi]), float(edges[gi + 1])
    margin = (j_hi - j_lo) / 1000.0
    xs = np.linspace(j_lo + margin, j_hi - margin, samples)
    absdet = np.array([abs(np.linalg.det(build_Mx(params, w, anchor_block(params, w, x))))
                       for x in xs])

    below = absdet < config.zero_tol
    zero_count = int(np.count_nonzero(np.diff(below.astype(int)) == 1)
                     + (1 if below[0] else 0))
    sub = None
    best_len = -1
    i = 0
    while i < samples:
        if below[i]:
            i += 1
            continue
        j = i
        while j + 1 < samples and not below[j + 1]:
            j += 1
        if j - i > best_len:
            best_len = j - i
            sub = (float(xs[i]), float(xs[j]))
        i = j + 1

    threshold = (zero_count + 1) / (params.alpha * (j_hi - j_lo))

    step = params.alpha / (rc.q * config.period_oversample)
    grid = np.arange(0.5 * step, params.alpha, step)
    # nudge off breakpoints; the determinant map is only defined between them
    for bp in edges:
        close = np.abs(grid - bp) < 1e-9
        grid[close] += 1e-9
    period_min = min(abs(np.linalg.det(build_Mx(params, w, anchor_block(params, w, x))))
                     for x in grid)
    # a zero inside J already rules out a uniform determinant floor, no matter
    # how coarsely the period grid happens to straddle it
    supported = period_min >= config.delta_floor and zero_count == 0
    return RationalReport(rc.p, rc.q, ratios, zero_count, sub, threshold,
                          (j_lo, j_hi), float(period_min), bool(supported))
