"""Good-pair combinatorics of the Ron-Shen matrix on a separable lattice.

A pair (n, m) is good at x when x - alpha*n + m/beta lands in the open
support interval of the window.  Everything here is arithmetic on those
inequalities: the margin epsilon, anchor blocks, separator rows, and the
finitely many combinatorial structures of the anchor block as x sweeps
(0, alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import HypothesisViolated
from .window import Window, evaluate

__all__ = [
    "RationalClass",
    "LatticeParams",
    "lattice_params",
    "classify_ratio",
    "GoodPair",
    "BlockSpec",
    "is_good",
    "epsilon",
    "size_bound",
    "index_bound",
    "anchor_block",
    "build_Mx",
    "separator_row",
    "structure_fingerprint",
    "structure_breakpoints",
]

RATIONAL_TOL = 1e-12
# With tol 1e-12, any cap much beyond 1e4 misclassifies quadratic irrationals:
# continued-fraction convergents of e.g. sqrt(2)/2 beat 1e-12 near q ~ 7e5.
DEFAULT_QMAX = 10 ** 4
BREAKPOINT_TOL = 1e-12


@dataclass(frozen=True)
class RationalClass:
    """Small-denominator rational classification of alpha*beta."""

    is_rational: bool
    p: Optional[int] = None
    q: Optional[int] = None

    def label(self) -> str:
        if self.is_rational:
            return f"rational({self.p}/{self.q})"
        return "irrational"


@dataclass(frozen=True)
class LatticeParams:
    alpha: float
    beta: float
    rational_class: RationalClass

    @property
    def density(self) -> float:
        return self.alpha * self.beta

    @property
    def inv_beta(self) -> float:
        return 1.0 / self.beta


def classify_ratio(value: float, q_max: int = DEFAULT_QMAX,
                   tol: float = RATIONAL_TOL) -> RationalClass:
    """Classify a float as a small-denominator rational or operationally irrational.

    Every float is rational; what the certification needs is the absence of a
    nearby fraction with denominator <= q_max, found by continued-fraction
    best approximation (Fraction.limit_denominator).
    """
    frac = Fraction(value).limit_denominator(q_max)
    if abs(value - float(frac)) < tol:
        return RationalClass(True, frac.numerator, frac.denominator)
    return RationalClass(False)


def lattice_params(alpha: float, beta: float, q_max: int = DEFAULT_QMAX,
                   tol: float = RATIONAL_TOL) -> LatticeParams:
    """Construct lattice parameters; rejects alpha*beta >= 1."""
    if alpha <= 0 or beta <= 0:
        raise ValueError("alpha and beta must be positive")
    if alpha * beta >= 1.0:
        raise HypothesisViolated(f"alpha*beta = {alpha * beta} >= 1")
    return LatticeParams(alpha, beta, classify_ratio(alpha * beta, q_max, tol))


@dataclass(frozen=True)
class GoodPair:
    n: int
    m: int


@dataclass(frozen=True)
class BlockSpec:
    """Square anchor submatrix: rows anchor_n..anchor_n+size-1, columns likewise."""

    anchor_n: int
    anchor_m: int
    size: int
    x_value: float


def is_good(params: LatticeParams, w: Window, x, n, m):
    """True iff x - alpha*n + m/beta lies in the open support interval."""
    arg = np.asarray(x) - params.alpha * np.asarray(n) + np.asarray(m) * params.inv_beta
    out = (arg > w.support_lo) & (arg < w.support_hi)
    if np.ndim(out) == 0:
        return bool(out)
    return out


def epsilon(params: LatticeParams, w: Window) -> float:
    """Margin (1/2) min(b-a-alpha, alpha, 1/beta-alpha)."""
    a, b = w.support_lo, w.support_hi
    if params.alpha >= b - a:
        raise HypothesisViolated(f"alpha = {params.alpha} >= support length {b - a}")
    if params.density >= 1.0:
        raise HypothesisViolated(f"alpha*beta = {params.density} >= 1")
    return 0.5 * min(b - a - params.alpha, params.alpha,
                     params.inv_beta - params.alpha)


def size_bound(params: LatticeParams, w: Window) -> int:
    """Uniform bound on the anchor-block size: ceil((b-a)/(1/beta-alpha)) + 1."""
    span = w.support_length
    step = params.inv_beta - params.alpha
    if step <= 0:
        raise HypothesisViolated("requires alpha*beta < 1")
    return int(math.ceil(span / step)) + 1


def index_bound(params: LatticeParams, w: Window) -> int:
    """Bound on |n|, |m| for pairs that can touch the anchor structure on (0, alpha).

    Rows of the anchor block sit in [0, size_bound]; a good pair there needs
    m/beta within alpha*(n+1) + |a| + |b| of the origin.
    """
    nb = size_bound(params, w) + 2
    abs_edge = max(abs(w.support_lo), abs(w.support_hi))
    mb = int(math.ceil(params.beta * (abs_edge + params.alpha * (nb + 1)))) + 2
    return max(nb, mb)


def _first_good_m(params: LatticeParams, w: Window, x: float, n: int) -> int:
    """Minimal m with (n, m) good; raises if the row has no good pair."""
    a, b = w.support_lo, w.support_hi
    base = x - params.alpha * n
    # smallest integer m with base + m/beta > a
    m = math.floor(params.beta * (a - base)) + 1
    while base + m * params.inv_beta <= a:
        m += 1
    if base + m * params.inv_beta >= b:
        raise HypothesisViolated(f"row {n} has no good pair at x={x}")
    return m


def anchor_block(params: LatticeParams, w: Window, x: float) -> BlockSpec:
    """Anchor block at row 0: first good column m and maximal diagonal run.

    size-1 is the largest l >= 0 with x + m/beta + l*(1/beta-alpha) < b.
    """
    b = w.support_hi
    m = _first_good_m(params, w, x, 0)
    step = params.inv_beta - params.alpha
    arg0 = x + m * params.inv_beta
    l = math.floor((b - arg0) / step)
    while arg0 + l * step >= b:
        l -= 1
    while arg0 + (l + 1) * step < b:
        l += 1
    if l < 0:
        raise HypothesisViolated("anchor argument left the support (inconsistent state)")
    return BlockSpec(0, m, l + 1, x)


def build_Mx(params: LatticeParams, w: Window, spec: BlockSpec) -> np.ndarray:
    """size x size matrix with entry (i, j) = g(x - alpha(n0+i) + (m0+j)/beta).

    Non-good entries are exactly 0 because the window vanishes identically
    outside its open support.
    """
    idx = np.arange(spec.size)
    args = (spec.x_value
            - params.alpha * (spec.anchor_n + idx)[:, None]
            + (spec.anchor_m + idx)[None, :] * params.inv_beta)
    return evaluate(w, args)


def separator_row(params: LatticeParams, w: Window, x: float, m: int) -> tuple[int, float]:
    """Row n whose last good column is m, with argument in [a+eps, b-eps].

    Takes the minimal good n for column m and shifts down by one row when the
    argument is too close to b.
    """
    a, b = w.support_lo, w.support_hi
    eps = epsilon(params, w)
    base = x + m * params.inv_beta
    # smallest integer n with base - alpha*n < b
    n = math.floor((base - b) / params.alpha) + 1
    while base - params.alpha * n >= b:
        n += 1
    arg = base - params.alpha * n
    if arg > b - eps:
        n += 1
        arg = base - params.alpha * n
    return n, arg


def structure_fingerprint(params: LatticeParams, w: Window, x: float):
    """(size, row-major good-pair mask) of the anchor block at x."""
    spec = anchor_block(params, w, x)
    idx = np.arange(spec.size)
    mask = is_good(params, w, x, (spec.anchor_n + idx)[:, None],
                   (spec.anchor_m + idx)[None, :])
    return spec.size, tuple(bool(v) for v in mask.ravel())


def structure_breakpoints(params: LatticeParams, w: Window,
                          m_bound: Optional[int] = None) -> np.ndarray:
    """All x in (0, alpha) where some relevant pair's argument crosses a or b.

    Candidates are x = c + alpha*n - m/beta for c in {a, b}, rows n within
    [-2, size_bound+2] (the rows that can intersect the anchor structure),
    and the finitely many m putting x inside (0, alpha).  The list is
    invariant under enlarging the m bound because m is pinned by the x-range.
    """
    a, b = w.support_lo, w.support_hi
    alpha, beta = params.alpha, params.beta
    mb = index_bound(params, w) if m_bound is None else m_bound
    xs = []
    for n in range(-2, size_bound(params, w) + 3):
        for c in (a, b):
            base = c + alpha * n
            # m with 0 < base - m/beta < alpha
            m_lo = int(math.floor(beta * (base - alpha)))
            m_hi = int(math.ceil(beta * base)) + 1
            for m in range(m_lo, m_hi + 1):
                if abs(m) > mb:
                    continue
                xval = base - m * params.inv_beta
                if 0.0 < xval < alpha:
                    xs.append(xval)
    xs.sort()
    out = []
    for xval in xs:
        if not out or xval - out[-1] > BREAKPOINT_TOL:
            out.append(xval)
    return np.array(out)
