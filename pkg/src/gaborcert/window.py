"""Compactly supported window functions and their diagnostics.

A window is a complex-valued function on the real line that vanishes
identically outside an open interval (support_lo, support_hi).  The closed
forms shipped here are the standard smooth bumps used throughout the
certification pipeline; arbitrary windows enter as sampled grids.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np
from scipy.optimize import least_squares

from .errors import DegenerateFit, EmptyCore

__all__ = [
    "Window",
    "bump",
    "gevrey",
    "characteristic",
    "odd_bump",
    "poly_bump",
    "sampled",
    "evaluate",
    "sup_norm",
    "inv_sup_on_core",
    "fourier_transform",
    "fourier_decay_fit",
    "sampled_to_csv",
    "sampled_from_csv",
]

#: Sentinel returned by inv_sup_on_core when the core contains a zero.
INF = math.inf

FOURIER_QUAD_NODES = 2 ** 14


@dataclass(frozen=True, eq=False)
class Window:
    """Immutable description of a compactly supported window.

    ``kind`` selects the evaluation rule; kind-specific payload lives in
    ``order`` (gevrey), ``grid_x``/``grid_vals`` (sampled) or ``source``
    (provenance of synthesized windows, e.g. a Brownian path).
    """

    support_lo: float
    support_hi: float
    kind: str
    order: Optional[int] = None
    grid_x: Optional[np.ndarray] = None
    grid_vals: Optional[np.ndarray] = None
    sup_norm_hint: Optional[float] = None
    source: Any = field(default=None, repr=False)

    def __post_init__(self):
        if not self.support_lo < self.support_hi:
            raise ValueError("support_lo must be < support_hi")

    def __call__(self, x):
        return evaluate(self, x)

    @property
    def support_length(self) -> float:
        return self.support_hi - self.support_lo

    def descriptor(self) -> dict:
        d = {"kind": self.kind, "support_lo": self.support_lo,
             "support_hi": self.support_hi}
        if self.order is not None:
            d["order"] = self.order
        if self.grid_x is not None:
            d["grid_n"] = int(len(self.grid_x))
        return d


def bump() -> Window:
    """exp(1/(x^4-1)) on (-1, 1); peak value exp(-1) at the origin."""
    return Window(-1.0, 1.0, "bump", sup_norm_hint=math.exp(-1.0))


def gevrey(order: int) -> Window:
    """exp(-(1-x^4)^(-order)) on (-1, 1), with stretched-exponential Fourier decay."""
    if order < 1:
        raise ValueError("order must be a positive integer")
    return Window(-1.0, 1.0, "gevrey", order=order, sup_norm_hint=math.exp(-1.0))


def characteristic(lo: float = 0.0, hi: float = 1.0) -> Window:
    """Indicator of the open interval (lo, hi)."""
    return Window(lo, hi, "characteristic", sup_norm_hint=1.0)


def odd_bump() -> Window:
    """x * exp(1/(x^2-1)) on (-1, 1); odd, vanishes at the origin."""
    return Window(-1.0, 1.0, "odd_bump")


def poly_bump(lo: float = 0.0, hi: float = 1.0) -> Window:
    """(x-lo)(hi-x) on (lo, hi)."""
    w2 = (hi - lo) / 2.0
    return Window(lo, hi, "poly_bump", sup_norm_hint=w2 * w2)


def sampled(grid_x, grid_vals, support_lo: float | None = None,
            support_hi: float | None = None, source: Any = None,
            kind: str = "sampled") -> Window:
    """Window given by linear interpolation between strictly increasing nodes.

    Evaluation is 0 outside the grid hull and outside the open support.
    """
    xs = np.asarray(grid_x, dtype=float)
    vals = np.asarray(grid_vals, dtype=complex)
    if xs.ndim != 1 or xs.shape != vals.shape:
        raise ValueError("grid_x and grid_vals must be 1-d arrays of equal length")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("grid_x must be strictly increasing")
    lo = float(xs[0]) if support_lo is None else float(support_lo)
    hi = float(xs[-1]) if support_hi is None else float(support_hi)
    return Window(lo, hi, kind, grid_x=xs, grid_vals=vals, source=source)


def _eval_inside(w: Window, x: np.ndarray) -> np.ndarray:
    """Closed-form value on points guaranteed inside the open support."""
    if w.kind == "bump":
        return np.exp(1.0 / (x ** 4 - 1.0)).astype(complex)
    if w.kind == "gevrey":
        return np.exp(-((1.0 - x ** 4) ** (-float(w.order)))).astype(complex)
    if w.kind == "characteristic":
        return np.ones_like(x, dtype=complex)
    if w.kind == "odd_bump":
        return (x * np.exp(1.0 / (x ** 2 - 1.0))).astype(complex)
    if w.kind == "poly_bump":
        return ((x - w.support_lo) * (w.support_hi - x)).astype(complex)
    if w.grid_x is not None:
        inside_hull = (x >= w.grid_x[0]) & (x <= w.grid_x[-1])
        re = np.interp(x, w.grid_x, w.grid_vals.real)
        im = np.interp(x, w.grid_x, w.grid_vals.imag)
        out = re + 1j * im
        out[~inside_hull] = 0.0
        return out
    raise ValueError(f"unknown window kind {w.kind!r}")


def evaluate(w: Window, x):
    """Evaluate the window; exactly 0 outside the open support interval."""
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.zeros(arr.shape, dtype=complex)
    inside = (arr > w.support_lo) & (arr < w.support_hi)
    if np.any(inside):
        out[inside] = _eval_inside(w, arr[inside])
    if scalar:
        return complex(out[0])
    return out


def sup_norm(w: Window, grid_n: int = 4096) -> float:
    """sup |g|, from the cached hint when available, else a dense grid."""
    if w.sup_norm_hint is not None:
        return w.sup_norm_hint
    xs = np.linspace(w.support_lo, w.support_hi, grid_n)
    return float(np.max(np.abs(evaluate(w, xs))))


def inv_sup_on_core(w: Window, eps: float, grid_n: int = 4096) -> float:
    """max of 1/|g| over a uniform grid on [lo+eps, hi-eps].

    Returns math.inf if any sampled value vanishes.  Raises EmptyCore when
    the shrunken interval is empty.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    lo, hi = w.support_lo + eps, w.support_hi - eps
    if lo >= hi:
        raise EmptyCore(f"[{lo}, {hi}] is empty")
    xs = np.linspace(lo, hi, grid_n)
    mags = np.abs(evaluate(w, xs))
    if np.any(mags == 0.0):
        return INF
    # zoom on the argmin to catch interior zeros that fall between grid
    # nodes (e.g. an odd window whose zero is missed by an even grid count);
    # a zero makes the local minimum shrink with every zoom, while a positive
    # minimum (however tiny) stabilizes after a round or two
    # near a zero the bracket's min stays far below its max no matter how
    # much we zoom; around a positive minimum the ratio climbs to 1
    zlo, zhi = xs[max(np.argmin(mags) - 1, 0)], xs[min(np.argmin(mags) + 1,
                                                      grid_n - 1)]
    for _ in range(60):
        zs = np.linspace(zlo, zhi, 33)
        zmags = np.abs(evaluate(w, zs))
        if np.min(zmags) == 0.0:
            return INF
        if np.min(zmags) >= 0.5 * np.max(zmags):   # positive minimum
            break
        i = int(np.argmin(zmags))
        zlo, zhi = zs[max(i - 1, 0)], zs[min(i + 1, 32)]
    else:
        return INF                        # never flattened out: an interior zero
    return float(np.max(1.0 / mags))


def fourier_transform(w: Window, xi, quad_nodes: int = FOURIER_QUAD_NODES):
    """ghat(xi) = integral of g(x) exp(-2 pi i xi x) dx by composite trapezoid.

    The integrand is smooth and compactly supported, so trapezoid on the
    support converges rapidly.
    """
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    xs = np.linspace(w.support_lo, w.support_hi, quad_nodes)
    gx = evaluate(w, xs)
    phases = np.exp(-2j * np.pi * np.outer(xi_arr, xs))
    vals = np.trapezoid(phases * gx[None, :], xs, axis=1)
    if np.ndim(xi) == 0:
        return complex(vals[0])
    return vals


def fourier_decay_fit(w: Window, xi_max: float, n_xi: int,
                      quad_nodes: int = FOURIER_QUAD_NODES) -> tuple[float, float]:
    """Fit |ghat(xi)| ~ c * exp(-xi^s) on [1, xi_max]; returns (s_hat, c_hat).

    Only frequencies with |ghat| > 1e-12 enter the fit; fewer than 8 usable
    points raises DegenerateFit.
    """
    xis = np.linspace(1.0, xi_max, n_xi)
    mags = np.abs(fourier_transform(w, xis, quad_nodes=quad_nodes))
    usable = mags > 1e-12
    if np.count_nonzero(usable) < 8:
        raise DegenerateFit("fewer than 8 usable frequencies")
    xi_u, log_mag = xis[usable], np.log(mags[usable])

    def residual(p):
        log_c, s = p
        return (log_c - xi_u ** s) - log_mag

    fit = least_squares(residual, x0=[0.0, 0.5],
                        bounds=([-np.inf, 1e-6], [np.inf, 2.0]))
    log_c, s_hat = fit.x
    return float(s_hat), float(math.exp(log_c))


def sampled_to_csv(w: Window, path) -> None:
    """Write a sampled window as CSV rows `x,re,im` with strictly increasing x."""
    if w.grid_x is None:
        raise ValueError("only sampled windows serialize to CSV")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "re", "im"])
        for x, v in zip(w.grid_x, w.grid_vals):
            writer.writerow([format(x, ".17g"), format(v.real, ".17g"),
                             format(v.imag, ".17g")])


def sampled_from_csv(path) -> Window:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header] != ["x", "re", "im"]:
            raise ValueError(f"expected header x,re,im; got {header}")
        xs, vals = [], []
        for row in reader:
            xs.append(float(row[0]))
            vals.append(complex(float(row[1]), float(row[2])))
    return sampled(np.array(xs), np.array(vals))
