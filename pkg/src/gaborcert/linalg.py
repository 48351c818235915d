"""Singular value helpers tuned for small matrices with tiny singular values."""

from __future__ import annotations

import numpy as np

__all__ = ["jacobi_svdvals", "svdvals_accurate"]

JACOBI_MAX_COLS = 64


def jacobi_svdvals(A, tol: float = 1e-13, max_sweeps: int = 60) -> np.ndarray:
    """Singular values by one-sided Jacobi rotations on the columns.

    More accurate than bidiagonalization for the smallest singular values of
    small dense matrices; cost is O(sweeps * n^2 * m).
    """
    U = np.array(A, dtype=complex)
    if U.ndim != 2:
        raise ValueError("expected a matrix")
    if U.shape[0] < U.shape[1]:
        U = U.conj().T
    n = U.shape[1]
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                up, uq = U[:, p], U[:, q]
                app = np.real(np.vdot(up, up))
                aqq = np.real(np.vdot(uq, uq))
                apq = np.vdot(up, uq)
                mag = abs(apq)
                if app == 0.0 or aqq == 0.0 or mag == 0.0:
                    continue
                rel = mag / np.sqrt(app * aqq)
                if rel <= tol:
                    continue
                off = max(off, rel)
                phase = apq / mag
                tau = (aqq - app) / (2.0 * mag)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                new_p = c * up - s * np.conj(phase) * uq
                new_q = s * phase * up + c * uq
                U[:, p], U[:, q] = new_p, new_q
        if off <= tol:
            break
    sv = np.linalg.norm(U, axis=0)
    return np.sort(sv)[::-1]


def svdvals_accurate(A) -> np.ndarray:
    """Jacobi for narrow matrices, LAPACK bidiagonalization otherwise."""
    A = np.asarray(A)
    if min(A.shape) == 0:
        return np.zeros(0)
    if min(A.shape) <= JACOBI_MAX_COLS:
        return jacobi_svdvals(A)
    return np.linalg.svd(A, compute_uv=False)
