"""Tridiagonal system storage and direct solvers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LinearSolveError

# A Thomas pivot below this fraction of its row scale triggers the dense
# partial-pivoting fallback.
_PIVOT_TOL = 1e-14


@dataclass
class TridiagonalSystem:
    """Tridiagonal matrix (sub/diag/super) together with a right-hand side."""

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        self.sub = np.asarray(self.sub, dtype=float)
        self.diag = np.asarray(self.diag, dtype=float)
        self.sup = np.asarray(self.sup, dtype=float)
        self.rhs = np.asarray(self.rhs, dtype=float)
        n = self.diag.size
        if n < 1:
            raise ValueError("system must have at least one unknown")
        if self.rhs.size != n or self.sub.size != max(n - 1, 0) or self.sup.size != max(n - 1, 0):
            raise ValueError(
                f"inconsistent lengths: diag={n}, sub={self.sub.size}, "
                f"sup={self.sup.size}, rhs={self.rhs.size}"
            )

    @property
    def size(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.size > 1:
            m += np.diag(self.sub, -1) + np.diag(self.sup, 1)
        return m


def tridiagonal_matvec(sub: np.ndarray, diag: np.ndarray, sup: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = diag * v
    if diag.size > 1:
        out[:-1] += sup * v[1:]
        out[1:] += sub * v[:-1]
    return out


def _thomas(sub, diag, sup, rhs):
    """Forward elimination / back substitution; None when a pivot is unsafe.

    Pivots are measured against the overall matrix magnitude: a row whose
    entries all cancelled to round-off must not be treated as regular.
    """
    n = diag.size
    d = diag.copy()
    r = rhs.copy()
    scale = np.abs(diag).max()
    if n > 1:
        scale = max(scale, np.abs(sub).max(), np.abs(sup).max())
    for i in range(n):
        if abs(d[i]) <= _PIVOT_TOL * scale:
            return None
        if i < n - 1:
            w = sub[i] / d[i]
            d[i + 1] -= w * sup[i]
            r[i + 1] -= w * r[i]
    x = np.empty(n)
    x[-1] = r[-1] / d[-1]
    for i in range(n - 2, -1, -1):
        x[i] = (r[i] - sup[i] * x[i + 1]) / d[i]
    return x


def solve_tridiagonal(system: TridiagonalSystem) -> np.ndarray:
    """Solve the system by the Thomas algorithm.

    Pivots that vanish relative to their row scale trigger a dense
    partial-pivoting solve; a singular matrix raises LinearSolveError.
    """
    x = _thomas(system.sub, system.diag, system.sup, system.rhs)
    if x is None:
        dense = system.dense()
        # backward-stable solvers return innocuous residuals even for
        # numerically singular matrices, so gate on the condition number
        condition = np.linalg.cond(dense)
        if not np.isfinite(condition) or condition > 1 / _PIVOT_TOL:
            raise LinearSolveError("tridiagonal system is singular or near-singular")
        try:
            x = np.linalg.solve(dense, system.rhs)
        except np.linalg.LinAlgError as exc:
            raise LinearSolveError(f"singular tridiagonal system: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise LinearSolveError("linear solve produced non-finite values")
    return x


def symmetric_tridiagonal_is_spd(diag: np.ndarray, off: np.ndarray) -> bool:
    """Positive-definiteness of a symmetric tridiagonal via LDL^T pivots."""
    d = float(diag[0])
    if d <= 0:
        return False
    for i in range(1, diag.size):
        d = float(diag[i]) - off[i - 1] ** 2 / d
        if d <= 0:
            return False
    return True
