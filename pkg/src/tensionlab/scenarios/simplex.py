"""Dense two-phase simplex for small equality-form linear programs.

Solves ``min c.x  s.t.  A x = b, x >= 0`` on a full tableau with Bland's
rule (lowest-index entering column, lowest-index leaving basic variable
among ratio ties), which rules out cycling.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from ..errors import LPError

PIVOT_TOL = 1e-12
FEAS_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LPResult:
    status: Literal["optimal", "infeasible", "unbounded"]
    x: Optional[np.ndarray]
    objective: Optional[float]
    iterations: int


def _pivot(t: np.ndarray, basis: list[int], row: int, col: int) -> None:
    t[row] /= t[row, col]
    for r in range(t.shape[0]):
        if r != row and t[r, col] != 0.0:
            t[r] -= t[r, col] * t[row]
    basis[row] = col


def _run(t: np.ndarray, basis: list[int], allowed: int, max_iter: int) -> tuple[str, int]:
    """Optimize the tableau in place; the objective row is the last row.

    Only columns ``< allowed`` may enter the basis.
    """
    m = t.shape[0] - 1
    for it in range(max_iter):
        reduced = t[-1, :allowed]
        candidates = np.flatnonzero(reduced < -PIVOT_TOL)
        if candidates.size == 0:
            return "optimal", it
        col = int(candidates[0])
        column = t[:m, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return "unbounded", it
        ratios = t[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(t, basis, row, col)
    raise LPError(f"simplex exceeded {max_iter} iterations")


def linprog_eq(
    c: np.ndarray,
    a_eq: np.ndarray,
    b_eq: np.ndarray,
    feas_tol: float = FEAS_TOL,
    max_iter: Optional[int] = None,
) -> LPResult:
    c = np.asarray(c, dtype=float)
    a = np.array(a_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    m, n = a.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ValueError("inconsistent LP dimensions")
    if max_iter is None:
        max_iter = 50 * (m + n) + 100

    neg = b < 0
    a[neg] *= -1
    b[neg] *= -1

    # phase 1: artificials n..n+m-1, minimize their sum
    t = np.zeros((m + 1, n + m + 1))
    t[:m, :n] = a
    t[:m, n : n + m] = np.eye(m)
    t[:m, -1] = b
    t[-1, :n] = -a.sum(axis=0)
    t[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    status, it1 = _run(t, basis, n, max_iter)
    if status != "optimal":
        raise LPError("phase 1 reported an unbounded auxiliary problem")
    if -t[-1, -1] > feas_tol:
        return LPResult("infeasible", None, None, it1)

    # drive zero-valued artificials out of the basis; drop redundant rows
    keep_rows = []
    for r in range(m):
        if basis[r] >= n:
            cols = np.flatnonzero(np.abs(t[r, :n]) > 1e-9)
            if cols.size == 0:
                continue
            _pivot(t, basis, r, int(cols[0]))
        keep_rows.append(r)

    t2 = np.zeros((len(keep_rows) + 1, n + 1))
    t2[:-1, :n] = t[keep_rows, :n]
    t2[:-1, -1] = t[keep_rows, -1]
    basis2 = [basis[r] for r in keep_rows]
    t2[-1, :n] = c
    for r, j in enumerate(basis2):
        if t2[-1, j] != 0.0:
            t2[-1] -= t2[-1, j] * t2[r]
    status, it2 = _run(t2, basis2, n, max_iter)
    if status == "unbounded":
        return LPResult("unbounded", None, None, it1 + it2)

    x = np.zeros(n)
    for r, j in enumerate(basis2):
        x[j] = t2[r, -1]
    x = np.clip(x, 0.0, None)
    return LPResult("optimal", x, float(c @ x), it1 + it2)
