"""Dense two-phase simplex for the small LPs behind the one-sided fits.

Problems arrive as  min c.x  subject to  A x >= b  with x free, tall and
skinny (hundreds to ~1300 rows, at most a few dozen columns).  They are
solved through the dual

    max b.y   subject to   A^T y = c,  y >= 0,

whose tableau has one row per primal variable, so pivots stay cheap.  The
primal solution is read off the equality multipliers, which sit under the
artificial columns at optimality.  Dantzig pricing runs first and Bland's
rule takes over after a stall, which rules out cycling.
"""

from __future__ import annotations

import numpy as np

from .errors import SolverError

_PIVOT_TOL = 1e-10
_COST_TOL = 2e-12
_BLAND_AFTER = 2000
_MAX_ITER = 20000


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    T -= np.outer(colvals, T[row])
    basis[row] = col


def _run_simplex(T, basis, allowed, n_rows):
    """Maximize with reduced costs in the last row, in place.

    Residual reduced costs near roundoff scale can make degenerate pivots
    churn forever; after a long stretch without objective progress the
    current vertex is accepted (the callers repair or re-solve anyway).
    """
    stalled = 0
    best_obj = T[-1, -1]
    for it in range(_MAX_ITER):
        costs = T[-1, :-1]
        if it < _BLAND_AFTER:
            order = np.where(allowed, costs, -np.inf)
            col = int(np.argmax(order))
            if order[col] <= _COST_TOL:
                return
        else:
            cand = np.flatnonzero(allowed & (costs > _COST_TOL))
            if cand.size == 0:
                return
            col = int(cand[0])
        ratios = np.full(n_rows, np.inf)
        positive = T[:n_rows, col] > _PIVOT_TOL
        ratios[positive] = T[:n_rows, -1][positive] / T[:n_rows, col][positive]
        row = int(np.argmin(ratios))
        if not np.isfinite(ratios[row]):
            raise SolverError("dual unbounded: the primal program is infeasible")
        # tie break on the lowest basis index for determinism and anti-cycling
        best = ratios[row]
        ties = np.flatnonzero(np.abs(ratios - best) <= 1e-12 * (1.0 + abs(best)))
        if ties.size > 1:
            row = int(ties[np.argmin(np.asarray(basis)[ties])])
        _pivot(T, basis, row, col)
        if T[-1, -1] < best_obj - 1e-14 * (1.0 + abs(best_obj)):
            best_obj = T[-1, -1]
            stalled = 0
        else:
            stalled += 1
            if stalled > 4000:
                return
    raise SolverError(f"simplex did not converge within {_MAX_ITER} iterations")


def solve_inequality_lp(A, b, c):
    """min c.x subject to A x >= b with x free.

    Returns (x, value).  Raises SolverError when the problem is unbounded
    or the solver stalls; infeasibility cannot occur for the programs this
    package builds (a large constant is always feasible).
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if b.shape != (m,) or c.shape != (n,):
        raise ValueError("inconsistent LP dimensions")

    # dual equality form: rows = primal variables, columns = constraints
    D = A.T.copy()
    rhs = c.copy()
    flipped = rhs < 0
    D[flipped] *= -1.0
    rhs[flipped] *= -1.0

    total = m + n + 1
    T = np.zeros((n + 1, total))
    T[:n, :m] = D
    T[:n, m : m + n] = np.eye(n)
    T[:n, -1] = rhs
    basis = list(range(m, m + n))

    # phase 1: maximize minus the artificial sum
    T[-1, :] = 0.0
    T[-1, m : m + n] = -1.0
    for i in range(n):
        T[-1] += T[i]  # price out the artificial basis
    # the objective row carries reduced costs; its rhs entry is minus the value
    allowed = np.zeros(total - 1, dtype=bool)
    allowed[:m] = True
    _run_simplex(T, basis, allowed, n)
    if T[-1, -1] > 1e-7:
        raise SolverError(f"phase 1 ended infeasible (residual {T[-1, -1]:.3e})")

    # drive surviving artificials out of the basis where possible
    for i in range(n):
        if basis[i] >= m:
            pivots = np.flatnonzero(np.abs(T[i, :m]) > _PIVOT_TOL)
            if pivots.size:
                _pivot(T, basis, i, int(pivots[0]))

    # phase 2: maximize b.y; artificials stay priced out but never re-enter
    T[-1, :] = 0.0
    T[-1, :m] = b
    for i in range(n):
        col = basis[i]
        coef = T[-1, col]
        if coef != 0.0:
            T[-1] -= coef * T[i]
    _run_simplex(T, basis, allowed, n)

    # multipliers on the equalities = primal solution, read under artificials
    x = -T[-1, m : m + n].copy()
    x[flipped] *= -1.0
    value = -float(T[-1, -1])
    gap = abs(float(c @ x) - value)
    if gap > 1e-6 * (1.0 + abs(value)):
        raise SolverError(f"duality gap {gap:.3e} after termination")

    # the tableau accumulates roundoff over pivots; recompute the same
    # vertex from its tight constraints with one fresh linear solve
    tight = sorted(idx for idx in basis if idx < m)
    if len(tight) == n:
        try:
            refined = np.linalg.solve(A[tight], b[tight])
        except np.linalg.LinAlgError:
            refined = None
        if refined is not None and np.isfinite(refined).all():
            if abs(float(c @ refined) - value) <= 1e-6 * (1.0 + abs(value)):
                x = refined
                value = float(c @ x)
    return x, value
