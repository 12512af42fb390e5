"""Dense two-phase primal simplex.

Serves as the auditable in-house LP engine and as the oracle backend for
small problems; production branch-and-bound defaults to the HiGHS backend
in solver.py. Dantzig pricing with a Bland anti-cycling fallback once the
objective stalls.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .milp import GE, LE, MilpProblem

__all__ = ["LpResult", "solve_lp", "NumericalInstability"]

_FEAS_TOL = 1e-7
_PIVOT_TOL = 1e-9
_STALL_LIMIT = 200


class NumericalInstability(RuntimeError):
    """Simplex aborted on an ill-conditioned pivot sequence."""


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    objective: float = np.nan
    x: np.ndarray | None = None
    duals: np.ndarray | None = None  # one per constraint row
    iterations: int = 0


def solve_lp(p: MilpProblem, max_iter: int = 50000) -> LpResult:
    """Solve the LP relaxation of `p` (integrality dropped)."""
    c = p.objective()
    lb, ub = p.bounds()
    a, rhs, senses = p.dense()
    return _solve_arrays(c, a, rhs, senses, lb, ub, max_iter)


def _solve_arrays(c, a, rhs, senses, lb, ub, max_iter: int) -> LpResult:
    if np.any(~np.isfinite(lb)):
        raise ValueError("free / lower-unbounded variables are not supported")
    n0 = len(c)
    m0 = len(rhs)

    # shift out lower bounds, then append upper-bound rows
    a = a.copy().astype(float)
    rhs = rhs - a @ lb
    senses = list(senses)
    shift_const = float(c @ lb)
    rows = [a]
    ub_rows = []
    for j in range(n0):
        span = ub[j] - lb[j]
        if np.isfinite(span):
            r = np.zeros(n0)
            r[j] = 1.0
            ub_rows.append(r)
            rhs = np.append(rhs, span)
            senses.append(LE)
    if ub_rows:
        a = np.vstack([a] + [np.array(ub_rows)])
    m = len(senses)

    # normalize to nonnegative rhs
    flipped = np.zeros(m, dtype=bool)
    for i in range(m):
        if rhs[i] < 0:
            a[i] *= -1.0
            rhs[i] *= -1.0
            flipped[i] = True
            if senses[i] == LE:
                senses[i] = GE
            elif senses[i] == GE:
                senses[i] = LE

    # slack / surplus / artificial structure
    slack_cols = []
    art_cols = []
    cols = [a]
    extra = []
    for i in range(m):
        col = np.zeros(m)
        if senses[i] == LE:
            col[i] = 1.0
            extra.append(col)
            slack_cols.append((i, n0 + len(extra) - 1, 1.0))
        elif senses[i] == GE:
            col[i] = -1.0
            extra.append(col)
            slack_cols.append((i, n0 + len(extra) - 1, -1.0))
    n_slack = len(extra)
    basis = [-1] * m
    for i in range(m):
        # LE rows start with their slack basic; GE/EQ rows need artificials
        if senses[i] == LE:
            for r, jcol, sign in slack_cols:
                if r == i and sign > 0:
                    basis[i] = jcol
                    break
    for i in range(m):
        if basis[i] == -1:
            col = np.zeros(m)
            col[i] = 1.0
            extra.append(col)
            basis[i] = n0 + len(extra) - 1
            art_cols.append(basis[i])

    tableau_a = np.hstack([a, np.array(extra).T]) if extra else a
    n_total = tableau_a.shape[1]

    tab = np.zeros((m + 1, n_total + 1))
    tab[:m, :n_total] = tableau_a
    tab[:m, -1] = rhs

    art_mask = np.zeros(n_total, dtype=bool)
    for j in art_cols:
        art_mask[j] = True

    def run(cost_row: np.ndarray, start_iter: int) -> tuple[str, int]:
        # price out the basic variables
        tab[m, :n_total] = cost_row
        tab[m, -1] = 0.0
        for i in range(m):
            cb = cost_row[basis[i]]
            if cb != 0.0:
                tab[m, :] -= cb * tab[i, :]
        it = start_iter
        best_obj = tab[m, -1]
        stall = 0
        bland = False
        while it < max_iter:
            reduced = tab[m, :n_total]
            eligible = np.where(reduced < -_PIVOT_TOL)[0]
            if len(eligible) == 0:
                return "optimal", it
            if bland:
                j = int(eligible[0])
            else:
                j = int(eligible[np.argmin(reduced[eligible])])
            colv = tab[:m, j]
            pos = np.where(colv > _PIVOT_TOL)[0]
            if len(pos) == 0:
                return "unbounded", it
            ratios = tab[pos, -1] / colv[pos]
            k = pos[np.argmin(ratios)]
            if bland:
                # lowest basis index among ratio ties
                rmin = ratios.min()
                ties = pos[np.abs(ratios - rmin) <= 1e-12]
                k = ties[np.argmin([basis[i] for i in ties])]
            piv = tab[k, j]
            if abs(piv) < _PIVOT_TOL:
                raise NumericalInstability(f"pivot {piv:.3e} below tolerance at iter {it}")
            tab[k, :] /= piv
            for i in range(m + 1):
                if i != k and tab[i, j] != 0.0:
                    tab[i, :] -= tab[i, j] * tab[k, :]
            basis[k] = j
            it += 1
            obj = tab[m, -1]
            if obj < best_obj - 1e-12:
                best_obj = obj
                stall = 0
            else:
                stall += 1
                if stall > _STALL_LIMIT:
                    bland = True
        raise NumericalInstability(f"iteration limit {max_iter} reached")

    iters = 0
    if art_cols:
        phase1 = np.zeros(n_total)
        phase1[art_mask] = 1.0
        status, iters = run(phase1, 0)
        if status == "unbounded" or -tab[m, -1] > 1e2 * _FEAS_TOL * max(1.0, np.abs(rhs).max()):
            return LpResult(status="infeasible", iterations=iters)
        # drive any artificial still in the basis out (or zero its row)
        for i in range(m):
            if art_mask[basis[i]]:
                row = tab[i, :n_total]
                cand = np.where((~art_mask) & (np.abs(row) > _PIVOT_TOL))[0]
                if len(cand):
                    j = int(cand[0])
                    piv = tab[i, j]
                    tab[i, :] /= piv
                    for r in range(m + 1):
                        if r != i and tab[r, j] != 0.0:
                            tab[r, :] -= tab[r, j] * tab[i, :]
                    basis[i] = j
        tab[:, :n_total][:, art_mask] = 0.0

    phase2 = np.zeros(n_total)
    phase2[:n0] = c
    status, iters = run(phase2, iters)
    if status == "unbounded":
        return LpResult(status="unbounded", iterations=iters)

    x_shift = np.zeros(n_total)
    for i in range(m):
        x_shift[basis[i]] = tab[i, -1]
    x = x_shift[:n0] + lb
    obj = float(c @ x_shift[:n0]) + shift_const

    # duals from y = B^-T c_B on the original (normalized) rows
    duals = np.zeros(m0)
    try:
        bmat = tableau_a[:, basis]
        y = np.linalg.solve(bmat.T, phase2[basis])
        for r in range(m0):
            duals[r] = y[r] * (-1.0 if flipped[r] else 1.0)
    except np.linalg.LinAlgError:
        pass

    return LpResult(status="optimal", objective=obj, x=x, duals=duals, iterations=iters)
