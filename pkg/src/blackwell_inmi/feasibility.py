"""Dense two-phase simplex for small standard-form linear programs.

Programs are in standard form: minimize ``c @ x`` subject to
``a_eq @ x == b_eq`` and ``x >= 0``.  The solver is deliberately plain: a
full tableau, Dantzig pricing, and Bland's rule once a run of degenerate
pivots suggests cycling.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITERS = 50_000


class LpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration-limit"


class SolverError(ArithmeticError):
    """The tableau became numerically unusable."""


@dataclass(frozen=True, eq=False)
class LinearProgram:
    c: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float).reshape(-1)
        a = np.asarray(self.a_eq, dtype=float)
        b = np.asarray(self.b_eq, dtype=float).reshape(-1)
        if a.ndim != 2:
            raise ValueError("a_eq must be 2-D")
        if a.shape[0] != b.size:
            raise ValueError(f"a_eq has {a.shape[0]} rows but b_eq has {b.size} entries")
        if a.shape[1] != c.size:
            raise ValueError(f"a_eq has {a.shape[1]} columns but c has {c.size} entries")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "a_eq", a)
        object.__setattr__(self, "b_eq", b)

    @property
    def n_vars(self) -> int:
        return self.c.size

    @property
    def n_constraints(self) -> int:
        return self.b_eq.size


@dataclass(frozen=True, eq=False)
class LpOutcome:
    status: LpStatus
    x: np.ndarray | None = None
    objective_value: float = float("nan")
    iterations: int = 0
    pivots: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if (self.x is not None) != (self.status is LpStatus.OPTIMAL):
            raise ValueError("solution is present iff status is optimal")

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    """Rows 0..m-1 are constraints, row m is reduced costs; last column is rhs."""

    def __init__(self, a, b, tol):
        self.tol = tol
        m, n = a.shape
        self.n_orig = n
        basis = [-1] * m
        for j in range(n):
            col = a[:, j]
            nz = np.flatnonzero(col)
            if nz.size == 1 and col[nz[0]] == 1.0 and basis[nz[0]] < 0:
                basis[nz[0]] = j
        art_rows = [i for i in range(m) if basis[i] < 0]
        self.n_art = len(art_rows)
        t = np.zeros((m + 1, n + self.n_art + 1))
        t[:m, :n] = a
        t[:m, -1] = b
        for k, i in enumerate(art_rows):
            t[i, n + k] = 1.0
            basis[i] = n + k
        self.t = t
        self.basis = basis
        self.pivots = []

    @property
    def m(self):
        return self.t.shape[0] - 1

    def set_cost(self, cost):
        t = self.t
        t[-1, :] = 0.0
        t[-1, : cost.size] = cost
        for i, j in enumerate(self.basis):
            if t[-1, j] != 0.0:
                t[-1] -= t[-1, j] * t[i]

    def pivot(self, r, j):
        t = self.t
        t[r] /= t[r, j]
        col = t[:, j].copy()
        col[r] = 0.0
        t -= np.outer(col, t[r])
        t[:, j] = 0.0
        t[r, j] = 1.0
        rhs = t[:-1, -1]
        rhs[(rhs < 0) & (rhs > -self.tol)] = 0.0
        self.basis[r] = j
        self.pivots.append((r, j))

    def run(self, n_active, budget, n_vars):
        """Minimize over the first ``n_active`` columns; returns (status, iterations)."""
        t, tol = self.t, self.tol
        degenerate = 0
        bland = False
        it = 0
        while True:
            rc = t[-1, :n_active]
            if bland:
                cands = np.flatnonzero(rc < -tol)
                if cands.size == 0:
                    return LpStatus.OPTIMAL, it
                j = int(cands[0])
            else:
                j = int(np.argmin(rc))
                if rc[j] >= -tol:
                    return LpStatus.OPTIMAL, it
            if it >= budget:
                return LpStatus.ITERATION_LIMIT, it
            col = t[:-1, j]
            rows = np.flatnonzero(col > tol)
            if rows.size == 0:
                return LpStatus.UNBOUNDED, it
            ratios = t[rows, -1] / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + tol * max(1.0, abs(best))]
            r = int(min(ties, key=lambda i: self.basis[i]))
            if t[r, -1] / t[r, j] <= tol:
                degenerate += 1
                if degenerate > 2 * n_vars:
                    bland = True
            else:
                degenerate = 0
            self.pivot(r, j)
            it += 1
            if not np.isfinite(t[-1, -1]):
                raise SolverError("non-finite value in simplex tableau")

    def drive_out_artificials(self):
        """Pivot basic artificials out after phase I; drop redundant rows."""
        n = self.n_orig
        keep = []
        for i in range(self.m):
            if self.basis[i] < n:
                keep.append(i)
                continue
            row = self.t[i, :n]
            cands = np.flatnonzero(np.abs(row) > self.tol)
            if cands.size:
                self.pivot(i, int(cands[np.argmax(np.abs(row[cands]))]))
                keep.append(i)
        if len(keep) < self.m:
            self.t = np.vstack([self.t[keep], self.t[-1:]])
            self.basis = [self.basis[i] for i in keep]
        self.t = np.hstack([self.t[:, :n], self.t[:, -1:]])

    def solution(self):
        x = np.zeros(self.n_orig)
        for i, j in enumerate(self.basis):
            x[j] = self.t[i, -1]
        return x


def solve(lp: LinearProgram, tol: float = DEFAULT_TOL, max_iters: int = DEFAULT_MAX_ITERS) -> LpOutcome:
    """Solve ``lp`` with the two-phase simplex method.

    Phase I minimizes the sum of artificial variables; a positive optimum
    means the constraints are infeasible.  Phase II then minimizes the real
    objective from the feasible basis found.  Identical programs always
    produce identical pivot sequences.
    """
    a = lp.a_eq.copy()
    b = lp.b_eq.copy()
    flip = b < 0
    a[flip] *= -1.0
    b[flip] *= -1.0
    n = lp.n_vars
    tab = _Tableau(a, b, tol)
    used = 0
    if tab.n_art:
        cost = np.zeros(n + tab.n_art)
        cost[n:] = 1.0
        tab.set_cost(cost)
        status, used = tab.run(n + tab.n_art, max_iters, n)
        if status is LpStatus.ITERATION_LIMIT:
            return LpOutcome(status, iterations=used, pivots=tuple(tab.pivots))
        infeas = -tab.t[-1, -1]
        if infeas > tol * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LpOutcome(LpStatus.INFEASIBLE, iterations=used, pivots=tuple(tab.pivots))
        tab.drive_out_artificials()
    tab.set_cost(lp.c)
    status, it2 = tab.run(n, max_iters - used, n)
    used += it2
    if status is not LpStatus.OPTIMAL:
        return LpOutcome(status, iterations=used, pivots=tuple(tab.pivots))
    x = tab.solution()
    return LpOutcome(
        LpStatus.OPTIMAL, x, float(lp.c @ x), iterations=used, pivots=tuple(tab.pivots)
    )


def constraint_residual(lp: LinearProgram, x) -> float:
    """Max absolute violation of ``a_eq @ x == b_eq`` and ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    eq = np.abs(lp.a_eq @ x - lp.b_eq).max(initial=0.0)
    return float(max(eq, -x.min(initial=0.0), 0.0))


def garbling_feasibility_program(a, b) -> LinearProgram:
    """Program whose optimum is the least max-entry residual of ``G @ a - b``.

    Variables, in order: the entries of ``G`` (row-major), the residual
    bound ``t``, then one slack per inequality.  Each entry of ``G @ a - b``
    is boxed in ``[-t, t]``, every column of ``G`` sums to one, and the
    objective is ``t``.  See :func:`split_garbling_solution`.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise ValueError(f"experiments must share their states: {a.shape} vs {b.shape}")
    p, s = a.shape
    q = b.shape[0]
    n_g = q * p
    n_ineq = q * s
    n_vars = n_g + 1 + 2 * n_ineq
    rows = np.zeros((2 * n_ineq + p, n_vars))
    rhs = np.zeros(2 * n_ineq + p)
    t_col = n_g
    for i in range(q):
        for j in range(s):
            r = i * s + j
            # (G a)_{ij} = sum_k G_{ik} a_{kj}
            rows[r, i * p : (i + 1) * p] = a[:, j]
            rows[r, t_col] = -1.0
            rows[r, n_g + 1 + r] = 1.0
            rhs[r] = b[i, j]
            rr = n_ineq + r
            rows[rr, i * p : (i + 1) * p] = -a[:, j]
            rows[rr, t_col] = -1.0
            rows[rr, n_g + 1 + rr] = 1.0
            rhs[rr] = -b[i, j]
    for k in range(p):
        rows[2 * n_ineq + k, k:n_g:p] = 1.0
        rhs[2 * n_ineq + k] = 1.0
    c = np.zeros(n_vars)
    c[t_col] = 1.0
    return LinearProgram(c, rows, rhs)


def split_garbling_solution(x, n_out: int, n_in: int):
    """Return ``(G, t)`` from a solution of :func:`garbling_feasibility_program`."""
    x = np.asarray(x, dtype=float)
    g = x[: n_out * n_in].reshape(n_out, n_in)
    return g, float(x[n_out * n_in])
