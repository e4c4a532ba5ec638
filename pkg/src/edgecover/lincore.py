"""Dense bounded-variable revised simplex with dual certificates, plus 0/1 B&B.

The engine is deliberately self-contained: covering relaxations, the dual
regions used by variable fixing, and the outer-approximation LPs of the
conic location model all run on this one kernel, so every dual vector the
fixing logic consumes comes with a checkable feasibility certificate.

Internals use the "activity" formulation: every row a^T x {<=,>=,=} b gets
an activity variable s with a^T x - s = 0 and the sense folded into s's
bounds, so the constraint system is W [x; s] = 0 with W = [A | -I] and all
structure living in the bounds.  The basis inverse is kept explicitly and
refactorized periodically; re-solves warm-start from the previous basis
(primal simplex after objective swaps, dual simplex after bound changes or
new cuts).
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

FEAS_TOL = 1e-7  # primal feasibility
DUAL_TOL = 1e-7  # reduced-cost / dual feasibility
GAP_TOL = 1e-7  # relative primal/dual objective agreement
PIVOT_TOL = 1e-9  # smallest usable pivot element
INT_TOL = 1e-6  # default integrality tolerance
REFACTOR_EVERY = 100

BASIC, AT_LOWER, AT_UPPER, NB_FREE = 0, 1, 2, 3

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"
NUMERICAL_FAILURE = "numerical_failure"


@dataclass
class LpSolution:
    status: str
    x: Optional[np.ndarray] = None
    dual: Optional[np.ndarray] = None
    reduced_costs: Optional[np.ndarray] = None
    objective: Optional[float] = None
    pivots: int = 0


class LpModel:
    """A mutable LP: dense rows, senses, rhs, variable bounds, objective.

    The instance doubles as the re-solve handle: the basis of the last
    solve is cached on it, and `resolve_with_objective` / `add_cuts` /
    `set_variable_bounds` continue from that basis.
    """

    def __init__(
        self,
        obj: Sequence[float],
        lo: Optional[Sequence[float]] = None,
        hi: Optional[Sequence[float]] = None,
        maximize: bool = False,
    ):
        self.obj = np.asarray(obj, dtype=float).copy()
        n = len(self.obj)
        self.lo = np.full(n, 0.0) if lo is None else np.asarray(lo, dtype=float).copy()
        self.hi = np.full(n, np.inf) if hi is None else np.asarray(hi, dtype=float).copy()
        if len(self.lo) != n or len(self.hi) != n:
            raise ValueError("bound vectors must match objective length")
        if np.any(self.lo > self.hi):
            raise ValueError("need lo <= hi for every variable")
        self.maximize = maximize
        self.A = np.zeros((0, n))
        self.sense: list[str] = []
        self.rhs: list[float] = []
        self._st: Optional[_SimplexState] = None

    # -- construction -------------------------------------------------------

    @property
    def num_vars(self) -> int:
        return len(self.obj)

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    def add_row(self, cols: Sequence[int], coefs: Sequence[float], sense: str, rhs: float) -> None:
        self.add_rows([(cols, coefs, sense, rhs)])

    def add_rows(self, rows) -> None:
        if not rows:
            return
        n = self.num_vars
        block = np.zeros((len(rows), n))
        for r, (cols, coefs, sense, rhs) in enumerate(rows):
            cols = np.asarray(cols, dtype=int)
            if len(cols) and (cols.min() < 0 or cols.max() >= n):
                bad = [int(c) for c in cols if c < 0 or c >= n]
                raise ValueError(f"row {r} references unknown variable indices {bad}")
            if sense not in ("<=", ">=", "="):
                raise ValueError(f"row {r} has unknown sense {sense!r}")
            block[r, cols] = np.asarray(coefs, dtype=float)
            self.sense.append(sense)
            self.rhs.append(float(rhs))
        self.A = np.vstack([self.A, block]) if self.A.size else block
        if self._st is not None:
            self._st.append_rows(block)

    def set_objective(self, obj: Sequence[float]) -> None:
        obj = np.asarray(obj, dtype=float)
        if len(obj) != self.num_vars:
            raise ValueError("objective length mismatch")
        self.obj = obj.copy()
        if self._st is not None:
            self._st.refresh_cost()

    def set_variable_bounds(self, j: int, lo: float, hi: float) -> None:
        if lo > hi:
            raise ValueError(f"need lo <= hi for variable {j}")
        self.lo[j], self.hi[j] = lo, hi
        if self._st is not None:
            self._st.update_bound(j)

    def copy(self) -> "LpModel":
        m = LpModel(self.obj, self.lo, self.hi, self.maximize)
        m.A = self.A.copy()
        m.sense = list(self.sense)
        m.rhs = list(self.rhs)
        return m


class _SimplexState:
    """Computational form and basis of an LpModel solve."""

    def __init__(self, model: LpModel):
        self.model = model
        self.n = model.num_vars
        self.m = model.num_rows
        sgn = -1.0 if model.maximize else 1.0
        self.cost = np.concatenate([sgn * model.obj, np.zeros(self.m)])
        self.clo = np.concatenate([model.lo, np.empty(self.m)])
        self.chi = np.concatenate([model.hi, np.empty(self.m)])
        for i, (s, b) in enumerate(zip(model.sense, model.rhs)):
            self.clo[self.n + i] = -np.inf if s == "<=" else b
            self.chi[self.n + i] = np.inf if s == ">=" else b
        self.vstat = np.empty(self.n + self.m, dtype=np.int8)
        for j in range(self.n):
            if np.isfinite(self.clo[j]):
                self.vstat[j] = AT_LOWER
            elif np.isfinite(self.chi[j]):
                self.vstat[j] = AT_UPPER
            else:
                self.vstat[j] = NB_FREE
        self.vstat[self.n :] = BASIC
        self.basis = np.arange(self.n, self.n + self.m)
        self.binv = -np.eye(self.m)
        self.xval = np.zeros(self.n + self.m)
        self._set_nonbasic_values()
        self._recompute_basics()
        self.pivots = 0
        self.degen_run = 0

    # -- bookkeeping --------------------------------------------------------

    def _set_nonbasic_values(self):
        nb = self.vstat != BASIC
        v = np.where(self.vstat == AT_LOWER, self.clo, np.where(self.vstat == AT_UPPER, self.chi, 0.0))
        self.xval[nb] = v[nb]

    def _activity_of_nonbasic(self) -> np.ndarray:
        """W @ x over nonbasic entries only (basic contributions excluded)."""
        x = self.xval.copy()
        x[self.basis] = 0.0
        act = self.model.A @ x[: self.n]
        act -= x[self.n :]
        return act

    def _recompute_basics(self):
        self.xval[self.basis] = -self.binv @ self._activity_of_nonbasic()

    def refactor(self) -> bool:
        B = np.empty((self.m, self.m))
        for k, j in enumerate(self.basis):
            B[:, k] = self._column(j)
        try:
            self.binv = np.linalg.inv(B)
        except np.linalg.LinAlgError:
            return False
        self._set_nonbasic_values()
        self._recompute_basics()
        return True

    def refresh_cost(self):
        sgn = -1.0 if self.model.maximize else 1.0
        self.cost[: self.n] = sgn * self.model.obj

    def update_bound(self, j: int):
        self.clo[j], self.chi[j] = self.model.lo[j], self.model.hi[j]
        if self.vstat[j] == BASIC:
            return
        if self.vstat[j] == AT_LOWER and not np.isfinite(self.clo[j]):
            self.vstat[j] = AT_UPPER if np.isfinite(self.chi[j]) else NB_FREE
        if self.vstat[j] == AT_UPPER and not np.isfinite(self.chi[j]):
            self.vstat[j] = AT_LOWER if np.isfinite(self.clo[j]) else NB_FREE
        old = self.xval[j]
        new = self.clo[j] if self.vstat[j] == AT_LOWER else self.chi[j] if self.vstat[j] == AT_UPPER else 0.0
        if new != old:
            self.xval[j] = new
            self.xval[self.basis] -= (new - old) * self._ftran_col(j)

    def append_rows(self, block: np.ndarray):
        k = block.shape[0]
        m0 = self.m
        self.m += k
        for i in range(m0, self.m):
            s, b = self.model.sense[i], self.model.rhs[i]
            self.clo = np.append(self.clo, -np.inf if s == "<=" else b)
            self.chi = np.append(self.chi, np.inf if s == ">=" else b)
        self.cost = np.concatenate([self.cost, np.zeros(k)])
        # renumber slacks is unnecessary: slack for row i is var n + i and rows only append
        self.vstat = np.concatenate([self.vstat, np.full(k, BASIC, dtype=np.int8)])
        rb = np.zeros((k, m0))
        struct = self.basis < self.n
        rb[:, struct] = block[:, self.basis[struct]]
        top = np.hstack([self.binv, np.zeros((m0, k))])
        bot = np.hstack([rb @ self.binv, -np.eye(k)])
        self.binv = np.vstack([top, bot])
        self.basis = np.concatenate([self.basis, np.arange(self.n + m0, self.n + self.m)])
        self.xval = np.concatenate([self.xval, block @ self.xval[: self.n]])

    # -- linear algebra helpers --------------------------------------------

    def _column(self, j: int) -> np.ndarray:
        if j < self.n:
            return self.model.A[:, j]
        col = np.zeros(self.m)
        col[j - self.n] = -1.0
        return col

    def _ftran_col(self, j: int) -> np.ndarray:
        if j < self.n:
            return self.binv @ self.model.A[:, j]
        return -self.binv[:, j - self.n]

    def _duals(self, cost: np.ndarray) -> np.ndarray:
        return self.binv.T @ cost[self.basis]

    def _reduced_costs(self, cost: np.ndarray, y: np.ndarray) -> np.ndarray:
        d = np.empty(self.n + self.m)
        d[: self.n] = cost[: self.n] - self.model.A.T @ y
        d[self.n :] = cost[self.n :] + y
        return d

    def _tableau_row(self, k: int) -> np.ndarray:
        rho = self.binv[k]
        alpha = np.empty(self.n + self.m)
        alpha[: self.n] = rho @ self.model.A
        alpha[self.n :] = -rho
        return alpha

    # -- pivoting -----------------------------------------------------------

    def _pivot(self, enter: int, leave_pos: int, w: np.ndarray, enter_val: float, leave_stat: int):
        out = self.basis[leave_pos]
        piv = w[leave_pos]
        self.vstat[out] = leave_stat
        self.xval[out] = self.clo[out] if leave_stat == AT_LOWER else self.chi[out]
        self.basis[leave_pos] = enter
        self.vstat[enter] = BASIC
        self.xval[enter] = enter_val
        self.binv[leave_pos] /= piv
        others = np.arange(self.m) != leave_pos
        self.binv[others] -= np.outer(w[others], self.binv[leave_pos])
        self.pivots += 1
        if self.pivots % REFACTOR_EVERY == 0:
            self.refactor()

    # -- primal simplex ------------------------------------------------------

    def primal(self, phase1_only: bool = False, max_iter: Optional[int] = None) -> str:
        """Primal iterations; runs phase 1 first whenever infeasible."""
        limit = max_iter or 200 * (self.m + self.n) + 20000
        it = 0
        while it < limit:
            it += 1
            viol_lo = self.clo[self.basis] - self.xval[self.basis]
            viol_hi = self.xval[self.basis] - self.chi[self.basis]
            infeas = max(float(np.max(viol_lo, initial=0.0)), float(np.max(viol_hi, initial=0.0)))
            phase1 = infeas > FEAS_TOL
            if phase1:
                cost = np.zeros(self.n + self.m)
                cb = np.where(viol_lo > FEAS_TOL, -1.0, np.where(viol_hi > FEAS_TOL, 1.0, 0.0))
                cost[self.basis] = cb
            else:
                if phase1_only:
                    return OPTIMAL
                cost = self.cost
            y = self._duals(cost)
            d = self._reduced_costs(cost, y)
            enter = self._price(d)
            if enter < 0:
                if phase1:
                    return INFEASIBLE
                return OPTIMAL
            sigma = 1.0 if (self.vstat[enter] == AT_LOWER or (self.vstat[enter] == NB_FREE and d[enter] < 0)) else -1.0
            w = self._ftran_col(enter)
            step, leave_pos, leave_stat = self._ratio_primal(sigma, w, enter, phase1)
            if step is None:
                if phase1:
                    return NUMERICAL_FAILURE  # phase-1 objective is bounded below
                return UNBOUNDED
            if step < 1e-12:
                self.degen_run += 1
            else:
                self.degen_run = 0
            if leave_pos is None:  # bound flip
                self.xval[self.basis] -= sigma * step * w
                self.xval[enter] += sigma * step
                self.vstat[enter] = AT_UPPER if sigma > 0 else AT_LOWER
                continue
            enter_val = self.xval[enter] + sigma * step
            self.xval[self.basis] -= sigma * step * w
            self._pivot(enter, leave_pos, w, enter_val, leave_stat)
        return NUMERICAL_FAILURE

    def _price(self, d: np.ndarray) -> int:
        use_bland = self.degen_run > 10 * (self.m + self.n)
        score = np.zeros(self.n + self.m)
        at_lo = self.vstat == AT_LOWER
        at_hi = self.vstat == AT_UPPER
        free = self.vstat == NB_FREE
        score[at_lo] = -d[at_lo]
        score[at_hi] = d[at_hi]
        score[free] = np.abs(d[free])
        eligible = score > DUAL_TOL
        if not np.any(eligible):
            return -1
        if use_bland:
            return int(np.nonzero(eligible)[0][0])
        return int(np.argmax(np.where(eligible, score, -np.inf)))

    def _ratio_primal(self, sigma: float, w: np.ndarray, enter: int, phase1: bool):
        """Smallest blocking step for the entering move; None if unbounded.

        Every basic variable blocks at the first of its finite bounds met in
        its direction of motion; a currently-infeasible basic (phase 1)
        blocks at the violated bound it is re-entering.  Returns
        (step, leave_pos, leave_status) with leave_pos None for a bound flip.
        """
        xb = self.xval[self.basis]
        lob = self.clo[self.basis]
        hib = self.chi[self.basis]
        delta = sigma * w
        best = self.chi[enter] - self.clo[enter]  # bound-flip step
        best_pos = None
        best_stat = AT_LOWER
        best_piv = 0.0
        dec = delta > PIVOT_TOL  # basic value decreases
        inc = delta < -PIVOT_TOL
        cand_pos = np.nonzero(dec | inc)[0]
        for k in cand_pos:
            if dec[k]:
                if xb[k] > hib[k] + FEAS_TOL:
                    target, stat = hib[k], AT_UPPER
                elif np.isfinite(lob[k]) and xb[k] >= lob[k] - FEAS_TOL:
                    target, stat = lob[k], AT_LOWER
                else:
                    continue
            else:
                if xb[k] < lob[k] - FEAS_TOL:
                    target, stat = lob[k], AT_LOWER
                elif np.isfinite(hib[k]) and xb[k] <= hib[k] + FEAS_TOL:
                    target, stat = hib[k], AT_UPPER
                else:
                    continue
            if not np.isfinite(target):
                continue
            ratio = (xb[k] - target) / delta[k]
            if ratio < -1e-12:
                ratio = 0.0
            tie = abs(ratio - best) <= 1e-10
            if ratio < best - 1e-10 or (tie and abs(w[k]) > abs(best_piv)):
                best = ratio
                best_pos = int(k)
                best_stat = stat
                best_piv = w[k]
        if not np.isfinite(best):
            return None, None, AT_LOWER
        return max(best, 0.0), best_pos, best_stat

    # -- dual simplex ---------------------------------------------------------

    def dual_feasible(self) -> bool:
        y = self._duals(self.cost)
        d = self._reduced_costs(self.cost, y)
        bad = ((self.vstat == AT_LOWER) & (d < -DUAL_TOL)) | ((self.vstat == AT_UPPER) & (d > DUAL_TOL))
        bad |= (self.vstat == NB_FREE) & (np.abs(d) > DUAL_TOL)
        return not bool(np.any(bad))

    def dual(self, max_iter: Optional[int] = None) -> str:
        limit = max_iter or 200 * (self.m + self.n) + 20000
        it = 0
        while it < limit:
            it += 1
            xb = self.xval[self.basis]
            below = self.clo[self.basis] - xb
            above = xb - self.chi[self.basis]
            viol = np.maximum(below, above)
            k = int(np.argmax(viol))
            if viol[k] <= FEAS_TOL:
                return OPTIMAL
            if self.degen_run > 10 * (self.m + self.n):
                k = int(np.nonzero(viol > FEAS_TOL)[0][0])
            is_below = below[k] >= above[k]
            y = self._duals(self.cost)
            d = self._reduced_costs(self.cost, y)
            alpha = self._tableau_row(k)
            srow = -alpha if is_below else alpha  # normalize to the "above upper" case
            at_lo = self.vstat == AT_LOWER
            at_hi = self.vstat == AT_UPPER
            free = self.vstat == NB_FREE
            elig = (at_lo & (srow > PIVOT_TOL)) | (at_hi & (srow < -PIVOT_TOL)) | (free & (np.abs(srow) > PIVOT_TOL))
            elig[self.basis] = False
            idx = np.nonzero(elig)[0]
            if len(idx) == 0:
                return INFEASIBLE
            ratios = d[idx] / srow[idx]
            ratios = np.maximum(ratios, 0.0)
            best = float(np.min(ratios))
            cands = idx[ratios <= best + 1e-10]
            if self.degen_run > 10 * (self.m + self.n):
                enter = int(cands[0])
            else:
                enter = int(cands[np.argmax(np.abs(srow[cands]))])
            delta_xb = xb[k] - (self.clo[self.basis[k]] if is_below else self.chi[self.basis[k]])
            w = self._ftran_col(enter)
            step = delta_xb / alpha[enter]
            if abs(step) < 1e-12:
                self.degen_run += 1
            else:
                self.degen_run = 0
            enter_val = self.xval[enter] + step
            self.xval[self.basis] -= step * w
            self._pivot(enter, k, w, enter_val, AT_LOWER if is_below else AT_UPPER)
        return NUMERICAL_FAILURE

    # -- orchestration ---------------------------------------------------------

    def reoptimize(self) -> str:
        xb = self.xval[self.basis]
        infeas = max(
            float(np.max(self.clo[self.basis] - xb, initial=0.0)),
            float(np.max(xb - self.chi[self.basis], initial=0.0)),
        )
        if infeas <= FEAS_TOL:
            return self.primal()
        if self.dual_feasible():
            status = self.dual()
            if status == OPTIMAL:
                # bound flips during updates can leave tiny dual slips; polish
                return self.primal()
            return status
        return self.primal()

    def verify(self) -> bool:
        """Post-solve certificate: primal and dual residuals plus gap."""
        x = self.xval
        act = self.model.A @ x[: self.n] - x[self.n :]
        if float(np.max(np.abs(act), initial=0.0)) > 1e-5:
            return False
        if float(np.max(self.clo - x, initial=0.0)) > 10 * FEAS_TOL:
            return False
        if float(np.max(x - self.chi, initial=0.0)) > 10 * FEAS_TOL:
            return False
        y = self._duals(self.cost)
        d = self._reduced_costs(self.cost, y)
        scale = 1.0 + float(np.max(np.abs(self.cost), initial=0.0))
        bad = ((self.vstat == AT_LOWER) & (d < -10 * DUAL_TOL * scale)) | (
            (self.vstat == AT_UPPER) & (d > 10 * DUAL_TOL * scale)
        )
        if bool(np.any(bad)):
            return False
        gap = float(abs(d[self.basis] @ x[self.basis]))
        obj = float(self.cost @ x)
        return gap <= 1e-5 * (1.0 + abs(obj))


def _extract_solution(model: LpModel, status: str) -> LpSolution:
    st = model._st
    assert st is not None
    if status != OPTIMAL:
        return LpSolution(status=status, pivots=st.pivots)
    sgn = -1.0 if model.maximize else 1.0
    y = st._duals(st.cost)
    d = st._reduced_costs(st.cost, y)
    x = st.xval[: st.n].copy()
    return LpSolution(
        status=OPTIMAL,
        x=x,
        dual=sgn * y,
        reduced_costs=sgn * d[: st.n],
        objective=float(model.obj @ x),
        pivots=st.pivots,
    )


def solve_lp(model: LpModel, warm: bool = True) -> LpSolution:
    """Solve to proven optimality; deterministic for identical model bytes.

    A failed verification triggers one cold restart before reporting
    ``numerical_failure``; a wrong answer is never returned silently.
    """
    if model._st is None or not warm:
        model._st = _SimplexState(model)
    st = model._st
    status = st.reoptimize()
    if status == OPTIMAL and not st.verify():
        model._st = _SimplexState(model)
        st = model._st
        st.refactor()
        status = st.reoptimize()
        if status == OPTIMAL and not st.verify():
            status = NUMERICAL_FAILURE
    return _extract_solution(model, status)


def resolve_with_objective(model: LpModel, new_obj: Sequence[float]) -> LpSolution:
    """Swap the objective over the same feasible region and re-solve.

    Starts from the previous basis (primal-feasible by construction), so an
    unchanged objective re-solves in zero pivots.
    """
    model.set_objective(new_obj)
    if model._st is None:
        return solve_lp(model)
    st = model._st
    before = st.pivots
    status = st.primal()
    if status == OPTIMAL and not st.verify():
        return solve_lp(model, warm=False)
    sol = _extract_solution(model, status)
    sol.pivots = st.pivots - before
    return sol


def add_cuts(model: LpModel, rows) -> None:
    """Append valid rows; the next solve warm-starts dual-feasibly."""
    model.add_rows(rows)


def dump_lp(model: LpModel) -> str:
    """Plain-text dump.  Grammar: one header line ``min|max n m``; one line
    per variable ``v<j> lo hi obj``; one line per row
    ``r<i> sense rhs k col:coef ...`` with k the nonzero count."""
    out = [f"{'max' if model.maximize else 'min'} {model.num_vars} {model.num_rows}"]
    for j in range(model.num_vars):
        out.append(f"v{j} {model.lo[j]:.17g} {model.hi[j]:.17g} {model.obj[j]:.17g}")
    for i in range(model.num_rows):
        nz = np.nonzero(model.A[i])[0]
        terms = " ".join(f"{j}:{model.A[i, j]:.17g}" for j in nz)
        out.append(f"r{i} {model.sense[i]} {model.rhs[i]:.17g} {len(nz)} {terms}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Branch and bound over 0/1 variables
# ---------------------------------------------------------------------------


@dataclass
class BnbConfig:
    int_tol: float = INT_TOL
    node_limit: int = 1_000_000
    time_limit: float = math.inf
    branch_rule: str = "most-fractional"
    node_reduced_cost_fixing: bool = True
    gap_tol: float = GAP_TOL
    max_callback_rounds: int = 50


@dataclass
class BnbResult:
    x: Optional[np.ndarray]
    objective: float
    proved_optimal: bool
    node_count: int
    wall_time: float
    best_bound: float
    fix_stats: dict = field(default_factory=dict)
    status: str = OPTIMAL


@dataclass
class NodeContext:
    """What a node callback gets to see and do after each node LP solve."""

    x: np.ndarray
    objective: float
    is_integer: bool
    incumbent_objective: float
    add_cut: Callable[[Sequence[int], Sequence[float], str, float], None]


class _Node:
    __slots__ = ("bound", "seq", "overrides", "basis", "vstat", "nrows")

    def __init__(self, bound, seq, overrides, basis, vstat, nrows):
        self.bound = bound
        self.seq = seq
        self.overrides = overrides
        self.basis = basis
        self.vstat = vstat
        self.nrows = nrows

    def __lt__(self, other):
        return (self.bound, self.seq) < (other.bound, other.seq)


def branch_and_bound(
    model: LpModel,
    int_vars: Sequence[int],
    config: Optional[BnbConfig] = None,
    incumbent_hint: Optional[tuple[np.ndarray, float]] = None,
    node_callback: Optional[Callable[[NodeContext], bool]] = None,
) -> BnbResult:
    """Best-first 0/1 branch and bound on the LP relaxation.

    Branches on the most-fractional integer variable (ties to the smallest
    index); node re-solves run the dual simplex from the parent basis.  The
    node callback may add globally valid cuts; returning True forces a node
    re-solve (used for outer-approximation refinement at integer points).
    Minimization only.
    """
    if model.maximize:
        raise ValueError("branch_and_bound expects a minimization model")
    cfg = config or BnbConfig()
    int_vars = sorted(int_vars)
    for j in int_vars:
        if model.lo[j] < -cfg.int_tol or model.hi[j] > 1 + cfg.int_tol:
            raise ValueError(f"integer variable {j} must be bounded within [0, 1]")
    t0 = time.perf_counter()
    root_bounds = {j: (model.lo[j], model.hi[j]) for j in int_vars}
    inc_x: Optional[np.ndarray] = None
    inc_obj = math.inf
    if incumbent_hint is not None:
        inc_x = np.asarray(incumbent_hint[0], dtype=float).copy()
        inc_obj = float(incumbent_hint[1])
    nodes_done = 0
    rc_fixes = 0
    heap: list[_Node] = []
    seq = 0
    limit_hit = False

    def cutoff() -> float:
        return inc_obj - cfg.gap_tol * (1.0 + abs(inc_obj))

    def solve_node(node: Optional[_Node]) -> LpSolution:
        # reset integer bounds to root, then overlay the node's
        for j, (lo, hi) in root_bounds.items():
            model.set_variable_bounds(j, lo, hi)
        if node is not None:
            for j, (lo, hi) in node.overrides.items():
                model.set_variable_bounds(j, lo, hi)
            st = model._st
            assert st is not None
            nb = len(node.basis)
            st.basis[:nb] = node.basis
            st.vstat[: st.n + node.nrows] = node.vstat
            st.basis[nb:] = np.arange(st.n + node.nrows, st.n + st.m)
            st.vstat[st.n + node.nrows :] = BASIC
            if not st.refactor():
                model._st = _SimplexState(model)
        if model._st is None:
            return solve_lp(model)
        status = model._st.reoptimize()
        if status == OPTIMAL and not model._st.verify():
            return solve_lp(model, warm=False)
        return _extract_solution(model, status)

    root = _Node(-math.inf, seq, {}, None, None, 0)
    seq += 1
    heap.append(root)
    best_open = -math.inf

    while heap:
        node = heapq.heappop(heap)
        if node.bound > cutoff():
            continue
        if nodes_done >= cfg.node_limit or time.perf_counter() - t0 > cfg.time_limit:
            heapq.heappush(heap, node)
            limit_hit = True
            break
        sol = solve_node(node if node.basis is not None else None)
        # root node may also carry overrides-free warm path
        if node.basis is None and node.overrides:
            for j, (lo, hi) in node.overrides.items():
                model.set_variable_bounds(j, lo, hi)
            sol = solve_lp(model)
        nodes_done += 1
        if sol.status == INFEASIBLE:
            continue
        if sol.status != OPTIMAL:
            return BnbResult(
                inc_x, inc_obj, False, nodes_done, time.perf_counter() - t0, -math.inf, {"rc_fixes": rc_fixes}, sol.status
            )
        rounds = 0
        while node_callback is not None and rounds < cfg.max_callback_rounds:
            frac = np.array([abs(sol.x[j] - round(sol.x[j])) for j in int_vars])
            ctx = NodeContext(
                x=sol.x,
                objective=sol.objective,
                is_integer=bool(np.all(frac <= cfg.int_tol)),
                incumbent_objective=inc_obj,
                add_cut=lambda cols, coefs, sense, rhs: model.add_row(cols, coefs, sense, rhs),
            )
            nrows_before = model.num_rows
            wants_resolve = node_callback(ctx)
            if not wants_resolve and model.num_rows == nrows_before:
                break
            st = model._st
            assert st is not None
            status = st.reoptimize()
            if status == INFEASIBLE:
                sol = LpSolution(INFEASIBLE)
                break
            sol = _extract_solution(model, status)
            rounds += 1
        if sol.status == INFEASIBLE:
            continue
        if sol.objective > cutoff():
            continue
        frac = np.array([abs(sol.x[j] - round(sol.x[j])) for j in int_vars])
        if bool(np.all(frac <= cfg.int_tol)):
            if sol.objective < inc_obj:
                inc_obj = sol.objective
                inc_x = sol.x.copy()
            continue
        local = dict(node.overrides)
        if cfg.node_reduced_cost_fixing and inc_obj < math.inf and sol.reduced_costs is not None:
            for j in int_vars:
                if j in local and local[j][0] == local[j][1]:
                    continue
                d = sol.reduced_costs[j]
                if sol.x[j] <= cfg.int_tol and sol.objective + d > cutoff():
                    local[j] = (0.0, 0.0)
                    rc_fixes += 1
                elif sol.x[j] >= 1 - cfg.int_tol and sol.objective - d > cutoff():
                    local[j] = (1.0, 1.0)
                    rc_fixes += 1
        scores = [(min(sol.x[j] - math.floor(sol.x[j]), math.ceil(sol.x[j]) - sol.x[j]), -j) for j in int_vars]
        jb = int_vars[int(np.argmax([s[0] - 1e-12 * (-s[1]) for s in scores]))]
        # most-fractional with smallest-index tie break
        best_score = -1.0
        jb = int_vars[0]
        for j in int_vars:
            s = min(sol.x[j] - math.floor(sol.x[j]), math.ceil(sol.x[j]) - sol.x[j])
            if s > best_score + 1e-12:
                best_score = s
                jb = j
        st = model._st
        assert st is not None
        snap_basis = st.basis.copy()
        snap_vstat = st.vstat.copy()
        for child_bounds in (((jb, (0.0, 0.0)),), ((jb, (1.0, 1.0)),)):
            ov = dict(local)
            ov.update(dict(child_bounds))
            heapq.heappush(heap, _Node(sol.objective, seq, ov, snap_basis, snap_vstat, st.m))
            seq += 1

    wall = time.perf_counter() - t0
    open_bounds = [n.bound for n in heap]
    best_bound = min(open_bounds) if (limit_hit and open_bounds) else inc_obj
    proved = not limit_hit
    if inc_x is None:
        if proved:
            return BnbResult(None, math.inf, False, nodes_done, wall, math.inf, {"rc_fixes": rc_fixes}, INFEASIBLE)
        return BnbResult(None, math.inf, False, nodes_done, wall, best_bound, {"rc_fixes": rc_fixes}, NUMERICAL_FAILURE)
    return BnbResult(inc_x, inc_obj, proved, nodes_done, wall, best_bound, {"rc_fixes": rc_fixes})
