"""Bounded-variable primal simplex for the planning LPs.

Solves continuous relaxations and fixed-binary subproblems.  The method is a
two-phase tableau simplex over general variable bounds:

* every row gets a slack (``<=`` rows a nonnegative one, ``>=`` rows a
  nonpositive one, ``=`` rows a slack fixed at zero), giving an equality
  system ``[A | I] z = b`` with box bounds on ``z``;
* the initial basis is the slack set where the slack can absorb the row
  residual, and a unit-cost artificial elsewhere (phase 1 minimizes the
  artificial total);
* pricing is Dantzig's rule with ties broken by lowest column index, and a
  Bland fallback kicks in after a stall, so runs are deterministic and
  cycling-free;
* before any outcome is reported, duals are recomputed from a fresh
  factorization of the basis: optimal claims carry a weak-duality bound that
  must match the primal objective, and infeasible claims carry a row
  combination whose implied bound contradicts the variable box.  Anything
  that fails these checks is reported as ``failure``, never as a wrong
  ``optimal``.

Robustness is favored over speed; the target problems are small, and the
tableau is refreshed from original data whenever drift is detected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .milp import EQ, GE, LE, Milp

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
FAILURE = "failure"

# nonbasic/basic markers
_BASIC = 0
_AT_LO = 1
_AT_UP = 2
_FREE = 3
_FIXED = 4

_FEAS_TOL = 1e-7
_OPT_TOL = 1e-7
_PIV_TOL = 1e-10
_STALL_LIMIT = 200
_REFRESH_EVERY = 700


@dataclass
class LpOutcome:
    """Result of one LP solve.

    ``x`` and ``objective`` are set when ``status`` is ``optimal``;
    ``dual_bound`` is the certifying lower bound from the final duals.
    """

    status: str
    x: np.ndarray | None = None
    objective: float | None = None
    dual_bound: float | None = None
    iterations: int = 0
    message: str = ""


class DenseLp:
    """Dense row/bound arrays for a model, reusable across many solves.

    Integrality is dropped here: binary columns are carried as continuous
    columns with their [0, 1] (or pinned) bounds.
    """

    def __init__(self, a, senses, b, lo, up, c, c0=0.0):
        self.a = np.asarray(a, dtype=float)
        if self.a.ndim != 2:
            self.a = self.a.reshape(len(b), -1)
        self.senses = list(senses)
        self.b = np.asarray(b, dtype=float)
        self.lo = np.asarray(lo, dtype=float)
        self.up = np.asarray(up, dtype=float)
        self.c = np.asarray(c, dtype=float)
        self.c0 = float(c0)

    @classmethod
    def from_milp(cls, model: Milp) -> "DenseLp":
        n = model.n_variables
        m = model.n_constraints
        a = np.zeros((m, n))
        senses = []
        b = np.zeros(m)
        for i, con in enumerate(model.constraints):
            a[i, list(con.columns)] = con.coefficients
            senses.append(con.sense)
            b[i] = con.rhs
        lo = np.array([v.lower for v in model.variables], dtype=float)
        up = np.array([v.upper for v in model.variables], dtype=float)
        c = np.zeros(n)
        for col, coef in model.objective.items():
            c[col] = coef
        return cls(a, senses, b, lo, up, c, model.objective_offset)

    def solve(self, lo=None, up=None, tol: float = _FEAS_TOL) -> LpOutcome:
        lo = self.lo if lo is None else np.asarray(lo, dtype=float)
        up = self.up if up is None else np.asarray(up, dtype=float)
        return _Simplex(self, lo, up, tol).run()


def solve_lp(model: Milp, tol: float = _FEAS_TOL) -> LpOutcome:
    """Solve the continuous relaxation of ``model``.

    Deterministic: identical models give identical outcomes.  An ``optimal``
    outcome satisfies every row and bound within ``tol`` and carries a
    certifying dual bound; uncertifiable situations come back as ``failure``
    with a diagnostic message.
    """
    return DenseLp.from_milp(model).solve(tol=tol)


class _Simplex:
    def __init__(self, problem: DenseLp, lo, up, tol):
        self.problem = problem
        self.feas_tol = tol
        self.opt_tol = _OPT_TOL
        m, n = problem.a.shape
        self.m = m
        self.n = n

        # objective scaling keeps reduced-cost tolerances meaningful when
        # capital costs (1e6..1e9 dollars) share a model with MW quantities
        self.sigma = max(1.0, float(np.max(np.abs(problem.c))) if n else 1.0)

        slack_lo = np.empty(m)
        slack_up = np.empty(m)
        for i, sense in enumerate(problem.senses):
            if sense == LE:
                slack_lo[i], slack_up[i] = 0.0, np.inf
            elif sense == GE:
                slack_lo[i], slack_up[i] = -np.inf, 0.0
            elif sense == EQ:
                slack_lo[i], slack_up[i] = 0.0, 0.0
            else:
                raise ValueError(f"unknown sense {sense!r}")

        self.lo = np.concatenate([lo, slack_lo])
        self.up = np.concatenate([up, slack_up])
        self.a_all = np.hstack([problem.a, np.eye(m)]) if m else np.zeros((0, n))
        self.b = problem.b.copy()
        self.cost2 = np.concatenate([problem.c / self.sigma, np.zeros(m)])

        if np.any(self.lo > self.up):
            raise ValueError("crossed variable bounds")

        self.status = np.empty(n + m, dtype=np.int8)
        self.x = np.zeros(n + m)
        for j in range(n + m):
            lj, uj = self.lo[j], self.up[j]
            if lj == uj:
                self.status[j], self.x[j] = _FIXED, lj
            elif np.isfinite(lj):
                self.status[j], self.x[j] = _AT_LO, lj
            elif np.isfinite(uj):
                self.status[j], self.x[j] = _AT_UP, uj
            else:
                self.status[j], self.x[j] = _FREE, 0.0

        self.art_cols: list[int] = []
        self.iterations = 0

    # -- setup -------------------------------------------------------------

    def _install_start_basis(self):
        """Slack basis where the residual fits, artificials elsewhere."""
        n, m = self.n, self.m
        resid = self.b - self.a_all[:, :n] @ self.x[:n]
        basis = np.empty(m, dtype=np.int64)
        art_sign = {}
        for i in range(m):
            sc = n + i
            r = resid[i]
            if self.lo[sc] - 1e-12 <= r <= self.up[sc] + 1e-12:
                basis[i] = sc
                self.status[sc] = _BASIC
                self.x[sc] = r
            else:
                anchor = self.lo[sc] if r < self.lo[sc] else self.up[sc]
                self.x[sc] = anchor
                if self.lo[sc] == self.up[sc]:
                    self.status[sc] = _FIXED
                else:
                    self.status[sc] = _AT_LO if anchor == self.lo[sc] else _AT_UP
                rho = r - anchor
                col = self.a_all.shape[1]
                sign = 1.0 if rho >= 0 else -1.0
                self.a_all = np.hstack([self.a_all, np.zeros((m, 1))])
                self.a_all[i, col] = sign
                self.lo = np.append(self.lo, 0.0)
                self.up = np.append(self.up, np.inf)
                self.x = np.append(self.x, abs(rho))
                self.status = np.append(self.status, _BASIC)
                art_sign[i] = sign
                basis[i] = col
                self.art_cols.append(col)
        self.basis = basis
        self.cost2 = np.concatenate([self.cost2, np.zeros(len(self.art_cols))])
        self.cost1 = np.zeros_like(self.cost2)
        for col in self.art_cols:
            self.cost1[col] = 1.0
        # initial inverse-basis action is a row sign flip at artificial rows
        self.tableau = self.a_all.copy()
        for i, sign in art_sign.items():
            if sign < 0:
                self.tableau[i] *= -1.0

    # -- linear algebra helpers ---------------------------------------------

    def _basis_matrix(self):
        return self.a_all[:, self.basis]

    def _refresh(self):
        """Rebuild tableau and basic values from original data."""
        if self.m == 0:
            return True
        bmat = self._basis_matrix()
        try:
            self.tableau = np.linalg.solve(bmat, self.a_all)
            nonbasic_mask = np.ones(self.a_all.shape[1], dtype=bool)
            nonbasic_mask[self.basis] = False
            rhs = self.b - self.a_all[:, nonbasic_mask] @ self.x[nonbasic_mask]
            self.x[self.basis] = np.linalg.solve(bmat, rhs)
        except np.linalg.LinAlgError:
            return False
        return True

    def _exact_duals(self, cost):
        bmat = self._basis_matrix()
        if self.m == 0:
            return np.zeros(0), cost.copy()
        try:
            y = np.linalg.solve(bmat.T, cost[self.basis])
        except np.linalg.LinAlgError:
            return None, None
        return y, cost - y @ self.a_all

    def _optimality_violation(self, d):
        viol = 0.0
        stat = self.status
        down = (stat == _AT_LO) | (stat == _FREE)
        upm = (stat == _AT_UP) | (stat == _FREE)
        if np.any(down):
            viol = max(viol, float(np.max(-d[down], initial=0.0)))
        if np.any(upm):
            viol = max(viol, float(np.max(d[upm], initial=0.0)))
        return viol

    def _primal_error(self):
        resid = self.b - self.a_all @ self.x if self.m else np.zeros(0)
        row_err = float(np.max(np.abs(resid), initial=0.0))
        bound_err = float(
            max(
                np.max(self.lo - self.x, initial=0.0),
                np.max(self.x - self.up, initial=0.0),
                0.0,
            )
        )
        return row_err, bound_err

    def _dual_bound(self, y, d):
        """Lagrangian bound from duals: valid for any y, tight at optimum.

        Each column contributes its worst case over the bound box.  For a
        column with an infinite bound on the relevant side, a reduced cost
        inside the optimality tolerance is paired with the current value
        instead (the exact worst case would be unbounded); a larger one keeps
        the honest minus-infinity answer.
        """
        total = float(y @ self.b) if self.m else 0.0
        for j in np.nonzero(np.abs(d) > 1e-9)[0]:
            dj = d[j]
            side = self.lo[j] if dj > 0 else self.up[j]
            if np.isfinite(side):
                total += dj * side
            elif abs(dj) <= 1e-5:
                total += dj * self.x[j]
            else:
                return -np.inf
        return total

    # -- the pivot loop ------------------------------------------------------

    def _price(self, bland):
        d = self.drow
        stat = self.status
        can_inc = (stat == _AT_LO) | (stat == _FREE)
        can_dec = (stat == _AT_UP) | (stat == _FREE)
        score = np.maximum(np.where(can_inc, -d, 0.0), np.where(can_dec, d, 0.0))
        if bland:
            idx = np.nonzero(score > self.opt_tol)[0]
            if idx.size == 0:
                return -1, 0
            q = int(idx[0])
        else:
            q = int(np.argmax(score))
            if score[q] <= self.opt_tol:
                return -1, 0
        if can_inc[q] and (-d[q] >= d[q] or not can_dec[q]):
            return q, 1
        return q, -1

    def _ratio_test(self, q, direction, bland):
        w = self.tableau[:, q]
        delta = -direction * w          # basic change rate per unit step
        t_flip = self.up[q] - self.lo[q]
        xb = self.x[self.basis]
        lob = self.lo[self.basis]
        upb = self.up[self.basis]
        ratios = np.full(self.m, np.inf)
        inc = delta > _PIV_TOL
        dec = delta < -_PIV_TOL
        with np.errstate(invalid="ignore", divide="ignore"):
            ratios[inc] = (upb[inc] - xb[inc]) / delta[inc]
            ratios[dec] = (lob[dec] - xb[dec]) / delta[dec]
        ratios = np.maximum(ratios, 0.0)
        t_row = float(np.min(ratios)) if self.m else np.inf
        if t_row == np.inf and t_flip == np.inf:
            return None, None
        if t_flip <= t_row:
            return t_flip, -1
        near = np.nonzero(ratios <= t_row + 1e-12)[0]
        if bland:
            r = int(near[np.argmin(self.basis[near])])
        else:
            r = int(near[np.argmax(np.abs(delta[near]))])
        return t_row, r

    def _apply_flip(self, q, direction):
        t = self.up[q] - self.lo[q]
        if self.m:
            self.x[self.basis] -= direction * t * self.tableau[:, q]
        if direction > 0:
            self.x[q] = self.up[q]
            self.status[q] = _AT_UP
        else:
            self.x[q] = self.lo[q]
            self.status[q] = _AT_LO

    def _apply_pivot(self, q, direction, t, r, phase):
        w = self.tableau[:, q]
        delta = -direction * w
        self.x[self.basis] += delta * t
        self.x[q] += direction * t
        leaving = int(self.basis[r])
        # snap the leaving variable onto the bound it reached
        if self.lo[leaving] == self.up[leaving]:
            self.status[leaving] = _FIXED
            self.x[leaving] = self.lo[leaving]
        elif delta[r] > 0:
            self.status[leaving] = _AT_UP
            self.x[leaving] = self.up[leaving]
        else:
            self.status[leaving] = _AT_LO
            self.x[leaving] = self.lo[leaving]
        if phase == 1 and leaving in self.art_set:
            # once an artificial leaves it is locked out for good
            self.lo[leaving] = self.up[leaving] = 0.0
            self.status[leaving] = _FIXED
            self.x[leaving] = 0.0

        piv = self.tableau[r, q]
        self.tableau[r] /= piv
        col = self.tableau[:, q].copy()
        col[r] = 0.0
        self.tableau -= np.outer(col, self.tableau[r])
        self.tableau[:, q] = 0.0
        self.tableau[r, q] = 1.0
        dq = self.drow[q]
        self.drow -= dq * self.tableau[r]
        self.drow[q] = 0.0
        self.basis[r] = q
        self.status[q] = _BASIC

    def _loop(self, cost, phase, max_iter):
        self.drow = cost - (cost[self.basis] @ self.tableau if self.m else 0.0)
        bland = False
        stall = 0
        best = np.inf
        while True:
            if self.iterations >= max_iter:
                return FAILURE
            q, direction = self._price(bland)
            if q < 0:
                return OPTIMAL
            t, r = self._ratio_test(q, direction, bland)
            if t is None:
                return UNBOUNDED if phase == 2 else FAILURE
            self.iterations += 1
            if r == -1:
                self._apply_flip(q, direction)
            else:
                self._apply_pivot(q, direction, t, r, phase)
            if self.iterations % _REFRESH_EVERY == 0:
                self._refresh()
                self.drow = cost - (cost[self.basis] @ self.tableau if self.m else 0.0)
            z = float(cost @ self.x)
            if z < best - 1e-11 * (1.0 + abs(best)):
                best = z
                stall = 0
                bland = False
            else:
                stall += 1
                if stall >= _STALL_LIMIT:
                    bland = True

    # -- orchestration -------------------------------------------------------

    def run(self) -> LpOutcome:
        self._install_start_basis()
        self.art_set = set(self.art_cols)
        max_iter = 50 * (self.m + self.a_all.shape[1]) + 10_000

        if self.art_cols:
            outcome = self._run_phase(self.cost1, phase=1, max_iter=max_iter)
            if outcome is not None:
                return outcome
            p1 = float(self.x[self.art_cols].sum())
            if p1 > 1e-8:
                return self._certify_infeasible()
            for col in self.art_cols:
                self.lo[col] = self.up[col] = 0.0
                if self.status[col] != _BASIC:
                    self.status[col] = _FIXED
                    self.x[col] = 0.0

        outcome = self._run_phase(self.cost2, phase=2, max_iter=max_iter)
        if outcome is not None:
            return outcome
        return self._finish_optimal()

    def _run_phase(self, cost, phase, max_iter):
        """Run one phase to verified optimality; None means phase finished."""
        for _ in range(8):
            verdict = self._loop(cost, phase, max_iter)
            if verdict == FAILURE:
                return LpOutcome(
                    FAILURE, iterations=self.iterations,
                    message=f"phase {phase}: iteration limit or numerical stall",
                )
            if verdict == UNBOUNDED:
                return LpOutcome(UNBOUNDED, iterations=self.iterations)
            y, d = self._exact_duals(cost)
            if y is None:
                return LpOutcome(FAILURE, iterations=self.iterations,
                                 message="singular basis")
            opt_viol = self._optimality_violation(d)
            row_err, bound_err = self._primal_error()
            drift = max(row_err, bound_err) > 0.5 * self.feas_tol
            if opt_viol <= 10 * self.opt_tol and not drift:
                self.drow = d
                return None
            # drift or stale reduced costs: rebuild state and keep pivoting
            if not self._refresh():
                return LpOutcome(FAILURE, iterations=self.iterations,
                                 message="singular basis during refresh")
        return LpOutcome(FAILURE, iterations=self.iterations,
                         message=f"phase {phase}: could not verify optimality")

    def _finish_optimal(self) -> LpOutcome:
        y, d = self._exact_duals(self.cost2)
        obj_scaled = float(self.cost2 @ self.x)
        bound_scaled = self._dual_bound(y, d)
        gap = abs(obj_scaled - bound_scaled)
        if not np.isfinite(bound_scaled) or gap > 1e-6 * (1.0 + abs(obj_scaled)):
            if self._refresh():
                y, d = self._exact_duals(self.cost2)
                obj_scaled = float(self.cost2 @ self.x)
                bound_scaled = self._dual_bound(y, d)
                gap = abs(obj_scaled - bound_scaled)
            if not np.isfinite(bound_scaled) or gap > 1e-6 * (1.0 + abs(obj_scaled)):
                return LpOutcome(
                    FAILURE, iterations=self.iterations,
                    message=f"weak duality check failed (gap {gap:.3e})",
                )
        row_err, bound_err = self._primal_error()
        if max(row_err, bound_err) > self.feas_tol:
            return LpOutcome(
                FAILURE, iterations=self.iterations,
                message=f"primal residuals too large ({row_err:.3e}, {bound_err:.3e})",
            )
        objective = obj_scaled * self.sigma + self.problem.c0
        return LpOutcome(
            OPTIMAL,
            x=self.x[: self.n].copy(),
            objective=objective,
            dual_bound=bound_scaled * self.sigma + self.problem.c0,
            iterations=self.iterations,
        )

    def _certify_infeasible(self) -> LpOutcome:
        y, d = self._exact_duals(self.cost1)
        if y is None:
            return LpOutcome(FAILURE, iterations=self.iterations,
                             message="singular basis at infeasibility check")
        # combination y of the rows bounds y.b from above by sup over the box;
        # a positive shortfall proves no point in the box satisfies the rows
        ncols = self.n + self.m
        w = y @ self.a_all[:, :ncols]
        sup = 0.0
        for j in range(ncols):
            if w[j] > 1e-11:
                hi = self.up[j]
                sup += w[j] * hi
            elif w[j] < -1e-11:
                hi = self.lo[j]
                sup += w[j] * hi
            if not np.isfinite(sup):
                break
        shortfall = float(y @ self.b) - sup
        if not np.isfinite(sup) or shortfall <= 1e-9 * (1.0 + abs(float(y @ self.b))):
            return LpOutcome(
                FAILURE, iterations=self.iterations,
                message="infeasibility could not be certified",
            )
        return LpOutcome(
            INFEASIBLE, iterations=self.iterations,
            message=f"certified infeasible (shortfall {shortfall:.6e})",
        )
