"""Dense bounded-variable primal simplex.

Solves

    maximize    c^T x
    subject to  A x <= b,  lo <= x <= hi

with a two-phase tableau method and Bland's rule for both the entering and
the leaving variable.  Problems here are tiny (d, m <= 50), so everything is
dense; the pivot loop is compiled with numba when it is available.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


FEAS_TOL = 1e-9
OPT_TOL = 1e-9
PIVOT_TOL = 1e-11


class LpError(Exception):
    """Base class for LP failures."""


class NumericalFailure(LpError):
    """Pivoting exceeded the iteration cap."""


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    objective: np.ndarray
    constraint_matrix: np.ndarray
    constraint_rhs: np.ndarray
    lower_bounds: np.ndarray
    upper_bounds: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        d = c.size
        A = np.asarray(self.constraint_matrix, dtype=float).reshape(-1, d)
        b = np.asarray(self.constraint_rhs, dtype=float).ravel()
        lo = np.asarray(self.lower_bounds, dtype=float).ravel()
        hi = np.asarray(self.upper_bounds, dtype=float).ravel()
        if b.size != A.shape[0]:
            raise ValueError("constraint_rhs length does not match constraint_matrix rows")
        if lo.size != d or hi.size != d:
            raise ValueError("bounds must have the same length as the objective")
        for name, arr in (("objective", c), ("constraint_matrix", A),
                          ("constraint_rhs", b), ("lower_bounds", lo),
                          ("upper_bounds", hi)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
        if np.any(lo > hi):
            raise ValueError("lower_bounds exceed upper_bounds")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "constraint_matrix", A)
        object.__setattr__(self, "constraint_rhs", b)
        object.__setattr__(self, "lower_bounds", lo)
        object.__setattr__(self, "upper_bounds", hi)

    @property
    def dim(self):
        return self.objective.size


@dataclass(frozen=True)
class LpSolution:
    point: np.ndarray
    objective_value: float
    status: LpStatus
    iterations: int = 0


# Return codes of the compiled kernel.
_OPTIMAL, _UNBOUNDED, _ITER_CAP = 0, 1, 2


@njit(cache=True)
def _simplex_kernel(tab, xb, basis, at_upper, lo, hi, cost, max_iter):
    """Run bounded-variable simplex iterations in place.

    ``tab`` is the m x n tableau B^{-1}[A | I | -W], ``xb`` the basic values,
    ``basis[i]`` the variable basic in row i and ``at_upper[j]`` the side on
    which nonbasic variable j sits.  Returns (code, iterations).
    """
    m, n = tab.shape
    is_basic = np.zeros(n, dtype=np.bool_)
    for i in range(m):
        is_basic[basis[i]] = True

    it = 0
    while True:
        # Bland: lowest-index improving nonbasic variable.
        enter = -1
        sigma = 0.0
        for j in range(n):
            if is_basic[j] or hi[j] - lo[j] <= 0.0:
                continue
            rc = cost[j]
            for i in range(m):
                rc -= cost[basis[i]] * tab[i, j]
            if not at_upper[j] and rc > 1e-9:
                enter = j
                sigma = 1.0
                break
            if at_upper[j] and rc < -1e-9:
                enter = j
                sigma = -1.0
                break
        if enter < 0:
            return _OPTIMAL, it
        if it >= max_iter:
            return _ITER_CAP, it
        it += 1

        theta = hi[enter] - lo[enter]
        leave_row = -1
        leave_to_upper = False
        for i in range(m):
            a = sigma * tab[i, enter]
            bi = basis[i]
            if a > 1e-11:
                step = (xb[i] - lo[bi]) / a
                to_upper = False
            elif a < -1e-11 and hi[bi] < np.inf:
                step = (hi[bi] - xb[i]) / (-a)
                to_upper = True
            else:
                continue
            if step < 0.0:
                step = 0.0
            if step < theta or (step == theta and leave_row >= 0
                                and bi < basis[leave_row]):
                theta = step
                leave_row = i
                leave_to_upper = to_upper
        if theta == np.inf:
            return _UNBOUNDED, it

        for i in range(m):
            xb[i] -= sigma * theta * tab[i, enter]

        if leave_row < 0:
            # Bound flip; basis unchanged.
            at_upper[enter] = not at_upper[enter]
            continue

        leaving = basis[leave_row]
        if at_upper[enter]:
            entering_value = hi[enter] - theta
        else:
            entering_value = lo[enter] + theta
        piv = tab[leave_row, enter]
        for j in range(n):
            tab[leave_row, j] /= piv
        for i in range(m):
            if i == leave_row:
                continue
            f = tab[i, enter]
            if f != 0.0:
                for j in range(n):
                    tab[i, j] -= f * tab[leave_row, j]
        basis[leave_row] = enter
        xb[leave_row] = entering_value
        is_basic[enter] = True
        is_basic[leaving] = False
        at_upper[enter] = False
        at_upper[leaving] = leave_to_upper


def solve_lp(lp: LinearProgram) -> LpSolution:
    """Maximize ``lp.objective @ x`` over the polytope described by ``lp``.

    Optimal points are basic (vertex) solutions.  Pivot selection is
    deterministic, so identical inputs give bit-identical outputs.

    Raises
    ------
    NumericalFailure
        If either phase exceeds ``50 * (d + m)`` pivots.
    """
    A, b = lp.constraint_matrix, lp.constraint_rhs
    lo_x, hi_x = lp.lower_bounds, lp.upper_bounds
    m, d = A.shape
    max_iter = 50 * (d + m)

    # Start with every structural variable at its lower bound; the slack of
    # row i is then b_i - A_i lo, and rows where that is negative get an
    # artificial variable w_i >= 0 (row reads A_i x + s_i - w_i = b_i).
    residual = b - A @ lo_x
    bad = np.flatnonzero(residual < 0.0)
    n_art = bad.size
    n = d + m + n_art

    tab = np.zeros((m, n))
    tab[:, :d] = A
    tab[:, d:d + m] = np.eye(m)
    basis = np.arange(d, d + m, dtype=np.int64)
    xb = residual.copy()
    for k, i in enumerate(bad):
        col = d + m + k
        tab[i, col] = -1.0
        # Make w_i basic in row i: negate the row so its coefficient is +1.
        tab[i, :] *= -1.0
        basis[i] = col
        xb[i] = -residual[i]

    lo = np.concatenate([lo_x, np.zeros(m + n_art)])
    hi = np.concatenate([hi_x, np.full(m, np.inf), np.full(n_art, np.inf)])
    at_upper = np.zeros(n, dtype=np.bool_)
    iterations = 0

    if n_art:
        cost1 = np.zeros(n)
        cost1[d + m:] = -1.0
        code, it = _simplex_kernel(tab, xb, basis, at_upper, lo, hi, cost1, max_iter)
        iterations += it
        if code == _ITER_CAP:
            raise NumericalFailure(f"phase 1 exceeded {max_iter} pivots")
        infeas = sum(xb[i] for i in range(m) if basis[i] >= d + m)
        scale = max(1.0, float(np.max(np.abs(b))) if m else 1.0)
        if infeas > FEAS_TOL * scale:
            return LpSolution(np.full(d, np.nan), np.nan, LpStatus.INFEASIBLE, iterations)
        # Pin artificials at zero for phase 2.
        hi[d + m:] = 0.0

    cost2 = np.zeros(n)
    cost2[:d] = lp.objective
    code, it = _simplex_kernel(tab, xb, basis, at_upper, lo, hi, cost2, max_iter)
    iterations += it
    if code == _ITER_CAP:
        raise NumericalFailure(f"phase 2 exceeded {max_iter} pivots")
    if code == _UNBOUNDED:
        return LpSolution(np.full(d, np.nan), np.inf, LpStatus.UNBOUNDED, iterations)

    z = np.where(at_upper, hi, lo)
    z[basis] = xb
    x = np.clip(z[:d], lo_x, hi_x)
    return LpSolution(x, float(lp.objective @ x), LpStatus.OPTIMAL, iterations)
