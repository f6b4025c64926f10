"""Reference closures: Grad's Hermite expansion and discrete maximum entropy."""
import logging
from dataclasses import dataclass
from math import factorial

import numpy as np
from numpy.polynomial import chebyshev, hermite_e
from scipy import linalg, optimize, sparse

from .closures import ClosureResult
from .errors import (
    ClosureError,
    InfeasibleError,
    NegativeTemperatureError,
    NotConvergedError,
)
from .gauge import GaugeParams, frame_of, transform_moments
from .moment_core import as_moments

logger = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# Grad


@dataclass(frozen=True)
class GradExpansion:
    """Hermite coefficients of ``f = f_eq * sum_j alpha_j He_j`` in the frame.

    ``frame`` holds ``(rho, v, theta)`` of the input moments; the expansion
    variable is ``(c - v) / sqrt(theta)`` and ``f_eq`` is the unit Maxwellian.
    """
    alpha: np.ndarray
    frame: GaugeParams

    def density(self, c):
        g = self.frame
        x = (np.asarray(c, dtype=float) - g.v) / np.sqrt(g.theta)
        phi = np.exp(-0.5 * x * x) / np.sqrt(2 * np.pi)
        return g.rho / np.sqrt(g.theta) * phi * hermite_e.hermeval(x, self.alpha)


def gaussian_hermite_moment(m, j):
    """``int c**m He_j(c) phi(c) dc`` for the standard normal density ``phi``."""
    if j > m or (m - j) % 2:
        return 0.0
    k = (m - j) // 2
    return factorial(m) / (factorial(k) * 2 ** k)


def _to_frame(u):
    rho, v, theta = frame_of(u)
    if not theta > 0:
        raise NegativeTemperatureError(f"central second moment {theta!r} is not positive")
    g = GaugeParams(rho, v, theta)
    # the gauge shifts velocities by +v, so centring needs the opposite sign
    return g, GaugeParams(rho, -v, theta)


def grad_expansion(u):
    """Fit Grad's Hermite expansion to ``u_0..u_M``."""
    u = as_moments(u)
    M = len(u) - 1
    if M < 2:
        raise ClosureError("Grad closure needs M >= 2")
    frame, centring = _to_frame(u)
    ut = transform_moments(u, centring)
    L = np.array([[gaussian_hermite_moment(k, j) for j in range(M + 1)]
                  for k in range(M + 1)])
    alpha = linalg.solve_triangular(L, ut, lower=True)
    return GradExpansion(alpha=alpha, frame=frame)


def grad_close(u):
    """Grad closure: ``u_{M+1}`` of the Hermite-expanded Maxwellian."""
    u = as_moments(u)
    M = len(u) - 1
    exp = grad_expansion(u)
    _, centring = _to_frame(u)
    ut = transform_moments(u, centring)
    ut_next = sum(a * gaussian_hermite_moment(M + 1, j) for j, a in enumerate(exp.alpha))
    full = transform_moments(np.append(ut, ut_next), centring.inverse())
    return ClosureResult(u_next=float(full[-1]), chi_used=None,
                         diagnostics={"alpha": exp.alpha.tolist()})


# --------------------------------------------------------------------------
# maximum entropy on a grid


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    points: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ClosureError(f"grid needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.points < 2:
            raise ClosureError("grid needs at least two points")

    @property
    def nodes(self):
        return np.linspace(self.lo, self.hi, self.points)

    @property
    def spacing(self):
        return (self.hi - self.lo) / (self.points - 1)

    @property
    def weights(self):
        """Trapezoid weights."""
        w = np.full(self.points, self.spacing)
        w[[0, -1]] *= 0.5
        return w


def default_grid(u, width=8.0, points=1001):
    """Grid spanning ``mean +- width * sqrt(theta)`` of the given moments."""
    _, v, theta = frame_of(u)
    if not theta > 0:
        raise NegativeTemperatureError(f"central second moment {theta!r} is not positive")
    s = width * np.sqrt(theta)
    return Grid(v - s, v + s, points)


@dataclass(frozen=True)
class MaxEntSolution:
    grid: Grid
    f_values: np.ndarray
    constraint_residuals: np.ndarray
    entropy: float
    converged: bool
    iterations: int


def discrete_moments(grid, f, M):
    c = grid.nodes
    w = grid.weights * f
    return np.array([np.dot(c ** k, w) for k in range(M + 1)])


def _scaled_constraints(grid, u):
    """Constraint rows in a Chebyshev basis on the grid mapped to [-1, 1].

    Returns ``(B, b)`` with ``B @ f = b`` equivalent to the raw-moment
    constraints but far better conditioned.
    """
    M = len(u) - 1
    mid = 0.5 * (grid.lo + grid.hi)
    half = 0.5 * (grid.hi - grid.lo)
    x = (grid.nodes - mid) / half
    # moments of x = (c - mid) / half
    m = transform_moments(u, GaugeParams(1.0, -mid, half * half))
    B = np.empty((M + 1, grid.points))
    b = np.empty(M + 1)
    for k in range(M + 1):
        e = np.zeros(k + 1)
        e[k] = 1.0
        B[k] = chebyshev.chebval(x, e) * grid.weights
        b[k] = np.dot(chebyshev.cheb2poly(e), m[:k + 1])
    return B, b


def _entropy(f, eps, w):
    return float(-np.dot(w, f * np.log(f + eps)))


def _interior_point(B, b, grid, mass):
    """Feasibility certificate and a strictly positive feasible start.

    Solves the LP ``max t`` subject to ``B f = b`` and ``f_i >= t >= 0``.
    Returns ``(feasible, f)`` where ``f`` is None unless ``t > 0``.
    """
    n = B.shape[1]
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    A_ub = sparse.hstack([-sparse.eye(n), np.ones((n, 1))])
    A_eq = np.hstack([B, np.zeros((B.shape[0], 1))])
    cap = mass / (grid.hi - grid.lo)
    res = optimize.linprog(cost, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=b,
                           bounds=[(0, None)] * n + [(0, cap)], method="highs")
    if res.status == 2:
        return False, None
    if res.status != 0 or not res.x[-1] > 0:
        return True, None
    return True, np.maximum(res.x[:-1], res.x[-1])


def _continuation(f, B, b, eps, w, budget, mu=1e-3, mu_min=1e-13):
    """Barrier continuation ``mu -> mu / 10``; returns ``(f, iters, ok)``."""
    iterations = 0
    while iterations < budget:
        f, it, ok = _barrier_stage(f, B, b, eps, mu, w, budget - iterations)
        iterations += it
        if not ok or mu <= mu_min:
            return f, iterations, ok
        mu = max(mu * 0.1, mu_min)
    return f, iterations, False


def maxent_close(u, grid, epsilon=1e-8, max_iter=500, strict=True):
    """Discrete regularized maximum-entropy closure.

    Maximizes the trapezoid sum of ``-f log(f + epsilon)`` over nonnegative
    grid values subject to trapezoid moments ``u_0..u_M`` and returns the
    trapezoid moment of order ``M + 1`` of the optimum.

    The solver is a primal log-barrier method: for a decreasing barrier
    weight ``mu`` an infeasible-start Newton iteration is run on the KKT
    system of ``sum_i w_i (f_i log(f_i + eps) - mu log f_i)`` under the
    linear equality constraints.  The Hessian is diagonal, so each step costs
    one ``(M+1) x (M+1)`` SPD solve.  The first attempt starts from a
    Maxwellian; if it stalls within half the iteration budget, an LP supplies
    a strictly positive feasible start for the remaining budget.

    Returns
    -------
    result : ClosureResult
    solution : MaxEntSolution

    Raises
    ------
    InfeasibleError
        If no nonnegative grid function matches the moments (certified by
        the LP after the Maxwellian start fails).
    NotConvergedError
        If ``strict`` and the iteration cap is hit; the partial solution is
        attached to the exception.
    """
    u = as_moments(u)
    M = len(u) - 1
    B, b = _scaled_constraints(grid, u)
    w = grid.weights
    tol = 1e-8 * np.maximum(1.0, np.abs(u))

    def residuals(f):
        return discrete_moments(grid, f, M) - u

    f, iterations, ok = _continuation(_initial_guess(grid, u), B, b, epsilon, w,
                                      max_iter // 2)
    converged = ok and bool(np.all(np.abs(residuals(f)) <= tol))
    if not converged:
        feasible, start = _interior_point(B, b, grid, u[0])
        if not feasible:
            raise InfeasibleError("no nonnegative grid function matches the moments")
        if start is not None:
            f2, it, ok = _continuation(start, B, b, epsilon, w, max_iter - iterations)
            iterations += it
            converged = ok and bool(np.all(np.abs(residuals(f2)) <= tol))
            if converged or np.max(np.abs(residuals(f2))) < np.max(np.abs(residuals(f))):
                f = f2

    res = residuals(f)
    sol = MaxEntSolution(
        grid=grid,
        f_values=f,
        constraint_residuals=res,
        entropy=_entropy(f, epsilon, w),
        converged=converged,
        iterations=iterations,
    )
    if not converged:
        if strict:
            raise NotConvergedError(
                f"maximum entropy solver stopped after {iterations} iterations "
                f"(max residual ratio {np.max(np.abs(res) / tol):.3e})", solution=sol)
        logger.info("maxent not converged after %d iterations", iterations)
    u_next = float(discrete_moments(grid, f, M + 1)[-1])
    result = ClosureResult(u_next=u_next, chi_used=None,
                           diagnostics={"iterations": iterations, "converged": converged})
    return result, sol


def _initial_guess(grid, u):
    """Maxwellian with the frame of ``u`` (broadened if degenerate), mass matched."""
    c = grid.nodes
    rho, v, theta = frame_of(u) if len(u) > 2 else (u[0], 0.0, 1.0)
    if len(u) == 2:
        v = u[1] / u[0]
    width = 0.5 * (grid.hi - grid.lo)
    if not theta > 0:
        theta = (0.25 * width) ** 2
    theta = max(theta, (4 * grid.spacing) ** 2)
    v = min(max(v, grid.lo), grid.hi)
    f = np.exp(-0.5 * (c - v) ** 2 / theta) + 1e-6
    return f * (rho / np.dot(f, grid.weights))


def _barrier_stage(f, B, b, eps, mu, w, budget, tol=1e-16):
    """Newton iterations for one barrier weight; returns ``(f, iters, ok)``.

    Stops when the constraints hold and the Newton decrement is below ``tol``.
    """
    it = 0
    while it < budget:
        it += 1
        fe = f + eps
        grad = w * (np.log(fe) + f / fe - mu / f)
        hess = w * (1.0 / fe + eps / fe ** 2 + mu / f ** 2)
        r_p = B @ f - b
        hinv = 1.0 / hess
        S = (B * hinv) @ B.T
        rhs = -(B @ (hinv * grad)) + r_p
        try:
            nu = linalg.cho_solve(linalg.cho_factor(S), rhs)
        except linalg.LinAlgError:
            nu = np.linalg.lstsq(S, rhs, rcond=None)[0]
        r_d = grad + B.T @ nu
        step = -hinv * r_d

        # keep f strictly positive
        neg = step < 0
        t = 1.0
        if np.any(neg):
            t = min(1.0, 0.99 * np.min(-f[neg] / step[neg]))

        decrement = float(np.dot(step * hess, step))
        norm0 = np.hypot(np.linalg.norm(r_d), np.linalg.norm(r_p))
        feasible = np.linalg.norm(r_p) <= 1e-13 * max(1.0, np.linalg.norm(b))
        if feasible and decrement < tol:
            return f, it, True

        # backtracking on the KKT residual norm
        while True:
            fn = f + t * step
            fne = fn + eps
            gn = w * (np.log(fne) + fn / fne - mu / fn)
            rn_d = gn + B.T @ nu
            rn_p = B @ fn - b
            if np.hypot(np.linalg.norm(rn_d), np.linalg.norm(rn_p)) <= (1 - 0.01 * t) * norm0:
                break
            t *= 0.5
            if t < 1e-12:
                return f, it, feasible and decrement < 1e-8
        f = fn
    return f, it, False
