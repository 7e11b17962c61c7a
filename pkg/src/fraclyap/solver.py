"""Fixed-point solution of the nonlinear problem and the direct linear oracle.

The problem on ``N_{alpha-2}`` is::

    Delta^alpha y(t) + q(t + alpha - 1) f(y(t + alpha - 1)) = 0,  t = 0 .. b+1
    y(alpha - 2) = y(alpha + b + 1) = 0

A solution is stored as a :class:`GridFunction` of length ``b + 4``; index
``j`` holds ``y(alpha - 2 + j)``, so the interior ``t = alpha - 1 + k`` is
index ``k + 1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, EmptyWindowError, IterationError, SingularSystemError
from .exprlang import EvalError, Parsed, parse
from .fracops import GridFunction, frac_diff, frac_diff_matrix
from .green import ConeWindow, GreenTable, check_b, check_order, green_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProblemSpec:
    """``(alpha, b, q, f)`` with optional existence radii ``r1 < r2``."""

    alpha: float
    b: int
    q: Parsed
    f: Parsed
    r1: float | None = None
    r2: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_order(self.alpha))
        object.__setattr__(self, "b", check_b(self.b))
        if isinstance(self.q, str):
            object.__setattr__(self, "q", parse(self.q, "t"))
        if isinstance(self.f, str):
            object.__setattr__(self, "f", parse(self.f, "y"))
        if self.q.var_name != "t":
            raise DomainError("q must be an expression in t")
        if self.f.var_name != "y":
            raise DomainError("f must be an expression in y")
        if (self.r1 is None) != (self.r2 is None):
            raise DomainError("r1 and r2 must be given together")
        if self.r1 is not None and not 0.0 < self.r1 < self.r2:
            raise DomainError("need 0 < r1 < r2")

    @property
    def load_points(self) -> np.ndarray:
        """``s + alpha - 1`` for ``s = 0 .. b+1``."""
        return self.alpha - 1.0 + np.arange(self.b + 2, dtype=float)

    def q_values(self) -> np.ndarray:
        out = np.empty(self.b + 2)
        for s, t in enumerate(self.load_points):
            try:
                out[s] = self.q(t)
            except EvalError as exc:
                raise EvalError(f"q({t}) at s={s}: {exc}") from None
        return out

    def f_values(self, y_interior: np.ndarray) -> np.ndarray:
        out = np.empty(len(y_interior))
        for s, y in enumerate(y_interior):
            try:
                out[s] = self.f(y)
            except EvalError as exc:
                raise EvalError(f"f({y}) at s={s}: {exc}") from None
        return out

    def zero(self) -> GridFunction:
        return GridFunction.on(self.alpha - 2.0, np.zeros(self.b + 4))


@dataclass(frozen=True)
class Solution:
    y: GridFunction
    eta: float
    residual_sup: float
    iterations: int
    converged: bool
    monotone: bool
    iterates: tuple[np.ndarray, ...] = field(default=(), repr=False)

    @property
    def interior(self) -> np.ndarray:
        return self.y.values[1:-1]

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.interior)))


def _interior(y: GridFunction, b: int) -> np.ndarray:
    if len(y) == b + 4:
        return y.values[1:-1]
    if len(y) == b + 2:
        return y.values
    raise DomainError(f"expected a grid function of length {b + 4} or {b + 2}, got {len(y)}")


def apply_T(p: ProblemSpec, y: GridFunction, table: GreenTable | None = None) -> GridFunction:
    """Summation operator ``(Ty)(t) = sum_s G(t, s) q(s+alpha-1) f(y(s+alpha-1))``."""
    g = (table if table is not None else green_table(p.alpha, p.b)).values
    load = p.q_values() * p.f_values(_interior(y, p.b))
    out = np.zeros(p.b + 4)
    out[1:-1] = g @ load
    return GridFunction.on(p.alpha - 2.0, out)


def solve_picard(
    p: ProblemSpec,
    tol: float = 1e-12,
    max_iter: int = 100_000,
    y0: GridFunction | None = None,
    damping: float = 1.0,
    keep_iterates: bool = False,
) -> Solution:
    """Iterate ``y <- (1 - damping) y + damping T y`` until the sup-norm step is below ``tol``.

    Non-convergence is reported through ``converged=False``; NaN or overflow
    raises :class:`IterationError`.
    """
    if not 0.0 < damping <= 1.0:
        raise DomainError(f"damping must lie in (0, 1], got {damping!r}")
    if max_iter < 1:
        raise DomainError("max_iter must be >= 1")
    table = green_table(p.alpha, p.b)
    q = p.q_values()
    y = (y0 if y0 is not None else p.zero()).values[1:-1].copy()
    if y.shape[0] != p.b + 2:
        raise DomainError("initial guess has the wrong length")
    iterates = [y.copy()] if keep_iterates else []
    monotone = True
    converged = False
    it = 0
    with np.errstate(over="raise", invalid="raise"):
        while it < max_iter:
            it += 1
            try:
                ty = table.values @ (q * p.f_values(y))
                y_new = (1.0 - damping) * y + damping * ty
            except FloatingPointError as exc:
                raise IterationError(f"iteration {it}: {exc}") from None
            if not np.all(np.isfinite(y_new)):
                raise IterationError(f"iteration {it} produced a non-finite value")
            step = float(np.max(np.abs(y_new - y)))
            if np.any(y_new < y):
                monotone = False
            y = y_new
            if keep_iterates:
                iterates.append(y.copy())
            if step < tol:
                converged = True
                break
    if not converged:
        logger.warning("Picard iteration stopped after %d steps without converging", it)
    full = np.zeros(p.b + 4)
    full[1:-1] = y
    sol_y = GridFunction.on(p.alpha - 2.0, full)
    return Solution(
        y=sol_y,
        eta=float(np.max(y)),
        residual_sup=residual(p, sol_y),
        iterations=it,
        converged=converged,
        monotone=monotone,
        iterates=tuple(iterates),
    )


def assemble_system(alpha: float, b: int) -> np.ndarray:
    """``(b+4) x (b+4)`` matrix: two boundary rows, then ``Delta^alpha`` at ``t = 0 .. b+1``."""
    alpha, b = check_order(alpha), check_b(b)
    n = b + 4
    a = np.zeros((n, n))
    a[0, 0] = 1.0
    a[1, n - 1] = 1.0
    a[2:, :] = frac_diff_matrix(alpha, n)
    return a


def solve_linear_direct(alpha: float, b: int, h) -> GridFunction:
    """Solve ``Delta^alpha y = -h(t + alpha - 1)`` with zero boundary values directly.

    ``h`` holds the load at ``s + alpha - 1`` for ``s = 0 .. b+1`` (a
    :class:`GridFunction` on ``N_{alpha-1}`` or a plain sequence).
    """
    alpha, b = check_order(alpha), check_b(b)
    load = h.values if isinstance(h, GridFunction) else np.asarray(h, dtype=float)
    if load.shape != (b + 2,):
        raise DomainError(f"load must have {b + 2} values, got shape {load.shape}")
    a = assemble_system(alpha, b)
    rhs = np.zeros(b + 4)
    rhs[2:] = -load
    if np.linalg.cond(a) > 1e12:
        raise SingularSystemError(f"system for alpha={alpha}, b={b} is singular")
    return GridFunction.on(alpha - 2.0, np.linalg.solve(a, rhs))


def residual(p: ProblemSpec, y: GridFunction) -> float:
    """``sup_t |Delta^alpha y(t) + q(t+alpha-1) f(y(t+alpha-1))|`` over ``t = 0 .. b+1``."""
    if len(y) != p.b + 4:
        raise DomainError(f"residual needs the full grid of length {p.b + 4}")
    return float(np.max(np.abs(residual_terms(p, y))))


def residual_terms(p: ProblemSpec, y: GridFunction) -> np.ndarray:
    lhs = frac_diff(y, p.alpha).values
    return lhs + p.q_values() * p.f_values(y.values[1:-1])


def cone_check(y: GridFunction, lam: float, window: ConeWindow, rel_slack: float = 1e-12) -> bool:
    """Membership in the cone: ``min_window y >= lam * ||y||`` (sup over the interior).

    ``rel_slack`` (relative to ``||y||``) absorbs the rounding in a tight ``lam``.
    """
    interior = _interior(y, window.b)
    if not window.grid_indices:
        raise EmptyWindowError("cone window is empty")
    window_min = float(np.min(interior[list(window.grid_indices)]))
    norm = float(np.max(np.abs(interior)))
    return window_min >= lam * norm - rel_slack * norm


def green_solution(table: GreenTable, h) -> GridFunction:
    """``y(t) = sum_s G(t, s) h(s)`` on the full grid (zero at both boundary points)."""
    load = h.values if isinstance(h, GridFunction) else np.asarray(h, dtype=float)
    out = np.zeros(table.b + 4)
    out[1:-1] = table.values @ load
    return GridFunction.on(table.alpha - 2.0, out)


def linear_operator_norm(p: ProblemSpec) -> float:
    """``||G diag(q)||_inf``; Picard on ``f(y) = y`` contracts when this is < 1."""
    g = green_table(p.alpha, p.b).values
    return float(np.max(np.sum(np.abs(g * p.q_values()[None, :]), axis=1)))

