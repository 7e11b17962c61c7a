"""Green's function of the two-point discrete fractional problem.

Rows are indexed by ``k`` with ``t = alpha - 1 + k`` (``k = 0 .. b+1``),
columns by the integer ``s = 0 .. b+1``. All branching happens on integer
indices so no grid point is misclassified by rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, EmptyWindowError, GridIndexError, InvariantViolation
from .specfun import falling_power, ln_gamma

# slack used when snapping window endpoints onto the grid
_SNAP = 1e-9


def check_order(alpha: float) -> float:
    alpha = float(alpha)
    if not (1.0 < alpha <= 2.0):
        raise DomainError("alpha must be in (1,2]")
    return alpha


def check_b(b: int) -> int:
    if isinstance(b, bool) or int(b) != b or b < 2:
        raise DomainError("b must be an integer >= 2")
    return int(b)


@dataclass(frozen=True)
class ConeWindow:
    """Central window ``[(b+alpha)/4, 3(b+alpha)/4]`` intersected with ``N_{alpha-1}``.

    ``grid_indices`` are row indices ``k`` (``t = alpha - 1 + k``).
    """

    alpha: float
    b: int
    lower: float
    upper: float
    grid_indices: tuple[int, ...]

    @property
    def points(self) -> np.ndarray:
        return self.alpha - 1.0 + np.asarray(self.grid_indices, dtype=float)


def cone_window(alpha: float, b: int) -> ConeWindow:
    alpha, b = check_order(alpha), check_b(b)
    lower = (b + alpha) / 4.0
    upper = 3.0 * (b + alpha) / 4.0
    k_lo = max(0, math.ceil(lower - (alpha - 1.0) - _SNAP))
    k_hi = min(b + 1, math.floor(upper - (alpha - 1.0) + _SNAP))
    indices = tuple(range(k_lo, k_hi + 1))
    if not indices:
        raise EmptyWindowError(f"no grid point in [{lower}, {upper}] for alpha={alpha}, b={b}")
    return ConeWindow(alpha, b, lower, upper, indices)


def integer_window(alpha: float, b: int) -> tuple[int, ...]:
    """Integers ``s`` in ``[(b+alpha)/4, 3(b+alpha)/4]`` clipped to ``0 .. b+1``."""
    alpha, b = check_order(alpha), check_b(b)
    s_lo = max(0, math.ceil((b + alpha) / 4.0 - _SNAP))
    s_hi = min(b + 1, math.floor(3.0 * (b + alpha) / 4.0 + _SNAP))
    indices = tuple(range(s_lo, s_hi + 1))
    if not indices:
        raise EmptyWindowError(f"no integer s in the window for alpha={alpha}, b={b}")
    return indices


def green_value(alpha: float, b: int, k: int, s: int) -> float:
    """``G(alpha - 1 + k, s)``.

    ``k`` may also be ``-1`` or ``b + 2`` (the boundary points ``alpha - 2``
    and ``alpha + b + 1``), where the kernel vanishes.
    """
    alpha, b = check_order(alpha), check_b(b)
    if not -1 <= k <= b + 2:
        raise GridIndexError(f"row index k={k} outside -1..{b + 2}")
    if not 0 <= s <= b + 1:
        raise GridIndexError(f"column index s={s} outside 0..{b + 1}")
    t = alpha - 1.0 + k
    value = (
        falling_power(t, alpha - 1.0)
        * falling_power(alpha + b - s, alpha - 1.0)
        / falling_power(alpha + b + 1.0, alpha - 1.0)
    )
    # s < t - alpha + 1  <=>  s <= k - 1
    if s <= k - 1:
        value -= falling_power(t - s - 1.0, alpha - 1.0)
    return value / math.gamma(alpha)


@dataclass(frozen=True)
class GreenTable:
    """Dense ``(b+2) x (b+2)`` table of ``G(t, s)``."""

    alpha: float
    b: int
    values: np.ndarray = field(repr=False)

    @property
    def t(self) -> np.ndarray:
        return self.alpha - 1.0 + np.arange(self.b + 2, dtype=float)

    @property
    def s(self) -> np.ndarray:
        return np.arange(self.b + 2)

    @property
    def diagonal(self) -> np.ndarray:
        """``G(s + alpha - 1, s)`` for ``s = 0 .. b+1``."""
        return np.diag(self.values).copy()

    def argmax(self) -> tuple[float, int, float]:
        """``(t, s, value)`` of the largest entry."""
        k, s = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.t[k]), int(s), float(self.values[k, s])


def _green_matrix(alpha: float, b: int) -> np.ndarray:
    n = b + 2
    return np.array([[green_value(alpha, b, k, s) for s in range(n)] for k in range(n)])


def check_table_invariants(values: np.ndarray, rel_margin: float = 1e-12) -> None:
    """Positivity and unique diagonal column maxima; raise on violation."""
    if not np.all(values > 0.0):
        raise InvariantViolation("Green table has a nonpositive entry")
    scale = float(values.max())
    for s in range(values.shape[1]):
        column = values[:, s]
        others = np.delete(column, s)
        if not np.all(column[s] - others >= rel_margin * scale):
            raise InvariantViolation(f"column {s} maximum is not uniquely on the diagonal")


def green_table(alpha: float, b: int) -> GreenTable:
    alpha, b = check_order(alpha), check_b(b)
    values = _green_matrix(alpha, b)
    check_table_invariants(values)
    values.setflags(write=False)
    return GreenTable(alpha, b, values)


def green_max_closed_form(alpha: float, b: int) -> float:
    """Closed-form maximum of the diagonal ``G(s + alpha - 1, s)``."""
    alpha, b = check_order(alpha), check_b(b)
    if b % 2 == 0:
        log_v = (
            2.0 * ln_gamma(b / 2 + alpha)
            + ln_gamma(b + 3)
            - ln_gamma(alpha)
            - ln_gamma(b + alpha + 2)
            - 2.0 * ln_gamma(b / 2 + 2)
        )
        return 0.25 * (b + 2 * alpha) * (b + 2) * math.exp(log_v)
    log_v = (
        ln_gamma(b + 3)
        + 2.0 * ln_gamma((b + 1) / 2 + alpha)
        - ln_gamma(alpha)
        - ln_gamma(b + alpha + 2)
        - 2.0 * ln_gamma((b + 3) / 2)
    )
    return math.exp(log_v)


def lambda_constant(alpha: float, b: int, table: GreenTable | None = None) -> float:
    """Cone constant: the tightest ``lambda`` with
    ``min_window G(t, s) >= lambda * G(s + alpha - 1, s)`` for ``s = 1 .. b+1``.
    """
    alpha, b = check_order(alpha), check_b(b)
    window = cone_window(alpha, b)
    g = (table if table is not None else green_table(alpha, b)).values
    rows = list(window.grid_indices)
    ratios = [g[rows, s].min() / g[s, s] for s in range(1, b + 2)]
    lam = float(min(ratios))
    if not 0.0 < lam < 1.0:
        raise InvariantViolation(f"lambda={lam} outside (0, 1)")
    return lam
