"""Shifted integer grids and discrete fractional sums/differences.

Both operators are finite lower-triangular linear maps, so each has an
explicit coefficient-matrix form (``*_matrix``) alongside the function form.
The matrices are what the direct linear-system oracle is assembled from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError, GridLengthError
from .specfun import falling_power


@dataclass(frozen=True)
class ShiftedGrid:
    """The first ``length`` points of ``N_a = {a, a+1, a+2, ...}``."""

    offset: float
    length: int

    def __post_init__(self):
        if int(self.length) != self.length or self.length < 1:
            raise GridLengthError(f"grid length must be a positive integer, got {self.length!r}")
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "length", int(self.length))

    def point(self, k: int) -> float:
        if not 0 <= k < self.length:
            raise IndexError(k)
        return self.offset + k

    @property
    def points(self) -> np.ndarray:
        return self.offset + np.arange(self.length, dtype=float)


@dataclass(frozen=True)
class GridFunction:
    """Real values attached to the points of a :class:`ShiftedGrid`."""

    grid: ShiftedGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float).reshape(-1)
        if values.shape[0] != self.grid.length:
            raise GridLengthError(
                f"{values.shape[0]} values for a grid of length {self.grid.length}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def on(cls, offset: float, values) -> GridFunction:
        """Build a grid function on ``N_offset`` from a sequence of values."""
        values = np.asarray(values, dtype=float).reshape(-1)
        return cls(ShiftedGrid(offset, values.shape[0]), values)

    @property
    def offset(self) -> float:
        return self.grid.offset

    @property
    def points(self) -> np.ndarray:
        return self.grid.points

    def __len__(self) -> int:
        return self.grid.length

    def __add__(self, other: GridFunction) -> GridFunction:
        _check_same_grid(self, other)
        return GridFunction(self.grid, self.values + other.values)

    def __mul__(self, c: float) -> GridFunction:
        return GridFunction(self.grid, float(c) * self.values)

    __rmul__ = __mul__


def _check_same_grid(f: GridFunction, g: GridFunction) -> None:
    if f.grid.length != g.grid.length or not math.isclose(
        f.grid.offset, g.grid.offset, abs_tol=1e-12
    ):
        raise DomainError("grid functions live on different grids")


def diff_matrix(n: int, length: int) -> np.ndarray:
    """Matrix of the ``n``-th forward difference, shape ``(length - n, length)``."""
    if n < 0 or length < n + 1:
        raise GridLengthError(f"forward difference of order {n} needs length >= {n + 1}")
    return np.diff(np.eye(length), n=n, axis=0)


def frac_sum_matrix(nu: float, length: int) -> np.ndarray:
    """Coefficients of the order-``nu`` fractional sum, shape ``(length, length)``.

    Row ``m`` is the output point ``a + nu + m``; column ``k`` the input point
    ``a + k``. The weights depend only on ``m - k``, never on the offset.
    ``nu == 0`` is the identity.
    """
    nu = float(nu)
    if nu < 0.0:
        raise DomainError(f"fractional sum order must be >= 0, got {nu!r}")
    if nu == 0.0:
        return np.eye(length)
    inv_gamma = 1.0 / math.gamma(nu)
    weights = np.array(
        [falling_power(nu + d - 1.0, nu - 1.0) * inv_gamma for d in range(length)]
    )
    out = np.zeros((length, length))
    for m in range(length):
        out[m, : m + 1] = weights[m::-1]
    return out


def _diff_order(alpha: float) -> int:
    alpha = float(alpha)
    if not 0.0 < alpha <= 2.0:
        raise DomainError(f"fractional difference order must lie in (0, 2], got {alpha!r}")
    return math.ceil(alpha)


def frac_diff_matrix(alpha: float, length: int) -> np.ndarray:
    """Coefficients of the order-``alpha`` fractional difference.

    Shape ``(length - n, length)`` with ``n = ceil(alpha)``; row ``m`` is the
    output point ``a + n - alpha + m``.
    """
    n = _diff_order(alpha)
    if length < n + 1:
        raise GridLengthError(f"order-{alpha} difference needs at least {n + 1} points")
    return diff_matrix(n, length) @ frac_sum_matrix(n - float(alpha), length)


def forward_diff(f: GridFunction, n: int = 1) -> GridFunction:
    """``n``-th forward difference; the offset is kept, the length drops by ``n``."""
    if int(n) != n or n < 1:
        raise DomainError(f"difference order must be a positive integer, got {n!r}")
    if len(f) < n + 1:
        raise GridLengthError(f"order-{n} difference needs at least {n + 1} points, got {len(f)}")
    return GridFunction.on(f.offset, np.diff(f.values, n=int(n)))


def frac_sum(f: GridFunction, nu: float) -> GridFunction:
    """Fractional sum of order ``nu > 0``; maps ``N_a`` onto ``N_{a+nu}``."""
    nu = float(nu)
    if not nu > 0.0:
        raise DomainError(f"fractional sum order must be > 0, got {nu!r}")
    w = frac_sum_matrix(nu, len(f))
    values = f.values
    out = np.empty(len(f))
    # accumulate left to right, as a running sum would
    for m in range(len(f)):
        acc = 0.0
        for k in range(m + 1):
            acc += w[m, k] * values[k]
        out[m] = acc
    return GridFunction.on(f.offset + nu, out)


def frac_diff(f: GridFunction, alpha: float) -> GridFunction:
    """Fractional difference of order ``alpha`` in ``(0, 2]``.

    Computed as the ``n``-th forward difference of the ``(n - alpha)``-order
    sum, ``n = ceil(alpha)``; the result lives on ``N_{a+n-alpha}``.
    """
    n = _diff_order(alpha)
    if len(f) < n + 1:
        raise GridLengthError(f"order-{alpha} difference needs at least {n + 1} points")
    values = frac_diff_matrix(alpha, len(f)) @ f.values
    return GridFunction.on(f.offset + n - float(alpha), values)
