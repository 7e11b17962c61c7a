"""Gamma-function helpers and the discrete (falling factorial) power.

``x^[y] = Gamma(x+1) / Gamma(x-y+1)`` is evaluated in the log domain. A pole
of the denominator with a finite numerator yields exactly ``0.0``; this is the
convention that makes the discrete kernels vanish outside their support.
"""

from __future__ import annotations

import math

from .exceptions import DomainError

POLE_TOL = 1e-12


def ln_gamma(x: float) -> float:
    """Return ``log Gamma(x)`` for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def gamma(x: float) -> float:
    """Return ``Gamma(x)`` for ``x > 0``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"gamma requires x > 0, got {x!r}")
    return math.gamma(x)


def is_gamma_pole(x: float, tol: float = POLE_TOL) -> bool:
    """True when ``x`` is a nonpositive integer to within ``tol``."""
    r = round(x)
    return r <= 0 and abs(x - r) < tol


def _gamma_sign(x: float) -> float:
    # sign of Gamma on the negative axis alternates between consecutive poles
    if x > 0.0:
        return 1.0
    return -1.0 if math.floor(-x) % 2 == 0 else 1.0


def falling_power(x: float, y: float) -> float:
    """Discrete power function ``x^[y] = Gamma(x+1) / Gamma(x-y+1)``.

    Only the regime ``x + 1 > 0`` is supported. If ``x - y + 1`` is a pole of
    Gamma the result is ``0.0``.

    >>> round(falling_power(5, 2), 12)
    20.0
    >>> falling_power(1.5, 2.5)
    0.0
    """
    x = float(x)
    y = float(y)
    if not x + 1.0 > 0.0:
        raise DomainError(f"falling_power requires x + 1 > 0, got x={x!r}")
    den = x - y + 1.0
    if is_gamma_pole(den):
        return 0.0
    return _gamma_sign(den) * math.exp(math.lgamma(x + 1.0) - math.lgamma(den))
