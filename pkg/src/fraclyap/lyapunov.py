"""Existence constants, hypothesis checks and Lyapunov-type certificates.

Two flavours of the existence constants are provided:

* ``*_exact`` use the true diagonal Green values ``G(s+alpha-1, s)`` (and, for
  ``gamma_star``, the central integer window of ``s``);
* ``*_paper`` substitute the closed-form maximum for every diagonal value and
  sum over all ``s = 0 .. b+1``. These reproduce the published numbers.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .exceptions import DomainError, ZeroSumError
from .exprlang import Parsed, parse
from .fracops import frac_diff_matrix
from .green import (
    ConeWindow,
    check_b,
    check_order,
    cone_window,
    green_max_closed_form,
    green_table,
    integer_window,
    lambda_constant,
)
from .solver import ProblemSpec
from .specfun import ln_gamma

THEOREMS = ("th3_4", "th3_6")
VARIANTS = ("exact", "paper")


def _as_q(q) -> Callable[[float], float]:
    return parse(q, "t") if isinstance(q, str) else q


def _as_f(f) -> Callable[[float], float]:
    return parse(f, "y") if isinstance(f, str) else f


def _q_on_grid(alpha: float, b: int, q, *, nonnegative: bool = True) -> np.ndarray:
    q = _as_q(q)
    values = np.array([q(alpha - 1.0 + s) for s in range(b + 2)])
    if nonnegative and np.any(values < 0.0):
        raise DomainError("existence constants require q >= 0 on the grid")
    return values


def _reciprocal(total: float, what: str) -> float:
    if not total > 0.0:
        raise ZeroSumError(f"{what}: weighted sum is {total!r}, cannot invert")
    return 1.0 / total


def gamma_exact(alpha: float, b: int, q) -> float:
    """``(sum_s G(s+alpha-1, s) q(s+alpha-1))^-1`` with the true diagonal."""
    alpha, b = check_order(alpha), check_b(b)
    diag = green_table(alpha, b).diagonal
    return _reciprocal(float(diag @ _q_on_grid(alpha, b, q)), "gamma_exact")


def gamma_paper(alpha: float, b: int, q) -> float:
    """``(max G * sum_s q(s+alpha-1))^-1``."""
    alpha, b = check_order(alpha), check_b(b)
    total = green_max_closed_form(alpha, b) * float(_q_on_grid(alpha, b, q).sum())
    return _reciprocal(total, "gamma_paper")


def gamma_star_exact(alpha: float, b: int, q, lam: float) -> float:
    """``(sum_{s in window} lam G(s+alpha-1, s) q(s+alpha-1))^-1``."""
    alpha, b = check_order(alpha), check_b(b)
    window = list(integer_window(alpha, b))
    diag = green_table(alpha, b).diagonal
    qv = _q_on_grid(alpha, b, q)
    return _reciprocal(float(lam * (diag[window] @ qv[window])), "gamma_star_exact")


def gamma_star_paper(alpha: float, b: int, q, lam: float) -> float:
    """``(lam * max G * sum_s q(s+alpha-1))^-1`` over the full range of ``s``."""
    alpha, b = check_order(alpha), check_b(b)
    total = lam * green_max_closed_form(alpha, b) * float(_q_on_grid(alpha, b, q).sum())
    return _reciprocal(total, "gamma_star_paper")


@dataclass(frozen=True)
class ExistenceConstants:
    gamma_exact: float
    gamma_paper: float
    gamma_star_exact: float
    gamma_star_paper: float
    lambda_used: float
    lambda_enumerated: float
    window: ConeWindow
    max_green: float

    def to_dict(self) -> dict:
        out = asdict(self)
        out["window"] = {
            "lower": self.window.lower,
            "upper": self.window.upper,
            "grid_indices": list(self.window.grid_indices),
            "points": [float(t) for t in self.window.points],
        }
        return out


def existence_constants(alpha: float, b: int, q, lam: float | None = None) -> ExistenceConstants:
    """All four constants. ``lam`` defaults to the enumerated cone constant.

    ``gamma_star_exact`` always uses the enumerated constant; ``lam`` only
    feeds ``gamma_star_paper``.
    """
    alpha, b = check_order(alpha), check_b(b)
    lam_enum = lambda_constant(alpha, b)
    lam_used = lam_enum if lam is None else float(lam)
    return ExistenceConstants(
        gamma_exact=gamma_exact(alpha, b, q),
        gamma_paper=gamma_paper(alpha, b, q),
        gamma_star_exact=gamma_star_exact(alpha, b, q, lam_enum),
        gamma_star_paper=gamma_star_paper(alpha, b, q, lam_used),
        lambda_used=lam_used,
        lambda_enumerated=lam_enum,
        window=cone_window(alpha, b),
        max_green=green_max_closed_form(alpha, b),
    )


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    interval: tuple[float, float]
    threshold: float
    witness: float
    witness_at: float
    method: str
    passed: bool


@dataclass(frozen=True)
class HypothesisReport:
    h1: HypothesisCheck
    h2: HypothesisCheck
    caveat: str | None = None

    @property
    def passed(self) -> bool:
        return self.h1.passed and self.h2.passed

    def to_dict(self) -> dict:
        return {
            "h1": asdict(self.h1),
            "h2": asdict(self.h2),
            "passed": self.passed,
            "caveat": self.caveat,
        }


def check_H1_H2(
    f,
    r1: float,
    r2: float,
    gamma: float,
    gamma_star: float,
    f_nondecreasing: bool = False,
    samples: int = 1001,
) -> HypothesisReport:
    """Check ``f >= gamma_star r1`` on ``[0, r1]`` and ``f <= gamma r2`` on ``[0, r2]``.

    For nondecreasing ``f`` the two endpoint evaluations are exact. Otherwise
    ``f`` is sampled at ``samples`` equispaced points per interval, which is a
    heuristic.
    """
    if not 0.0 < r1 < r2:
        raise DomainError("need 0 < r1 < r2")
    f = _as_f(f)
    h1_bound = gamma_star * r1
    h2_bound = gamma * r2
    if f_nondecreasing:
        low_at, high_at = 0.0, r2
        low, high = f(low_at), f(high_at)
        method, caveat = "monotone endpoints", None
    else:
        ys1 = np.linspace(0.0, r1, samples)
        ys2 = np.linspace(0.0, r2, samples)
        f1 = np.array([f(y) for y in ys1])
        f2 = np.array([f(y) for y in ys2])
        low_at, high_at = float(ys1[np.argmin(f1)]), float(ys2[np.argmax(f2)])
        low, high = float(f1.min()), float(f2.max())
        method = f"sampled at {samples} points"
        caveat = "f was sampled, not bounded; the checks are heuristic"
    h1 = HypothesisCheck("H1", (0.0, r1), h1_bound, low, low_at, method, low >= h1_bound)
    h2 = HypothesisCheck("H2", (0.0, r2), h2_bound, high, high_at, method, high <= h2_bound)
    return HypothesisReport(h1, h2, caveat)


def _theorem_constant(alpha: float, b: int) -> float:
    """The gamma-ratio factor shared by both inequalities (``eta / f(eta)`` removed)."""
    alpha, b = check_order(alpha), check_b(b)
    if b % 2 == 0:
        log_v = (
            ln_gamma(alpha)
            + ln_gamma(b + alpha + 2)
            + 2.0 * ln_gamma(b / 2 + 2)
            - 2.0 * ln_gamma(b / 2 + alpha)
            - ln_gamma(b + 3)
        )
        return 4.0 * math.exp(log_v) / ((b + 2 * alpha) * (b + 2))
    log_v = (
        ln_gamma(alpha)
        + ln_gamma(b + alpha + 2)
        + 2.0 * ln_gamma((b + 3) / 2)
        - ln_gamma(b + 3)
        - 2.0 * ln_gamma((b + 1) / 2 + alpha)
    )
    return math.exp(log_v)


def lyapunov_rhs_th0(alpha: float, b: int, eta: float, f) -> float:
    """Right-hand side ``C(alpha, b) * eta / f(eta)`` of the necessary condition."""
    if not eta > 0.0:
        raise DomainError(f"eta must be positive, got {eta!r}")
    f_eta = _as_f(f)(eta)
    if not f_eta > 0.0:
        raise DomainError(f"f(eta) must be positive, got {f_eta!r}")
    return _theorem_constant(alpha, b) * eta / f_eta


def lyapunov_rhs_co(alpha: float, b: int, r1: float, r2: float, gamma: float) -> float:
    """Right-hand side ``r1 / (gamma r2) * C(alpha, b)``."""
    if not 0.0 < r1 < r2:
        raise DomainError("need 0 < r1 < r2")
    if not gamma > 0.0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    return r1 / (gamma * r2) * _theorem_constant(alpha, b)


@dataclass(frozen=True)
class Certificate:
    lhs: float
    rhs: float
    branch: str
    theorem: str
    variant: str
    satisfied: bool

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "branch": self.branch,
            "theorem": self.theorem,
            "variant": self.variant,
            "satisfied": self.satisfied,
        }


def certify(
    p: ProblemSpec,
    theorem: str = "th3_4",
    *,
    eta: float | None = None,
    r1: float | None = None,
    r2: float | None = None,
    gamma: float | None = None,
    variant: str = "exact",
    f_prefactor: float = 1.0,
) -> Certificate:
    """Evaluate ``sum_s |q(s+alpha-1)| > rhs`` for one of the two inequalities.

    ``th3_4`` needs ``eta``; ``th3_6`` needs ``r1 < r2`` (taken from ``p`` when
    omitted) and ``gamma`` (defaults to :func:`gamma_paper`).

    ``variant="paper"`` only matters for ``th3_6``: the right-hand side is
    divided by ``f_prefactor``, i.e. the constant factor of ``f`` is moved
    onto ``q`` while ``gamma`` is kept. For ``th3_4`` that move cancels and
    both variants coincide.
    """
    if theorem not in THEOREMS:
        raise DomainError(f"theorem must be one of {THEOREMS}")
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}")
    lhs = float(np.sum(np.abs(p.q_values())))
    if theorem == "th3_4":
        if eta is None:
            raise DomainError("th3_4 needs eta")
        rhs = lyapunov_rhs_th0(p.alpha, p.b, eta, p.f)
    else:
        r1 = p.r1 if r1 is None else r1
        r2 = p.r2 if r2 is None else r2
        if r1 is None or r2 is None:
            raise DomainError("th3_6 needs r1 and r2")
        if gamma is None:
            gamma = gamma_paper(p.alpha, p.b, p.q)
        rhs = lyapunov_rhs_co(p.alpha, p.b, r1, r2, gamma)
        if variant == "paper":
            if not f_prefactor > 0.0:
                raise DomainError("f_prefactor must be positive")
            rhs /= f_prefactor
    return Certificate(
        lhs=lhs,
        rhs=rhs,
        branch="even" if p.b % 2 == 0 else "odd",
        theorem=theorem,
        variant=variant,
        satisfied=lhs > rhs,
    )


def eigen_exclusion(alpha: float, b: int) -> float:
    """Radius below which no eigenvalue ``mu`` of ``Delta^alpha y + mu y = 0`` can lie."""
    alpha, b = check_order(alpha), check_b(b)
    return _theorem_constant(alpha, b) / (b + 2)


def interior_operator(alpha: float, b: int) -> np.ndarray:
    """``-Delta^alpha`` acting on interior values once the zero boundary columns are dropped.

    Eigenpairs ``(mu, v)`` are the nontrivial solutions of
    ``Delta^alpha y + mu y(t + alpha - 1) = 0``.
    """
    alpha, b = check_order(alpha), check_b(b)
    d = frac_diff_matrix(alpha, b + 4)
    return -d[:, 1:-1]


def interior_spectrum(alpha: float, b: int) -> np.ndarray:
    """Eigenvalues of :func:`interior_operator`, sorted by magnitude."""
    eig = np.linalg.eigvals(interior_operator(alpha, b))
    return eig[np.argsort(np.abs(eig))]


def green_spectrum(alpha: float, b: int) -> np.ndarray:
    """Reciprocals of the eigenvalues of the Green table (independent route)."""
    eig = 1.0 / np.linalg.eigvals(green_table(alpha, b).values)
    return eig[np.argsort(np.abs(eig))]
