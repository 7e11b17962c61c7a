"""scikit-learn compatible wrappers.

Each row of ``X`` is one grid function (or one load vector); the operators
act row-wise, so the estimators drop into pipelines and grid searches.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, validate_data

from .exprlang import parse
from .fracops import frac_diff_matrix, frac_sum_matrix
from .green import check_b, check_order, cone_window, green_max_closed_form, green_table, lambda_constant
from .lyapunov import certify, eigen_exclusion, interior_operator
from .solver import ProblemSpec, solve_picard


class FractionalSum(TransformerMixin, BaseEstimator):
    """Row-wise discrete fractional sum of order ``order``.

    A row of length ``L`` on ``N_a`` maps to a row of length ``L`` on
    ``N_{a+order}``.
    """

    def __init__(self, order: float = 0.5):
        self.order = order

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=float)
        if not self.order > 0:
            raise ValueError(f"order must be > 0, got {self.order!r}")
        self.matrix_ = frac_sum_matrix(self.order, X.shape[1])
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = validate_data(self, X, dtype=float, reset=False)
        return X @ self.matrix_.T


class FractionalDifference(TransformerMixin, BaseEstimator):
    """Row-wise discrete fractional difference of order ``order`` in ``(0, 2]``.

    Output rows are ``ceil(order)`` entries shorter than the input.
    """

    def __init__(self, order: float = 1.5):
        self.order = order

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=float)
        self.matrix_ = frac_diff_matrix(self.order, X.shape[1])
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = validate_data(self, X, dtype=float, reset=False)
        return X @ self.matrix_.T


class GreenSolver(TransformerMixin, BaseEstimator):
    """Linear solve via the Green's function: loads -> interior solution values.

    ``transform`` maps a load ``h(s + alpha - 1)``, ``s = 0 .. b+1`` to
    ``y(alpha - 1 + k)``, ``k = 0 .. b+1``; ``inverse_transform`` applies
    ``-Delta^alpha`` and recovers the load.
    """

    def __init__(self, alpha: float = 1.5, b: int = 3):
        self.alpha = alpha
        self.b = b

    def fit(self, X=None, y=None):
        alpha, b = check_order(self.alpha), check_b(self.b)
        table = green_table(alpha, b)
        self.table_ = table
        self.green_ = np.asarray(table.values)
        self.max_green_ = green_max_closed_form(alpha, b)
        self.lambda_ = lambda_constant(alpha, b, table)
        self.window_ = cone_window(alpha, b)
        self.exclusion_radius_ = eigen_exclusion(alpha, b)
        self.n_features_in_ = b + 2
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=float)
        self._check_width(X)
        return X @ self.green_.T

    def inverse_transform(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=float)
        self._check_width(X)
        return X @ interior_operator(self.alpha, self.b).T

    def _check_width(self, X):
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")


class PicardSolver(BaseEstimator):
    """Fixed-point solver for ``Delta^alpha y + q(t+alpha-1) f(y(t+alpha-1)) = 0``.

    ``q`` and ``f`` are expression strings in ``t`` and ``y``. ``fit`` ignores
    its arguments and stores the solution in ``y_`` (full grid, boundary
    included).
    """

    def __init__(self, alpha=1.5, b=3, q="t", f="y", tol=1e-12, max_iter=100_000, damping=1.0):
        self.alpha = alpha
        self.b = b
        self.q = q
        self.f = f
        self.tol = tol
        self.max_iter = max_iter
        self.damping = damping

    def _problem(self) -> ProblemSpec:
        return ProblemSpec(self.alpha, self.b, parse(self.q, "t"), parse(self.f, "y"))

    def fit(self, X=None, y=None):
        self.problem_ = self._problem()
        sol = solve_picard(self.problem_, tol=self.tol, max_iter=self.max_iter, damping=self.damping)
        self.solution_ = sol
        self.y_ = np.asarray(sol.y.values)
        self.t_ = sol.y.points
        self.eta_ = sol.eta
        self.residual_ = sol.residual_sup
        self.n_iter_ = sol.iterations
        self.converged_ = sol.converged
        return self

    def predict(self, X=None):
        """Solution values on the full grid ``t = alpha - 2 .. alpha + b + 1``."""
        check_is_fitted(self)
        return self.y_.copy()

    def certify(self, theorem="th3_4", **kwargs):
        """Lyapunov certificate for the fitted problem; ``eta`` defaults to ``eta_``."""
        check_is_fitted(self)
        if theorem == "th3_4":
            kwargs.setdefault("eta", self.eta_)
        return certify(self.problem_, theorem, **kwargs)
