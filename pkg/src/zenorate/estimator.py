"""scikit-learn style wrappers around the rate calculations.

The physical parameters are estimator hyper-parameters, so ``get_params`` /
``set_params`` / ``clone`` and ``Pipeline`` composition work as usual. Inputs
are total measurement times, one per sample.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .quadrature import QuadratureConfig
from .response import PhysicalParams
from .zeno import Regime, classify, sweep, transition_time

__all__ = ["check_times", "ZenoRateTransformer", "CrossoverEstimator"]


def check_times(X):
    """Validate an array of total times and return it as a flat float array.

    Accepts a 1-d sequence or an ``(n_samples, 1)`` array. Times must be
    finite and non-negative.
    """
    arr = check_array(X, ensure_2d=False, dtype=np.float64, ensure_all_finite=True)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected a single time column, got shape {arr.shape}")
        arr = arr[:, 0]
    if np.any(arr < 0):
        raise ValueError("times must be non-negative")
    return arr


class _PhysicsParamsMixin:
    def _make_params(self):
        return PhysicalParams(gamma=self.gamma, mass=self.mass, hbar=self.hbar,
                              sigma_sq=self.sigma_sq, temperature=0.0)

    def _make_config(self):
        return QuadratureConfig(rel_tol=self.rel_tol)

    def _check_n(self):
        n = self.n_measurements
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise ValueError(f"n_measurements must be a positive integer, got {n!r}")
        return int(n)


class ZenoRateTransformer(_PhysicsParamsMixin, TransformerMixin, BaseEstimator):
    """Map total times to ``[R(t), R(t/n)^n, R(t/n)^n - R(t)]``.

    Nothing is learned from data: ``fit`` validates the hyper-parameters and
    freezes them into ``params_`` and ``config_``.

    Parameters
    ----------
    gamma : float
        Ohmic friction rate.
    n_measurements : int
        Number of measurements in the repeated protocol.
    mass, hbar, sigma_sq : float
        Particle mass, Planck constant and initial packet variance.
    rel_tol : float
        Relative tolerance of the underlying integrals.

    Examples
    --------
    >>> import numpy as np
    >>> Xt = ZenoRateTransformer(gamma=0.1, n_measurements=20).fit_transform(np.array([[0.0], [2.0]]))
    >>> Xt.shape
    (2, 3)
    """

    def __init__(self, gamma=0.1, n_measurements=20, mass=1.0, hbar=1.0, sigma_sq=1.0, rel_tol=1e-10):
        self.gamma = gamma
        self.n_measurements = n_measurements
        self.mass = mass
        self.hbar = hbar
        self.sigma_sq = sigma_sq
        self.rel_tol = rel_tol

    def fit(self, X=None, y=None):
        if X is not None:
            check_times(X)
        self.params_ = self._make_params()
        self.config_ = self._make_config()
        self.n_ = self._check_n()
        self.n_features_in_ = 1
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        ts = check_times(X)
        out = np.empty((ts.size, 3))
        if ts.size == 0:
            return out
        order = np.argsort(ts, kind="stable")
        uniq, inverse = np.unique(ts[order], return_inverse=True)
        points = sweep(uniq, self.n_, self.params_, self.config_)
        single = np.array([pt.r_single for pt in points])[inverse]
        repeated = np.array([pt.r_repeated for pt in points])[inverse]
        out[order, 0] = single
        out[order, 1] = repeated
        out[order, 2] = repeated - single
        return out

    def get_feature_names_out(self, input_features=None):
        return np.array(["r_single", "r_repeated", "delta"], dtype=object)


class CrossoverEstimator(_PhysicsParamsMixin, BaseEstimator):
    """Find the Zeno/anti-Zeno crossover time and classify times by regime.

    ``fit`` solves for the crossover on ``search_window`` and stores
    ``t_star_``, ``gamma_t_star_`` and the full ``result_``. ``predict``
    labels each time ``ZENO``, ``ANTI_ZENO`` or ``NEUTRAL`` by direct
    evaluation of both rates.
    """

    def __init__(self, gamma=0.1, n_measurements=20, mass=1.0, hbar=1.0, sigma_sq=1.0,
                 rel_tol=1e-10, search_window=None):
        self.gamma = gamma
        self.n_measurements = n_measurements
        self.mass = mass
        self.hbar = hbar
        self.sigma_sq = sigma_sq
        self.rel_tol = rel_tol
        self.search_window = search_window

    def fit(self, X=None, y=None):
        self.params_ = self._make_params()
        self.config_ = self._make_config()
        self.n_ = self._check_n()
        self.result_ = transition_time(self.n_, self.params_, self.config_, self.search_window)
        self.t_star_ = self.result_.t_star
        self.gamma_t_star_ = self.result_.gamma_t_star
        return self

    def predict(self, X):
        check_is_fitted(self, "result_")
        ts = check_times(X)
        labels = np.empty(ts.size, dtype=object)
        rates = ZenoRateTransformer(self.gamma, self.n_, self.mass, self.hbar, self.sigma_sq,
                                    self.rel_tol).fit().transform(ts)
        for i, (r1, rn, _) in enumerate(rates):
            labels[i] = classify(r1, rn).value
        return labels

    def regime_at(self, t) -> Regime:
        return Regime(self.predict([t])[0])
