"""Survival ratio, repeated-measurement rate and the Zeno/anti-Zeno crossover."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .exceptions import NoCrossoverError, PreconditionError, RangeWarning, SweepError
from .quadrature import DEFAULT_CONFIG, QuadratureConfig
from .response import PhysicalParams, _check_time
from .spreading import EULER_GAMMA, _warn_unconverged, _zeno_integral, mean_sq_velocity

__all__ = [
    "MeasurementSchedule",
    "Regime",
    "RatePoint",
    "CrossoverResult",
    "REGIME_TOL",
    "CROSSOVER_TOL",
    "log_survival_ratio",
    "survival_ratio",
    "repeated_rate",
    "repeated_rate_small_gt",
    "repeated_rate_large_gt",
    "rate_difference",
    "classify",
    "transition_time",
    "sweep",
    "regime_flips",
]

REGIME_TOL = 1e-12
CROSSOVER_TOL = 1e-10


@dataclass(frozen=True)
class MeasurementSchedule:
    """``n`` equally spaced instantaneous measurements within ``total_time``."""

    total_time: float
    n_measurements: int = 1

    def __post_init__(self):
        _check_time(self.total_time)
        n = self.n_measurements
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise ValueError(f"n_measurements must be a positive integer, got {n!r}")
        object.__setattr__(self, "n_measurements", int(n))

    @property
    def interval(self) -> float:
        return self.total_time / self.n_measurements


class Regime(str, enum.Enum):
    ZENO = "ZENO"
    ANTI_ZENO = "ANTI_ZENO"
    NEUTRAL = "NEUTRAL"


@dataclass(frozen=True)
class RatePoint:
    t: float
    r_single: float
    r_repeated: float
    regime: Regime


@dataclass(frozen=True)
class CrossoverResult:
    t_star: float
    gamma_t_star: float
    bracket: tuple[float, float]
    residual: float
    iterations: int
    sign_changes: int = 1
    function_calls: int = 0

    @property
    def multiple_roots(self) -> bool:
        return self.sign_changes > 1


def log_survival_ratio(t: float, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``log R(t, gamma)``, computed as ``-log1p(excess / sigma^2) / 2``.

    ``excess`` is the spreading beyond the initial variance: the commutator
    term ``(hbar^2 / 4 m^2 sigma^2) t^2 ((1 - exp(-gamma t)) / gamma t)^2``
    plus the bath term ``(2 hbar t / pi m) (gamma t) I(gamma t)``.
    """
    t = _check_time(t)
    if t == 0:
        return 0.0
    hbar, m, s2, g = p.hbar, p.mass, p.sigma_sq, p.gamma
    free = hbar * hbar / (4.0 * m * m * s2) * t * t
    if g == 0:
        excess = free
    else:
        x = g * t
        shrink = -math.expm1(-x) / x
        res = _zeno_integral(x, cfg)
        _warn_unconverged(f"I({x!r})", res, stacklevel=4)
        excess = free * shrink * shrink + 2.0 * hbar * t / (math.pi * m) * x * res.value
    return -0.5 * math.log1p(excess / s2)


def survival_ratio(t: float, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Peak-density ratio ``R(t, gamma) = P(0, t) / P(0, 0)``.

    >>> survival_ratio(2.0, PhysicalParams(gamma=0.0))  # doctest: +ELLIPSIS
    0.7071067811865...
    """
    return math.exp(log_survival_ratio(t, p, cfg))


def repeated_rate(s: MeasurementSchedule, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``R(t/n)^n``, evaluated in the log domain so large ``n`` stays finite."""
    return math.exp(s.n_measurements * log_survival_ratio(s.interval, p, cfg))


def repeated_rate_small_gt(s: MeasurementSchedule, p: PhysicalParams) -> float:
    """Short-interval law ``exp(-<v^2> t tau / (2 sigma^2))``.

    The n-th power of ``R(tau) ~ 1 - <v^2> tau^2 / (2 sigma^2)`` with
    ``<v^2>`` taken at ``tau``; tends to 1 as ``tau -> 0`` for fixed ``t``.
    """
    tau = s.interval
    v2 = mean_sq_velocity(tau, p)
    if v2 * tau * tau >= p.sigma_sq:
        warnings.warn("<v^2> tau^2 is not small compared to sigma^2", RangeWarning, stacklevel=2)
    return math.exp(-v2 * s.total_time * tau / (2.0 * p.sigma_sq))


def repeated_rate_large_gt(s: MeasurementSchedule, p: PhysicalParams) -> float:
    """Long-interval law ``exp(-(hbar n / pi m sigma^2 gamma) (log(gamma t / n) + gamma_E))``."""
    if p.gamma == 0:
        raise PreconditionError("the large-gamma*t form needs gamma > 0")
    n = s.n_measurements
    x_tau = p.gamma * s.interval
    if not x_tau > 0:
        raise PreconditionError("the large-gamma*t form needs t > 0")
    exponent = p.hbar * n / (math.pi * p.mass * p.sigma_sq * p.gamma) * (math.log(x_tau) + EULER_GAMMA)
    if x_tau <= 1:
        warnings.warn(f"gamma*tau = {x_tau:g} is not large", RangeWarning, stacklevel=2)
    if abs(exponent) >= 1:
        warnings.warn(f"exponent magnitude {abs(exponent):g} is not small", RangeWarning, stacklevel=2)
    return math.exp(-exponent)


def rate_difference(t: float, n: int, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``R(t/n)^n - R(t)``: positive in the Zeno regime, negative in the anti-Zeno one."""
    single = math.exp(log_survival_ratio(t, p, cfg))
    repeated = math.exp(n * log_survival_ratio(t / n, p, cfg))
    return repeated - single


def classify(r_single: float, r_repeated: float, tol: float = REGIME_TOL) -> Regime:
    diff = r_repeated - r_single
    if diff > tol:
        return Regime.ZENO
    if diff < -tol:
        return Regime.ANTI_ZENO
    return Regime.NEUTRAL


def transition_time(n: int, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG,
                    search_window: tuple[float, float] | None = None, *,
                    scan_points: int = 400, sign: int = 1) -> CrossoverResult:
    """Locate the total time where ``R(t/n)^n`` crosses ``R(t)``.

    The window is scanned on a log grid for sign changes of the rate
    difference; the first bracket is then refined with Brent's method
    (bisection safeguarded by secant/inverse-quadratic steps).

    Parameters
    ----------
    n : int
        Number of measurements, at least 1. With ``n = 1`` the two rates
        coincide and :class:`NoCrossoverError` is raised.
    search_window : (float, float), optional
        Positive times ``(a, b)``; defaults to ``(1e-2, 1e3 / gamma)``.
    scan_points : int
        Size of the bracketing scan.
    sign : {1, -1}
        Orientation of the difference that is solved for; the root does not
        depend on it, the residual flips sign.

    Raises
    ------
    NoCrossoverError
        If the difference has no sign change on the window. The exception
        carries the difference at both window ends.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if p.gamma == 0:
        raise PreconditionError("no crossover without friction (gamma = 0)")
    if search_window is None:
        search_window = (1e-2, 1e3 / p.gamma)
    a, b = (float(v) for v in search_window)
    if not (0 < a < b and math.isfinite(b)):
        raise ValueError(f"search window must satisfy 0 < a < b, got {search_window!r}")
    if scan_points < 2:
        raise ValueError("scan_points must be >= 2")

    def delta(t):
        return sign * rate_difference(t, n, p, cfg)

    grid = np.geomspace(a, b, scan_points)
    grid[0], grid[-1] = a, b
    values = np.array([delta(t) for t in grid])
    signs = np.sign(np.where(np.abs(values) <= REGIME_TOL, 0.0, values))
    nonzero = np.flatnonzero(signs)
    changes = [(nonzero[i], nonzero[i + 1]) for i in range(nonzero.size - 1)
               if signs[nonzero[i]] != signs[nonzero[i + 1]]]
    if not changes:
        raise NoCrossoverError(
            f"R(t/n)^n - R(t) does not change sign on [{a!r}, {b!r}]",
            window=(a, b),
            delta_at_ends=(sign * values[0], sign * values[-1]),
        )

    i, j = changes[0]
    lo, hi = float(grid[i]), float(grid[j])
    t_star, info = brentq(delta, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps,
                          maxiter=200, full_output=True)
    residual = delta(t_star)
    if abs(residual) > CROSSOVER_TOL:
        warnings.warn(f"crossover residual {residual:.3g} above {CROSSOVER_TOL:g}", RuntimeWarning, stacklevel=2)
    return CrossoverResult(
        t_star=float(t_star),
        gamma_t_star=p.gamma * float(t_star),
        bracket=(lo, hi),
        residual=float(residual),
        iterations=int(info.iterations),
        sign_changes=len(changes),
        function_calls=int(info.function_calls) + scan_points,
    )


def _check_grid(t_grid):
    ts = np.asarray(t_grid, dtype=float).ravel()
    if ts.size == 0:
        raise ValueError("time grid is empty")
    if np.any(~np.isfinite(ts)) or np.any(ts < 0):
        raise ValueError("time grid must be finite and >= 0")
    if np.any(np.diff(ts) <= 0):
        raise ValueError("time grid must be strictly increasing")
    return ts


def sweep(t_grid, n: int, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> list[RatePoint]:
    """Evaluate ``R(t)`` and ``R(t/n)^n`` over a grid of total times.

    Raises
    ------
    SweepError
        If any point fails. Successful points and the failures are both
        attached to the exception; nothing is dropped silently.
    """
    ts = _check_grid(t_grid)
    points = []
    failures = []
    for t in ts:
        t = float(t)
        try:
            r1 = survival_ratio(t, p, cfg)
            rn = repeated_rate(MeasurementSchedule(t, n), p, cfg)
        except Exception as exc:  # reported through SweepError below
            failures.append((t, exc))
            continue
        points.append(RatePoint(t, r1, rn, classify(r1, rn)))
    if failures:
        raise SweepError(f"{len(failures)} of {ts.size} sweep points failed", points, failures)
    return points


def regime_flips(points) -> int:
    """Count ZENO <-> ANTI_ZENO changes along a curve, ignoring NEUTRAL points."""
    labels = [pt.regime for pt in points if pt.regime is not Regime.NEUTRAL]
    return sum(1 for u, v in zip(labels, labels[1:]) if u is not v)
