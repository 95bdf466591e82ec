"""Width of the damped Gaussian packet and its ingredients.

The central quantity is the dimensionless integral

    I(x) = int_0^inf (1 - cos y) / (y (y**2 + x**2)) dy,

through which the zero-temperature Ohmic mean-square displacement is
``s(t) = (2 hbar gamma / (pi m)) t**2 I(gamma t)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import PreconditionError, QuadratureWarning, RangeWarning, SingularResponseError
from .quadrature import (
    DEFAULT_CONFIG,
    IntegralResult,
    QuadratureConfig,
    integrate_adaptive,
    integrate_oscillatory_tail,
    integrate_to_infinity,
)
from .response import ORIGIN_CUTOFF, PhysicalParams, _check_time, green_function, ohmic_response_im

__all__ = [
    "EULER_GAMMA",
    "WidthBreakdown",
    "zeno_integral",
    "zeno_integral_small",
    "zeno_integral_large",
    "msd_exact",
    "msd_general",
    "msd_small_gt",
    "msd_large_gt",
    "sigma_q_sq",
    "width_sq",
    "mean_sq_velocity",
    "probability_density",
]

EULER_GAMMA = 0.57721566490153286

# s(t) from the small-gamma*t form changes sign here
SMALL_GT_ZERO = math.exp(1.5 - EULER_GAMMA)

# below this x the two-term small-x expansion of I(x) is exact to double
# precision (next term ~ x^2 log x) and the quadrature would underflow
SERIES_CUTOFF = 1e-8


@dataclass(frozen=True)
class WidthBreakdown:
    """``w^2(t) = sigma^2 + sigma_q^2 + s(t)`` split into its three parts."""

    sigma_sq: float
    sigma_q_sq: float
    msd: float

    @property
    def total(self) -> float:
        return self.sigma_sq + self.sigma_q_sq + self.msd


def _warn_unconverged(what, res: IntegralResult, stacklevel=3):
    if not res.converged:
        warnings.warn(
            f"{what} not converged (error estimate {res.error_estimate:.3g})",
            QuadratureWarning,
            stacklevel=stacklevel,
        )


def _zeno_integral(x: float, cfg: QuadratureConfig) -> IntegralResult:
    if x < SERIES_CUTOFF:
        return IntegralResult(zeno_integral_small(x), 0.0, 0, True)
    x2 = x * x

    def core(y):
        y = np.asarray(y, dtype=float)
        s = np.sin(0.5 * y)
        val = 2.0 * s * s / (y * (y * y + x2))
        small = y < ORIGIN_CUTOFF
        if small.any():
            val = np.where(small, 0.5 * y / (y * y + x2), val)
        return val

    def envelope(y):
        y = np.asarray(y, dtype=float)
        return 1.0 / (y * (y * y + x2))

    y0 = cfg.split_point
    head = integrate_adaptive(core, 0.0, y0, cfg)
    # non-oscillatory part of the tail in closed form
    flat = math.log1p((x / y0) ** 2) / (2.0 * x2)
    osc = integrate_oscillatory_tail(envelope, y0, cfg)
    return IntegralResult(
        head.value + flat - osc.value,
        head.error_estimate + osc.error_estimate,
        head.subdivisions_used + osc.subdivisions_used,
        head.converged and osc.converged,
    )


def zeno_integral(x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Evaluate ``I(x) = int_0^inf (1 - cos y) / (y (y^2 + x^2)) dy`` for ``x > 0``.

    The integral diverges like ``-log(x) / 2`` as ``x -> 0``, so ``x <= 0`` is
    rejected. Below ``SERIES_CUTOFF`` the small-``x`` expansion is returned.

    >>> round(zeno_integral(1.0), 10)
    0.5268019044
    """
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise PreconditionError(f"zeno_integral needs finite x > 0, got {x!r}")
    res = _zeno_integral(x, cfg)
    _warn_unconverged(f"I({x!r})", res)
    return res.value


def zeno_integral_small(x: float) -> float:
    """Small-``x`` asymptote ``(-log x + 3/2 - gamma_E) / 2``."""
    return 0.5 * (-math.log(x) + 1.5 - EULER_GAMMA)


def zeno_integral_large(x: float) -> float:
    """Large-``x`` asymptote ``(log x + gamma_E) / x^2``."""
    return (math.log(x) + EULER_GAMMA) / (x * x)


def msd_exact(t: float, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Zero-temperature Ohmic mean-square displacement ``<(x(t) - x(0))^2>``.

    Returns 0 for ``gamma == 0``, the limit of ``gamma I(gamma t)``.
    """
    t = _check_time(t)
    if t == 0 or p.gamma == 0:
        return 0.0
    x = p.gamma * t
    res = _zeno_integral(x, cfg)
    _warn_unconverged(f"I({x!r})", res)
    return 2.0 * p.hbar * p.gamma / (math.pi * p.mass) * t * t * res.value


def _msd_general_integral(t: float, p: PhysicalParams, cfg: QuadratureConfig) -> IntegralResult:
    # integrate over y = omega * t; dw = dy / t
    kT = p.temperature
    hbar = p.hbar
    gamma = p.gamma
    m = p.mass

    def thermal(w):
        if kT == 0:
            return 1.0
        return 1.0 / np.tanh(hbar * w / (2.0 * kT))

    def core(y):
        y = np.asarray(y, dtype=float)
        small = y < ORIGIN_CUTOFF
        ys = np.where(small, 1.0, y)
        w = ys / t
        s = np.sin(0.5 * ys)
        val = ohmic_response_im(w, p) * thermal(w) * 2.0 * s * s / t
        if small.any():
            # Im alpha ~ 1/(m gamma w), coth ~ 2kT/(hbar w), 1 - cos y ~ y^2/2
            if kT == 0:
                lim = 0.5 * y / (m * gamma)
            else:
                lim = np.full_like(y, kT * t / (m * gamma * hbar))
            val = np.where(small, lim, val)
        return val

    def envelope(y):
        w = np.asarray(y, dtype=float) / t
        return ohmic_response_im(w, p) * thermal(w) / t

    y0 = cfg.split_point
    w0 = y0 / t
    head = integrate_adaptive(core, 0.0, y0, cfg)
    osc = integrate_oscillatory_tail(envelope, y0, cfg)
    # int_{w0}^inf Im alpha dw in closed form
    flat = math.log1p((gamma / w0) ** 2) / (2.0 * m * gamma)
    total = IntegralResult(head.value + flat - osc.value, head.error_estimate + osc.error_estimate,
                           head.subdivisions_used + osc.subdivisions_used,
                           head.converged and osc.converged)
    if kT > 0:
        # coth - 1 decays like exp(-hbar w / kT)
        def excess(w):
            w = np.asarray(w, dtype=float)
            with np.errstate(over="ignore"):
                return ohmic_response_im(w, p) * 2.0 / np.expm1(hbar * w / kT)

        extra = integrate_to_infinity(excess, w0, cfg)
        total = total + extra
    return total


def msd_general(t: float, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Mean-square displacement as a frequency integral over ``Im alpha``.

    ``(2 hbar / pi) int_0^inf Im alpha(w) coth(hbar w / 2kT) (1 - cos w t) dw``.
    At zero temperature this is an independent route to :func:`msd_exact`.
    Finite temperature is supported but experimental: nothing in this
    package validates it beyond the integral itself.
    """
    t = _check_time(t)
    if t == 0:
        return 0.0
    if p.gamma == 0:
        raise SingularResponseError("msd_general requires gamma > 0")
    res = _msd_general_integral(t, p, cfg)
    _warn_unconverged(f"s({t!r}) frequency integral", res)
    return 2.0 * p.hbar / math.pi * res.value


def _gamma_t(t, p):
    x = p.gamma * float(t)
    if not (x > 0 and math.isfinite(x)):
        raise PreconditionError(f"asymptotic form needs gamma * t > 0, got {x!r}")
    return x


def msd_small_gt(t: float, p: PhysicalParams) -> float:
    """``s(t)`` for ``gamma t << 1``: ``(hbar gamma / pi m) t^2 (-log(gamma t) + 3/2 - gamma_E)``."""
    x = _gamma_t(t, p)
    if x >= SMALL_GT_ZERO:
        warnings.warn(f"gamma*t = {x:g} is outside the small-gamma*t regime; s(t) turns negative",
                      RangeWarning, stacklevel=2)
    return p.hbar * p.gamma / (math.pi * p.mass) * t * t * (-math.log(x) + 1.5 - EULER_GAMMA)


def msd_large_gt(t: float, p: PhysicalParams) -> float:
    """``s(t)`` for ``gamma t >> 1``: ``(2 hbar / pi m gamma) (log(gamma t) + gamma_E)``."""
    x = _gamma_t(t, p)
    return 2.0 * p.hbar / (math.pi * p.mass * p.gamma) * (math.log(x) + EULER_GAMMA)


def sigma_q_sq(t, p: PhysicalParams):
    """Commutator contribution ``[x(0), x(t)]^2 / (4 sigma^2)`` to the width.

    Saturates at ``hbar^2 / (4 m^2 gamma^2 sigma^2)``; grows as
    ``hbar^2 t^2 / (4 m^2 sigma^2)`` without friction.
    """
    g = green_function(t, p)
    return (p.hbar * g) ** 2 / (4.0 * p.sigma_sq)


def width_sq(t: float, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG) -> WidthBreakdown:
    t = _check_time(t)
    return WidthBreakdown(p.sigma_sq, sigma_q_sq(t, p), msd_exact(t, p, cfg))


def mean_sq_velocity(t: float, p: PhysicalParams) -> float:
    """Effective ``<v^2>`` of the short-time law ``w^2 = sigma^2 + <v^2> t^2``.

    The friction term carries the weak ``-log(gamma t)`` dependence and is
    absent when ``gamma == 0``.
    """
    free = p.hbar**2 / (4.0 * p.mass**2 * p.sigma_sq)
    if p.gamma == 0:
        return free
    x = _gamma_t(t, p)
    if x >= 1:
        warnings.warn(f"gamma*t = {x:g} is outside the small-gamma*t regime", RangeWarning, stacklevel=2)
    return free + p.hbar * p.gamma / (math.pi * p.mass) * (-math.log(x) + 1.5 - EULER_GAMMA)


def probability_density(x, t: float, p: PhysicalParams, cfg: QuadratureConfig = DEFAULT_CONFIG):
    """Gaussian position density ``P(x, t)`` of width ``w^2(t)``."""
    w2 = width_sq(t, p, cfg).total
    xs = np.asarray(x, dtype=float)
    out = np.exp(-xs * xs / (2.0 * w2)) / math.sqrt(2.0 * math.pi * w2)
    return float(out) if out.ndim == 0 else out
