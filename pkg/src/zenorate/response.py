"""Ohmic free-particle response: Im alpha, Green function and the position commutator."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import PreconditionError, QuadratureWarning, SingularResponseError
from .quadrature import (
    DEFAULT_CONFIG,
    IntegralResult,
    QuadratureConfig,
    integrate_adaptive,
    integrate_oscillatory_tail,
)

__all__ = [
    "PhysicalParams",
    "ohmic_response_im",
    "green_function",
    "commutator_quadrature",
]

# below this abscissa integrands are replaced by their analytic small-argument limit
ORIGIN_CUTOFF = 1e-8


@dataclass(frozen=True)
class PhysicalParams:
    """Particle, bath and initial-packet parameters in caller-chosen consistent units.

    ``temperature`` is measured in energy units (Boltzmann constant set to 1).
    Defaults are the natural units ``hbar = m = sigma = 1``.
    """

    gamma: float = 0.1
    mass: float = 1.0
    hbar: float = 1.0
    sigma_sq: float = 1.0
    temperature: float = 0.0

    def __post_init__(self):
        checks = [
            ("mass", self.mass > 0),
            ("hbar", self.hbar > 0),
            ("gamma", self.gamma >= 0),
            ("sigma_sq", self.sigma_sq > 0),
            ("temperature", self.temperature >= 0),
        ]
        for name, ok in checks:
            value = getattr(self, name)
            if not ok or not math.isfinite(value):
                raise ValueError(f"invalid {name}: {value!r}")


def _check_time(t):
    t = float(t)
    if not (t >= 0 and math.isfinite(t)):
        raise PreconditionError(f"time must be finite and >= 0, got {t!r}")
    return t


def ohmic_response_im(omega, p: PhysicalParams):
    """Imaginary part of ``alpha(omega + i0)`` for Ohmic friction.

    ``gamma / (m * omega * (omega**2 + gamma**2))``; accepts scalars or arrays.

    Raises
    ------
    SingularResponseError
        If ``p.gamma == 0``: the dissipationless limits are handled
        analytically elsewhere.
    """
    if p.gamma == 0:
        raise SingularResponseError("Ohmic response is singular at gamma = 0")
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise PreconditionError("omega must be > 0")
    out = p.gamma / (p.mass * w * (w * w + p.gamma * p.gamma))
    return float(out) if out.ndim == 0 else out


def green_function(t, p: PhysicalParams):
    """Retarded Green function ``G(t) = (1 - exp(-gamma t)) / (m gamma)``.

    Reduces to ``t / m`` when ``gamma == 0``.
    """
    ts = np.asarray(t, dtype=float)
    if np.any(~(ts >= 0)):
        raise PreconditionError("t must be >= 0")
    if p.gamma == 0:
        out = ts / p.mass
    else:
        out = -np.expm1(-p.gamma * ts) / (p.mass * p.gamma)
    return float(out) if out.ndim == 0 else out


def _commutator_integral(t: float, p: PhysicalParams, cfg: QuadratureConfig) -> IntegralResult:
    # frequency integral rewritten in y = omega * t so the oscillation period is 2 pi
    limit = 1.0 / (p.mass * p.gamma)

    def core(y):
        y = np.asarray(y, dtype=float)
        small = y < ORIGIN_CUTOFF
        ys = np.where(small, 1.0, y)
        val = ohmic_response_im(ys / t, p) * np.sin(ys) / t
        return np.where(small, limit, val)

    # sin y = cos(y - pi/2): the tail starts at u0 = y0 - pi/2
    y0 = max(cfg.split_point, math.pi)

    def envelope(u):
        return ohmic_response_im((np.asarray(u) + 0.5 * math.pi) / t, p) / t

    head = integrate_adaptive(core, 0.0, y0, cfg)
    tail = integrate_oscillatory_tail(envelope, y0 - 0.5 * math.pi, cfg)
    return head + tail


def commutator_quadrature(t: float, p: PhysicalParams,
                          cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """``[x(0), x(t)] / i`` evaluated as a frequency integral over ``Im alpha``.

    ``(2 hbar / pi) * int_0^inf Im alpha(w) sin(w t) dw``. For the Ohmic model
    this equals ``hbar * green_function(t, p)``, which makes the pair a
    two-sided check on the integration engine and the response function.

    Warns
    -----
    QuadratureWarning
        If the integral misses the requested tolerance.
    """
    t = _check_time(t)
    if t == 0:
        return 0.0
    if p.gamma == 0:
        raise SingularResponseError("commutator quadrature requires gamma > 0; use green_function")
    res = _commutator_integral(t, p, cfg)
    if not res.converged:
        warnings.warn(
            f"commutator integral at t={t!r} not converged (error {res.error_estimate:.3g})",
            QuadratureWarning,
            stacklevel=2,
        )
    return 2.0 * p.hbar / math.pi * res.value
