"""Exact quantum Zeno / anti-Zeno rates for a free Gaussian packet with Ohmic damping."""

__version__ = "0.1.0"

from .exceptions import (
    NoCrossoverError,
    PreconditionError,
    QuadratureDomainError,
    QuadratureWarning,
    RangeWarning,
    SingularResponseError,
    SweepError,
    ZenoRateError,
)
from .quadrature import IntegralResult, QuadratureConfig, integrate_adaptive, integrate_oscillatory_tail
from .response import PhysicalParams, commutator_quadrature, green_function, ohmic_response_im
from .spreading import (
    EULER_GAMMA,
    WidthBreakdown,
    mean_sq_velocity,
    msd_exact,
    msd_general,
    msd_large_gt,
    msd_small_gt,
    probability_density,
    sigma_q_sq,
    width_sq,
    zeno_integral,
)
from .zeno import (
    CrossoverResult,
    MeasurementSchedule,
    RatePoint,
    Regime,
    repeated_rate,
    repeated_rate_large_gt,
    repeated_rate_small_gt,
    survival_ratio,
    sweep,
    transition_time,
)
from .estimator import CrossoverEstimator, ZenoRateTransformer
