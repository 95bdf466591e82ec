import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zenorate.exceptions import PreconditionError, SingularResponseError
from zenorate.response import PhysicalParams, commutator_quadrature, green_function, ohmic_response_im


def test_response_at_omega_equal_gamma():
    assert ohmic_response_im(1.0, PhysicalParams(gamma=1.0)) == pytest.approx(0.5)


def test_response_direct_substitution():
    assert ohmic_response_im(2.0, PhysicalParams(gamma=1.0)) == pytest.approx(0.1)


def test_response_high_frequency_scaling():
    p = PhysicalParams(gamma=0.7, mass=2.0)
    w = 1e6
    assert ohmic_response_im(w, p) * w**3 == pytest.approx(p.gamma / p.mass, rel=1e-9)


def test_response_vectorized_and_positive():
    w = np.geomspace(1e-3, 1e3, 50)
    vals = ohmic_response_im(w, PhysicalParams(gamma=0.3))
    assert vals.shape == w.shape
    assert np.all(vals > 0) and np.all(np.isfinite(vals))


@pytest.mark.parametrize("omega", [0.0, -1.0])
def test_response_domain(omega):
    with pytest.raises(PreconditionError):
        ohmic_response_im(omega, PhysicalParams(gamma=1.0))


def test_response_singular_without_friction():
    with pytest.raises(SingularResponseError):
        ohmic_response_im(1.0, PhysicalParams(gamma=0.0))


def test_green_function_examples():
    assert green_function(0.0, PhysicalParams(gamma=1.0)) == 0.0
    assert green_function(3.0, PhysicalParams(gamma=0.0)) == 3.0
    assert green_function(1.0, PhysicalParams(gamma=1.0)) == pytest.approx(0.6321205588, rel=1e-10)


def test_green_function_saturates():
    p = PhysicalParams(gamma=2.0, mass=3.0)
    assert green_function(1e3, p) == pytest.approx(1 / (p.mass * p.gamma), rel=1e-15)


def test_green_function_negative_time():
    with pytest.raises(PreconditionError):
        green_function(-1.0, PhysicalParams())


def test_green_function_concave():
    t = np.linspace(0, 50, 501)
    g = green_function(t, PhysicalParams(gamma=0.3))
    assert np.all(np.diff(g, 2) <= 1e-15)
    assert np.all(np.diff(g) >= 0)


@given(st.floats(0.01, 10), st.floats(0.1, 10), st.floats(0, 100))
def test_green_function_scale_covariance(gamma, m, t):
    a = green_function(t, PhysicalParams(gamma=gamma, mass=m))
    b = green_function(t, PhysicalParams(gamma=gamma, mass=1.0)) / m
    assert a == pytest.approx(b, rel=1e-14, abs=1e-300)


def test_commutator_at_zero():
    assert commutator_quadrature(0.0, PhysicalParams(gamma=1.0)) == 0.0


@pytest.mark.parametrize("m, gamma, t, expected", [
    (1.0, 1.0, 1.0, 1 - math.exp(-1)),
    (2.0, 0.5, 4.0, 1 - math.exp(-2)),
])
def test_commutator_matches_green_function(m, gamma, t, expected):
    p = PhysicalParams(gamma=gamma, mass=m, hbar=1.0)
    assert expected == pytest.approx(p.hbar * green_function(t, p), rel=1e-15)
    assert abs(commutator_quadrature(t, p) - expected) <= 1e-8


@pytest.mark.parametrize("gamma", [0.03, 0.1, 1.0, 10.0, 250.0])
def test_commutator_log_grid(gamma):
    p = PhysicalParams(gamma=gamma, mass=1.3, hbar=0.7)
    scale = p.hbar / (p.mass * gamma)
    for t in np.geomspace(1e-3 / gamma, 1e3 / gamma, 25):
        assert abs(commutator_quadrature(t, p) - p.hbar * green_function(t, p)) <= 1e-8 * scale


def test_commutator_needs_friction():
    with pytest.raises(SingularResponseError):
        commutator_quadrature(1.0, PhysicalParams(gamma=0.0))


@pytest.mark.parametrize("field, value", [
    ("mass", 0.0), ("hbar", -1.0), ("gamma", -0.1), ("sigma_sq", 0.0),
    ("temperature", -1.0), ("gamma", math.nan), ("mass", math.inf),
])
def test_params_invariants(field, value):
    with pytest.raises(ValueError):
        PhysicalParams(**{field: value})
