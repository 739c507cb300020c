import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln, jv

import mods.errors as me
import mods.specfun as sf


# ----------------------------------------------------------------------------

@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (5.0, math.log(24.0)), (0.5, 0.5*math.log(math.pi))])
def test_log_gamma_known_values(x, expected):
    assert sf.log_gamma(x) == pytest.approx(expected, abs=1e-12)


def test_log_gamma_matches_scipy_on_wide_range():
    x = np.geomspace(1e-3, 1e6, 400)
    x = x[(np.abs(x - 1.0) > 0.01) & (np.abs(x - 2.0) > 0.01)]
    ours = sf.log_gamma(x)
    assert isinstance(ours, np.ndarray)
    for value, reference in zip(ours, gammaln(x)):
        assert value == pytest.approx(reference, rel=1e-12)


ZETA_2, ZETA_3, ZETA_4 = math.pi**2/6.0, 1.2020569031595942, math.pi**4/90.0


def taylor_near_one(delta):
    return -sf.EULER_GAMMA*delta + ZETA_2*delta**2/2.0 - ZETA_3*delta**3/3.0 + ZETA_4*delta**4/4.0


def taylor_near_two(delta):
    return ((1.0 - sf.EULER_GAMMA)*delta + (ZETA_2 - 1.0)*delta**2/2.0 - (ZETA_3 - 1.0)*delta**3/3.0
        + (ZETA_4 - 1.0)*delta**4/4.0)


@pytest.mark.parametrize("x", [1.0001, 0.9999, 1.0000001, 0.9999999, 1.001])
def test_log_gamma_relative_accuracy_near_one(x):
    assert sf.log_gamma(x) == pytest.approx(taylor_near_one(x - 1.0), rel=1e-12)


@pytest.mark.parametrize("x", [2.0001, 1.9999, 2.0000001, 1.999])
def test_log_gamma_relative_accuracy_near_two(x):
    assert sf.log_gamma(x) == pytest.approx(taylor_near_two(x - 2.0), rel=1e-12)


def test_log_gamma_vanishes_at_one_and_two():
    assert sf.log_gamma(1.0) == 0.0
    assert sf.log_gamma(2.0) == 0.0
    assert sf.log_gamma(np.array([[1.0, 2.0], [3.0, 0.5]])).shape == (2, 2)


@given(st.floats(min_value=-0.25, max_value=0.25))
def test_log_gamma_series_joins_the_recurrence(epsilon):
    # ln Gamma(x+1) - ln Gamma(x) = ln x across both series
    x = 1.0 + epsilon
    assert sf.log_gamma(x + 1.0) - sf.log_gamma(x) == pytest.approx(math.log(x), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_log_gamma_rejects_nonpositive(x):
    with pytest.raises(me.DomainError):
        sf.log_gamma(x)


@given(st.floats(min_value=0.1, max_value=50.0))
def test_gamma_recurrence(x):
    assert math.exp(sf.log_gamma(x + 1.0) - sf.log_gamma(x)) == pytest.approx(x, rel=1e-12)


def test_gamma_sign_log_reflection():
    sign, value = sf.gamma_sign_log(-0.5)
    assert sign == -1
    assert value == pytest.approx(math.log(2.0*math.sqrt(math.pi)), abs=1e-12)
    with pytest.raises(me.DomainError):
        sf.gamma_sign_log(-2.0)


def test_stirling_deviation():
    assert sf.stirling_deviation(10.0) == pytest.approx(1.00837, abs=1e-4)
    assert abs(sf.stirling_deviation(1000.0) - 1.0) <= 1e-4
    values = [sf.stirling_deviation(t) for t in (10.0, 100.0, 1000.0)]
    assert values[0] > values[1] > values[2] > 1.0
    with pytest.raises(me.DomainError):
        sf.stirling_deviation(0.0)


# ----------------------------------------------------------------------------

@pytest.mark.parametrize("nu, t, expected", [
    (0.0, 0.0, 1.0),
    (0.5, 0.5*math.pi, 2.0/math.pi),
    (1.5, math.pi, math.sqrt(2.0)/math.pi),
])
def test_bessel_closed_forms(nu, t, expected):
    assert sf.bessel_j(nu, t) == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 2.5, 10.0, 23.5, 40.0, 60.0])
def test_bessel_matches_scipy(nu):
    t = np.geomspace(1e-3, 1e4, 600)
    ours = sf.bessel_j(nu, t)
    reference = jv(nu, t)
    assert ours.shape == t.shape
    assert np.all(np.abs(ours - reference) <= 1e-10*np.maximum(np.abs(reference), 1e-2))


def test_bessel_scalar_in_scalar_out():
    assert isinstance(sf.bessel_j(1.0, 2.0), float)


@pytest.mark.parametrize("nu, t", [(-0.5, 1.0), (1.0, -1.0), (math.nan, 1.0)])
def test_bessel_domain(nu, t):
    with pytest.raises(me.DomainError):
        sf.bessel_j(nu, t)


@settings(max_examples=200)
@given(st.floats(min_value=1.0, max_value=40.0), st.floats(min_value=0.1, max_value=100.0))
def test_bessel_three_term_recurrence(nu, t):
    middle = sf.bessel_j(nu, t)
    residual = sf.bessel_j(nu - 1.0, t) + sf.bessel_j(nu + 1.0, t) - 2.0*nu/t*middle
    assert abs(residual) <= 1e-9*max(1.0, abs(middle))


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 3.0, 7.5, 10.0])
def test_bessel_small_argument_law(nu):
    t = 1e-4
    leading = math.exp(nu*math.log(0.5*t) - sf.log_gamma(nu + 1.0))
    assert sf.bessel_j(nu, t)/leading == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.0, 4.0])
def test_bessel_large_argument_envelope(nu):
    t = np.linspace(10.0*max(nu*nu, 1.0), 10.0*max(nu*nu, 1.0) + 500.0, 2001)
    assert np.all(np.abs(sf.bessel_j(nu, t)) <= 1.01*np.sqrt(2.0/(math.pi*t)))


def test_modulus_phase_reproduces_bessel():
    t = np.linspace(200.0, 400.0, 50)
    modulus, phase = sf.bessel_modulus_phase(1.0, t)
    assert np.allclose(np.sqrt(modulus)*np.cos(phase), jv(1.0, t), rtol=0, atol=1e-10)


def test_policy_validation():
    with pytest.raises(me.DomainError):
        sf.EvalPolicy(series_cutoff=0.0)
    series, asymptotic = sf.EvalPolicy().edges(10.0)
    assert series == pytest.approx(2.0*math.sqrt(11.0))
    assert asymptotic == 400.0


def test_half_integer_orders_switch_to_the_terminating_expansion():
    assert sf.DEFAULT_POLICY.edges(0.5) == (8.0, 8.0)
    series, asymptotic = sf.DEFAULT_POLICY.edges(3.5)
    assert (series, asymptotic) == (8.0, 8.0)
    assert sf.DEFAULT_POLICY.edges(23.5)[1] < 4.0*23.5**2


def test_half_order_is_the_sine_law():
    t = np.linspace(8.5, 1000.0, 2001)
    expected = np.sqrt(2.0/(math.pi*t))*np.sin(t)
    assert np.allclose(sf.bessel_j(0.5, t), expected, rtol=0, atol=1e-14)


@pytest.mark.parametrize("nu", [1.5, 3.5, 9.5])
def test_terminating_expansion_matches_scipy_in_the_middle_range(nu):
    t = np.linspace(8.0, 400.0, 997)
    assert np.allclose(sf.bessel_j(nu, t), jv(nu, t), rtol=0, atol=1e-12)
