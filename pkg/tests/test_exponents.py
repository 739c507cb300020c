import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import mods.errors as me
import mods.exponents as mx


# ----------------------------------------------------------------------------

@pytest.mark.parametrize("text, expected", [("5/2", F(5, 2)), (2.5, F(5, 2)), (3, F(3)), ("inf", math.inf), (" Infinity ", math.inf)])
def test_number_is_exact_where_it_can_be(text, expected):
    assert mx.number(text) == expected


def test_number_falls_back_to_float():
    assert isinstance(mx.number(0.1), float)
    assert mx.number("0.1") == F(1, 10)
    for bad in (True, math.nan):
        with pytest.raises(me.DomainError):
            mx.number(bad)


def test_inverse_and_text():
    assert mx.inverse("inf") == 0
    assert mx.inverse("5/2") == F(2, 5)
    with pytest.raises(me.DomainError):
        mx.inverse(0)
    assert mx.exact_text(F(5, 2)) == "5/2"
    assert mx.exact_text(F(4)) == "4"
    assert mx.exact_text(math.inf) == "inf"


def test_interval():
    interval = mx.Interval(F(1, 4), F(1, 2), True, False)
    assert str(interval) == "[1/4, 1/2)"
    assert interval.contains("1/4") and not interval.contains(0.5)
    assert mx.Interval(1, 1, True, False).empty
    assert not mx.Interval(1, 1).empty
    both = interval.intersect(mx.Interval(F(1, 3), 1, False, True))
    assert str(both) == "(1/3, 1/2)"


# ----------------------------------------------------------------------------

def test_critical_powers():
    wave = mx.wave_exponents(3)
    assert wave.p_conf == 3 and wave.p_h == F(5, 2)
    assert wave.p_c == pytest.approx(1.0 + math.sqrt(2.0), rel=1e-14)
    schrodinger = mx.schrodinger_exponents(3)
    assert schrodinger.p_L2 == F(7, 3)
    assert schrodinger.p_l == pytest.approx(2.0)
    with pytest.raises(me.DomainError):
        mx.wave_exponents(1)


def test_classical_admissibility():
    assert mx.classical_admissible("wave", 4, "inf", 2)[0] is False
    assert mx.classical_admissible("schrodinger", 2, 6, 3)[0] is True
    assert mx.classical_admissible("schrodinger", 2, "inf", 2)[0] is False
    for eq in mx.EQUATIONS:
        assert mx.classical_admissible(eq, "inf", 2, 3)[0] is True
    with pytest.raises(me.DomainError):
        mx.classical_admissible("heat", 2, 2, 3)


def test_keel_tao_admissibility():
    assert mx.keel_tao_admissible(2, 6, 3)
    assert not mx.keel_tao_admissible(2, "inf", 2)
    assert not mx.keel_tao_admissible(3, 6, 3)


def test_generalized_window():
    window = mx.generalized_window("wave", 4, "inf", 2)
    assert window.in_window and window.s_kn == 0 and window.s == F(3, 4)
    assert not window.conjectural
    assert mx.generalized_window("schrodinger", 4, 4, 3).conjectural
    with pytest.raises(me.DomainError):
        mx.generalized_window("wave", 4, 4, 3, p_ang=2)


def test_weighted_params():
    params = mx.weighted_strichartz_params(4, "1/4", 3, 2)
    assert (params.s, params.s1, params.valid) == (F(-1, 2), F(1, 2), True)
    assert not mx.weighted_strichartz_params(2, 0, 3, 2).valid


@given(st.fractions(min_value=2, max_value=40, max_denominator=30),
    st.fractions(min_value=-3, max_value=3, max_denominator=30),
    st.integers(min_value=2, max_value=8),
    st.fractions(min_value=F(1, 2), max_value=4, max_denominator=10))
def test_weighted_indices_sum(q, alpha, n, a):
    params = mx.weighted_strichartz_params(q, alpha, n, a)
    assert params.s + params.s1 == a/q - F(1, 2)


def test_harmse_oberlin():
    assert mx.harmse_oberlin_check(5, 3) == (True, F(10, 7))
    assert mx.harmse_oberlin_check(2, 3)[0] is False


# ----------------------------------------------------------------------------

def test_interpolation_bookkeeping():
    record = mx.interpolation_bookkeeping(3, 2, 6)
    assert record.t_eta == F(2, 3)
    assert record.limit == F(1, 3) == record.s_kn
    assert record.condition_met
    with pytest.raises(me.WindowError):
        mx.interpolation_bookkeeping(3, 3, 6)
    with pytest.raises(me.DomainError):
        mx.interpolation_bookkeeping(3, 2, 6, eta=1)


@pytest.mark.parametrize("eta, t_eta", [(F(1, 3), F(1)), (F(1, 6), F(4, 5))])
def test_interpolation_parameter_stays_in_the_unit_interval(eta, t_eta):
    assert mx.interpolation_bookkeeping(3, 2, 6, eta=eta).t_eta == t_eta


@pytest.mark.parametrize("eta", [F(1, 2), F(9, 10)])
def test_interpolation_rejects_an_endpoint_moved_past_the_pair(eta):
    with pytest.raises(me.DomainError, match="t_eta"):
        mx.interpolation_bookkeeping(3, 2, 6, eta=eta)


def test_interpolation_on_the_plane():
    record = mx.interpolation_bookkeeping(2, 3, "inf")
    assert record.t_eta == F(1, 3)
    with pytest.raises(me.WindowError):
        mx.interpolation_bookkeeping(2, 3, 6)


def test_angular_estimates():
    estimate = mx.angular_qr_strichartz(3, 1, 4, 2)
    assert (estimate.derivative, estimate.angular, estimate.weight_b) == (F(1, 2), F(-1, 4), F(3, 2))
    with pytest.raises(me.WindowError):
        mx.angular_qr_strichartz(3, 1, 3, 2)
    endpoint = mx.endpoint_angular_strichartz(3)
    assert endpoint.q == 2 and endpoint.derivative == 1 and endpoint.strict
    with pytest.raises(me.WindowError):
        mx.endpoint_angular_strichartz(4)
    schrodinger = mx.schrodinger_angular_strichartz(3, "16/5")
    assert (schrodinger.derivative, schrodinger.angular) == (F(-1, 16), F(1, 8))
    with pytest.raises(me.WindowError):
        mx.schrodinger_angular_strichartz(3, 3)


# ----------------------------------------------------------------------------

def test_strauss_setup():
    setup = mx.strauss_setup(3, F(5, 2))
    assert (setup.s_c, setup.s_sb, setup.s1, setup.s2, setup.moser_a) == (F(1, 6), F(1, 10), F(2, 3), F(11, 15), F(1, 3))
    assert setup.valid
    assert not mx.strauss_setup(3, 2).supercritical
    with pytest.raises(me.WindowError):
        mx.strauss_setup(5, 2)


def test_lindblad_sogge_setup():
    setup = mx.lindblad_sogge_setup(3, "13/5")
    assert setup.q == F(16, 5)
    assert setup.window and setup.dual_exponent == F(16, 3) and setup.inhomogeneous
    assert setup.valid
    high = mx.lindblad_sogge_setup(3, 3.5)
    assert high.dual_exponent == F(10, 3) and not high.dual_ok and not high.valid


def test_nls_window():
    window = mx.nls_q_window(3, "11/5")
    assert not window.empty
    assert window.provenance() == "duality|weighted|moser"
    assert mx.nls_q_window(7, "3/2").empty
    rows = mx.nls_window_rows(3, ["11/5"])
    assert rows[0]["q"] == "132/47" and rows[0]["empty"] is False


@given(st.integers(min_value=3, max_value=6),
    st.fractions(min_value=F(11, 10), max_value=5, max_denominator=20),
    st.fractions(min_value=2, max_value=20, max_denominator=20))
def test_nls_identities(n, p, q):
    setup = mx.nls_setup(n, p, q)
    assert setup.s1 == setup.s3 - setup.s_c + F(3, 2) - 2*p/q
    assert setup.s2 - setup.s3 == 1 - 2*(p - 1)/q
