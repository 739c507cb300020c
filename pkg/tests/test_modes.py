import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import mods.errors as me
import mods.modes as mm
import mods.quadrature as mq


# ----------------------------------------------------------------------------

@given(st.integers(min_value=0, max_value=300))
def test_mode_dimension_small_dimensions(k):
    assert mm.mode_dimension(3, k) == 2*k + 1
    assert mm.mode_dimension(4, k) == (k + 1)**2
    assert mm.mode_dimension(2, k) == (1 if k == 0 else 2)


def test_mode_dimension_overflow_is_reported():
    with pytest.raises(me.ModeOverflowError):
        mm.mode_dimension(200, 200)


@pytest.mark.parametrize("n, k", [(1, 0), (3, -1), (2.5, 1)])
def test_mode_dimension_domain(n, k):
    with pytest.raises(me.DomainError):
        mm.mode_dimension(n, k)


def test_mode_quantities():
    mode = mm.Mode(3, 2)
    assert mode.nu == 2.5
    assert mode.eig == 6
    assert mode.lam == pytest.approx(math.sqrt(7.0))
    assert mode.dim == 5
    assert mode.weight("bracket-k") == pytest.approx(math.sqrt(5.0))
    assert mm.Mode(5, 0).lam == 1.0
    with pytest.raises(me.DomainError):
        mode.weight("angular")


# ----------------------------------------------------------------------------

def test_gaussian_moment_matches_quadrature():
    profile = mm.GaussianProfile(amplitude=1.5, power=2, sigma=0.5)
    nodes, weights = mq.panels_rule(mq.edges_linear(0.0, 30.0, 0.5))
    for exponent in (0.0, 1.0, 2.0):
        numeric = float(np.sum(weights*profile(nodes)**2*nodes**exponent))
        assert profile.moment(exponent) == pytest.approx(numeric, rel=1e-12)


def test_gaussian_moment_divergence():
    with pytest.raises(me.DivergenceError):
        mm.GaussianProfile().moment(-1.0)


@pytest.mark.parametrize("power, sigma", [(0, 1.0), (2, 0.5), (3, 4.0)])
def test_gaussian_support_is_the_tolerance_crossing(power, sigma):
    profile = mm.GaussianProfile(power=power, sigma=sigma)
    support = profile.support()
    peak = profile(np.array([math.sqrt(0.5*power/sigma) if power else 0.0]))[0]
    assert profile(np.array([support]))[0]**2/peak**2 == pytest.approx(mm.SUPPORT_TOLERANCE, rel=1e-6)


def test_gaussian_dilation():
    profile = mm.GaussianProfile(amplitude=2.0, power=1, sigma=0.7)
    rho = np.linspace(0.0, 6.0, 25)
    assert np.allclose(profile.dilate(2.0)(rho), profile(rho/2.0), rtol=1e-14, atol=0)
    assert profile.dilate(2.0).scale == pytest.approx(2.0*profile.scale)


@pytest.mark.parametrize("arguments", [{"power": -1}, {"power": 1.5}, {"sigma": 0.0}, {"side": "time"}])
def test_gaussian_validation(arguments):
    with pytest.raises(me.DomainError):
        mm.GaussianProfile(**arguments)


@pytest.mark.parametrize("rule", ["cubic", "panel"])
def test_sampled_profile_interpolates_and_integrates(rule):
    gaussian = mm.GaussianProfile(power=1)
    edges = mq.edges_linear(1e-3, 12.0, 0.5)
    if rule == "panel":
        nodes, _ = mq.panels_rule(edges)
        sampled = mm.SampledProfile(nodes, gaussian(nodes), rule="panel", edges=edges)
    else:
        nodes = np.linspace(1e-3, 12.0, 4000)
        sampled = mm.SampledProfile(nodes, gaussian(nodes))
    rho = np.linspace(0.01, 11.0, 57)
    tolerance = 1e-10 if rule == "panel" else 1e-8
    assert np.allclose(sampled(rho), gaussian(rho), rtol=0, atol=tolerance)
    assert sampled.moment(2.0) == pytest.approx(gaussian.moment(2.0), rel=1e-6)
    assert sampled(np.array([13.0]))[0] == 0.0
    assert sampled.tail_ratio() < 1e-30


def test_sampled_profile_validation():
    with pytest.raises(me.DomainError):
        mm.SampledProfile(np.linspace(1.0, 2.0, 4), np.zeros(4))
    with pytest.raises(me.DomainError):
        mm.SampledProfile(np.linspace(0.0, 2.0, 10), np.zeros(10))
    with pytest.raises(me.DomainError):
        mm.SampledProfile(np.linspace(1.0, 2.0, 16), np.zeros(16), rule="panel")


def test_power_weighted_profile():
    base = mm.GaussianProfile(power=1)
    weighted = mm.PowerWeightedProfile(base, 0.5, factor=3.0)
    assert weighted.moment(2.0) == pytest.approx(9.0*base.moment(3.0))
    assert weighted(np.array([2.0]))[0] == pytest.approx(3.0*math.sqrt(2.0)*base(np.array([2.0]))[0])
    assert weighted.dilate(2.0).moment(2.0) == pytest.approx(9.0*2.0**-1.0*base.dilate(2.0).moment(3.0))


# ----------------------------------------------------------------------------

def test_component_and_function_validation():
    with pytest.raises(me.DomainError):
        mm.Component(mm.Mode(3, 1), mm.GaussianProfile(), weight=4)
    component = mm.Component(mm.Mode(3, 1), mm.GaussianProfile(), weight=3)
    with pytest.raises(me.DomainError):
        mm.SpectralFunction(3, (component, component))
    with pytest.raises(me.DomainError):
        mm.SpectralFunction(4, (component,))
    f = mm.SpectralFunction.single(3, 2, mm.GaussianProfile())
    assert f.degrees == (2,)
    assert f.dilate(2.0).components[0].profile.sigma == pytest.approx(0.25)


def test_sphere_function_norms():
    g = mm.SphereFunction(3, {(0, 1): 1.0, (1, 1): 2.0, (1, 3): 1j})
    assert g.degree_mass() == {0: 1.0, 1: 5.0}
    assert mm.sphere_h_norm(g, 0.0) == pytest.approx(math.sqrt(6.0))
    assert mm.sphere_h_norm(g, 0.5) == pytest.approx(math.sqrt(1.0 + math.sqrt(3.0)*5.0))
    with pytest.raises(me.DomainError):
        mm.SphereFunction(3, {(1, 4): 1.0})


def test_spectral_sobolev_norm_of_gaussian():
    f = mm.SpectralFunction.single(3, 0, mm.GaussianProfile())
    expected = math.sqrt((2.0*math.pi)**-3*math.gamma(1.5)/(2.0*2.0**1.5))
    assert mm.spectral_sobolev_norm(f, 0.0, 0.0) == pytest.approx(expected, rel=1e-13)
    g = mm.SpectralFunction.single(3, 1, mm.GaussianProfile(), weight=3)
    ratio = mm.spectral_sobolev_norm(g, 0.0, 1.0)/mm.spectral_sobolev_norm(g, 0.0, 0.0)
    assert ratio == pytest.approx(math.sqrt(3.0))
    assert mm.spectral_sobolev_norm(g, 0.0, 1.0, "bracket-k")/mm.spectral_sobolev_norm(g, 0.0, 0.0) == pytest.approx(math.sqrt(2.0))


def test_spectral_sobolev_norm_adds_over_components():
    parts = (mm.Component(mm.Mode(4, 0), mm.GaussianProfile()),
        mm.Component(mm.Mode(4, 2), mm.GaussianProfile(power=2, sigma=0.5), weight=3))
    f = mm.SpectralFunction(4, parts)
    for s, m in ((0.0, 0.0), (0.5, -0.5), (-0.25, 1.0)):
        singles = [mm.spectral_sobolev_norm(mm.SpectralFunction(4, (part,)), s, m)**2 for part in parts]
        assert mm.spectral_sobolev_norm(f, s, m)**2 == pytest.approx(sum(singles), rel=1e-14)


def test_sphere_area():
    assert mm.sphere_area(2) == pytest.approx(2.0*math.pi)
    assert mm.sphere_area(3) == pytest.approx(4.0*math.pi)
    assert mm.sphere_area(4) == pytest.approx(2.0*math.pi**2)


@pytest.mark.parametrize("k", [0, 1, 4])
def test_zonal_harmonics_are_normalised(k):
    nodes, weights = mq.panels_rule(mq.edges_linear(0.0, 2.0*math.pi, 0.25))
    circle = float(np.sum(weights*mm.zonal_harmonic(2, k, nodes)**2))
    assert circle == pytest.approx(1.0, rel=1e-12)
    nodes, weights = mq.panels_rule(mq.edges_linear(0.0, math.pi, 0.25))
    sphere = 2.0*math.pi*float(np.sum(weights*mm.zonal_harmonic(3, k, nodes)**2*np.sin(nodes)))
    assert sphere == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(me.DomainError):
        mm.zonal_harmonic(4, k, nodes)


# ----------------------------------------------------------------------------

def test_text_records():
    f = mm.SpectralFunction(3, (mm.Component(mm.Mode(3, 0), mm.GaussianProfile(0.5, 0, 2.0)),
        mm.Component(mm.Mode(3, 2), mm.GaussianProfile(1.25, 2, 0.75), weight=4)))
    text = mm.dumps_spectral(f)
    assert "k=2\nweight=4\nkind=parametric-gaussian" in text
    assert mm.loads_spectral("# two components\n" + text) == f


@pytest.mark.parametrize("text", [
    "",
    "n=3\nk=0\nkind=parametric-gaussian\namplitude=1\nm=0",
    "n=3\nk=0\nkind=sampled\namplitude=1\nm=0\nsigma=1",
    "n=3\nk=0\nk=1\nkind=parametric-gaussian\namplitude=1\nm=0\nsigma=1",
    "n=3\nk=0\nkind=parametric-gaussian\namplitude=1\nm=0\nsigma=1\nflavour=1",
    "n=3\nk=0\nkind=parametric-gaussian\namplitude=one\nm=0\nsigma=1",
    "n=3\nk=0\nkind=parametric-gaussian\namplitude=1\nm=0\nsigma=1\n\nn=2\nk=1\nkind=parametric-gaussian\namplitude=1\nm=0\nsigma=1",
])
def test_text_records_reject_malformed_input(text):
    with pytest.raises(me.DomainError):
        mm.loads_spectral(text)
