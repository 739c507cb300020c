'''The module containing the estimates as computable objects.

Per-mode trace and Morawetz constants come in closed form from the
Weber-Schafheitlin integral; the Sobolev, local smoothing and weighted
Strichartz families are measured as lhs/rhs ratios on mode evolutions.
'''

import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize_scalar

import mods.errors as me
import mods.exponents as mx
import mods.log as ml
import mods.modes as mm
import mods.specfun as sf
import mods.transforms as mt


# ----------------------------------------------------------------------------

ESTIMATE_IDS = ("trace", "morawetz", "morawetz-local", "strichartz-weighted",
    "sobolev-infty", "sobolev-dual", "sobolev-infty-zonal")
METHODS = ("closed-form", "quadrature", "simulation")
SOBOLEV_VARIANTS = ("l2-omega", "dual", "zonal-infty")
STRICHARTZ_FORMS = ("weighted", "generalized")
CSV_COLUMNS = ("estimate_id", "n", "b", "a", "k", "r_exp", "q_exp", "alpha", "weight_mode",
    "lhs", "rhs", "ratio", "method", "grid_id")

TRACE_TRUNCATION = 400.0
QUADRATURE_TARGET = 1e-12
MORAWETZ_TOLERANCE = 5e-3
HORIZON = 32.0
SIMULATION_CACHE = 2
TAIL_FLOOR = 1e-13
SUP_POINTS = 561
ANGLE_POINTS = 721

logger = ml.get("Inequalities", level="WARNING")


@dataclass(frozen=True)
class EstimateReport:
    '''One evaluated estimate: both sides, their ratio and how they were obtained.

    k: Degree, or the degrees joined by ";" for several components.
    ratio: lhs/rhs; None when rhs is 0.
    extras: Further named values (per-radius ratios, indices, tail sizes).
    '''
    estimate_id: str
    n: int
    lhs: float
    rhs: float
    method: str
    b: float = None
    a: float = None
    k: object = None
    r_exp: float = None
    q_exp: float = None
    alpha: float = None
    weight_mode: str = "exact-lambda"
    grid_id: str = ""
    extras: dict = field(default_factory=dict, compare=False)
    ratio: float = field(init=False)

    def __post_init__(self):
        me.require(self.estimate_id in ESTIMATE_IDS, f"unknown estimate id {self.estimate_id!r}")
        me.require(self.method in METHODS, f"unknown method {self.method!r}")
        me.require(self.lhs >= 0 and self.rhs >= 0, f"both sides must be nonnegative, got {self.lhs}, {self.rhs}")
        object.__setattr__(self, "lhs", float(self.lhs))
        object.__setattr__(self, "rhs", float(self.rhs))
        object.__setattr__(self, "ratio", self.lhs/self.rhs if self.rhs > 0 else None)

    def row(self):
        '''Returns the CSV_COLUMNS fields of the report as a dict.'''
        return {column: getattr(self, column) for column in CSV_COLUMNS}


@dataclass(frozen=True)
class EquivalenceBounds:
    '''The values v_k = (2 pi)^n lam_k^{b-1} c_k for k <= k_max with their extremes.

    stirling_limit: L(b) = Gamma(b-1)/(2^{b-1} Gamma(b/2)**2), the limit of c_k k^{b-1}.
    gap: |c_kmax kmax^{b-1}/L(b) - 1|.
    '''
    n: int
    b: float
    k_max: int
    values: tuple
    inf_v: float
    sup_v: float
    stirling_limit: float
    gap: float


def _check_b(n: int, b: float):
    if not 1.0 < b < n:
        raise me.WindowError(f"b = {b} is outside the admissible range for n = {n}", f"1 < b < {n}")


def _degrees_text(f: mm.SpectralFunction):
    degrees = f.degrees
    return degrees[0] if len(degrees) == 1 else ";".join(str(k) for k in degrees)


# ----------------------------------------------------------------------------

def ws_closed_form(mu: float, nu: float, lam: float):
    '''Returns the integral of J_mu(t) J_nu(t) t^{-lam} over (0, inf).

    Gamma(lam) Gamma((mu+nu-lam+1)/2) / (2^lam Gamma((mu-nu+lam+1)/2)
    Gamma((nu-mu+lam+1)/2) Gamma((mu+nu+lam+1)/2)), valid for mu+nu+1 > lam > 0.
    A pole in the denominator gives 0.
    '''
    if not mu + nu + 1.0 > lam > 0.0:
        raise me.DomainError(f"Weber-Schafheitlin integral needs mu+nu+1 > lam > 0, got mu={mu}, nu={nu}, lam={lam}")
    sign = 1
    total = sf.log_gamma(lam) + sf.log_gamma(0.5*(mu + nu - lam + 1.0)) - lam*math.log(2.0) - sf.log_gamma(0.5*(mu + nu + lam + 1.0))
    for argument in (0.5*(mu - nu + lam + 1.0), 0.5*(nu - mu + lam + 1.0)):
        if argument <= 0 and argument == math.floor(argument):
            return 0.0
        part_sign, part = sf.gamma_sign_log(argument)
        sign *= part_sign
        total -= part
    return sign*math.exp(total)


def mode_integral(n: int, b: float, k: int, truncation: float, lower: float = 0.0, tail: str = "none"):
    '''Returns (value, bound) of the integral of J_nu(t)**2 t^{1-b} over (lower, truncation).

    With tail "asymptotic" the value includes the analytic tail beyond the truncation.
    '''
    nu = mm.Mode(n, k).nu
    spec = mt.OscillatoryIntegralSpec(family="bessel-product", mu=nu, nu=nu, weight=1.0 - b,
        truncation=truncation, tail=tail, lower=lower, target=QUADRATURE_TARGET)
    return mt.oscillatory_integral(spec)


def trace_mode_constant(n: int, b: float, k: int, method: str = "closed-form", truncation: float = None):
    '''Returns c_k(n, b), the squared L2 norm of J_{k+(n-2)/2}(r) r^{(1-b)/2} on (0, inf).

    n: Dimension.
    b: Weight exponent; closed-form needs 1 < b < n.
    k: Degree.
    method: "closed-form" or "quadrature".
    truncation: Quadrature only. Outside 1 < b < n the truncated integral up to
        this point is returned instead of an error.
    '''
    mode = mm.Mode(n, k)
    if method == "closed-form":
        _check_b(n, b)
        return ws_closed_form(mode.nu, mode.nu, b - 1.0)
    if method != "quadrature":
        raise me.DomainError(f"method must be 'closed-form' or 'quadrature', got {method!r}")
    if 1.0 < b < n:
        T = truncation if truncation is not None else max(TRACE_TRUNCATION, 2.0*mode.nu**2)
        value, bound = mode_integral(n, b, k, T, tail="asymptotic")
    else:
        if truncation is None:
            raise me.DivergenceError(f"the mode integral diverges for b = {b} outside (1, {n}); give a truncation")
        value, bound = mode_integral(n, b, k, truncation, tail="none")
    if bound > 1e-8*abs(value):
        logger.warning(f"Tail bound {bound:.3g} is large against c_{k}(n={n}, b={b}) = {value:.6g}.")
    return value


def trace_ratio(g: mm.SphereFunction, n: int, b: float, weight_mode: str = "exact-lambda", method: str = "closed-form"):
    '''Returns the EstimateReport of ||x|^{-b/2} (Lambda^{(b-1)/2} g d(sigma))^|| against ||g||_{L2}.'''
    me.require(g.n == n, f"sphere function lives on S^{g.n - 1}, not S^{n - 1}")
    me.require(len(g.coefficients) > 0, "the sphere function has no coefficients")
    _check_b(n, b)
    total = 0.0
    mass_total = 0.0
    for k, mass in g.degree_mass().items():
        weight = mm.Mode(n, k).weight(weight_mode)
        total += weight**(b - 1.0)*trace_mode_constant(n, b, k, method)*mass
        mass_total += mass
    lhs = math.sqrt((2.0*math.pi)**n*total)
    degrees = tuple(g.degree_mass())
    return EstimateReport("trace", n, lhs, math.sqrt(mass_total), method, b=b,
        k=degrees[0] if len(degrees) == 1 else ";".join(str(k) for k in degrees), weight_mode=weight_mode)


def trace_hs_ratio(g: mm.SphereFunction, n: int, b: float, s: float, weight_mode: str = "exact-lambda"):
    '''Returns the EstimateReport of ||x|^{-b/2} (g d(sigma))^|| against ||g||_{H^s}, s >= (1-b)/2.'''
    me.require(g.n == n, f"sphere function lives on S^{g.n - 1}, not S^{n - 1}")
    _check_b(n, b)
    if s < 0.5*(1.0 - b):
        raise me.WindowError(f"angular regularity s = {s} is too low", f"s >= (1-b)/2 = {0.5*(1.0 - b)}")
    total = sum(trace_mode_constant(n, b, k)*mass for k, mass in g.degree_mass().items())
    degrees = tuple(g.degree_mass())
    return EstimateReport("trace", n, math.sqrt((2.0*math.pi)**n*total), mm.sphere_h_norm(g, s, weight_mode),
        "closed-form", b=b, k=degrees[0] if len(degrees) == 1 else ";".join(str(k) for k in degrees),
        weight_mode=weight_mode, extras={"s": s})


def stirling_limit(b: float):
    '''Returns L(b) = Gamma(b-1)/(2^{b-1} Gamma(b/2)**2).'''
    me.require(b > 1.0, f"L(b) needs b > 1, got {b}")
    return math.exp(sf.log_gamma(b - 1.0) - (b - 1.0)*math.log(2.0) - 2.0*sf.log_gamma(0.5*b))


def equivalence_bounds(n: int, b: float, k_max: int = 200):
    '''Returns the EquivalenceBounds of the trace estimate for k <= k_max.'''
    _check_b(n, b)
    me.require(int(k_max) == k_max and k_max >= 10, f"k_max must be an integer >= 10, got {k_max}")
    values = []
    for k in range(int(k_max) + 1):
        values.append((2.0*math.pi)**n*mm.Mode(n, k).lam**(b - 1.0)*trace_mode_constant(n, b, k))
    limit = stirling_limit(b)
    gap = abs(trace_mode_constant(n, b, int(k_max))*k_max**(b - 1.0)/limit - 1.0)
    return EquivalenceBounds(n=n, b=b, k_max=int(k_max), values=tuple(values), inf_v=min(values),
        sup_v=max(values), stirling_limit=limit, gap=gap)


# ----------------------------------------------------------------------------

def endpoint_divergence_probe(n: int, b: float, k: int, T_list):
    '''Returns [(T, value)] probing the mode integral at or inside the ends of 1 < b < n.

    b = 1: value is the integral of J_nu**2 over (0, T), growing like ln(T)/pi.
    b = n: T is a lower cutoff eps (k = 0 only) and value the integral over
        (eps, 1), growing by ln(10)/(2^{n-2} Gamma(n/2)**2) per decade.
    1 < b < n: value includes the analytic tail and settles as T grows.
    '''
    points = []
    if b == 1.0:
        for T in sorted(T_list):
            value, _ = mode_integral(n, b, k, float(T), tail="none")
            points.append((float(T), value))
    elif b == n:
        me.require(k == 0, f"the small-radius divergence at b = n needs k = 0, got {k}")
        for eps in sorted(T_list, reverse=True):
            me.require(0 < eps < 1, f"lower cutoffs must lie in (0, 1), got {eps}")
            value, _ = mode_integral(n, b, k, 1.0, lower=float(eps), tail="none")
            points.append((float(eps), value))
    else:
        _check_b(n, b)
        for T in sorted(T_list):
            value, _ = mode_integral(n, b, k, float(T), tail="asymptotic")
            points.append((float(T), value))
    logger.debug(f"Divergence probe n={n}, b={b}, k={k}: {points}")
    return points


def divergence_slope(points):
    '''Returns the least-squares slope of value against ln(T).'''
    me.require(len(points) >= 2, "a slope needs at least two points")
    T = np.log(np.array([point[0] for point in points], dtype=float))
    values = np.array([point[1] for point in points], dtype=float)
    slope, _ = np.polyfit(T, values, 1)
    return float(slope)


# ----------------------------------------------------------------------------

def morawetz_mode_ratio_exact(n: int, b: float, a: float, k: int, weight_mode: str = "exact-lambda"):
    '''Returns the squared Morawetz ratio 2 pi a^{-1} c_k w_k^{b-1} of any degree-k function.

    lhs = ||x|^{-b/2} e^{itD^a} f||_{L2(t,x)}, rhs = ||D^{(b-a)/2} Lambda^{(1-b)/2} f||;
    with exact-lambda weights the ratio does not depend on the radial profile.
    '''
    _check_b(n, b)
    me.require(a > 0, f"dispersion exponent must be positive, got {a}")
    return 2.0*math.pi*trace_mode_constant(n, b, k)*mm.Mode(n, k).weight(weight_mode)**(b - 1.0)/a


def _as_function(f):
    if isinstance(f, mm.Component):
        return mm.SpectralFunction(f.mode.n, (f,))
    return f


def _evolutions(f: mm.SpectralFunction, a: float, grids: mt.SimulationGrids):
    return [mt.ModeEvolution(component=component, a=a, grids=grids) for component in f.components]


def _build_simulation(f: mm.SpectralFunction, a: float, horizon: float, density: float):
    grids = mt.simulation_grids([c.profile for c in f.components], a, horizon=horizon, density=density)
    return grids, tuple(_evolutions(f, a, grids))


_cached_simulation = functools.lru_cache(maxsize=SIMULATION_CACHE)(_build_simulation)


def simulate(f, a: float, horizon: float = HORIZON, density: float = 1.0):
    '''Returns (grids, evolutions) of e^{itD^a} f on the grids derived from its profiles.

    Recent simulations are kept, so ratios that differ only in b, r or alpha
    share one evolution. The evolutions must be treated as read-only.
    '''
    f = _as_function(f)
    me.require(a > 0, f"dispersion exponent must be positive, got {a}")
    return _cached_simulation(f, float(a), float(horizon), float(density))


def _time_tails(grids: mt.SimulationGrids, probes: np.ndarray, decay: float = None, floor: float = 0.0):
    '''Returns (tail, uncertainty) summed over both time directions.'''
    forward = grids.probe_times[1:4]
    backward = -grids.probe_times[4:7]
    total, uncertainty = 0.0, 0.0
    for times, values in ((forward, probes[1:4]), (backward, probes[4:7])):
        if values[-1] <= floor:
            continue
        tail, error = mt.power_tail(times, values, decay)
        total += tail
        uncertainty += error
    return total, uncertainty


def _space_time_power(evolutions, grids: mt.SimulationGrids, p: float, alpha: float, decay: float):
    '''Returns the integral over (t, x) of |x|^{-alpha p} (sum_k weight |u_k|**2)^{p/2}.'''
    n = evolutions[0].mode.n
    power = n - 1.0 - alpha*p
    density = sum(evolution.density() for evolution in evolutions)
    probe = sum(evolution.probe_density() for evolution in evolutions)
    values = mt.radial_integral(density**(0.5*p), grids.radial, power)
    probes = mt.radial_integral(probe**(0.5*p), grids.radial, power)
    body = float(np.sum(grids.time_weights*values))
    tail, uncertainty = _time_tails(grids, probes, decay)
    if uncertainty > 1e-3*body:
        logger.warning(f"Time tail uncertainty {uncertainty:.3g} against a body of {body:.6g}.")
    return body + tail


def _space_time_sup(evolutions, grids: mt.SimulationGrids, alpha: float):
    '''Returns sup over (t, r) of r^{-alpha} (sum_k weight |u_k|**2)^{1/2}, refined off the grid.'''
    radii = grids.radial.nodes
    times = np.concatenate([grids.times, grids.probe_times])
    density = np.concatenate([sum(e.density() for e in evolutions), sum(e.probe_density() for e in evolutions)])
    values = np.sqrt(density)*radii**(-alpha)
    ti, ri = np.unravel_index(int(np.argmax(values)), values.shape)
    best = float(values[ti, ri])

    def magnitude(t, r):
        total = sum(e.component.weight*abs(e.amplitude_at(t, r))**2 for e in evolutions)
        return math.sqrt(total)*r**(-alpha)

    t_best, r_best = float(times[ti]), float(radii[ri])
    lo, hi = float(radii[max(ri - 1, 0)]), float(radii[min(ri + 1, radii.size - 1)])
    if hi > lo:
        found = minimize_scalar(lambda r: -magnitude(t_best, r), bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-10*hi})
        if -found.fun > best:
            best, r_best = -found.fun, float(found.x)
    order = np.sort(times)
    position = int(np.searchsorted(order, t_best))
    t_lo = float(order[max(position - 1, 0)])
    t_hi = float(order[min(position + 1, order.size - 1)])
    if t_hi > t_lo:
        found = minimize_scalar(lambda t: -magnitude(t, r_best), bounds=(t_lo, t_hi), method="bounded",
            options={"xatol": 1e-10*max(abs(t_hi), abs(t_lo))})
        best = max(best, -found.fun)
    return best


def morawetz_ratio_numeric(f, b: float, a: float, *, weight_mode: str = "exact-lambda", grids: mt.SimulationGrids = None,
        horizon: float = HORIZON, density: float = 1.0):
    '''Returns the EstimateReport of ||x|^{-b/2} e^{itD^a} f||_{L2(t,x)} against ||D^{(b-a)/2} Lambda^{(1-b)/2} f||.

    The lhs is tensor quadrature of the evolved field over (t, r) plus a
    fitted time tail of known decay t^{-b}; the rhs comes from the profile moments.

    f: Component or SpectralFunction with frequency-side profiles.
    b: Weight exponent, 1 < b < n.
    a: Dispersion exponent.
    grids: SimulationGrids; derived from the profiles when omitted.
    '''
    f = _as_function(f)
    _check_b(f.n, b)
    me.require(a > 0, f"dispersion exponent must be positive, got {a}")
    if grids is None:
        grids, evolutions = simulate(f, a, horizon, density)
    else:
        evolutions = _evolutions(f, a, grids)
    lhs = math.sqrt(_space_time_power(evolutions, grids, 2.0, 0.5*b, b))
    rhs = mm.spectral_sobolev_norm(f, 0.5*(b - a), 0.5*(1.0 - b), weight_mode)
    return EstimateReport("morawetz", f.n, lhs, rhs, "simulation", b=b, a=a, k=_degrees_text(f),
        r_exp=2.0, q_exp=2.0, alpha=0.5*b, weight_mode=weight_mode, grid_id=grids.grid_id)


def morawetz_ratio_exact(f, b: float, a: float, weight_mode: str = "exact-lambda"):
    '''Returns the squared Morawetz ratio of a function with several components.

    Modes decouple on both sides, so the result is the average of the mode
    ratios weighted by the squared rhs contribution of each component.
    '''
    f = _as_function(f)
    total, weights = 0.0, 0.0
    for component in f.components:
        share = mm.spectral_sobolev_norm(mm.SpectralFunction(f.n, (component,)), 0.5*(b - a), 0.5*(1.0 - b), weight_mode)**2
        total += share*morawetz_mode_ratio_exact(f.n, b, a, component.mode.k, weight_mode)
        weights += share
    me.require(weights > 0, "the Morawetz rhs of f vanishes")
    return total/weights


def cross_validate_function(f, b: float, a: float, *, tolerance: float = MORAWETZ_TOLERANCE,
        weight_mode: str = "exact-lambda", horizon: float = HORIZON, density: float = 1.0):
    '''Returns (exact squared ratio, numeric report) of f after checking that they agree.

    Raises ToleranceError when the squared ratios differ by more than tolerance,
    relatively; the error carries the numeric report in its report attribute.
    '''
    f = _as_function(f)
    exact = morawetz_ratio_exact(f, b, a, weight_mode)
    report = morawetz_ratio_numeric(f, b, a, weight_mode=weight_mode, horizon=horizon, density=density)
    error = abs(report.ratio**2/exact - 1.0)
    report = replace(report, extras={**report.extras, "exact": exact, "relative_error": error})
    if error > tolerance:
        raise me.ToleranceError(f"Morawetz ratio for n={f.n}, b={b}, a={a}, k={report.k}: numeric {report.ratio**2:.8g} "
            f"against exact {exact:.8g} (relative error {error:.3g} > {tolerance:g})", report)
    logger.debug(f"Morawetz n={f.n}, b={b}, a={a}, k={report.k} agrees to {error:.3g}.")
    return exact, report


def cross_validate_morawetz(n: int, b: float, a: float, k: int, profile=None, *, tolerance: float = MORAWETZ_TOLERANCE,
        weight_mode: str = "exact-lambda", horizon: float = HORIZON, density: float = 1.0):
    '''Returns (exact squared ratio, numeric report) of one mode after checking that they agree.

    profile: Radial profile; the default Gaussian when None.
    '''
    profile = profile if profile is not None else mm.GaussianProfile()
    return cross_validate_function(mm.SpectralFunction.single(n, k, profile), b, a, tolerance=tolerance,
        weight_mode=weight_mode, horizon=horizon, density=density)


# ----------------------------------------------------------------------------

def local_smoothing_ratio(f, a: float, radii, *, horizon: float = None, density: float = 1.0):
    '''Returns the EstimateReport of max_R R^{-1/2} ||e^{itD^a} f||_{L2(R x B_R)} against ||D^{(1-a)/2} f||.

    Only balls centred at the origin are measured. extras holds the per-R values.
    '''
    f = _as_function(f)
    me.require(a > 0, f"dispersion exponent must be positive, got {a}")
    radii = sorted(float(R) for R in radii)
    me.require(len(radii) > 0 and radii[0] > 0, "radii must be positive and non-empty")
    profiles = [component.profile for component in f.components]
    scale = min(profile.scale for profile in profiles)
    if horizon is None:
        horizon = max(HORIZON, 16.0*radii[-1]*scale/a)
    grids = mt.simulation_grids(profiles, a, horizon=horizon, density=density, breakpoints=radii, r_cap=radii[-1])
    evolutions = _evolutions(f, a, grids)
    field_density = sum(evolution.density() for evolution in evolutions)
    probe_density = sum(evolution.probe_density() for evolution in evolutions)
    nodes = grids.radial.nodes
    per_radius = {}
    lhs = 0.0
    for R in radii:
        inside = nodes <= R*(1.0 + 1e-12)
        values = mt.radial_integral(field_density*inside, grids.radial, f.n - 1.0)
        probes = mt.radial_integral(probe_density*inside, grids.radial, f.n - 1.0)
        body = float(np.sum(grids.time_weights*values))
        tail, _ = _time_tails(grids, probes, None, floor=TAIL_FLOOR*max(float(np.max(values)), 0.0))
        value = math.sqrt(max(body + tail, 0.0)/R)
        per_radius[R] = value
        lhs = max(lhs, value)
    rhs = mm.spectral_sobolev_norm(f, 0.5*(1.0 - a), 0.0)
    return EstimateReport("morawetz-local", f.n, lhs, rhs, "simulation", a=a, k=_degrees_text(f),
        grid_id=grids.grid_id, extras={"per_radius": per_radius})


# ----------------------------------------------------------------------------

def _time_decay(n: int, a: float, p: float, alpha: float):
    '''Returns the decay exponent of the time profile of || |x|^{-alpha} u(t) ||_p**p.'''
    if a == 1:
        return 0.5*p*(n - 1.0) + alpha*p - n + 1.0
    return 0.5*n*p + alpha*p - n


def weighted_strichartz_ratio(f, b: float = None, a: float = 2.0, r_exp: float = 2.0, alpha: float = None, *,
        form: str = "weighted", q_exp: float = None, weight_mode: str = "exact-lambda",
        horizon: float = HORIZON, density: float = 1.0):
    '''Returns the EstimateReport of a weighted space-time norm of e^{itD^a} f against its data norm.

    weighted: lhs = || |x|^{-alpha} u ||_{L^r_{t, r^{n-1}dr} L2_omega} with
        alpha = b/2 - n/2 + n/r and rhs = ||D^{b/2-a/r} Lambda^{(1-b)/2} f||.
    generalized: lhs = || |x|^{-alpha} D^s Lambda^{s1} u ||_{L^q_{t, r^{n-1}dr} L2_omega}
        with s, s1 from mods.exponents.weighted_strichartz_params and rhs = ||f||.

    r_exp: Exponent r in [2, inf] of the weighted form.
    q_exp: Exponent q in [2, inf] of the generalized form.
    '''
    f = _as_function(f)
    n = f.n
    me.require(a > 0, f"dispersion exponent must be positive, got {a}")
    me.require(form in STRICHARTZ_FORMS, f"form must be one of {STRICHARTZ_FORMS}, got {form!r}")
    extras = {"form": form}
    if form == "weighted":
        me.require(b is not None, "the weighted form needs b")
        _check_b(n, b)
        p = float(r_exp)
        me.require(p >= 2, f"r_exp must lie in [2, inf], got {r_exp}")
        expected = 0.5*b - 0.5*n + (n/p if math.isfinite(p) else 0.0)
        if alpha is not None and not math.isclose(alpha, expected, rel_tol=1e-12, abs_tol=1e-12):
            raise me.WindowError(f"alpha = {alpha} does not match the weighted form", f"alpha = b/2 - n/2 + n/r = {expected}")
        alpha = expected
        target = f
        rhs = mm.spectral_sobolev_norm(f, 0.5*b - (a/p if math.isfinite(p) else 0.0), 0.5*(1.0 - b), weight_mode)
    else:
        me.require(q_exp is not None and alpha is not None, "the generalized form needs q_exp and alpha")
        params = mx.weighted_strichartz_params(q_exp, alpha, n, a)
        if not params.valid:
            raise me.WindowError(f"(q, alpha) = ({q_exp}, {alpha}) is outside the generalized window", params.window)
        p = float(q_exp)
        s, s1 = float(params.s), float(params.s1)
        extras.update({"s": s, "s1": s1})
        alpha = float(alpha)
        target = mm.SpectralFunction(n, tuple(replace(c, profile=mm.PowerWeightedProfile(c.profile, s,
            factor=c.mode.weight(weight_mode)**s1)) for c in f.components))
        rhs = mm.spectral_sobolev_norm(f, 0.0, 0.0)
    grids, evolutions = simulate(target, a, horizon, density)
    if math.isfinite(p):
        decay = _time_decay(n, a, p, alpha)
        if not decay > 1.0:
            raise me.DivergenceError(f"time profile decays like t**-{decay:.3g} for r = {p}, alpha = {alpha}")
        lhs = _space_time_power(evolutions, grids, p, alpha, decay)**(1.0/p)
    else:
        lhs = _space_time_sup(evolutions, grids, alpha)
    return EstimateReport("strichartz-weighted", n, lhs, rhs, "simulation", b=b, a=a, k=_degrees_text(f),
        r_exp=p, q_exp=p, alpha=alpha, weight_mode=weight_mode, grid_id=grids.grid_id, extras=extras)


# ----------------------------------------------------------------------------

def _sup_radius(magnitude, scale: float):
    '''Returns sup over r > 0 of magnitude(r) from a logarithmic scan refined by a bounded search.'''
    radii = np.geomspace(1e-4, 1e3, SUP_POINTS)/scale
    values = np.asarray(magnitude(radii), dtype=float)
    index = int(np.argmax(values))
    best = float(values[index])
    lo = math.log(radii[max(index - 1, 0)])
    hi = math.log(radii[min(index + 1, radii.size - 1)])
    found = minimize_scalar(lambda x: -float(np.asarray(magnitude(np.array([math.exp(x)])))[0]),
        bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return max(best, -float(found.fun))


def _l2_omega(f: mm.SpectralFunction, radii):
    total = np.zeros(np.shape(radii))
    for component in f.components:
        total = total + component.weight*np.abs(mt.physical_values(component, radii))**2
    return np.sqrt(total)


def sobolev_trace_ratio(f, b: float, variant: str = "l2-omega", s: float = None, *, weight_mode: str = "exact-lambda"):
    '''Returns the EstimateReport of one Sobolev trace inequality.

    l2-omega: sup_r r^{(n-b)/2} ||f(r.)||_{L2_omega} against ||D^{b/2} Lambda^{(1-b)/2} f||.
    dual: ||D^{-b/2} Lambda^{(b-1)/2} f|| against the integral of r^{(b-n)/2} ||f(r.)||_{L2_omega} r^{n-1} dr.
    zonal-infty: sup_{r, theta} r^{(n-b)/2} |f(r, theta)| against ||D^{b/2} Lambda^s f||, for
        zonal functions on R^2 or R^3 and s > (n-b)/2.
    '''
    f = _as_function(f)
    n = f.n
    _check_b(n, b)
    me.require(variant in SOBOLEV_VARIANTS, f"variant must be one of {SOBOLEV_VARIANTS}, got {variant!r}")
    scale = min(component.profile.scale for component in f.components)
    half = 0.5*(n - b)
    if variant == "l2-omega":
        lhs = _sup_radius(lambda r: r**half*_l2_omega(f, r), scale)
        rhs = mm.spectral_sobolev_norm(f, 0.5*b, 0.5*(1.0 - b), weight_mode)
        return EstimateReport("sobolev-infty", n, lhs, rhs, "quadrature", b=b, k=_degrees_text(f),
            r_exp=math.inf, weight_mode=weight_mode)
    if variant == "dual":
        lhs = mm.spectral_sobolev_norm(f, -0.5*b, 0.5*(b - 1.0), weight_mode)
        grid = mt.RadialGrid.covering(1e-6/scale, 40.0/scale, 0.25/scale, knee=1.0/scale)
        values = _l2_omega(f, grid.nodes)
        weighted = values*grid.nodes**(0.5*(b + n) - 1.0)
        peak = float(np.max(weighted))
        if peak > 0 and weighted[-1] > 1e-8*peak:
            raise me.DivergenceError("the dual right-hand side does not decay: r^{(b+n)/2}|f| is still "
                f"{weighted[-1]/peak:.3g} of its peak at the last radius")
        rhs = float(mt.radial_integral(values, grid, 0.5*(b - n) + n - 1.0))
        return EstimateReport("sobolev-dual", n, lhs, rhs, "quadrature", b=b, k=_degrees_text(f),
            weight_mode=weight_mode, grid_id=grid.grid_id)
    if n not in (2, 3):
        raise me.WindowError(f"zonal sup norms are available for n in (2, 3), got {n}", "n in {2, 3}")
    if any(component.weight != 1 for component in f.components):
        raise me.WindowError("zonal functions carry one slot per degree", "weight = 1")
    if s is None or not s > half:
        raise me.WindowError(f"angular regularity s = {s} is too low", f"s > (n-b)/2 = {half}")
    top = np.pi if n == 3 else 2.0*np.pi
    angles = np.linspace(0.0, top, ANGLE_POINTS if n == 2 else (ANGLE_POINTS + 1)//2)
    harmonics = [(1j**c.mode.k)*mm.zonal_harmonic(n, c.mode.k, angles) for c in f.components]

    def magnitude(r):
        r = np.atleast_1d(r)
        total = np.zeros((r.size, angles.size), dtype=complex)
        for component, harmonic in zip(f.components, harmonics):
            total += np.outer(mt.physical_values(component, r), harmonic)
        return r**half*np.max(np.abs(total), axis=1)

    lhs = _sup_radius(magnitude, scale)
    rhs = mm.spectral_sobolev_norm(f, 0.5*b, s, weight_mode)
    return EstimateReport("sobolev-infty-zonal", n, lhs, rhs, "quadrature", b=b, k=_degrees_text(f),
        r_exp=math.inf, weight_mode=weight_mode, extras={"s": s})


# ----------------------------------------------------------------------------
