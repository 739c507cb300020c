'''The module containing the radial Fourier machinery.

Hankel transforms realise the Fourier transform mode by mode, the extension
operator maps sphere coefficients to radial parts of the Fourier transform of
g d(sigma), and the fractional propagator e^{itD^a} is evaluated through the
same Bessel kernel. Phases i^{+-k} stay out of the sampled values and travel
as profile metadata.
'''

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

import mods.errors as me
import mods.log as ml
import mods.modes as mm
import mods.quadrature as mq
import mods.specfun as sf


# ----------------------------------------------------------------------------

SPACINGS = ("linear", "logarithmic", "hybrid")
FAMILIES = ("bessel-product", "propagator")
TAIL_METHODS = ("asymptotic", "none")
TAIL_TOLERANCE = 1e-10
KERNEL_ELEMENTS = 2**18
ENVELOPE = 1.01

logger = ml.get("Transforms", level="WARNING")


@dataclass(frozen=True)
class RadialGrid:
    '''Composite Gauss-Legendre panels on [r_min, r_max].

    r_min: Left end, positive.
    r_max: Right end.
    count: Requested number of nodes, a multiple of degree; breakpoints may add panels.
    spacing: "linear", "logarithmic" or "hybrid" (logarithmic below knee, linear above).
    degree: Nodes per panel, at least 8.
    knee: Switch point of the hybrid spacing.
    breakpoints: Extra panel edges.
    '''
    r_min: float = 1e-4
    r_max: float = 1e3
    count: int = 2048
    spacing: str = "logarithmic"
    degree: int = mq.DEFAULT_DEGREE
    knee: float = 1.0
    breakpoints: tuple = ()

    def __post_init__(self):
        me.require(0 < self.r_min < self.r_max, f"grid needs 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        me.require(self.spacing in SPACINGS, f"spacing must be one of {SPACINGS}, got {self.spacing}")
        me.require(self.degree >= 8, f"panel degree must be at least 8, got {self.degree}")
        me.require(self.count >= 16 and self.count % self.degree == 0, f"count must be >= 16 and a multiple of {self.degree}, got {self.count}")
        if self.spacing == "hybrid":
            me.require(self.r_min < self.knee < self.r_max, f"hybrid knee {self.knee} must lie inside the grid")
            me.require(self._log_panels() < self.count//self.degree, "hybrid grid has no linear panels left")
        object.__setattr__(self, "breakpoints", tuple(sorted(float(point) for point in self.breakpoints)))

    @classmethod
    def covering(cls, lo: float, hi: float, width: float, knee: float = None, degree: int = mq.DEFAULT_DEGREE, breakpoints=()):
        '''Returns the grid whose linear panels are at most width wide; hybrid when knee is given.'''
        if knee is None or knee >= hi:
            panels = max(2, int(math.ceil((hi - lo)/width - 1e-9)))
            return cls(lo, hi, panels*degree, "linear", degree, breakpoints=tuple(breakpoints))
        logarithmic = max(1, int(math.ceil(math.log(knee/lo) - 1e-9)))
        linear = max(1, int(math.ceil((hi - knee)/width - 1e-9)))
        return cls(lo, hi, (logarithmic + linear)*degree, "hybrid", degree, knee, tuple(breakpoints))

    def _log_panels(self):
        return max(1, int(math.ceil(math.log(self.knee/self.r_min) - 1e-9)))

    @functools.cached_property
    def edges(self):
        panels = self.count//self.degree
        if self.spacing == "linear":
            edges = np.linspace(self.r_min, self.r_max, panels + 1)
        elif self.spacing == "logarithmic":
            edges = np.geomspace(self.r_min, self.r_max, panels + 1)
        else:
            logarithmic = self._log_panels()
            edges = np.concatenate([np.geomspace(self.r_min, self.knee, logarithmic + 1),
                np.linspace(self.knee, self.r_max, panels - logarithmic + 1)[1:]])
        return mq.edges_merge(edges, self.breakpoints)

    @functools.cached_property
    def _rule(self):
        return mq.panels_rule(self.edges, self.degree)

    @property
    def nodes(self):
        return self._rule[0]

    @property
    def weights(self):
        return self._rule[1]

    @property
    def grid_id(self):
        text = f"{self.spacing}[{self.r_min:.6g},{self.r_max:.6g}]x{self.count}/{self.degree}"
        if self.spacing == "hybrid":
            text += f"@{self.knee:.6g}"
        if self.breakpoints:
            text += f"+{len(self.breakpoints)}bp"
        return text


DEFAULT_GRID = RadialGrid()


def radial_integral(values, grid: RadialGrid, power: float):
    '''Returns the integral over (0, r_max) of values * r**power sampled on grid nodes.

    The stretch (0, r_min) is added assuming values is constant there.
    '''
    values = np.asarray(values)
    me.require(power > -1.0, f"r**{power} is not integrable at 0", me.DivergenceError)
    nodes = grid.nodes
    body = np.sum(values*grid.weights*nodes**power, axis=-1)
    head = values[..., 0]*grid.r_min**(power + 1.0)/(power + 1.0)
    return body + head


def radial_l2_norm(values, grid: RadialGrid, n: int):
    '''Returns (integral of |values|**2 r**(n-1) dr)**(1/2) on the grid.'''
    return math.sqrt(float(radial_integral(np.abs(np.asarray(values))**2, grid, n - 1.0)))


# ----------------------------------------------------------------------------
# Radial kernel r^{-(n-2)/2} J_nu(r rho), the only place Bessel matrices are built.

def _radial_kernel(mode: mm.Mode, outer, inner):
    outer = np.asarray(outer, dtype=float)
    inner = np.asarray(inner, dtype=float)
    values = sf.bessel_j(mode.nu, np.outer(outer, inner))
    shift = 0.5*(mode.n - 2)
    if shift == 0:
        return values
    zero = outer == 0
    scaled = values*np.where(zero, 1.0, outer)[:, None]**(-shift)
    if zero.any():
        limit = inner**mode.nu/math.exp(mode.nu*math.log(2.0) + sf.log_gamma(mode.nu + 1.0)) if mode.k == 0 else np.zeros_like(inner)
        scaled[zero] = limit
    return scaled


def _kernel_apply(mode: mm.Mode, outputs: np.ndarray, inner: np.ndarray, spectral: np.ndarray):
    '''Returns K @ spectral in row blocks, K the radial kernel of outputs against inner nodes.

    Every kernel entry is evaluated once, whatever the number of spectral columns.
    '''
    complex_valued = np.iscomplexobj(spectral)
    matrix = spectral.reshape(spectral.shape[0], -1)
    width = matrix.shape[1]
    if complex_valued:
        matrix = np.concatenate([matrix.real, matrix.imag], axis=1)
    product = np.empty((outputs.size, matrix.shape[1]))
    rows = max(1, KERNEL_ELEMENTS//max(inner.size, 1))
    for start in range(0, outputs.size, rows):
        block = slice(start, start + rows)
        product[block] = _radial_kernel(mode, outputs[block], inner) @ matrix
    if complex_valued:
        product = product[:, :width] + 1j*product[:, width:]
    return product.reshape(outputs.shape + spectral.shape[1:])


def _check_tail(profile, tolerance: float):
    ratio = profile.tail_ratio()
    if ratio > tolerance:
        raise me.TailToleranceError(f"{profile.kind} profile does not decay: last sample is {ratio:.3g} of the peak")


def _synthesis(mode: mm.Mode, profile, outputs, *, a: float = 1.0, t: float = 0.0, tolerance: float = TAIL_TOLERANCE):
    '''Returns the sums over inner nodes rho_j of w_j e^{it rho_j^a} profile(rho_j) K(out, rho_j) rho_j^{n/2}.

    Outputs are grouped by magnitude so each group gets an inner rule that
    resolves its own oscillation rate.
    '''
    _check_tail(profile, tolerance)
    outputs = np.asarray(outputs, dtype=float)
    flat = outputs.ravel()
    lo, hi = profile.lower, profile.support()
    scale = profile.scale
    complex_valued = t != 0 or np.iscomplexobj(profile(np.array([hi])))
    result = np.zeros(flat.shape, dtype=complex if complex_valued else float)
    speed = a*max(hi, scale/4.0)**(a - 1.0) if a >= 1 else a*(scale/4.0)**(a - 1.0)
    group = np.maximum(0, np.ceil(np.log2(np.maximum(flat*scale, 1e-300)))).astype(int)
    for label in np.unique(group):
        members = np.nonzero(group == label)[0]
        reach = float(flat[members].max())
        rate = reach + abs(t)*speed
        width = (hi - lo)/16.0 if rate == 0 else min((hi - lo)/16.0, 4.0*math.pi/rate)
        nodes, weights = mq.panels_rule(mq.edges_linear(lo, hi, width))
        spectral = weights*profile(nodes)*nodes**(0.5*mode.n)
        if t != 0:
            spectral = spectral*np.exp(1j*t*nodes**a)
        result[members] = _kernel_apply(mode, flat[members], nodes, spectral)
    if lo > 0:
        # (0, lo) with the profile frozen at its first value and the small-argument Bessel law
        power = mode.nu + 0.5*mode.n + 1.0
        head = profile(np.array([lo]))[0]*lo**power/(power*math.exp(mode.nu*math.log(2.0) + sf.log_gamma(mode.nu + 1.0)))
        small = flat*lo <= 1.0
        result[small] += head*flat[small]**mode.k
    return result.reshape(outputs.shape)


# ----------------------------------------------------------------------------

def hankel_forward(profile, mode: mm.Mode, grid: RadialGrid = DEFAULT_GRID, tolerance: float = TAIL_TOLERANCE):
    '''Returns the frequency-side profile of a physical-side radial part.

    rho -> (2 pi)^{n/2} int f(r) rho^{-(n-2)/2} J_nu(r rho) r^{n/2} dr on the grid;
    the factor i^{-k} is recorded in the phase attribute.

    profile: Physical-side radial profile.
    mode: Angular mode of the radial part.
    grid: Output grid.
    tolerance: Largest tail ratio accepted from a sampled input.
    '''
    me.require(profile.side == "physical", "hankel_forward needs a physical-side profile")
    values = (2.0*math.pi)**(0.5*mode.n)*_synthesis(mode, profile, grid.nodes, tolerance=tolerance)
    return mm.SampledProfile(grid.nodes, values, rule="panel", edges=grid.edges, degree=grid.degree,
        side="frequency", phase=profile.phase - mode.k)


def hankel_inverse(profile, mode: mm.Mode, grid: RadialGrid = DEFAULT_GRID, tolerance: float = TAIL_TOLERANCE):
    '''Returns the physical-side profile of a frequency-side radial part; phase i^{+k} as metadata.'''
    me.require(profile.side == "frequency", "hankel_inverse needs a frequency-side profile")
    values = (2.0*math.pi)**(-0.5*mode.n)*_synthesis(mode, profile, grid.nodes, tolerance=tolerance)
    return mm.SampledProfile(grid.nodes, values, rule="panel", edges=grid.edges, degree=grid.degree,
        side="physical", phase=profile.phase + mode.k)


def physical_values(component, radii, tolerance: float = TAIL_TOLERANCE):
    '''Returns the physical-side radial part of a component at arbitrary radii (no phase).'''
    mode, profile = component.mode, component.profile
    return (2.0*math.pi)**(-0.5*mode.n)*_synthesis(mode, profile, radii, tolerance=tolerance)


def extend_surface_measure(g: mm.SphereFunction, grid: RadialGrid = DEFAULT_GRID):
    '''Returns [(mode, physical profile)] with the radial parts of the Fourier transform of g d(sigma).

    Each degree contributes sqrt(sum_l |a_{k,l}|**2) (2 pi)^{n/2} r^{-(n-2)/2} J_nu(r);
    only moduli are kept, the phase i^{-k} goes to metadata.
    '''
    parts = []
    for k, mass in g.degree_mass().items():
        mode = mm.Mode(g.n, k)
        values = math.sqrt(mass)*(2.0*math.pi)**(0.5*g.n)*_radial_kernel(mode, grid.nodes, np.array([1.0]))[:, 0]
        parts.append((mode, mm.SampledProfile(grid.nodes, values, rule="panel", edges=grid.edges,
            degree=grid.degree, side="physical", phase=-k)))
    return parts


def propagate_mode(component, a: float, t: float, r, tolerance: float = TAIL_TOLERANCE):
    '''Returns u_k(t, r), the radial part of e^{itD^a} applied to one component.

    u_k(t, r) = (2 pi)^{-n/2} int e^{it rho^a} g(rho) r^{-(n-2)/2} J_nu(r rho) rho^{n/2} d(rho),
    without the global phase i^k.

    component: Component (mode, frequency profile).
    a: Dispersion exponent, positive.
    t: Time.
    r: Radius or array of radii, nonnegative.
    '''
    me.require(a > 0, f"dispersion exponent must be positive, got {a}")
    mode, profile = component.mode, component.profile
    me.require(profile.side == "frequency", "propagate_mode needs a frequency-side profile")
    radii = np.asarray(r, dtype=float)
    me.require(bool(np.all(radii >= 0)), "radii must be nonnegative")
    values = (2.0*math.pi)**(-0.5*mode.n)*_synthesis(mode, profile, radii, a=a, t=t, tolerance=tolerance)
    values = np.asarray(values, dtype=complex)
    if radii.ndim == 0:
        return complex(values)
    return values


# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class OscillatoryIntegralSpec:
    '''One oscillatory integral over (lower, truncation) plus its tail.

    family: "bessel-product" for J_mu(t) J_nu(t) t^weight, "propagator" for
        e^{i time rho^a} profile(rho) J_nu(radius rho) rho^weight.
    mu: First Bessel order (bessel-product only).
    nu: Bessel order.
    weight: Power of the integration variable.
    truncation: Upper limit T of the computed part.
    tail: "asymptotic" to add the analytic large-T tail, "none" to bound it only.
    lower: Lower limit; 0 integrates the endpoint power law exactly.
    profile: Frequency profile (propagator only).
    a: Dispersion exponent (propagator only).
    time: Time (propagator only).
    radius: Radius (propagator only).
    target: Relative refinement target.
    budget: Largest number of panels examined.
    '''
    family: str = "bessel-product"
    mu: float = 0.0
    nu: float = 0.0
    weight: float = 0.0
    truncation: float = 1e3
    tail: str = "asymptotic"
    lower: float = 0.0
    profile: object = None
    a: float = 1.0
    time: float = 0.0
    radius: float = 1.0
    target: float = 1e-12
    budget: int = 400000

    def __post_init__(self):
        me.require(self.family in FAMILIES, f"family must be one of {FAMILIES}, got {self.family}")
        me.require(self.tail in TAIL_METHODS, f"tail method must be one of {TAIL_METHODS}, got {self.tail}")
        me.require(self.truncation > 0, f"truncation must be positive, got {self.truncation}")
        me.require(0 <= self.lower < self.truncation, f"lower limit {self.lower} must lie in [0, {self.truncation})")
        me.require(self.mu >= 0 and self.nu >= 0, "Bessel orders must be nonnegative")
        if self.family == "propagator":
            me.require(self.profile is not None, "propagator integrals need a profile")
            me.require(self.radius >= 0, f"radius must be nonnegative, got {self.radius}")


def integrate_adaptive(integrand, edges, *, target: float = 1e-12, budget: int = 400000, degree: int = mq.DEFAULT_DEGREE):
    '''Returns (value, nodes, weights, values) of the integral over the panels, refined until each panel agrees with its halves.

    A panel passes when its Gauss rule and the rule on its two halves differ by
    less than its share of target times the integral of |integrand|.
    '''
    lo = np.asarray(edges[:-1], dtype=float)
    hi = np.asarray(edges[1:], dtype=float)
    length = float(hi[-1] - lo[0])
    reference, base = mq.legendre_rule(degree)
    kept_nodes, kept_weights, kept_values = [], [], []
    examined = 0
    scale = None
    while lo.size:
        examined += lo.size
        if examined > budget:
            raise me.BudgetError(f"adaptive refinement examined more than {budget} panels")
        middle = 0.5*(lo + hi)
        halves_lo = np.concatenate([lo, middle])
        halves_hi = np.concatenate([middle, hi])
        coarse_nodes = 0.5*(lo + hi)[:, None] + 0.5*(hi - lo)[:, None]*reference
        fine_nodes = 0.5*(halves_lo + halves_hi)[:, None] + 0.5*(halves_hi - halves_lo)[:, None]*reference
        coarse_weights = 0.5*(hi - lo)[:, None]*base
        fine_weights = 0.5*(halves_hi - halves_lo)[:, None]*base
        coarse = np.sum(coarse_weights*integrand(coarse_nodes), axis=1)
        fine_values = integrand(fine_nodes)
        fine_panels = np.sum(fine_weights*fine_values, axis=1)
        fine = fine_panels[:lo.size] + fine_panels[lo.size:]
        if scale is None:
            scale = float(np.sum(np.abs(fine_weights*fine_values)))
        error = np.abs(coarse - fine)
        allowed = target*scale*(hi - lo)/length + 1e-300
        passed = error <= allowed
        both = np.concatenate([passed, passed])
        kept_nodes.append(fine_nodes[both].ravel())
        kept_weights.append(fine_weights[both].ravel())
        kept_values.append(fine_values[both].ravel())
        lo, hi = np.concatenate([lo[~passed], middle[~passed]]), np.concatenate([middle[~passed], hi[~passed]])
    nodes = np.concatenate(kept_nodes)
    order = np.argsort(nodes, kind="stable")
    weights = np.concatenate(kept_weights)[order]
    values = np.concatenate(kept_values)[order]
    logger.debug(f"Adaptive quadrature kept {nodes.size} nodes after examining {examined} panels.")
    total = np.sum(weights*values)
    return (complex(total) if np.iscomplexobj(values) else float(total)), nodes[order], weights, values


@functools.lru_cache(maxsize=128)
def _bessel_product_body(mu: float, nu: float, start: float, truncation: float, target: float, budget: int):
    '''Returns read-only (nodes, weights, J_mu J_nu) on [start, truncation], independent of the power weight.'''
    def integrand(t):
        return sf.bessel_j(mu, t)*sf.bessel_j(nu, t)
    width = 0.5*math.pi
    edges = mq.edges_linear(start, truncation, width)
    _, nodes, weights, values = integrate_adaptive(integrand, edges, target=target, budget=budget)
    for array in (nodes, weights, values):
        array.setflags(write=False)
    return nodes, weights, values


def _bessel_product_head(spec: OscillatoryIntegralSpec, end: float):
    '''Returns the integral over (lower, end) of J_mu J_nu t^weight.'''
    exponent = spec.mu + spec.nu + spec.weight
    if spec.lower == 0:
        if not exponent > -1:
            raise me.DivergenceError(f"t**{exponent} is not integrable at 0")
        nodes, weights = mq.jacobi_rule(24, exponent)
        t = end*nodes
        smooth = sf.bessel_j(spec.mu, t)*sf.bessel_j(spec.nu, t)/t**(spec.mu + spec.nu)
        return float(end**(exponent + 1.0)*np.sum(weights*smooth))
    edges = mq.edges_geometric(spec.lower, end, 2.0)
    nodes, weights = mq.panels_rule(edges, 24)
    return float(np.sum(weights*sf.bessel_j(spec.mu, nodes)*sf.bessel_j(spec.nu, nodes)*nodes**spec.weight))


def _bessel_product_tail(spec: OscillatoryIntegralSpec):
    '''Returns (tail, remainder bound) of the integral from T to infinity.'''
    decay = -spec.weight
    T = spec.truncation
    order = max(spec.mu, spec.nu)
    if spec.tail == "none":
        if decay > 0 and T >= 4.0*order + 1.0:
            return 0.0, 2.0*ENVELOPE**2/math.pi*T**(-decay)/decay
        if spec.weight < -1:
            return 0.0, T**(spec.weight + 1.0)/(-spec.weight - 1.0)
        return 0.0, math.inf
    if not decay > 0:
        raise me.DivergenceError(f"J_mu J_nu t**{spec.weight} is not integrable at infinity")
    if T < max(40.0, 2.0*order*order):
        raise me.TailToleranceError(f"truncation {T} is too short for the asymptotic tail of order {order}")
    modulus_mu, phase_mu = sf.bessel_modulus_phase(spec.mu, T)
    modulus_nu, phase_nu = sf.bessel_modulus_phase(spec.nu, T)
    c_mu, c_nu = 4.0*spec.mu**2, 4.0*spec.nu**2
    if spec.mu == spec.nu:
        m1 = (c_mu - 1.0)/8.0
        m2 = 3.0*(c_mu - 1.0)*(c_mu - 9.0)/128.0
        m3 = 5.0*(c_mu - 1.0)*(c_mu - 9.0)*(c_mu - 25.0)/1024.0
        mean = (T**(-decay)/decay + m1*T**(-decay - 2.0)/(decay + 2.0) + m2*T**(-decay - 4.0)/(decay + 4.0))/math.pi
        mean_bound = abs(m3)*T**(-decay - 6.0)/(math.pi*(decay + 6.0))
    else:
        offset = 0.5*math.pi*(spec.nu - spec.mu)
        mean = (math.cos(offset)*T**(-decay)/decay
            - math.sin(offset)*(c_mu - c_nu)/8.0*T**(-decay - 1.0)/(decay + 1.0))/math.pi
        mean_bound = (max(c_mu, c_nu) + 1.0)**2/64.0*T**(-decay - 2.0)/(math.pi*(decay + 2.0))
    envelope = math.sqrt(modulus_mu*modulus_nu)*T**(-decay)
    total_phase = phase_mu + phase_nu
    slope = 2.0 - (c_mu - 1.0)/(8.0*T*T) - (c_nu - 1.0)/(8.0*T*T)
    oscillating = 0.5*(-envelope*math.sin(total_phase)/slope + (1.0 + decay)*envelope*math.cos(total_phase)/(T*slope**2))
    remainder = (1.0 + decay)*(2.0 + decay)*envelope/(T*T*slope**2)
    return mean + oscillating, mean_bound + remainder


def _propagator_integral(spec: OscillatoryIntegralSpec):
    profile = spec.profile
    lo = max(spec.lower, profile.lower)
    hi = min(spec.truncation, profile.upper)
    if profile.tail_ratio() > TAIL_TOLERANCE and spec.truncation >= profile.upper:
        raise me.TailToleranceError("sampled profile does not decay before its last node")
    scale = profile.scale
    speed = spec.a*max(hi, scale/4.0)**(spec.a - 1.0) if spec.a >= 1 else spec.a*(scale/4.0)**(spec.a - 1.0)
    rate = spec.radius + abs(spec.time)*speed
    width = (hi - lo)/16.0 if rate == 0 else min((hi - lo)/16.0, 4.0*math.pi/rate)

    def integrand(rho):
        values = profile(rho)*sf.bessel_j(spec.nu, spec.radius*rho)*rho**spec.weight
        if spec.time != 0:
            values = values*np.exp(1j*spec.time*rho**spec.a)
        return values

    if lo == 0:
        exponent = spec.weight + (spec.nu if spec.radius > 0 else 0.0)
        if not exponent > -1:
            raise me.DivergenceError(f"rho**{exponent} is not integrable at 0")
        head_end = min(width, hi)
        nodes, weights = mq.jacobi_rule(24, exponent)
        rho = head_end*nodes
        head = head_end**(exponent + 1.0)*np.sum(weights*integrand(rho)/rho**exponent)
        lo = head_end
    else:
        head = 0.0
    body = 0.0
    if hi > lo:
        body, _, _, _ = integrate_adaptive(integrand, mq.edges_linear(lo, hi, width), target=spec.target, budget=spec.budget)
    value = head + body
    bound = _propagator_tail_bound(spec)
    return (complex(value) if spec.time != 0 or np.iscomplexobj(value) else float(np.real(value))), bound


def _propagator_tail_bound(spec: OscillatoryIntegralSpec):
    profile = spec.profile
    T = spec.truncation
    if T >= profile.upper:
        return 0.0
    envelope = 1.0
    if spec.radius > 0 and spec.radius*T >= 4.0*spec.nu + 1.0:
        envelope = min(1.0, ENVELOPE*math.sqrt(2.0/(math.pi*spec.radius*T)))
    if profile.kind == "parametric-gaussian":
        order = 0.5*(profile.power + spec.weight + 1.0)
        if not order > 0:
            return math.inf
        if profile.amplitude == 0:
            return 0.0
        integral = 0.5*math.exp(sf.log_gamma(order) - order*math.log(profile.sigma))*gammaincc(order, profile.sigma*T*T)
        return float(abs(profile.amplitude)*envelope*integral)
    magnitude, _, _, _ = integrate_adaptive(lambda rho: np.abs(profile(rho))*rho**spec.weight,
        mq.edges_linear(T, profile.upper, (profile.upper - T)/16.0), target=1e-8)
    return float(envelope*magnitude)


def oscillatory_integral(spec: OscillatoryIntegralSpec):
    '''Returns (value, tail_bound) for the integral described by spec.

    With the asymptotic tail method the value includes the analytic tail beyond
    the truncation and tail_bound bounds what that approximation leaves out;
    with tail method "none" the value is the truncated integral and tail_bound
    bounds the whole discarded tail, inf when it diverges.
    '''
    if spec.family == "propagator":
        return _propagator_integral(spec)
    head_end = min(1.0, spec.truncation) if spec.lower < 1.0 else spec.lower
    value = _bessel_product_head(spec, head_end) if head_end > spec.lower else 0.0
    if spec.truncation > head_end:
        nodes, weights, product = _bessel_product_body(float(spec.mu), float(spec.nu), float(head_end),
            float(spec.truncation), spec.target, spec.budget)
        value += float(np.sum(weights*product*nodes**spec.weight))
    tail, bound = _bessel_product_tail(spec)
    return value + tail, bound


# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SimulationGrids:
    '''Tensor grids for a space-time simulation, all in units of the profile scale.

    times, time_weights: Symmetric Gauss panels on (-horizon, horizon).
    probe_times: Extra times 0, +-horizon/4, +-horizon/2, +-horizon for tails and sups.
    radial: Radial grid of the field.
    rho_nodes, rho_weights: Frequency rule.
    horizon: Time truncation.
    tau: Time unit, scale**-a.
    '''
    times: np.ndarray
    time_weights: np.ndarray
    probe_times: np.ndarray
    radial: RadialGrid
    rho_nodes: np.ndarray
    rho_weights: np.ndarray
    horizon: float
    tau: float

    @property
    def grid_id(self):
        return f"t[{self.horizon:.6g}]x{self.times.size};r={self.radial.grid_id};rho={self.rho_nodes.size}"


def simulation_grids(profiles, a: float, *, horizon: float = 32.0, density: float = 1.0, breakpoints=(), r_cap: float = None):
    '''Returns SimulationGrids that resolve e^{itD^a} of the given frequency profiles.

    Every length is a multiple of 1/scale and every time a multiple of
    scale**-a, so dilating the profiles dilates the grids exactly.

    profiles: One frequency profile or a list of them.
    a: Dispersion exponent.
    horizon: Time truncation in units of scale**-a.
    density: Refinement factor applied to every panel width.
    breakpoints: Radii that must be panel edges.
    r_cap: Largest radius of interest; the field is not computed beyond it.
    '''
    if not isinstance(profiles, (list, tuple)):
        profiles = [profiles]
    me.require(a > 0, f"dispersion exponent must be positive, got {a}")
    me.require(horizon > 1 and density > 0, "horizon must exceed 1 and density must be positive")
    for profile in profiles:
        _check_tail(profile, TAIL_TOLERANCE)
    scale = min(profile.scale for profile in profiles)
    rho_hi = max(profile.support() for profile in profiles)
    rho_lo = min(profile.lower for profile in profiles)
    tau = scale**(-a)
    T = horizon*tau
    speed = a*rho_hi**(a - 1.0) if a >= 1 else a*(scale/4.0)**(a - 1.0)
    r_max = speed*T + 12.0/scale
    if r_cap is not None:
        r_max = min(r_max, max(r_cap, max(breakpoints, default=0.0))*1.0)
    radial = RadialGrid.covering(1e-6/scale, r_max, 2.0*math.pi/(rho_hi*density), knee=1.0/scale, breakpoints=breakpoints)
    rate = speed*T + r_max
    width = min((rho_hi - rho_lo)/16.0, 4.0*math.pi/rate)/density
    rho_nodes, rho_weights = mq.panels_rule(mq.edges_linear(rho_lo, rho_hi, width))
    edges = np.concatenate([[0.0], mq.edges_geometric(0.5*tau, T, 2.0)])
    nodes, weights = mq.panels_rule(edges)
    times = np.concatenate([-nodes[::-1], nodes])
    time_weights = np.concatenate([weights[::-1], weights])
    probe_times = np.array([0.0, 0.25*T, 0.5*T, T, -0.25*T, -0.5*T, -T])
    logger.debug(f"Simulation grids: {times.size} times, {radial.nodes.size} radii, {rho_nodes.size} frequencies.")
    return SimulationGrids(times, time_weights, probe_times, radial, rho_nodes, rho_weights, T, tau)


class ModeEvolution:
    '''The field u_k(t, r) of one component on simulation grids, computed once.

    component: Component (mode, frequency profile, multiplicity weight).
    a: Dispersion exponent.
    grids: SimulationGrids; derived from the profile when omitted.
    level: Minimum level of logging messages to report.
    '''

    def __init__(self, *, component, a: float, grids: SimulationGrids = None, level: str = "WARNING"):
        self.logger = ml.get("ModeEvolution", level=level)
        me.require(a > 0, f"dispersion exponent must be positive, got {a}")
        me.require(component.profile.side == "frequency", "evolutions need a frequency-side profile")
        self.component = component
        self.mode = component.mode
        self.a = a
        self.grids = grids if grids is not None else simulation_grids(component.profile, a)
        self.spectral = ((2.0*math.pi)**(-0.5*self.mode.n)*self.grids.rho_weights
            *component.profile(self.grids.rho_nodes)*self.grids.rho_nodes**(0.5*self.mode.n))
        count = self.grids.times.size
        field = self._evolve(np.concatenate([self.grids.times, self.grids.probe_times]))
        self.field = field[:count]
        self.probe_field = field[count:]

    def _evolve(self, times):
        phases = np.exp(1j*np.outer(self.grids.rho_nodes**self.a, times))
        self.logger.debug(f"Evolving degree {self.mode.k} on {times.size} times and {self.grids.radial.nodes.size} radii.")
        return _kernel_apply(self.mode, self.grids.radial.nodes, self.grids.rho_nodes, self.spectral[:, None]*phases).T

    def amplitude_at(self, t: float, r: float):
        '''Returns u_k(t, r) at one point with the evolution's frequency rule.'''
        spectral = self.spectral*np.exp(1j*t*self.grids.rho_nodes**self.a)
        kernel = _radial_kernel(self.mode, np.array([float(r)]), self.grids.rho_nodes)
        return complex(kernel[0] @ spectral.real + 1j*(kernel[0] @ spectral.imag))

    def density(self):
        '''Returns weight*|u|**2 on (times, radii).'''
        return self.component.weight*np.abs(self.field)**2

    def probe_density(self):
        return self.component.weight*np.abs(self.probe_field)**2


def power_tail(times, values, decay: float = None):
    '''Returns (tail, uncertainty) of the integral of I(t) from the last time to infinity.

    times: Three increasing times, T/4, T/2, T.
    values: I at those times.
    decay: Known leading decay exponent; the fit then adds 1/t and 1/t**2 corrections.
    '''
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    T = times[-1]
    if values[-1] == 0:
        return 0.0, 0.0
    if decay is None:
        if np.any(values <= 0):
            raise me.BudgetError("time profile is not positive at the tail samples")
        late = math.log(values[1]/values[2])/math.log(times[2]/times[1])
        early = math.log(values[0]/values[1])/math.log(times[1]/times[0])
        if not late > 1.0:
            raise me.BudgetError(f"time profile decays like t**-{late:.3g}; raise the horizon")
        tail = values[-1]*T/(late - 1.0)
        other = values[-1]*T/(early - 1.0) if early > 1.0 else math.inf
        return tail, abs(tail - other)
    if not decay > 1.0:
        raise me.DivergenceError(f"time profile decays like t**-{decay:.3g}, which is not integrable")
    system = np.stack([np.ones_like(times), 1.0/times, 1.0/times**2], axis=1)
    A, B, C = np.linalg.solve(system, values*times**decay)
    tail = A*T**(1.0 - decay)/(decay - 1.0) + B*T**(-decay)/decay + C*T**(-decay - 1.0)/(decay + 1.0)
    return float(tail), float(abs(C*T**(-decay - 1.0)/(decay + 1.0)))


# ----------------------------------------------------------------------------
