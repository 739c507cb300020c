'''The module containing the angular-mode data model.

A test function is a finite sum of (mode, radial profile) components. The
profiles live on the frequency side unless marked otherwise, and one
representative l-slot stands in for each degree; the multiplicity weight
carries the rest, since every norm here depends only on k and the l2 mass of
the slot coefficients.

Fourier convention: forward transform with e^{-ix.xi}, inverse with
(2 pi)^{-n}, so that ||f||**2 = (2 pi)^{-n} ||f^||**2.
'''

import functools
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq
from scipy.special import eval_legendre

import mods.errors as me
import mods.log as ml
import mods.quadrature as mq
import mods.specfun as sf


# ----------------------------------------------------------------------------

WEIGHT_MODES = ("exact-lambda", "bracket-k")
PROFILE_KINDS = ("parametric-gaussian", "sampled", "power-weighted")
SIDES = ("frequency", "physical")
INT64_MAX = 2**63 - 1
SUPPORT_TOLERANCE = 1e-32

logger = ml.get("Modes", level="WARNING")


@functools.lru_cache(maxsize=4096)
def mode_dimension(n: int, k: int):
    '''Returns d(k), the dimension of the degree-k spherical harmonics on S^{n-1}.

    n: Dimension of the ambient space, at least 2.
    k: Degree, at least 0.
    '''
    me.require(int(n) == n and n >= 2, f"n must be an integer >= 2, got {n}")
    me.require(int(k) == k and k >= 0, f"k must be an integer >= 0, got {k}")
    n, k = int(n), int(k)
    if k == 0:
        return 1
    numerator = (2*k + n - 2)*math.comb(n + k - 3, k - 1)
    result = numerator//k
    if numerator % k != 0:
        raise ArithmeticError(f"d(k) is not an integer for n={n}, k={k}")
    if result > INT64_MAX:
        raise me.ModeOverflowError(f"d({k}) in dimension {n} exceeds the 64-bit integer width")
    return result


@dataclass(frozen=True)
class Mode:
    '''One angular frequency: degree k of the spherical harmonics on S^{n-1}.'''
    n: int
    k: int

    def __post_init__(self):
        me.require(int(self.n) == self.n and self.n >= 2, f"n must be an integer >= 2, got {self.n}")
        me.require(int(self.k) == self.k and self.k >= 0, f"k must be an integer >= 0, got {self.k}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", int(self.k))

    @property
    def nu(self):
        '''Bessel order k + (n-2)/2.'''
        return self.k + 0.5*(self.n - 2)

    @property
    def eig(self):
        '''Magnitude of the Laplace-Beltrami eigenvalue.'''
        return self.k*(self.k + self.n - 2)

    @property
    def lam(self):
        '''Eigenvalue of Lambda = sqrt(1 - Laplace-Beltrami).'''
        return math.sqrt(1.0 + self.eig)

    @property
    def dim(self):
        return mode_dimension(self.n, self.k)

    def weight(self, weight_mode: str = "exact-lambda"):
        '''Returns the angular weight lam (exact-lambda) or sqrt(1+k**2) (bracket-k).'''
        if weight_mode == "exact-lambda":
            return self.lam
        if weight_mode == "bracket-k":
            return math.sqrt(1.0 + self.k*self.k)
        raise me.DomainError(f"Unknown weight mode '{weight_mode}', expected one of {WEIGHT_MODES}")


# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class GaussianProfile:
    '''The parametric profile rho -> amplitude * rho**power * exp(-sigma rho**2).

    amplitude: Real amplitude.
    power: Integer power m >= 0.
    sigma: Positive width parameter.
    side: "frequency" or "physical".
    phase: Power of i recorded as metadata; never folded into the values.
    '''
    amplitude: float = 1.0
    power: int = 0
    sigma: float = 1.0
    side: str = "frequency"
    phase: int = 0
    kind = "parametric-gaussian"

    def __post_init__(self):
        me.require(int(self.power) == self.power and self.power >= 0, f"power must be an integer >= 0, got {self.power}")
        me.require(self.sigma > 0, f"sigma must be positive, got {self.sigma}")
        me.require(math.isfinite(self.amplitude), f"amplitude must be finite, got {self.amplitude}")
        me.require(self.side in SIDES, f"side must be one of {SIDES}, got {self.side}")
        object.__setattr__(self, "power", int(self.power))

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.amplitude*rho**self.power*np.exp(-self.sigma*rho*rho)

    @property
    def lower(self):
        return 0.0

    @property
    def upper(self):
        return math.inf

    @property
    def scale(self):
        '''Characteristic frequency 1/sqrt(sigma).'''
        return 1.0/math.sqrt(self.sigma)

    def support(self, tol: float = SUPPORT_TOLERANCE):
        '''Returns the radius past which |profile|**2 stays below tol times its maximum.'''
        peak = math.sqrt(0.5*self.power)
        def excess(x):
            drop = -2.0*(x*x - peak*peak)
            if self.power > 0:
                drop += 2.0*self.power*math.log(x/peak)
            return drop - math.log(tol)
        hi = peak + math.sqrt(-math.log(tol)) + 10.0
        root = brentq(excess, max(peak, 1e-12), hi, xtol=1e-14)
        return root*self.scale

    def moment(self, exponent: float):
        '''Returns the integral of |profile|**2 rho**exponent over (0, inf), in closed form.'''
        order = 0.5*(2*self.power + exponent + 1.0)
        if not order > 0:
            raise me.DivergenceError(f"Gaussian moment diverges at 0: rho**{2*self.power + exponent} is not integrable")
        if self.amplitude == 0:
            return 0.0
        return self.amplitude**2*math.exp(sf.log_gamma(order) - order*math.log(2.0*self.sigma))/2.0

    def dilate(self, factor: float):
        '''Returns the profile of rho -> self(rho/factor).'''
        me.require(factor > 0, f"dilation factor must be positive, got {factor}")
        return replace(self, amplitude=self.amplitude*factor**(-self.power), sigma=self.sigma/factor**2)

    def tail_ratio(self):
        return 0.0


@dataclass(frozen=True, eq=False)
class SampledProfile:
    '''A profile known through samples on a grid of positive nodes.

    nodes: Strictly increasing positive nodes, at least 8.
    values: Real or complex samples.
    rule: "cubic" for a piecewise cubic spline, "panel" for Legendre interpolation on the Gauss panels in edges.
    edges: Panel edges, required by the panel rule.
    degree: Nodes per panel for the panel rule.
    side: "frequency" or "physical".
    phase: Power of i recorded as metadata.
    '''
    nodes: np.ndarray
    values: np.ndarray
    rule: str = "cubic"
    edges: np.ndarray = None
    degree: int = mq.DEFAULT_DEGREE
    side: str = "frequency"
    phase: int = 0
    kind = "sampled"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values)
        if not np.iscomplexobj(values):
            values = values.astype(float)
        me.require(nodes.ndim == 1 and nodes.size >= 8, "sampled profiles need at least 8 nodes")
        me.require(values.shape == nodes.shape, "sampled values must match the nodes")
        me.require(bool(nodes[0] > 0) and bool(np.all(np.diff(nodes) > 0)), "sampled nodes must be positive and strictly increasing")
        me.require(self.rule in ("cubic", "panel"), f"rule must be 'cubic' or 'panel', got {self.rule}")
        me.require(self.side in SIDES, f"side must be one of {SIDES}, got {self.side}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        if self.rule == "panel":
            me.require(self.edges is not None, "the panel rule needs panel edges")
            edges = np.asarray(self.edges, dtype=float)
            me.require(nodes.size == (edges.size - 1)*self.degree, "panel edges do not match the nodes")
            object.__setattr__(self, "edges", edges)

    @functools.cached_property
    def _interpolant(self):
        if self.rule == "panel":
            return mq.PanelInterpolant(self.edges, self.values, self.degree)
        return CubicSpline(self.nodes, self.values)

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        inside = (rho >= self.lower) & (rho <= self.upper)
        values = self._interpolant(np.clip(rho, self.lower, self.upper))
        return np.where(inside, values, 0.0)

    @property
    def lower(self):
        return float(self.edges[0]) if self.rule == "panel" else float(self.nodes[0])

    @property
    def upper(self):
        return float(self.edges[-1]) if self.rule == "panel" else float(self.nodes[-1])

    @property
    def scale(self):
        '''Characteristic frequency: the |value|**2-weighted mean node.'''
        mass = np.abs(self.values)**2
        total = float(mass.sum())
        if total == 0:
            return 1.0
        return float(np.sum(mass*self.nodes)/total)

    def support(self, tol: float = SUPPORT_TOLERANCE):
        mass = np.abs(self.values)**2
        peak = float(mass.max())
        if peak == 0:
            return self.upper
        above = np.nonzero(mass > tol*peak)[0]
        last = above[-1]
        if last == self.nodes.size - 1:
            return self.upper
        if self.rule == "panel":
            panel = min(last//self.degree + 1, self.edges.size - 1)
            return float(self.edges[panel])
        return float(self.nodes[last + 1])

    def quadrature(self):
        '''Returns (nodes, weights) of a rule over [lower, upper] suited to the samples.'''
        if self.rule == "panel":
            return mq.panels_rule(self.edges, self.degree)
        return mq.panels_rule(self.nodes, 4)

    def moment(self, exponent: float):
        nodes, weights = self.quadrature()
        return float(np.sum(weights*np.abs(self(nodes))**2*nodes**exponent))

    def dilate(self, factor: float):
        me.require(factor > 0, f"dilation factor must be positive, got {factor}")
        edges = None if self.edges is None else self.edges*factor
        return replace(self, nodes=self.nodes*factor, edges=edges)

    def tail_ratio(self):
        '''Returns |value| at the last node relative to the largest |value|.'''
        peak = float(np.max(np.abs(self.values)))
        return 0.0 if peak == 0 else float(np.abs(self.values[-1]))/peak


@dataclass(frozen=True, eq=False)
class PowerWeightedProfile:
    '''The profile rho -> factor * rho**exponent * base(rho), i.e. D^exponent applied on the frequency side.'''
    base: object
    exponent: float
    factor: float = 1.0
    kind = "power-weighted"

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            weight = np.where(rho > 0, rho**self.exponent, 0.0 if self.exponent > 0 else 1.0)
        return self.factor*weight*self.base(rho)

    @property
    def side(self):
        return self.base.side

    @property
    def phase(self):
        return self.base.phase

    @property
    def lower(self):
        return self.base.lower

    @property
    def upper(self):
        return self.base.upper

    @property
    def scale(self):
        return self.base.scale

    def support(self, tol: float = SUPPORT_TOLERANCE):
        return self.base.support(tol)

    def moment(self, exponent: float):
        return self.factor**2*self.base.moment(exponent + 2.0*self.exponent)

    def dilate(self, factor: float):
        return replace(self, base=self.base.dilate(factor), factor=self.factor*factor**(-self.exponent))

    def tail_ratio(self):
        return self.base.tail_ratio()


# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Component:
    '''One (mode, profile) pair of a SpectralFunction, with its l-slot multiplicity weight.'''
    mode: Mode
    profile: object
    weight: int = 1

    def __post_init__(self):
        me.require(int(self.weight) == self.weight and 1 <= self.weight <= self.mode.dim,
            f"weight must lie in [1, {self.mode.dim}] for degree {self.mode.k}, got {self.weight}")


@dataclass(frozen=True)
class SpectralFunction:
    '''A test function on R^n: finitely many components with distinct degrees.'''
    n: int
    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        components = tuple(self.components)
        object.__setattr__(self, "components", components)
        me.require(int(self.n) == self.n and self.n >= 2, f"n must be an integer >= 2, got {self.n}")
        degrees = [component.mode.k for component in components]
        me.require(len(set(degrees)) == len(degrees), f"components need distinct degrees, got {degrees}")
        for component in components:
            me.require(component.mode.n == self.n, f"component dimension {component.mode.n} differs from n={self.n}")

    @classmethod
    def single(cls, n: int, k: int, profile, weight: int = 1):
        '''Returns the one-component function with the given degree and profile.'''
        return cls(n, (Component(Mode(n, k), profile, weight),))

    def dilate(self, factor: float):
        '''Returns the function whose profiles are rho -> profile(rho/factor).'''
        return SpectralFunction(self.n, tuple(replace(c, profile=c.profile.dilate(factor)) for c in self.components))

    @property
    def degrees(self):
        return tuple(component.mode.k for component in self.components)


@dataclass(frozen=True)
class SphereFunction:
    '''A function on S^{n-1} given by its spherical-harmonic coefficients {(k, l): a}.'''
    n: int
    coefficients: dict = field(default_factory=dict)

    def __post_init__(self):
        me.require(int(self.n) == self.n and self.n >= 2, f"n must be an integer >= 2, got {self.n}")
        for (k, l) in self.coefficients:
            dim = mode_dimension(self.n, k)
            me.require(int(l) == l and 1 <= l <= dim, f"slot l={l} outside [1, {dim}] for degree {k}")

    def degree_mass(self):
        '''Returns {k: sum over l of |a_{k,l}|**2}, sorted by degree.'''
        mass = {}
        for (k, _), value in sorted(self.coefficients.items()):
            mass[k] = mass.get(k, 0.0) + abs(value)**2
        return mass


# ----------------------------------------------------------------------------

def sphere_h_norm(g: SphereFunction, s: float, weight_mode: str = "exact-lambda"):
    '''Returns the H^s norm of a function on the sphere.

    g: The function, by coefficients.
    s: Angular regularity.
    weight_mode: "exact-lambda" or "bracket-k".
    '''
    total = 0.0
    for k, mass in g.degree_mass().items():
        total += Mode(g.n, k).weight(weight_mode)**(2.0*s)*mass
    return math.sqrt(total)


def spectral_sobolev_norm(f: SpectralFunction, s: float, m: float, weight_mode: str = "exact-lambda"):
    '''Returns ||D^s Lambda^m f||_{L2} from the frequency-side profiles.

    f: The test function.
    s: Radial derivative order.
    m: Angular regularity.
    weight_mode: "exact-lambda" or "bracket-k".
    '''
    total = 0.0
    for component in f.components:
        profile = component.profile
        if profile.side != "frequency":
            raise me.DomainError("spectral_sobolev_norm needs frequency-side profiles")
        moment = profile.moment(2.0*s + f.n - 1.0)
        total += component.weight*component.mode.weight(weight_mode)**(2.0*m)*moment
    return math.sqrt(total*(2.0*math.pi)**(-f.n))


def sphere_area(n: int):
    '''Returns the surface area of the unit sphere S^{n-1}.'''
    return 2.0*math.exp(0.5*n*math.log(math.pi) - sf.log_gamma(0.5*n))


def zonal_harmonic(n: int, k: int, theta):
    '''Returns the L2-normalised zonal harmonic of degree k at polar angle theta.

    Only the circle (n=2, cos(k theta)) and the 2-sphere (n=3, Legendre) are supported.
    '''
    theta = np.asarray(theta, dtype=float)
    if n == 2:
        if k == 0:
            return np.full_like(theta, 1.0/math.sqrt(2.0*math.pi))
        return np.cos(k*theta)/math.sqrt(math.pi)
    if n == 3:
        return math.sqrt((2*k + 1)/(4.0*math.pi))*eval_legendre(k, np.cos(theta))
    raise me.DomainError(f"zonal harmonics are available for n in (2, 3), got {n}")


# ----------------------------------------------------------------------------
# Text records: one block of key=value lines per component, blocks separated by
# blank lines, '#' starts a comment. Only parametric profiles are serialised.

RECORD_KEYS = ("n", "k", "weight", "kind", "amplitude", "m", "sigma")


def dumps_spectral(f: SpectralFunction):
    '''Returns the text record form of f.'''
    blocks = []
    for component in f.components:
        profile = component.profile
        if profile.kind != "parametric-gaussian":
            raise me.DomainError(f"only parametric-gaussian profiles have a text record, got {profile.kind}")
        blocks.append("\n".join([f"n={f.n}", f"k={component.mode.k}", f"weight={component.weight}",
            f"kind={profile.kind}", f"amplitude={profile.amplitude!r}", f"m={profile.power}",
            f"sigma={profile.sigma!r}"]))
    return "\n\n".join(blocks) + "\n"


def loads_spectral(text: str):
    '''Returns the SpectralFunction described by text records.'''
    records = []
    current = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if current:
                records.append(current)
                current = {}
            continue
        if "=" not in line:
            raise me.DomainError(f"line {number}: expected key=value, got '{raw}'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in RECORD_KEYS:
            raise me.DomainError(f"line {number}: unknown key '{key}'")
        if key in current:
            raise me.DomainError(f"line {number}: duplicate key '{key}'")
        current[key] = value
    if current:
        records.append(current)
    me.require(len(records) > 0, "no component records found")

    components = []
    dimensions = set()
    for record in records:
        missing = [key for key in RECORD_KEYS if key not in record and key != "weight"]
        me.require(not missing, f"record is missing keys {missing}")
        me.require(record["kind"] == "parametric-gaussian", f"unsupported profile kind '{record['kind']}'")
        try:
            n, k, power = int(record["n"]), int(record["k"]), int(record["m"])
            weight = int(record.get("weight", "1"))
            profile = GaussianProfile(float(record["amplitude"]), power, float(record["sigma"]))
        except ValueError as error:
            raise me.DomainError(f"malformed record {record}: {error}") from error
        dimensions.add(n)
        components.append(Component(Mode(n, k), profile, weight))
    me.require(len(dimensions) == 1, f"records mix dimensions {sorted(dimensions)}")
    return SpectralFunction(dimensions.pop(), tuple(components))


# ----------------------------------------------------------------------------
