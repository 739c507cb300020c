'''The module containing the exponent calculus: critical powers, admissible
pairs and parameter windows for the wave and Schrodinger estimates.

Inputs given as int, Fraction, a short binary float (2.5) or text ("5/2",
"inf") are handled in exact rational arithmetic; anything else falls back to
float. Infinity is math.inf and its reciprocal is an exact 0.
'''

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mods.errors as me


# ----------------------------------------------------------------------------

EQUATIONS = ("wave", "schrodinger")
INF = math.inf
FLOAT_TOLERANCE = 1e-12
EXACT_DENOMINATOR = 2**20


def number(x):
    '''Returns x as a Fraction when it is rational at hand, else as a float.'''
    if isinstance(x, bool):
        raise me.DomainError(f"expected a number, got {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip().lower()
        if text in ("inf", "infinity", "∞"):
            return INF
        try:
            return Fraction(text)
        except ValueError:
            return number(float(text))
    value = float(x)
    if math.isnan(value):
        raise me.DomainError("expected a number, got nan")
    if math.isinf(value):
        return INF if value > 0 else -INF
    exact = Fraction(value)
    if exact.denominator <= EXACT_DENOMINATOR:
        return exact
    return value


def inverse(x):
    '''Returns 1/x with 1/inf = 0 exactly.'''
    x = number(x)
    if x == INF:
        return Fraction(0)
    me.require(x != 0, "cannot invert 0")
    if isinstance(x, Fraction):
        return 1/x
    return 1.0/x


def exact_text(x):
    '''Returns the canonical text of a value: "5/2", "3", "inf" or repr(float).'''
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def _close(x, y):
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    return abs(float(x) - float(y)) <= FLOAT_TOLERANCE*max(1.0, abs(float(x)), abs(float(y)))


def _le(x, y):
    return x <= y or _close(x, y)


def _lt(x, y):
    return x < y and not _close(x, y)


def _dimension(n, least: int = 2):
    me.require(int(n) == n and n >= least, f"n must be an integer >= {least}, got {n}")
    return int(n)


def _equation(eq: str):
    me.require(eq in EQUATIONS, f"equation must be one of {EQUATIONS}, got {eq!r}")
    return eq


# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    '''An interval of the real line with explicit endpoint closure.

    lo, hi: Endpoints; may be -inf/inf.
    lo_closed, hi_closed: Whether the endpoint belongs to the interval.
    provenance: Short tag naming the constraint the interval comes from.
    '''
    lo: object
    hi: object
    lo_closed: bool = True
    hi_closed: bool = True
    provenance: str = ""

    @property
    def empty(self):
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and not (self.lo_closed and self.hi_closed)

    def contains(self, x):
        x = number(x)
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def intersect(self, other: "Interval", provenance: str = "intersection"):
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed, provenance)

    def midpoint(self):
        return (self.lo + self.hi)/2

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{exact_text(self.lo)}, {exact_text(self.hi)}{right}"


@dataclass(frozen=True)
class AdmissibilityWindow:
    '''The intersection of several constraints on one variable.

    variable: Name of the constrained quantity, e.g. "2/q".
    constraints: The intervals, each with its provenance tag.
    '''
    variable: str
    constraints: tuple
    intersection: Interval = field(init=False)

    def __post_init__(self):
        me.require(len(self.constraints) > 0, "a window needs at least one constraint")
        result = self.constraints[0]
        for interval in self.constraints[1:]:
            result = result.intersect(interval)
        object.__setattr__(self, "intersection", result)

    @property
    def empty(self):
        return self.intersection.empty

    def contains(self, x):
        return all(interval.contains(x) for interval in self.constraints)

    def interval_list(self):
        return "; ".join(str(interval) for interval in self.constraints)

    def provenance(self):
        return "|".join(interval.provenance for interval in self.constraints)


# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class WaveExponents:
    '''Critical powers of the semilinear wave equation in dimension n.'''
    n: int
    p_conf: object
    p_h: object
    p_c: float

    def s_c(self, p):
        '''Scale-invariant regularity n/2 - 2/(p-1).'''
        p = number(p)
        return Fraction(self.n, 2) - 2*inverse(p - 1)

    def s_sb(self, p):
        '''Regularity 1/2 - 1/p.'''
        return Fraction(1, 2) - inverse(p)


@dataclass(frozen=True)
class SchroExponents:
    '''Critical powers of the nonlinear Schrodinger equation in dimension n.'''
    n: int
    p_L2: object
    p_l: float

    def s_c(self, p):
        p = number(p)
        return Fraction(self.n, 2) - 2*inverse(p - 1)


def wave_exponents(n: int):
    '''Returns p_conf, p_h and the Strauss power p_c for dimension n >= 2.'''
    n = _dimension(n)
    p_conf = 1 + Fraction(4, n - 1)
    p_h = 1 + Fraction(4*n, (n + 1)*(n - 1))
    # positive root of (n-1) p**2 - (n+1) p - 2 = 0
    p_c = ((n + 1) + math.sqrt((n + 1)**2 + 8*(n - 1)))/(2*(n - 1))
    return WaveExponents(n=n, p_conf=p_conf, p_h=p_h, p_c=p_c)


def schrodinger_exponents(n: int):
    '''Returns the L2-critical power p_L2 and the lower power p_l for n >= 2.'''
    n = _dimension(n)
    return SchroExponents(n=n, p_L2=1 + Fraction(4, n), p_l=1 + math.sqrt(2/(n - 1)))


# ----------------------------------------------------------------------------

def classical_admissible(eq: str, q, r, n: int):
    '''Returns (admissible, reason) for the classical Strichartz pair (q, r).

    wave: 1/q <= min(1/2, (n-1)/2 (1/2 - 1/r)), minus (max(2, 4/(n-1)), inf) and (inf, inf).
    schrodinger: 1/q <= min(1/2, n/2 (1/2 - 1/r)), minus (inf, inf) and (2, inf).
    '''
    eq = _equation(eq)
    n = _dimension(n)
    q, r = number(q), number(r)
    me.require(q >= 1 and r >= 1, f"q and r must lie in [1, inf], got {q}, {r}")
    iq, ir = inverse(q), inverse(r)
    if eq == "wave":
        slope = Fraction(n - 1, 2)
        excluded = [(max(Fraction(2), Fraction(4, n - 1)), INF), (INF, INF)]
    else:
        slope = Fraction(n, 2)
        excluded = [(INF, INF), (Fraction(2), INF)]
    if (q, r) in excluded:
        return False, f"({exact_text(q)}, {exact_text(r)}) is an excluded endpoint"
    bound = min(Fraction(1, 2), slope*(Fraction(1, 2) - ir))
    if _le(iq, bound):
        return True, f"1/q = {exact_text(iq)} <= {exact_text(bound)}"
    return False, f"1/q = {exact_text(iq)} exceeds {exact_text(bound)}"


def keel_tao_admissible(q, r, n: int):
    '''Returns whether (q, r) is a sharp Schrodinger pair: 1/q = n/2 (1/2 - 1/r) <= 1/2.'''
    n = _dimension(n, least=1)
    q, r = number(q), number(r)
    if q < 2 or r < 2:
        return False
    if (q, r, n) == (2, INF, 2):
        return False
    iq = inverse(q)
    return _close(iq, Fraction(n, 2)*(Fraction(1, 2) - inverse(r))) and _le(iq, Fraction(1, 2))


@dataclass(frozen=True)
class GeneralizedWindow:
    '''Membership in the generalized Strichartz window and its indices.

    s: Derivative index of the data norm.
    s_kn: Angular regularity threshold; the estimate needs s_1 > s_kn.
    conjectural: Set for the Schrodinger window, which is not proven.
    window: Text of the window on 1/q.
    '''
    in_window: bool
    s: object
    s_kn: object
    conjectural: bool
    window: str


def generalized_window(eq: str, q, r, n: int, p_ang=None):
    '''Returns the GeneralizedWindow of (q, r) for the wave or Schrodinger flow.

    wave: (n-1)/2 (1/2-1/r) <= 1/q < (n-1)(1/2-1/r), q >= 2, angular exponent r.
    schrodinger: n/2 (1/2-1/r) < 1/q < (2n-1)/2 (1/2-1/r), q >= 2.

    p_ang: Angular integrability exponent; defaults to r.
    '''
    eq = _equation(eq)
    n = _dimension(n)
    q, r = number(q), number(r)
    p_ang = r if p_ang is None else number(p_ang)
    me.require(q >= 2 and r >= 2, f"q and r must lie in [2, inf], got {q}, {r}")
    me.require(p_ang >= 2, f"angular exponent must lie in [2, inf], got {p_ang}")
    iq, ir = inverse(q), inverse(r)
    gap = Fraction(1, 2) - ir
    if eq == "wave":
        me.require(p_ang == r, "the wave window takes the angular exponent equal to r")
        window = Interval(Fraction(n - 1, 2)*gap, (n - 1)*gap, True, False, "wave")
        s = n*gap - iq
        s_kn = 2*iq - (n - 1)*gap
    else:
        window = Interval(Fraction(n, 2)*gap, Fraction(2*n - 1, 2)*gap, False, False, "schrodinger")
        s = Fraction(n, 2) - 2*iq - n*ir
        s_kn = 2*iq + (2*n - 1)*ir - (n - 1)*inverse(p_ang) - Fraction(n, 2)
    return GeneralizedWindow(in_window=window.contains(iq), s=s, s_kn=s_kn,
        conjectural=eq == "schrodinger", window=f"1/q in {window}")


# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightedParams:
    '''Indices of the L2-data weighted Strichartz estimate.

    s: Derivative index (n+a)/q - n/2 - alpha.
    s1: Angular index (n-1)/2 + alpha - n/q.
    valid: Whether 0 < n/q - alpha < (n-1)/2.
    '''
    s: object
    s1: object
    valid: bool
    window: str


def weighted_strichartz_params(q, alpha, n: int, a):
    '''Returns the WeightedParams for || |x|^-alpha D^s Lambda^s1 e^{itD^a} f || <~ ||f||_2.

    The indices satisfy s + s1 = a/q - 1/2.
    '''
    n = _dimension(n)
    q, alpha, a = number(q), number(alpha), number(a)
    me.require(q >= 2, f"q must lie in [2, inf], got {q}")
    me.require(a > 0, f"a must be positive, got {a}")
    iq = inverse(q)
    s = (n + a)*iq - Fraction(n, 2) - alpha
    s1 = Fraction(n - 1, 2) + alpha - n*iq
    window = Interval(Fraction(0), Fraction(n - 1, 2), False, False, "weighted")
    return WeightedParams(s=s, s1=s1, valid=window.contains(n*iq - alpha), window=f"n/q - alpha in {window}")


def harmse_oberlin_check(q, n: int):
    '''Returns (in_window, r) for the inhomogeneous L^r -> L^q wave estimate.

    The window is (n+1)/(2n) - 2/(n+1) < 1/q < (n-1)/(2n); r solves
    (n+1)/r - (n+1)/q = 2.
    '''
    n = _dimension(n)
    q = number(q)
    me.require(q > 1, f"q must exceed 1, got {q}")
    iq = inverse(q)
    window = Interval(Fraction(n + 1, 2*n) - Fraction(2, n + 1), Fraction(n - 1, 2*n), False, False, "harmse-oberlin")
    r = (n + 1)/(2 + (n + 1)*iq)
    return window.contains(iq), r


def strichartz_endpoints(n: int):
    '''Returns ((q0, r0), (q1, r1)), the endpoint pairs the angular interpolation runs between.'''
    n = _dimension(n)
    if n == 2:
        return (Fraction(4), INF), (Fraction(2), INF)
    r1 = Fraction(2*(n - 1), n - 2)
    r0 = INF if n == 3 else Fraction(2*(n - 1), n - 3)
    return (Fraction(2), r0), (Fraction(2), r1)


@dataclass(frozen=True)
class Interpolation:
    '''Bookkeeping of the angular interpolation at one eta.

    t_eta: Interpolation parameter.
    condition_met: Whether (1/2 + eta) t_eta <= s_kn + epsilon.
    limit: Value of (1/2) t_0, the eta -> 0 limit.
    s_kn: Threshold of the generalized wave window at the same (n, q, r).
    '''
    t_eta: object
    condition_met: bool
    limit: object
    s_kn: object


def interpolation_bookkeeping(n: int, q, r, eta=0, endpoints=None, epsilon=0):
    '''Returns the Interpolation record for (q, r) on the reduced configuration.

    n >= 3 needs q = 2 and r1 < r <= r0; n = 2 needs r = inf and q1 < q <= q0.

    eta: Distance travelled from the (q1, r1) endpoint, in [0, 1).
    endpoints: ((q0, r0), (q1, r1)); defaults to strichartz_endpoints(n).
    epsilon: Slack on the angular threshold.
    '''
    n = _dimension(n)
    q, r, eta, epsilon = number(q), number(r), number(eta), number(epsilon)
    me.require(0 <= eta < 1, f"eta must lie in [0, 1), got {eta}")
    (q0, r0), (q1, r1) = endpoints or strichartz_endpoints(n)
    if n == 2:
        if not (r == INF and q1 < q <= q0):
            raise me.WindowError(f"(q, r) = ({exact_text(q)}, {exact_text(r)}) is off the interpolation line",
                f"r = inf, {exact_text(q1)} < q <= {exact_text(q0)}")
        value, near, far = inverse(q), inverse(q1), inverse(q0)
    else:
        if not (q == 2 and r1 < r <= r0):
            raise me.WindowError(f"(q, r) = ({exact_text(q)}, {exact_text(r)}) is off the interpolation line",
                f"q = 2, {exact_text(r1)} < r <= {exact_text(r0)}")
        value, near, far = inverse(r), inverse(r1), inverse(r0)
    moving = near - eta*(near - far)
    t_eta = (value - far)/(moving - far)
    me.require(0 <= t_eta <= 1, f"t_eta = {exact_text(t_eta)} leaves [0, 1]: eta = {exact_text(eta)} moves the endpoint past (q, r)")
    limit = (value - far)/(2*(near - far))
    s_kn = generalized_window("wave", q, r, n).s_kn
    condition = _le((Fraction(1, 2) + eta)*t_eta, s_kn + epsilon)
    return Interpolation(t_eta=t_eta, condition_met=condition, limit=limit, s_kn=s_kn)


# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AngularStrichartz:
    '''Indices of a q = r Strichartz estimate with angular regularity.

    derivative: Power of D on the data.
    angular: Power of Lambda_omega on the data; the estimate wants any amount above it when strict.
    strict: Whether the angular index must be exceeded.
    weight_b: The b of the underlying weighted estimate, when it has one.
    '''
    q: object
    r: object
    derivative: object
    angular: object
    strict: bool = False
    weight_b: object = None


def angular_qr_strichartz(n: int, a, r, p_ang):
    '''Returns the indices of the L^r_{t,r^{n-1}dr} L^p_omega estimate, r in (2n/(n-1), inf).'''
    n = _dimension(n)
    a, r, p_ang = number(a), number(r), number(p_ang)
    me.require(a > 0, f"a must be positive, got {a}")
    edge = Fraction(2*n, n - 1)
    if not (edge < r < INF):
        raise me.WindowError(f"r = {exact_text(r)} is outside the q = r range", f"{exact_text(edge)} < r < inf")
    if not (2 <= p_ang < INF):
        raise me.WindowError(f"angular exponent {exact_text(p_ang)} is outside the range", "2 <= p < inf")
    ir = inverse(r)
    return AngularStrichartz(q=r, r=r, derivative=Fraction(n, 2) - (n + a)*ir,
        angular=n*ir - (n - 1)*inverse(p_ang), weight_b=n - 2*n*ir)


def endpoint_angular_strichartz(n: int):
    '''Returns the indices of the L^{4/(n-1)}_t L^inf_x wave endpoint, n in {2, 3}.'''
    n = _dimension(n)
    if n not in (2, 3):
        raise me.WindowError(f"the endpoint estimate needs n in {{2, 3}}, got {n}", "n in {2, 3}")
    return AngularStrichartz(q=Fraction(4, n - 1), r=INF, derivative=Fraction(n + 1, 4), angular=Fraction(0), strict=True)


def schrodinger_angular_strichartz(n: int, r):
    '''Returns the indices of the L^r_{t,x} Schrodinger estimate, r in (2n/(n-1), 2(n+2)/n), n > 2.'''
    n = _dimension(n, least=3)
    r = number(r)
    lo, hi = Fraction(2*n, n - 1), Fraction(2*(n + 2), n)
    if not (lo < r < hi):
        raise me.WindowError(f"r = {exact_text(r)} is outside the range", f"{exact_text(lo)} < r < {exact_text(hi)}")
    ir = inverse(r)
    return AngularStrichartz(q=r, r=r, derivative=Fraction(n, 2) - (n + 2)*ir,
        angular=Fraction(n - 1, n - 2)*((n + 2)*ir - Fraction(n, 2)), strict=True)


# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class StraussSetup:
    '''Exponents of the small-data wave argument with angular data regularity s1.

    moser_a: Angular regularity kept by |u|**p, (n-1)/2 - 1/(p-1).
    Flags: supercritical (p_c < p < p_conf), weighted_window (s_c - s_sb in
    (0, (n-1)/2)), moser_window (moser_a in [0, (n-1)/2)), dual_window
    (1/2 - s_c in (0, (n-1)/2)), moser_regularity (s2 >= (p-1)/p (n-1)/2 + moser_a/p).
    '''
    n: int
    p: object
    s_c: object
    s_sb: object
    alpha: object
    s1: object
    s2: object
    moser_a: object
    supercritical: bool
    weighted_window: bool
    moser_window: bool
    dual_window: bool
    moser_regularity: bool

    @property
    def valid(self):
        return (self.supercritical and self.weighted_window and self.moser_window
            and self.dual_window and self.moser_regularity)


def strauss_setup(n: int, p):
    '''Returns the StraussSetup for n in {2, 3, 4} and power p > 1.

    Invalid setups come back with flags cleared, never as exceptions.
    '''
    n = _dimension(n)
    if n not in (2, 3, 4):
        raise me.WindowError(f"the wave setup needs 2 <= n <= 4, got {n}", "2 <= n <= 4")
    p = number(p)
    me.require(p > 1, f"p must exceed 1, got {p}")
    exponents = wave_exponents(n)
    half = Fraction(n - 1, 2)
    s_c, s_sb = exponents.s_c(p), exponents.s_sb(p)
    s1 = inverse(p - 1)
    s2 = s1 + s_c - s_sb
    moser_a = half - inverse(p - 1)
    return StraussSetup(n=n, p=p, s_c=s_c, s_sb=s_sb, alpha=(n + 1)*inverse(p) - 2*inverse(p - 1),
        s1=s1, s2=s2, moser_a=moser_a,
        supercritical=exponents.p_c < p < exponents.p_conf,
        weighted_window=_lt(0, s_c - s_sb) and _lt(s_c - s_sb, half),
        moser_window=_le(0, moser_a) and _lt(moser_a, half),
        dual_window=_lt(0, Fraction(1, 2) - s_c) and _lt(Fraction(1, 2) - s_c, half),
        moser_regularity=_le((p - 1)*inverse(p)*half + moser_a*inverse(p), s2))


@dataclass(frozen=True)
class LindbladSoggeSetup:
    '''Exponents of the small-data wave argument in L^q_{t,x} with q = (n+1)(p-1)/2.

    in_range: p_h < p < p_conf, equivalently 1/(2n) < s_c < 1/2.
    s1_threshold: The data need angular regularity above 1/2 - s_c.
    window: Whether (q, q) lies in the generalized wave window.
    dual_exponent: (q/p)', which exceeds 2(n+1)/(n-1) exactly when p < p_conf.
    inhomogeneous: Whether the L^{q/p} -> L^q estimate applies at q.
    '''
    n: int
    p: object
    q: object
    s_c: object
    s1_threshold: object
    in_range: bool
    window: bool
    dual_exponent: object
    dual_ok: bool
    inhomogeneous: bool

    @property
    def valid(self):
        return self.in_range and self.window and self.dual_ok and self.inhomogeneous


def lindblad_sogge_setup(n: int, p):
    '''Returns the LindbladSoggeSetup for dimension n >= 2 and power p > 1.'''
    n = _dimension(n)
    p = number(p)
    me.require(p > 1, f"p must exceed 1, got {p}")
    exponents = wave_exponents(n)
    s_c = exponents.s_c(p)
    q = Fraction(n + 1, 2)*(p - 1)
    in_range = exponents.p_h < p < exponents.p_conf
    window = q >= 2 and generalized_window("wave", q, q, n).in_window
    ratio = q*inverse(p)
    if ratio > 1:
        dual = 1/(1 - inverse(ratio))
    else:
        dual = INF
    dual_ok = ratio > 1 and dual > Fraction(2*(n + 1), n - 1)
    inhomogeneous = q > 1 and harmse_oberlin_check(q, n)[0]
    return LindbladSoggeSetup(n=n, p=p, q=q, s_c=s_c, s1_threshold=Fraction(1, 2) - s_c,
        in_range=in_range, window=window, dual_exponent=dual, dual_ok=dual_ok, inhomogeneous=inhomogeneous)


# ----------------------------------------------------------------------------

def nls_q_window(n: int, p):
    '''Returns the AdmissibilityWindow on 2/q for the small-data NLS argument.

    Non-empty exactly when p_l < p < p_L2 and n <= 6, for p in that range.
    '''
    n = _dimension(n, least=3)
    p = number(p)
    me.require(p > 1, f"p must exceed 1, got {p}")
    ip, ipm = inverse(p), inverse(p - 1)
    constraints = (
        Interval(ip, Fraction(1), True, True, "duality"),
        Interval(2*ipm - Fraction(n - 1, 2), 2*ipm - Fraction(n + 1, 2)*ip, False, False, "weighted"),
        Interval(ipm - Fraction(n - 1, 2)*ip, ipm - Fraction(n - 3, 2)*ip, True, False, "moser"),
    )
    return AdmissibilityWindow(variable="2/q", constraints=constraints)


@dataclass(frozen=True)
class NlsSetup:
    '''Exponents of the small-data NLS argument at one (n, p, q).

    The identities s1 = s3 - s_c + 3/2 - 2p/q and s2 - s3 = 1 - 2(p-1)/q hold
    for every input; in_window says whether 2/q is admissible.
    '''
    n: int
    p: object
    q: object
    s_c: object
    alpha: object
    s1: object
    s2: object
    s3: object
    in_window: bool


def nls_setup(n: int, p, q):
    '''Returns the NlsSetup for n >= 3, power p > 1 and time exponent q >= 2.'''
    n = _dimension(n, least=3)
    p, q = number(p), number(q)
    me.require(q >= 2, f"q must lie in [2, inf], got {q}")
    iq, ipm = inverse(q), inverse(p - 1)
    s2 = Fraction(n - 1, 2) + 2*iq - ipm
    return NlsSetup(n=n, p=p, q=q, s_c=schrodinger_exponents(n).s_c(p),
        alpha=(n + 2)*iq - 2*ipm, s1=ipm, s2=s2, s3=p*s2 - Fraction(n - 1, 2)*(p - 1),
        in_window=nls_q_window(n, p).contains(2*iq))


WINDOW_COLUMNS = ("n", "p", "q", "r", "variable", "interval_list", "empty", "provenance")


def nls_window_rows(n: int, p_list):
    '''Returns one WINDOW_COLUMNS row per p; q = r is read off the window midpoint.'''
    rows = []
    for p in p_list:
        window = nls_q_window(n, p)
        if window.empty or window.intersection.midpoint() <= 0:
            q = ""
        else:
            q = exact_text(2/window.intersection.midpoint())
        rows.append({"n": n, "p": exact_text(number(p)), "q": q, "r": q, "variable": window.variable,
            "interval_list": window.interval_list(), "empty": window.empty, "provenance": window.provenance()})
    return rows


# ----------------------------------------------------------------------------
