'''The module containing the special functions: log-Gamma and Bessel J of real order.

Every Gamma ratio in the toolkit goes through log_gamma differences.
'''

import functools
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npp
from scipy.special import zetac

import mods.errors as me
import mods.log as ml


# ----------------------------------------------------------------------------

LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = (0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7)
HALF_LOG_TWO_PI = 0.5*math.log(2.0*math.pi)
EULER_GAMMA = 0.57721566490153286

# ln Gamma(1+e) and ln Gamma(2+e) by their zeta series for |e| <= ZERO_RADIUS
ZERO_RADIUS = 0.25
ZETA_TERMS = 30
ZETA_ORDERS = np.arange(2, ZETA_TERMS + 2)
ZETA_MINUS_ONE = zetac(ZETA_ORDERS.astype(float))

RESCALE_LIMIT = 1e250
RESCALE_DIGITS = 40.0
BAND_RATIO = 4.0

logger = ml.get("Specfun", level="WARNING")


@dataclass(frozen=True)
class EvalPolicy:
    '''Branch switch points and accuracy targets for bessel_j.

    series_cutoff: Argument threshold at or below which the power series is used; raised to 2*sqrt(nu+1) for high orders.
    asymptotic_cutoff: Argument threshold at or above which the Hankel expansion is used; raised to 4*nu**2 for high orders.
        For half-integer orders the expansion terminates and takes over as soon as none of its terms exceeds 1.
    target_rel_err: Relative size of the last term kept by every branch.
    max_terms: Maximum number of series or expansion terms.
    '''
    series_cutoff: float = 8.0
    asymptotic_cutoff: float = 40.0
    target_rel_err: float = 1e-14
    max_terms: int = 400

    def __post_init__(self):
        me.require(self.series_cutoff > 0, f"series_cutoff must be positive, got {self.series_cutoff}")
        me.require(self.asymptotic_cutoff > 0, f"asymptotic_cutoff must be positive, got {self.asymptotic_cutoff}")
        me.require(self.target_rel_err > 0, f"target_rel_err must be positive, got {self.target_rel_err}")
        me.require(int(self.max_terms) == self.max_terms and self.max_terms >= 1, f"max_terms must be a positive integer, got {self.max_terms}")

    def edges(self, nu: float):
        '''Returns the (series, asymptotic) switch points for order nu.'''
        series = max(self.series_cutoff, 2.0*math.sqrt(nu + 1.0))
        asymptotic = max(self.asymptotic_cutoff, 4.0*nu*nu)
        exact = _terminating_edge(nu, self.max_terms)
        if exact is not None:
            asymptotic = min(asymptotic, max(series, exact))
        return series, asymptotic


DEFAULT_POLICY = EvalPolicy()


# ----------------------------------------------------------------------------

def _scalar_or_array(result: np.ndarray, like):
    if np.ndim(like) == 0:
        return float(result)
    return result


def _lanczos(z: np.ndarray):
    shifted = z - 1.0
    series = np.full_like(shifted, LANCZOS_COEFFICIENTS[0])
    for i, coefficient in enumerate(LANCZOS_COEFFICIENTS[1:], start=1):
        series = series + coefficient/(shifted + i)
    t = shifted + LANCZOS_G + 0.5
    return HALF_LOG_TWO_PI + (shifted + 0.5)*np.log(t) - t + np.log(series)


def _zeta_series(epsilon: np.ndarray, shift: int):
    '''Returns ln Gamma(1 + shift + epsilon) for shift 0 or 1 and small epsilon.

    ln Gamma(1+e) = -gamma e + sum (-e)**k zeta(k)/k and
    ln Gamma(2+e) = (1-gamma) e + sum (-e)**k (zeta(k)-1)/k, k >= 2.
    '''
    coefficients = (ZETA_MINUS_ONE + (1.0 - shift))/ZETA_ORDERS
    x = -epsilon
    return (shift - EULER_GAMMA)*epsilon + x*x*npp.polyval(x, coefficients)


def log_gamma(x):
    '''Returns ln(Gamma(x)) for x > 0. Accepts a scalar or a numpy array.

    Near the zeros at 1 and 2 the zeta series keeps the relative error small.

    x: Positive argument(s).
    '''
    values = np.asarray(x, dtype=float)
    if not np.all(values > 0):
        raise me.DomainError(f"log_gamma needs x > 0, got {x}")
    flat = values.ravel()
    small = flat < 0.5
    z = np.where(small, flat + 1.0, flat)
    result = _lanczos(z)
    for shift in (0, 1):
        near = np.abs(z - (1.0 + shift)) <= ZERO_RADIUS
        if near.any():
            result[near] = _zeta_series(z[near] - (1.0 + shift), shift)
    if small.any():
        result[small] -= np.log(flat[small])
    return _scalar_or_array(result.reshape(values.shape), x)


def gamma_sign_log(x: float):
    '''Returns (sign, ln|Gamma(x)|) for real x that is not a pole.'''
    if x > 0:
        return 1, log_gamma(x)
    if x == math.floor(x):
        raise me.DomainError(f"Gamma has a pole at {x}")
    sine = math.sin(math.pi*x)
    sign = 1 if sine > 0 else -1
    return sign, math.log(math.pi) - math.log(abs(sine)) - log_gamma(1.0 - x)


def stirling_deviation(t: float):
    '''Returns Gamma(t)/(sqrt(2 pi) t**(t-1/2) e**-t), evaluated in log space.'''
    if not t > 0:
        raise me.DomainError(f"stirling_deviation needs t > 0, got {t}")
    stirling = HALF_LOG_TWO_PI + (t - 0.5)*math.log(t) - t
    return math.exp(log_gamma(t) - stirling)


# ----------------------------------------------------------------------------

def bessel_j(nu: float, t, policy: EvalPolicy = DEFAULT_POLICY):
    '''Returns J_nu(t) for real order nu >= 0 and argument t >= 0.

    Small arguments use the power series, large arguments the Hankel
    expansion, and the range in between Miller's downward recurrence
    normalised with the Neumann sum (t/2)**alpha = sum w_k J_{alpha+2k}.

    nu: Order.
    t: Argument, scalar or numpy array.
    policy: Branch switch points and accuracy targets.
    '''
    if not (math.isfinite(nu) and nu >= 0):
        raise me.DomainError(f"bessel_j needs a finite order nu >= 0, got {nu}")
    values = np.asarray(t, dtype=float)
    if not np.all(values >= 0) or not np.all(np.isfinite(values)):
        raise me.DomainError(f"bessel_j needs finite t >= 0")
    flat = values.ravel()
    result = np.empty_like(flat)
    series_edge, asymptotic_edge = policy.edges(nu)
    zero = flat == 0
    series = ~zero & (flat <= series_edge)
    asymptotic = ~zero & ~series & (flat >= asymptotic_edge)
    middle = ~(zero | series | asymptotic)
    result[zero] = 1.0 if nu == 0 else 0.0
    if series.any():
        result[series] = _series(nu, flat[series], policy)
    if asymptotic.any():
        result[asymptotic] = _asymptotic(nu, flat[asymptotic], policy)
    if middle.any():
        result[middle] = _miller(nu, flat[middle], policy)
    return _scalar_or_array(result.reshape(values.shape), t)


def _series(nu: float, t: np.ndarray, policy: EvalPolicy):
    quarter = 0.25*t*t
    term = np.ones_like(t)
    total = np.ones_like(t)
    tolerance = 0.1*policy.target_rel_err
    for m in range(1, policy.max_terms + 1):
        term = -term*quarter/(m*(m + nu))
        total = total + term
        if np.all(np.abs(term) <= tolerance*np.abs(total)):
            break
    else:
        raise me.AccuracyError(f"Bessel series for nu={nu} did not converge in {policy.max_terms} terms")
    return total*np.exp(nu*np.log(0.5*t) - log_gamma(nu + 1.0))


@functools.lru_cache(maxsize=64)
def _hankel_coefficients(nu: float, count: int):
    '''Returns (signs, logs) of the Hankel coefficients a_0..a_count of order nu.

    a_k = prod_{j<=k} (4 nu**2 - (2j-1)**2) / (k! 8**k); a terminating
    expansion has sign 0 and log -inf from its first vanishing factor on.
    '''
    mu = 4.0*nu*nu
    signs = np.ones(count + 1)
    logs = np.zeros(count + 1)
    for k in range(1, count + 1):
        factor = mu - (2*k - 1)**2
        if factor == 0:
            signs[k:] = 0.0
            logs[k:] = -np.inf
            break
        signs[k] = signs[k - 1]*math.copysign(1.0, factor)
        logs[k] = logs[k - 1] + math.log(abs(factor)) - math.log(8.0*k)
    signs.setflags(write=False)
    logs.setflags(write=False)
    return signs, logs


def _terminating_edge(nu: float, count: int):
    '''Returns the argument past which no term of a terminating expansion exceeds 1, None for other orders.'''
    signs, logs = _hankel_coefficients(float(nu), count)
    if signs[-1] != 0:
        return None
    last = int(np.argmin(signs != 0)) - 1
    if last == 0:
        return 0.0
    orders = np.arange(1, last + 1)
    return math.exp(float(np.max(logs[1:last + 1]/orders)))


def _hankel_count(nu: float, lo: float, policy: EvalPolicy):
    '''Returns the index of the last Hankel term kept for arguments t >= lo.'''
    signs, logs = _hankel_coefficients(float(nu), policy.max_terms)
    scaled = logs - np.arange(logs.size)*math.log(lo)
    if signs[-1] == 0:
        last = int(np.argmin(signs != 0)) - 1
        if np.all(scaled[:last + 1] <= 1e-9):
            return last
    target = math.log(policy.target_rel_err)
    for k in range(1, logs.size):
        if signs[k] == 0:
            return k - 1
        if scaled[k] <= target:
            return k
        if scaled[k] > scaled[k - 1]:
            raise me.AccuracyError(f"Hankel expansion for nu={nu} diverges before reaching {policy.target_rel_err:g} "
                f"at t={lo:.6g}; raise asymptotic_cutoff")
    raise me.AccuracyError(f"Hankel expansion for nu={nu} did not converge in {policy.max_terms} terms")


def _bands(t: np.ndarray):
    '''Yields boolean masks splitting t into groups whose largest value is at most BAND_RATIO times the smallest.'''
    labels = np.floor(np.log(t/t.min())/math.log(BAND_RATIO)).astype(int)
    for label in np.unique(labels):
        yield labels == label


def _asymptotic(nu: float, t: np.ndarray, policy: EvalPolicy):
    result = np.empty_like(t)
    signs, logs = _hankel_coefficients(float(nu), policy.max_terms)
    for members in _bands(t):
        values = t[members]
        lo = float(values.min())
        count = _hankel_count(nu, lo, policy)
        orders = np.arange(count + 1)
        # a_k/lo**k, alternating in pairs
        scaled = signs[:count + 1]*np.exp(logs[:count + 1] - orders*math.log(lo))*np.where((orders//2) % 2 == 0, 1.0, -1.0)
        ratio = lo/values
        square = ratio*ratio
        p = npp.polyval(square, scaled[0::2])
        q = ratio*npp.polyval(square, scaled[1::2]) if count >= 1 else 0.0
        chi = values - (0.5*nu + 0.25)*math.pi
        result[members] = np.sqrt(2.0/(math.pi*values))*(p*np.cos(chi) - q*np.sin(chi))
    return result


def _miller(nu: float, t: np.ndarray, policy: EvalPolicy):
    result = np.empty_like(t)
    for members in _bands(t):
        result[members] = _miller_band(nu, t[members], policy)
    return result


def _miller_band(nu: float, t: np.ndarray, policy: EvalPolicy):
    order = int(math.floor(nu))
    alpha = nu - order
    span = max(nu, float(t.max()))
    digits = max(1.0, -math.log10(policy.target_rel_err))
    start = int(span + math.sqrt(12.0*digits*span)) + 30
    start += start % 2
    logger.debug(f"Miller recurrence for nu={nu} on {t.size} points from order {start}.")

    k = np.arange(1, start//2 + 1, dtype=float)
    weights = np.empty(start//2 + 1)
    weights[0] = math.exp(log_gamma(alpha + 1.0))
    weights[1:] = (alpha + 2.0*k)*np.exp(log_gamma(alpha + k) - log_gamma(k + 1.0))

    # each step grows the values by at most 2(alpha+start)/t + 1
    growth = math.log10(2.0*(alpha + start)/float(t.min()) + 1.0)
    stride = max(1, int(RESCALE_DIGITS/growth))
    twice_inverse = 2.0/t
    upper = np.zeros_like(t)
    current = np.ones_like(t)
    total = weights[-1]*current
    saved = np.zeros_like(t)
    for j in range(start, 0, -1):
        lower = ((alpha + j)*twice_inverse)*current - upper
        upper, current = current, lower
        index = j - 1
        if index == order:
            saved = current.copy()
        if index % 2 == 0:
            total = total + weights[index//2]*current
        if (start - j) % stride == 0:
            big = np.abs(current) > RESCALE_LIMIT
            if big.any():
                scale = np.where(big, 1.0/RESCALE_LIMIT, 1.0)
                current *= scale
                upper *= scale
                total *= scale
                saved *= scale
    return saved/total*np.exp(alpha*np.log(0.5*t))


def bessel_modulus_phase(nu: float, t):
    '''Returns (M**2, theta) with J_nu(t) = M cos(theta) for large t.

    Both come from the large-argument expansions, truncated after three
    correction terms; accurate once t is well past 4*nu**2.
    '''
    values = np.asarray(t, dtype=float)
    if not np.all(values > 0):
        raise me.DomainError("bessel_modulus_phase needs t > 0")
    mu = 4.0*nu*nu
    inverse = 1.0/(values*values)
    modulus = (2.0/(math.pi*values))*(1.0 + (mu - 1.0)/8.0*inverse
        + 3.0*(mu - 1.0)*(mu - 9.0)/128.0*inverse**2
        + 5.0*(mu - 1.0)*(mu - 9.0)*(mu - 25.0)/1024.0*inverse**3)
    four = 4.0*values
    phase = (values - (0.5*nu + 0.25)*math.pi + (mu - 1.0)/(2.0*four)
        + (mu - 1.0)*(mu - 25.0)/(6.0*four**3)
        + (mu - 1.0)*(mu*mu - 114.0*mu + 1073.0)/(5.0*four**5))
    return _scalar_or_array(modulus, t), _scalar_or_array(phase, t)


# ----------------------------------------------------------------------------
