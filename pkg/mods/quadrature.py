'''The module containing composite Gauss panel rules and panel interpolation.

Rules are cached by degree (and Jacobi exponent) and handed out as read-only
arrays; every caller assembles its own panel edges.
'''

import functools
import math

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

import mods.errors as me


# ----------------------------------------------------------------------------

DEFAULT_DEGREE = 16


def _frozen(*arrays):
    for array in arrays:
        array.setflags(write=False)
    return arrays


@functools.lru_cache(maxsize=None)
def legendre_rule(degree: int = DEFAULT_DEGREE):
    '''Returns (nodes, weights) of the Gauss-Legendre rule on [-1, 1].'''
    me.require(degree >= 2, f"degree must be at least 2, got {degree}")
    nodes, weights = roots_legendre(degree)
    return _frozen(np.asarray(nodes, dtype=float), np.asarray(weights, dtype=float))


@functools.lru_cache(maxsize=None)
def jacobi_rule(degree: int, exponent: float):
    '''Returns (nodes, weights) on [0, 1] for the weight s**exponent.

    degree: Number of nodes.
    exponent: Power of the endpoint singularity at 0; must exceed -1.
    '''
    me.require(exponent > -1.0, f"Jacobi exponent must exceed -1, got {exponent}", me.DivergenceError)
    nodes, weights = roots_jacobi(degree, 0.0, exponent)
    nodes = 0.5*(np.asarray(nodes, dtype=float) + 1.0)
    weights = np.asarray(weights, dtype=float)*2.0**(-exponent - 1.0)
    return _frozen(nodes, weights)


@functools.lru_cache(maxsize=None)
def barycentric_weights(degree: int = DEFAULT_DEGREE):
    '''Returns the barycentric interpolation weights of the Legendre nodes.'''
    nodes, _ = legendre_rule(degree)
    differences = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(differences, 1.0)
    weights = 1.0/np.prod(differences, axis=1)
    return _frozen(weights)[0]


# ----------------------------------------------------------------------------

def panels_rule(edges, degree: int = DEFAULT_DEGREE):
    '''Returns flattened (nodes, weights) of the composite rule over the panels.

    edges: Strictly increasing panel edges.
    degree: Legendre nodes per panel.
    '''
    edges = np.asarray(edges, dtype=float)
    me.require(edges.ndim == 1 and edges.size >= 2, "panel edges need at least two points")
    me.require(bool(np.all(np.diff(edges) > 0)), "panel edges must be strictly increasing")
    reference, weights = legendre_rule(degree)
    middle = 0.5*(edges[1:] + edges[:-1])
    half = 0.5*(edges[1:] - edges[:-1])
    nodes = middle[:, None] + half[:, None]*reference[None, :]
    return nodes.ravel(), (half[:, None]*weights[None, :]).ravel()


def edges_linear(lo: float, hi: float, width: float):
    '''Returns equal panels of at most the given width covering [lo, hi].'''
    count = max(1, int(math.ceil((hi - lo)/width - 1e-9)))
    return np.linspace(lo, hi, count + 1)


def edges_geometric(lo: float, hi: float, ratio: float = 2.0):
    '''Returns panels whose edges grow by at most ratio, covering [lo, hi].'''
    me.require(0 < lo < hi, f"geometric panels need 0 < lo < hi, got {lo}, {hi}")
    count = max(1, int(math.ceil(math.log(hi/lo)/math.log(ratio) - 1e-9)))
    return np.geomspace(lo, hi, count + 1)


def edges_merge(edges, breakpoints=()):
    '''Returns edges with the interior breakpoints inserted.'''
    edges = np.asarray(edges, dtype=float)
    inner = [point for point in breakpoints if edges[0] < point < edges[-1]]
    if not inner:
        return edges
    merged = np.unique(np.concatenate([edges, np.asarray(inner, dtype=float)]))
    keep = np.concatenate([[True], np.diff(merged) > 1e-12*max(1.0, abs(merged[-1]))])
    return merged[keep]


# ----------------------------------------------------------------------------

class PanelInterpolant:
    '''Piecewise Legendre interpolation of values sampled on Gauss panels.

    Outside [edges[0], edges[-1]] the interpolant is 0.

    edges: Panel edges the values were sampled on.
    values: Samples at panels_rule(edges, degree) nodes; real or complex.
    degree: Nodes per panel.
    '''

    def __init__(self, edges, values, degree: int = DEFAULT_DEGREE):
        self.edges = np.asarray(edges, dtype=float)
        self.degree = degree
        values = np.asarray(values)
        me.require(values.size == (self.edges.size - 1)*degree, "panel values do not match the panel layout")
        self.values = values.reshape(self.edges.size - 1, degree)

    def __call__(self, x):
        points = np.asarray(x, dtype=float)
        flat = points.ravel()
        result = np.zeros(flat.shape, dtype=self.values.dtype)
        inside = (flat >= self.edges[0]) & (flat <= self.edges[-1])
        if inside.any():
            result[inside] = self._evaluate(flat[inside])
        if points.ndim == 0:
            return result[0]
        return result.reshape(points.shape)

    def _evaluate(self, x: np.ndarray):
        reference, _ = legendre_rule(self.degree)
        bary = barycentric_weights(self.degree)
        panel = np.clip(np.searchsorted(self.edges, x, side="right") - 1, 0, self.edges.size - 2)
        lo = self.edges[panel]
        hi = self.edges[panel + 1]
        u = (2.0*x - lo - hi)/(hi - lo)
        differences = u[:, None] - reference[None, :]
        exact = differences == 0
        differences[exact] = 1.0
        kernel = bary[None, :]/differences
        samples = self.values[panel]
        result = np.sum(kernel*samples, axis=1)/np.sum(kernel, axis=1)
        hits = exact.any(axis=1)
        if hits.any():
            result[hits] = samples[hits][exact[hits]]
        return result


# ----------------------------------------------------------------------------
