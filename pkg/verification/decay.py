"""Decay of the Fourier transform of a damped, smoothly cut off surface measure.

The transform at lambda * (w1, w2, w3) is

    e^{s^2} * integral of exp(-i lambda (w1 f + w2 x + w3 y)) phi(x, y) |H|^s |D|^{delta s} dx dy

with phi a smooth bump of the cutoff radius, H the sliver-wise damping function and D the
Hessian determinant of f. Integration is by the tensor-product trapezoid rule, which is
spectrally accurate for compactly supported smooth integrands.
"""
import logging
import math
from dataclasses import dataclass
from functools import partial

import numpy as np
import pandas as pd

import config
from algebra.poly import LinearMap2, differentiate, evaluate_array, hessian_determinant
from errors import QuadratureUnderResolved
from geometry.adapt import adapt, genericize, height
from geometry.slivers import damping_value, decompose
from verification.metrics import LogLogFit
from verification.sampling import map_units

logger = logging.getLogger(__name__)

MIN_NODES = 256
NODE_SAFETY = 1.5
BANDWIDTH = 20.0
RICHARDSON_TOLERANCE = 0.1
ROW_CHUNK = 256
GRADIENT_GRID = 257


def bump(xs, ys, radius):
    """exp(1 - 1 / (1 - r^2 / R^2)) inside the disk of radius R, 0 outside; equal to 1 at 0."""
    q = (xs * xs + ys * ys) / (radius * radius)
    out = np.zeros_like(q)
    inside = q < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - q[inside]))
    return out


def unit_direction(direction):
    w = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(w)
    if w.shape != (3,) or norm == 0:
        raise ValueError("direction must be a nonzero 3-vector")
    w = w / norm
    if abs(w[0]) < max(abs(w[1]), abs(w[2])):
        raise ValueError("the f-component of the direction must be the largest in size")
    return w


@dataclass(eq=False)
class DampedMeasure:
    """Surface measure of z = f(x, y) near the origin with the damping weight attached.

    f is written in the coordinates the decomposition uses (the input after the generic map T);
    jacobian = |det T| converts the integral back.
    """

    f: object
    s: float = 0.0
    delta: float = 0.0
    cutoff_radius: float = config.DEFAULT_RADIUS
    decomposition: object = None
    T: LinearMap2 = None
    source: object = None

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.damped and self.s <= 1:
            raise ValueError("damped decay runs need s > 1")
        self.T = self.T or LinearMap2.identity()
        self.source = self.source or self.f
        self._hessian = hessian_determinant(self.f)
        self._grad = (differentiate(self.f, "x"), differentiate(self.f, "y"))

    @property
    def damped(self):
        return self.decomposition is not None

    @property
    def jacobian(self):
        return abs(float(self.T.det))

    def linear_part(self, w):
        """(w2, w3) pulled back through T."""
        T = self.T
        return (w[1] * float(T.a) + w[2] * float(T.c), w[1] * float(T.b) + w[2] * float(T.d))

    def weight(self, xs, ys):
        out = bump(xs, ys, self.cutoff_radius)
        if not self.damped:
            return out
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            h = damping_value(self.decomposition, xs, ys, math.inf) ** self.s
            dh = np.abs(evaluate_array(self._hessian, xs, ys)) ** (self.delta * self.s)
        return out * np.nan_to_num(h * dh, nan=0.0, posinf=0.0) * math.exp(self.s ** 2)

    def max_gradient(self, w):
        g = np.linspace(-self.cutoff_radius, self.cutoff_radius, GRADIENT_GRID)
        xs, ys = np.meshgrid(g, g, indexing="ij")
        inside = xs * xs + ys * ys < self.cutoff_radius ** 2
        lx, ly = self.linear_part(w)
        gx = w[0] * evaluate_array(self._grad[0], xs, ys) + lx
        gy = w[0] * evaluate_array(self._grad[1], xs, ys) + ly
        return float(np.max(np.hypot(gx, gy)[inside]))

    def node_count(self, lam, w):
        """Trapezoid intervals per axis resolving the phase oscillation at frequency lam."""
        length = 2 * self.cutoff_radius
        band = BANDWIDTH / self.cutoff_radius
        n = math.ceil(NODE_SAFETY * length * (lam * self.max_gradient(w) + band) / (2 * math.pi))
        return max(MIN_NODES, n)

    def transform(self, lam, w, n):
        """Trapezoid value of the damped transform with n intervals per axis."""
        R = self.cutoff_radius
        nodes = np.linspace(-R, R, n + 1)
        step = nodes[1] - nodes[0]
        lx, ly = self.linear_part(w)
        total = 0.0 + 0.0j
        for start in range(0, nodes.size, ROW_CHUNK):
            xs, ys = np.meshgrid(nodes[start:start + ROW_CHUNK], nodes, indexing="ij")
            phase = w[0] * evaluate_array(self.f, xs, ys) + lx * xs + ly * ys
            total += np.sum(self.weight(xs, ys) * np.exp(-1j * lam * phase))
        return total * step * step * self.jacobian

    def to_dict(self):
        return {"f": self.source.to_json(), "s": self.s, "delta": self.delta,
                "cutoffRadius": self.cutoff_radius, "damped": self.damped,
                "T": self.T.to_dict(),
                "slivers": len(self.decomposition) if self.damped else 0}


def damped_measure(p, s=None, delta=None, cutoff_radius=None, decomposition_seed=None):
    """The measure of p damped with the slivers of its generic adapted form; undamped when s == 0."""
    s = config.DEFAULT_S if s is None else float(s)
    delta = config.DEFAULT_DELTA if delta is None else float(delta)
    radius = config.DEFAULT_RADIUS if cutoff_radius is None else float(cutoff_radius)
    if s == 0:
        return DampedMeasure(p, 0.0, 0.0, radius)
    T, G = genericize(p)
    ar = adapt(p, pre=T)
    dec = decompose(ar, seed=decomposition_seed)
    return DampedMeasure(G, s, delta, radius, dec, T, p)


def _at_lambda(measure, w, lam):
    n = measure.node_count(lam, w)
    coarse = measure.transform(lam, w, n)
    fine = measure.transform(lam, w, 2 * n)
    if abs(fine) == 0:
        raise QuadratureUnderResolved(f"transform vanished at lambda = {lam:.4g}")
    change = abs(math.log(abs(coarse)) - math.log(abs(fine))) / max(1.0, abs(math.log(abs(fine))))
    if change > RICHARDSON_TOLERANCE:
        raise QuadratureUnderResolved(
            f"log|transform| moved by {change:.1%} between {n} and {2 * n} nodes at lambda = {lam:.4g}")
    logger.info("lambda %.4g: |transform| = %.6g with %d nodes per axis", lam, abs(fine), 2 * n)
    return abs(fine), 2 * n


@dataclass(frozen=True)
class DecayReport:
    measure: DampedMeasure
    direction: tuple
    lambdas: np.ndarray
    magnitudes: np.ndarray
    nodes: tuple
    fit: object
    rule: str

    @property
    def verdict(self):
        return self.fit.verdict

    def curve(self):
        return pd.DataFrame({"lambda": self.lambdas, "magnitude": self.magnitudes})

    def to_dict(self):
        return {"measure": self.measure.to_dict(), "direction": list(self.direction),
                "nodes": list(self.nodes), "rule": self.rule, "fit": self.fit.to_dict(),
                "curve": [[float(a), float(b)] for a, b in zip(self.lambdas, self.magnitudes)],
                "verdict": self.verdict}


def estimate_decay(measure, direction=(1.0, 0.0, 0.0), cfg=None, target=None, tolerance=None, epsilon=None):
    """Fit log|transform| against log(lambda) over the configured lambda grid.

    Undamped measures are held to the slope -1/h (or target) within tolerance; damped ones
    to slope <= -1/2 - epsilon.
    """
    cfg = cfg or config.VerificationConfig()
    w = unit_direction(direction)
    lambdas = cfg.lambda_grid.values()
    results = map_units(partial(_at_lambda, measure, w), list(lambdas), cfg.workers)
    magnitudes = np.array([m for m, _ in results])
    nodes = tuple(n for _, n in results)
    fit = LogLogFit()
    if measure.damped:
        epsilon = config.DECAY_EPSILON if epsilon is None else epsilon
        ceiling = -0.5 - epsilon
        result = fit.at_most(lambdas, magnitudes, ceiling)
        rule = f"slope <= {ceiling:g}"
    else:
        tolerance = config.DECAY_TOLERANCE if tolerance is None else tolerance
        if target is None:
            target = -float(1 / height(measure.source).h)
        result = fit.within(lambdas, magnitudes, target, tolerance)
        rule = f"|slope - ({target:g})| <= {tolerance:g}"
    logger.info("decay slope %.4f (%s): %s", result.slope, rule, result.verdict)
    return DecayReport(measure, tuple(float(v) for v in w), lambdas, magnitudes, nodes, result, rule)
