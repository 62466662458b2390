"""Sampled checks of two-sided and one-sided size estimates on sliver regions."""
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

import config
from algebra.poly import rational_str
from errors import EmptyRegion
from verification.metrics import Verdict
from verification.sampling import sobol_points

logger = logging.getLogger(__name__)

GE = ">="
LE = "<="


@dataclass(frozen=True)
class PredictedBound:
    """quantity (comparator) constant * |x|^alpha * |y|^beta on a region."""

    name: str
    quantity: str
    comparator: str
    constant: Fraction
    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    order: int = 0

    def to_dict(self):
        return {"name": self.name, "quantity": self.quantity, "order": self.order,
                "comparator": self.comparator, "constant": rational_str(self.constant),
                "alpha": rational_str(self.alpha), "beta": rational_str(self.beta)}


@dataclass(frozen=True)
class ComparabilityReport:
    bound: PredictedBound
    region: dict
    side: int
    worst_ratio: float
    margin: float
    samples: int
    radius: float
    verdict: str

    def to_dict(self):
        return {"bound": self.bound.to_dict(), "region": self.region,
                "side": "x>0" if self.side > 0 else "x<0", "worstRatio": self.worst_ratio,
                "margin": self.margin, "samples": self.samples, "radius": self.radius,
                "verdict": self.verdict}


def region_samples(region, radius, samples, seed):
    """Side-local points of the region at radius and radius / 4."""
    xs, ys = [], []
    for i, r in enumerate((radius, radius / 4)):
        pts = sobol_points(samples, seed, start=i * samples)
        x, y = region.sample(pts, r)
        xs.append(x)
        ys.append(y)
    return np.concatenate(xs), np.concatenate(ys)


def ratios(form, xs, ys, quantity, order=0, alpha=0, beta=0, damping=None):
    """quantity / (|x|^alpha |y|^beta), finite entries only."""
    q = form.quantity(quantity, xs, ys, order=order, damping=damping)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        model = np.abs(xs) ** float(alpha) * np.abs(ys) ** float(beta)
        out = q / model
    return out[np.isfinite(out)]


def margin_of(values, comparator, constant):
    constant = float(constant)
    if comparator == GE:
        return float(np.min(values)) / constant, float(np.min(values))
    return constant / float(np.max(values)), float(np.max(values))


def check_comparability(form, region, bound, radius=None, samples=None, seed=None, damping=None):
    """PASS iff the bound holds at every sample, i.e. margin >= 1."""
    radius = float(radius if radius is not None else config.SLIVER_RADIUS)
    samples = samples or config.VALIDATION_SAMPLES
    seed = config.DEFAULT_SEED if seed is None else seed
    xs, ys = region_samples(region, radius, samples, seed)
    values = ratios(form, xs, ys, bound.quantity, bound.order, bound.alpha, bound.beta, damping)
    if values.size == 0:
        raise EmptyRegion(f"no sample of {region.to_dict()} fell inside radius {radius}")
    margin, worst = margin_of(values, bound.comparator, bound.constant)
    verdict = Verdict.PASS if margin >= 1.0 else Verdict.FAIL
    logger.debug("%s on %s: margin %.4g over %d samples", bound.name, region.to_dict(), margin, values.size)
    return ComparabilityReport(bound, region.to_dict(), form.side, worst, margin, int(values.size), radius, verdict)
