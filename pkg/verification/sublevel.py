"""Quasi-random estimate of the growth exponent of |{|p| < t}| as t -> 0."""
import logging
from dataclasses import dataclass
from functools import partial

import numpy as np
import pandas as pd

import config
from algebra.poly import evaluate_array, rational_str
from errors import DegenerateMeasure, ZeroPolynomial
from geometry.adapt import height, is_adapted
from geometry.newton import newton_distance, newton_polygon
from verification.metrics import LogLogFit
from verification.sampling import sobol_points, work_units, map_units

logger = logging.getLogger(__name__)

HIT_LOW = 5e-4
HIT_HIGH = 5e-2
CALIBRATED_POINTS = 12


@dataclass(frozen=True)
class SublevelReport:
    fit: object
    t: np.ndarray
    measure: np.ndarray
    height: object
    newton_bound: float
    adapted: bool
    samples: int
    seed: int
    radius: float

    @property
    def verdict(self):
        return self.fit.verdict

    def curve(self):
        return pd.DataFrame({"t": self.t, "measure": self.measure})

    def to_dict(self):
        return {
            "fit": self.fit.to_dict(),
            "height": rational_str(self.height),
            "inverseNewtonDistance": self.newton_bound,
            "adapted": self.adapted,
            "samples": self.samples,
            "seed": self.seed,
            "radius": self.radius,
            "curve": [[float(t), float(m)] for t, m in zip(self.t, self.measure)],
            "verdict": self.verdict,
        }


def _box_points(p, unit, seed, radius):
    pts = sobol_points(unit.size, seed, start=unit.start)
    ys = (2 * pts[:, 1] - 1) * radius
    if p.is_integer():
        xs = (2 * pts[:, 0] - 1) * radius
    else:
        xs = pts[:, 0] * radius
    return xs, ys


def _count_unit(p, seed, radius, thresholds, unit):
    xs, ys = _box_points(p, unit, seed, radius)
    values = np.sort(np.abs(evaluate_array(p, xs, ys)))
    return np.searchsorted(values, thresholds, side="left")


def calibrate_thresholds(p, seed, radius, size=None):
    """t values at which roughly HIT_LOW ... HIT_HIGH of the box lies in the sublevel set."""
    unit = work_units(size or config.UNIT_SIZE)[0]
    xs, ys = _box_points(p, unit, seed, radius)
    values = np.abs(evaluate_array(p, xs, ys))
    lo, hi = np.quantile(values, [HIT_LOW, HIT_HIGH])
    if not 0 < lo < hi:
        raise DegenerateMeasure(f"|p| quantiles ({lo:.3g}, {hi:.3g}) do not span a usable t range")
    return np.geomspace(lo, hi, CALIBRATED_POINTS)


def estimate_sublevel_exponent(p, cfg=None, target=None, tolerance=None):
    if p.is_zero():
        raise ZeroPolynomial("sublevel sets of the zero polynomial are the whole box")
    cfg = cfg or config.VerificationConfig()
    tolerance = config.SUBLEVEL_TOLERANCE if tolerance is None else tolerance
    radius = float(cfg.radius)
    if cfg.t_grid is not None:
        thresholds = cfg.t_grid.values()
    else:
        thresholds = calibrate_thresholds(p, cfg.seed, radius)

    units = work_units(cfg.samples)
    counts = np.zeros(len(thresholds), dtype=np.int64)
    for c in map_units(partial(_count_unit, p, cfg.seed, radius, thresholds), units, cfg.workers):
        counts += c
    if counts[-1] == 0 or counts[0] == cfg.samples:
        raise DegenerateMeasure(f"sublevel counts {counts[0]}..{counts[-1]} of {cfg.samples}: adjust radius or t grid")

    area = (2 * radius) ** 2 if p.is_integer() else 2 * radius ** 2
    measure = area * counts / cfg.samples
    h = height(p).h
    target = float(1 / h) if target is None else float(target)
    fit = LogLogFit().within(thresholds, measure, target, tolerance)
    d = newton_distance(newton_polygon(p))
    logger.info("sublevel slope %.4f against %.4f (1/d = %.4f): %s", fit.slope, target, float(1 / d), fit.verdict)
    return SublevelReport(fit, thresholds, measure, h, float(1 / d), is_adapted(p)[0], cfg.samples, cfg.seed, radius)
