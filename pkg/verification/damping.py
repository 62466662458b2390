"""Dyadic-annulus scan of the local integrability of |H|^s near the origin."""
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import integrate

import config
from algebra.poly import PsiSeries, rational_str
from geometry.newton import newton_distance, newton_polygon
from geometry.regions import FSTAR_POWER, DampingSpec, SideForm
from verification.metrics import Verdict, combine

logger = logging.getLogger(__name__)

RADIAL_NODES = 16
ANGLE_BREAKS = (0.0, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi)
CONVERGENT = "convergent"
DIVERGENT = "divergent"


def integrability_threshold(d):
    """Exponent s0 with |H|^s integrable for s > s0; -inf when d <= 2."""
    if d <= 2:
        return -math.inf
    return float(-2 / (d - 2))


@dataclass(frozen=True)
class ScanRow:
    s: float
    integrals: tuple
    ratio: float
    trend: str
    expected: str
    verdict: str

    def to_dict(self):
        return {"s": self.s, "annulusIntegrals": list(self.integrals), "ratio": self.ratio,
                "trend": self.trend, "expected": self.expected, "verdict": self.verdict}


@dataclass(frozen=True)
class DampingScanReport:
    damping: DampingSpec
    d: object
    threshold: float
    eta: float
    annuli: int
    rows: tuple

    @property
    def verdict(self):
        return combine(r.verdict for r in self.rows)

    def frame(self):
        return pd.DataFrame([{"s": r.s, "ratio": r.ratio, "trend": r.trend, "verdict": r.verdict}
                             for r in self.rows])

    def to_dict(self):
        return {"damping": self.damping.to_dict(), "d": rational_str(self.d),
                "threshold": None if math.isinf(self.threshold) else self.threshold,
                "eta": self.eta, "annuli": self.annuli, "rows": [r.to_dict() for r in self.rows],
                "verdict": self.verdict}


class AnnulusIntegrator:
    """Integral of |H|^s over 2^-j <= |(x, y)| <= 2^(1-j) in polar coordinates.

    Gauss-Legendre in log(rho), adaptive vector quadrature in theta split at the axes.
    """

    def __init__(self, F, damping):
        self.form = SideForm(1, F, PsiSeries(), F)
        self.damping = damping
        self.fold = not F.is_integer()
        self.nodes, self.weights = np.polynomial.legendre.leggauss(RADIAL_NODES)

    def _h(self, xs, ys):
        if self.fold:
            xs = np.abs(xs)
        return self.damping.evaluate(self.form, xs, ys)

    def annulus(self, j, s):
        lo, hi = math.log(2.0 ** -j), math.log(2.0 ** (1 - j))
        half, mid = (hi - lo) / 2, (hi + lo) / 2
        rho = np.exp(mid + half * self.nodes)

        def f(theta):
            h = self._h(rho * math.cos(theta), rho * math.sin(theta))
            with np.errstate(divide="ignore", over="ignore"):
                return np.where(h > 0, h ** s, 0.0)

        angular = np.zeros_like(rho)
        for a, b in zip(ANGLE_BREAKS, ANGLE_BREAKS[1:]):
            value, _ = integrate.quad_vec(f, a, b, epsrel=1e-7, norm="max")
            angular += value
        return float(np.sum(self.weights * half * rho * rho * angular))


def _expected(s, threshold, eta):
    if math.isinf(threshold) or s >= threshold + eta:
        return CONVERGENT
    if s <= threshold - eta:
        return DIVERGENT
    return None


def damping_integrability_scan(F, damping=None, s_grid=None, cfg=None, annuli=None, eta=None):
    cfg = cfg or config.VerificationConfig()
    annuli = annuli or config.ANNULI
    eta = config.ETA if eta is None else eta
    d = newton_distance(newton_polygon(F))
    if damping is None:
        damping = DampingSpec(FSTAR_POWER, max(d, 2))
    threshold = integrability_threshold(d)
    if s_grid is None:
        s_grid = cfg.s_grid
    if s_grid is None:
        s_grid = (-20.0, -1.0) if math.isinf(threshold) else (threshold - 1, threshold + 1)

    integrator = AnnulusIntegrator(F, damping)
    rows = []
    for s in s_grid:
        s = float(s)
        integrals = tuple(integrator.annulus(j, s) for j in range(1, annuli + 1))
        ratio = integrals[-1] / integrals[-2] if integrals[-2] > 0 else math.inf
        trend = CONVERGENT if ratio < 1 else DIVERGENT
        expected = _expected(s, threshold, eta)
        if expected is None:
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.PASS if trend == expected else Verdict.FAIL
        logger.info("s = %.3f: annulus ratio %.4f (%s, expected %s)", s, ratio, trend, expected)
        rows.append(ScanRow(s, integrals, ratio, trend, expected, verdict))
    return DampingScanReport(damping, d, threshold, eta, annuli, tuple(rows))
