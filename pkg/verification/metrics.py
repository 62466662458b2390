import logging
from dataclasses import dataclass

import numpy as np
from sklearn.linear_model import LinearRegression
from sklearn.metrics import r2_score

import config

logger = logging.getLogger(__name__)


class Verdict:
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    points: int
    target: float = None
    tolerance: float = None
    verdict: str = Verdict.INCONCLUSIVE

    @property
    def gap(self):
        return None if self.target is None else self.slope - self.target

    def to_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "rSquared": self.r_squared,
                "points": self.points, "target": self.target, "tolerance": self.tolerance,
                "gap": self.gap, "verdict": self.verdict}


class LogLogFit:
    """Least-squares line through (log x, log y)."""

    def __init__(self, r2_min=None):
        self.r2_min = config.R2_MIN if r2_min is None else r2_min

    def fit(self, xs, ys):
        xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
        keep = (xs > 0) & (ys > 0) & np.isfinite(xs) & np.isfinite(ys)
        if keep.sum() < 3:
            return None
        lx, ly = np.log(xs[keep]).reshape(-1, 1), np.log(ys[keep])
        model = LinearRegression().fit(lx, ly)
        r2 = float(r2_score(ly, model.predict(lx)))
        return float(model.coef_[0]), float(model.intercept_), r2, int(keep.sum())

    def within(self, xs, ys, target, tolerance):
        """PASS when |slope - target| <= tolerance with a good fit."""
        out = self.fit(xs, ys)
        if out is None:
            return FitResult(float("nan"), float("nan"), float("nan"), 0, target, tolerance, Verdict.INCONCLUSIVE)
        slope, intercept, r2, n = out
        if r2 < self.r2_min:
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.PASS if abs(slope - target) <= tolerance else Verdict.FAIL
        return FitResult(slope, intercept, r2, n, target, tolerance, verdict)

    def at_most(self, xs, ys, ceiling):
        """PASS when slope <= ceiling with a good fit."""
        out = self.fit(xs, ys)
        if out is None:
            return FitResult(float("nan"), float("nan"), float("nan"), 0, ceiling, 0.0, Verdict.INCONCLUSIVE)
        slope, intercept, r2, n = out
        if r2 < self.r2_min:
            verdict = Verdict.INCONCLUSIVE
        else:
            verdict = Verdict.PASS if slope <= ceiling else Verdict.FAIL
        return FitResult(slope, intercept, r2, n, ceiling, 0.0, verdict)


def combine(verdicts):
    verdicts = list(verdicts)
    if Verdict.FAIL in verdicts:
        return Verdict.FAIL
    if Verdict.INCONCLUSIVE in verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS
