"""Sliver regions, side-local coordinate forms and damping functions.

All regions live in side-local coordinates (x', y') with x' = |x| > 0 and y' = y - psi(x'), so a
single predicate serves both half-planes.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

import config
from algebra.poly import Polynomial, PsiSeries, differentiate, evaluate_array, rational_str
from geometry.newton import FStar, newton_polygon

FSTAR_POWER = "FStarPower"
WEIGHTED_FYY = "WeightedFyy"
PLAIN_FYY = "PlainFyy"


@dataclass(eq=False)
class SideForm:
    """F and the pre-shift polynomial f on one half-plane, both in side-local coordinates."""

    side: int
    F: Polynomial
    psi: PsiSeries
    f: Polynomial
    _derivatives: dict = field(default_factory=dict, repr=False)

    @cached_property
    def fstar(self):
        return FStar(newton_polygon(self.F).vertices)

    @cached_property
    def f_xx(self):
        return differentiate(self.f, "x", 2)

    def dy(self, m):
        if m not in self._derivatives:
            self._derivatives[m] = differentiate(self.F, "y", m)
        return self._derivatives[m]

    def to_local(self, xs, ys):
        xl = self.side * np.asarray(xs, dtype=float)
        return xl, np.asarray(ys, dtype=float) - self.psi.evaluate(xl)

    def quantity(self, name, xs, ys, order=0, damping=None):
        """|quantity| at side-local points."""
        if name == "dyF":
            return np.abs(evaluate_array(self.dy(order), xs, ys))
        if name == "fxx":
            return np.abs(evaluate_array(self.f_xx, xs, ys + self.psi.evaluate(xs)))
        if name == "fstar":
            return self.fstar.evaluate_array(xs, ys)
        if name == "damping_ratio":
            exponent = float(Fraction(1, 2) - 1 / damping.d_star)
            return damping.evaluate(self, xs, ys) / self.fstar.evaluate_array(xs, ys) ** exponent
        raise ValueError(f"unknown quantity {name!r}")


@dataclass(frozen=True)
class DampingSpec:
    form: str
    d_star: Fraction
    x_exponent: Fraction = None

    @property
    def exponent(self):
        return Fraction(1, 2) - 1 / self.d_star

    def evaluate(self, side_form, xs, ys):
        """|H| at side-local points."""
        if self.form == FSTAR_POWER:
            return side_form.fstar.evaluate_array(xs, ys) ** float(self.exponent)
        fyy = np.sqrt(np.abs(evaluate_array(side_form.dy(2), xs, ys)))
        if self.form == WEIGHTED_FYY:
            return np.abs(xs) ** float(self.x_exponent) * fyy
        return fyy

    def to_dict(self):
        out = {"form": self.form}
        if self.form == FSTAR_POWER:
            out["exponents"] = {"fstar": rational_str(self.exponent)}
        elif self.form == WEIGHTED_FYY:
            out["exponents"] = {"x": rational_str(self.x_exponent), "fyy": "1/2"}
        else:
            out["exponents"] = {"fyy": "1/2"}
        return out


def _log_uniform_x(u, radius):
    return radius * 10.0 ** (-config.LOG_SCALES * (1.0 - u))


def _split_sign(v):
    sign = np.where(v < 0.5, -1.0, 1.0)
    w = np.where(v < 0.5, 2 * v, 2 * v - 1)
    return sign, w


@dataclass(frozen=True)
class SectorRegion:
    """n0 x^weight_low < |y| < x^weight_high / n0; a missing weight drops that side."""

    weight_low: Fraction
    weight_high: Fraction
    n0: Fraction

    def bounds(self, xs, radius):
        n0 = float(self.n0)
        lo = np.zeros_like(xs) if self.weight_low is None else n0 * xs ** float(self.weight_low)
        hi = np.full_like(xs, radius) if self.weight_high is None \
            else np.minimum(xs ** float(self.weight_high) / n0, radius)
        return lo, hi

    def contains(self, xs, ys, radius):
        lo, hi = self.bounds(xs, radius)
        ay = np.abs(ys)
        inside = (xs > 0) & (xs < radius) & (ay < hi) & (ay > 0)
        return inside & (ay > lo)

    def sample(self, points, radius):
        xs = _log_uniform_x(points[:, 0], radius)
        lo, hi = self.bounds(xs, radius)
        sign, w = _split_sign(points[:, 1])
        floor = np.where(lo > 0, lo, hi * 10.0 ** -config.LOG_SCALES)
        valid = floor < hi
        with np.errstate(divide="ignore", invalid="ignore"):
            mag = np.exp(np.log(floor) + w * (np.log(hi) - np.log(floor)))
        return xs[valid], (sign * mag)[valid]

    def to_dict(self):
        return {"type": "sector",
                "weightLow": rational_str(self.weight_low) if self.weight_low is not None else None,
                "weightHigh": rational_str(self.weight_high) if self.weight_high is not None else None,
                "N0": rational_str(self.n0)}


@dataclass(frozen=True)
class BandRegion:
    """(center - half_width) x^weight <= y <= (center + half_width) x^weight."""

    weight: Fraction
    center: Fraction
    half_width: Fraction

    def contains(self, xs, ys, radius):
        with np.errstate(divide="ignore", invalid="ignore"):
            Y = ys / xs ** float(self.weight)
        lo = float(self.center - self.half_width)
        hi = float(self.center + self.half_width)
        return (xs > 0) & (xs < radius) & (np.abs(ys) < radius) & (Y >= lo) & (Y <= hi)

    def sample(self, points, radius):
        xs = _log_uniform_x(points[:, 0], radius)
        Y = float(self.center) + float(self.half_width) * (2 * points[:, 1] - 1)
        ys = Y * xs ** float(self.weight)
        valid = np.abs(ys) < radius
        return xs[valid], ys[valid]

    def to_dict(self):
        return {"type": "band", "weight": rational_str(self.weight), "r": rational_str(self.center),
                "delta": rational_str(self.half_width)}


@dataclass(frozen=True)
class BoxRegion:
    """The whole punctured half box 0 < x < radius, |y| < radius."""

    def contains(self, xs, ys, radius):
        return (xs > 0) & (xs < radius) & (np.abs(ys) < radius)

    def sample(self, points, radius):
        xs = _log_uniform_x(points[:, 0], radius)
        sign, w = _split_sign(points[:, 1])
        ys = sign * radius * 10.0 ** (-config.LOG_SCALES * (1.0 - w))
        return xs, ys

    def to_dict(self):
        return {"type": "box"}


def dyadic(value, up=False):
    """A short dyadic rational next to a positive float, rounded away from the bound's side."""
    if value <= 0 or not math.isfinite(value):
        raise ValueError(f"constant must be positive and finite, got {value}")
    e = math.floor(math.log2(value)) - 20
    scaled = value / 2.0 ** e
    q = math.ceil(scaled) if up else math.floor(scaled)
    return Fraction(q) * Fraction(2) ** e
