"""Adapted coordinates: detection, the shift iteration, genericizing pre-transforms and the height."""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import count

import config
from algebra.poly import (LinearMap2, Polynomial, PsiSeries, rational_str, restrict_x, substitute_linear,
                          substitute_y_shift, swap_axes, vanishing_order_origin)
from algebra.realroots import max_real_zero_order, rational_roots, squarefree_decomposition
from errors import (CriticalPointViolation, GenericityNotFound, IrrationalShiftRequired, OneSidedShiftRequired,
                    StepBudgetExhausted)
from geometry.newton import INTERIOR_OF_EDGE, bisectrix_locus, edge_polynomial, newton_distance, newton_polygon

logger = logging.getLogger(__name__)

Y_SHIFT = "YShift"
AXIS_SWAP = "AxisSwap"
LINEAR_PRE = "LinearPre"


@dataclass(frozen=True)
class AdaptStep:
    kind: str
    coeff: Fraction = None
    weight: Fraction = None
    transform: LinearMap2 = None

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == Y_SHIFT:
            out["shift"] = {"c": rational_str(self.coeff), "m": rational_str(self.weight)}
        elif self.transform is not None:
            out["map"] = self.transform.to_dict()
        return out


@dataclass(frozen=True)
class NonAdaptedWitness:
    edge: object
    side: int
    order: int
    d: Fraction
    root: object

    def to_dict(self):
        return {"edge": self.edge.to_dict(), "side": "x>0" if self.side > 0 else "x<0",
                "order": self.order, "d": rational_str(self.d), "root": self.root.to_dict()}


@dataclass(frozen=True)
class AdaptationResult:
    source: Polynomial
    T: LinearMap2
    psi: PsiSeries
    F: Polynomial
    steps: tuple
    adapted: bool
    generic_adapted: bool

    @property
    def psi_order(self):
        return self.psi.order

    def replay(self):
        """Re-apply the logged steps to the source polynomial."""
        current = self.source
        for step in self.steps:
            if step.kind == Y_SHIFT:
                current = substitute_y_shift(current, PsiSeries(((step.coeff, step.weight),)))
            else:
                current = substitute_linear(current, step.transform)
        return current

    def to_dict(self):
        return {
            "T": self.T.to_dict(),
            "psi": self.psi.to_dict(),
            "psiOrder": rational_str(self.psi_order) if self.psi_order is not None else "inf",
            "F": self.F.to_json(),
            "steps": [s.to_dict() for s in self.steps],
            "adapted": self.adapted,
            "genericAdapted": self.generic_adapted,
        }


@dataclass(frozen=True)
class HeightValue:
    h: Fraction
    d_of_adapted_form: Fraction

    @property
    def d_star(self):
        return max(Fraction(2), self.h)

    def to_dict(self):
        return {"h": rational_str(self.h), "dOfAdaptedForm": rational_str(self.d_of_adapted_form),
                "dStar": rational_str(self.d_star)}


def check_critical_point(p):
    for ax, by in p.support():
        if ax + by <= 1:
            raise CriticalPointViolation(
                f"term x^{ax} y^{by} means the origin is not a critical point with value 0")


def _sides(pe):
    return (1, -1) if pe.is_integer() else (1,)


def is_adapted(p):
    """(adapted, witness) following the zero-order test on the bisectrix-crossing edge."""
    check_critical_point(p)
    locus = bisectrix_locus(newton_polygon(p))
    if locus.kind != INTERIOR_OF_EDGE:
        return True, None
    e, d = locus.edge, locus.point
    pe = edge_polynomial(p, e)
    for side in _sides(pe):
        order, root = max_real_zero_order(restrict_x(pe, side))
        if order > d:
            return False, NonAdaptedWitness(e, side, order, d, root)
    return True, None


def is_generic_adapted(p):
    adapted, _ = is_adapted(p)
    np_ = newton_polygon(p)
    return adapted and np_.vertices[0][0] == 0 and all(e.slope >= -1 for e in np_.edges)


def _shift_root(pe, d, weight):
    """A rational zero of high multiplicity of R_e(1, y), mapped from the x<0 side if needed."""
    for side in _sides(pe):
        u = restrict_x(pe, side)
        for q, m in sorted(squarefree_decomposition(u), key=lambda part: -part[1]):
            if m <= d:
                continue
            roots = [r for r in rational_roots(q) if r != 0]
            if roots:
                root = roots[0]
                if side > 0:
                    return root
                if weight.denominator != 1:
                    raise OneSidedShiftRequired(
                        f"high-order zero {root} of R_e(-1, y) with fractional weight {weight}")
                return root * (-1) ** int(weight)
            _, witness = max_real_zero_order(q)
            if witness is not None:
                raise IrrationalShiftRequired(
                    "the high-multiplicity zero of the edge polynomial is irrational",
                    interval=(witness.lo, witness.hi))
    return None


def adapt(p, max_steps=None, pre=None):
    """Shift y -> y + c x^M until the bisectrix no longer meets a degenerate edge.

    F = (p o T)(x, y + psi(x)) holds for the returned T and psi.
    """
    max_steps = max_steps or config.MAX_STEPS
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    check_critical_point(p)
    T = LinearMap2.identity()
    steps = []
    current = p
    if pre is not None and not pre.is_identity():
        T = pre
        current = substitute_linear(p, pre)
        steps.append(AdaptStep(LINEAR_PRE, transform=pre))
    psi = PsiSeries()
    for step in count():
        adapted, witness = is_adapted(current)
        if adapted:
            break
        if step >= max_steps:
            raise StepBudgetExhausted(f"not adapted after {max_steps} steps")
        e = witness.edge
        if e.slope < -1:
            if psi.terms:
                raise StepBudgetExhausted("an axis swap was requested after a shift")
            current = swap_axes(current)
            T = T.compose(LinearMap2.swap())
            steps.append(AdaptStep(AXIS_SWAP, transform=LinearMap2.swap()))
            logger.info("step %d: swapped axes (edge slope %s)", step, e.slope)
            continue
        weight = e.weight
        c = _shift_root(edge_polynomial(current, e), witness.d, weight)
        if c is None:
            raise StepBudgetExhausted("no shift root found for a non-adapted edge")
        current = substitute_y_shift(current, PsiSeries(((c, weight),)))
        psi = psi.appended(c, weight)
        steps.append(AdaptStep(Y_SHIFT, coeff=c, weight=weight))
        logger.info("step %d: y -> y + (%s) x^%s", step, c, weight)
    return AdaptationResult(source=p, T=T, psi=psi, F=current, steps=tuple(steps), adapted=True,
                            generic_adapted=is_generic_adapted(current))


def generic_trials():
    """Deterministic candidate maps: identity, then shears and rotations with t = 1, -1, 2, -2, ..."""
    yield LinearMap2.identity()
    for n in count(1):
        for t in (n, -n):
            yield LinearMap2(1, t, 0, 1)
            yield LinearMap2(1, 0, t, 1)
            yield LinearMap2(1, t, -t, 1)


def generic_transforms(p, budget=None):
    """All (T, p o T) along the trial sequence passing the pure-derivative test."""
    budget = budget or config.GENERICIZE_BUDGET
    a = vanishing_order_origin(p)
    for i, T in enumerate(generic_trials()):
        if i >= budget:
            return
        q = substitute_linear(p, T)
        if q.coefficient(a, 0) != 0 and q.coefficient(0, a) != 0:
            yield T, q


def genericize(p, budget=None):
    budget = budget or config.GENERICIZE_BUDGET
    for T, q in generic_transforms(p, budget):
        return T, q
    raise GenericityNotFound(f"no generic linear map among {budget} trials")


def height(p, generic=False, max_steps=None):
    if generic:
        T, _ = genericize(p)
        ar = adapt(p, max_steps, pre=T)
    else:
        ar = adapt(p, max_steps)
    d = newton_distance(newton_polygon(ar.F))
    return HeightValue(d, d)
