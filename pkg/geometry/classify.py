import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import islice

import config
from algebra.poly import differentiate, hessian_determinant, rational_str, restrict_x
from algebra.realroots import max_real_zero_order
from errors import AnalysisError, NotGenericAdapted
from geometry.adapt import HeightValue, adapt, generic_transforms, genericize, is_generic_adapted
from geometry.newton import (INTERIOR_OF_EDGE, bisectrix_locus, edge_polynomial, is_mixed_homogeneous,
                            newton_distance, newton_polygon)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExceptionalWitnessB:
    edge: object
    side: int
    zero_order: int
    psi_order: Fraction
    threshold: Fraction

    @property
    def slope_bound(self):
        return 1 / self.psi_order

    def to_dict(self):
        return {"edge": self.edge.to_dict(), "side": "x>0" if self.side > 0 else "x<0",
                "zeroOrder": self.zero_order, "psiOrder": rational_str(self.psi_order),
                "threshold": rational_str(self.threshold), "slopeBound": rational_str(self.slope_bound)}


@dataclass(frozen=True)
class ClassificationReport:
    height: object
    exceptional_a: bool
    exceptional_b: bool
    witness_b: ExceptionalWitnessB
    sampled_transforms: int
    skipped_transforms: int
    mixed_homogeneous: bool
    direct_height: Fraction
    adaptation: object
    generic_transform: object = None

    @property
    def p_critical(self):
        return max(self.height.h, Fraction(2))

    def to_dict(self):
        return {
            "height": self.height.to_dict(),
            "pCritical": rational_str(self.p_critical),
            "exceptionalA": self.exceptional_a,
            "exceptionalB": self.exceptional_b,
            "witnessB": self.witness_b.to_dict() if self.witness_b else None,
            "sampledTransforms": self.sampled_transforms,
            "skippedTransforms": self.skipped_transforms,
            "mixedHomogeneous": self.mixed_homogeneous,
            "directHeight": rational_str(self.direct_height) if self.direct_height is not None else None,
            "adaptation": self.adaptation.to_dict(),
            "genericTransform": self.generic_transform.to_dict() if self.generic_transform is not None else None,
        }


def exceptional_a(p):
    """Hessian determinant vanishing to infinite order, i.e. identically zero."""
    return hessian_determinant(p).is_zero()


def _sides(pe):
    return (1, -1) if pe.is_integer() else (1,)


def exceptional_b(ar):
    if not ar.generic_adapted:
        raise NotGenericAdapted("condition b) is stated for generic adapted coordinates")
    F = ar.F
    locus = bisectrix_locus(newton_polygon(F))
    b = ar.psi_order
    if locus.kind != INTERIOR_OF_EDGE or b is None:
        return False, None
    e = locus.edge
    if abs(e.slope) >= 1 / b:
        return False, None
    threshold = max(Fraction(1), locus.point - 1)
    pe = edge_polynomial(F, e)
    orders = []
    for side in _sides(pe):
        order, _ = max_real_zero_order(restrict_x(differentiate(pe, "y"), side),
                                       exclude=restrict_x(pe, side))
        orders.append((side, order))
    if len(orders) == 2 and (orders[0][1] > threshold) != (orders[1][1] > threshold):
        logger.warning("sides disagree on condition b): %s", orders)
    for side, order in orders:
        if order > threshold:
            return True, ExceptionalWitnessB(e, side, order, b, threshold)
    return False, None


def _sample_flag(job):
    p, T, max_steps = job
    try:
        ar = adapt(p, max_steps, pre=T)
        return exceptional_b(ar)[0]
    except AnalysisError as err:
        logger.info("transform %s skipped: %s", T, err.message)
        return None


def classify(p, transform_samples=None, workers=None, max_steps=None):
    transform_samples = config.TRANSFORM_SAMPLES if transform_samples is None else transform_samples
    workers = workers or config.WORKERS
    T, _ = genericize(p)
    trials = islice(generic_transforms(p), 1, None)
    ar = adapt(p, max_steps, pre=T)
    h = newton_distance(newton_polygon(ar.F))
    flag, witness = exceptional_b(ar)
    sampled, skipped = 1, 0
    if flag and transform_samples > 0:
        jobs = [(p, S, max_steps) for S, _ in islice(trials, transform_samples)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                flags = list(pool.map(_sample_flag, jobs))
        else:
            flags = [_sample_flag(job) for job in jobs]
        # fixed trial order
        for f in flags:
            if f is None:
                skipped += 1
                continue
            sampled += 1
            if not f:
                flag, witness = False, None
                break
    try:
        direct = newton_distance(newton_polygon(adapt(p, max_steps).F))
    except AnalysisError as err:
        logger.info("direct adaptation unavailable: %s", err.message)
        direct = None
    if direct is not None and direct != h:
        logger.warning("direct and generic adaptation heights differ: %s vs %s", direct, h)
    return ClassificationReport(
        height=HeightValue(h, h),
        exceptional_a=exceptional_a(p),
        exceptional_b=flag,
        witness_b=witness,
        sampled_transforms=sampled,
        skipped_transforms=skipped,
        mixed_homogeneous=is_mixed_homogeneous(p),
        direct_height=direct,
        adaptation=ar,
        generic_transform=T,
    )


def lemma21_check(F):
    """Edges on or above the bisectrix whose derivative zero structure breaks the slope -1 rule."""
    if not is_generic_adapted(F):
        raise NotGenericAdapted("F must be in generic adapted coordinates")
    np_ = newton_polygon(F)
    d_star = max(Fraction(2), bisectrix_locus(np_).point)
    violations = []
    for e in np_.edges:
        if e.lower[1] < e.lower[0]:
            continue
        pe = edge_polynomial(F, e)
        order, _ = max_real_zero_order(restrict_x(differentiate(pe, "y"), 1),
                                       exclude=restrict_x(pe, 1), exclude_zero=True)
        if order > d_star - 1 and not (e.slope == -1 and e.upper[0] == 0):
            violations.append(e)
    return violations
