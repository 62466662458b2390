import math
from fractions import Fraction

import numpy as np
import pytest

from algebra.parsing import parse
from algebra.poly import PsiSeries
from errors import ExceptionalInput, NotGenericAdapted, SearchBudgetExhausted
from geometry.adapt import adapt
from geometry.regions import PLAIN_FYY, BandRegion, SectorRegion, SideForm
from geometry.slivers import (DELTA_SEARCH, N0_SEARCH, bounds_hold, check_bounds, constant_search, coverage_check,
                              damping_value, decompose, locate)
from verification.comparability import GE, LE, PredictedBound, check_comparability
from verification.metrics import Verdict
from verification.sampling import CONSTRUCTION_STREAM, stream_seed

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("text", ["y^2 + x^4", "y^3 + x^2*y + x^5"])
def test_decomposition_covers_and_validates(text):
    dec = decompose(adapt(parse(text)), seed=3)
    assert coverage_check(dec, samples=10 ** 4, seed=11)
    assert {s.side for s in dec} == {1, -1}
    reports = check_bounds(dec, seed=5)
    assert reports
    assert all(r.verdict == Verdict.PASS for r in reports)
    assert min(r.margin for r in reports) >= 1.0


def test_bounds_are_checked_on_fresh_points():
    dec = decompose(adapt(parse("y^3 + x^2*y + x^5")), seed=3)
    fresh = [r.margin for r in check_bounds(dec, seed=3)]
    fit_seed = stream_seed(3, CONSTRUCTION_STREAM)
    fitted = [check_comparability(s.form, s.region, b, dec.radius, None, fit_seed, s.damping).margin
              for s in dec for b in s.bounds]
    assert len(fresh) == len(fitted)
    assert fresh != fitted
    assert min(fresh) >= 1.0


def test_vertex_sectors_come_first():
    dec = decompose(adapt(parse("y^2 + x^4")))
    kinds = [s.kind for s in dec]
    assert kinds == sorted(kinds, key="DEFG".index)
    assert kinds[0] == "D"


def test_decomposition_is_deterministic():
    ar = adapt(parse("y^3 + x^2*y + x^5"))
    assert decompose(ar, seed=9).to_dict() == decompose(ar, seed=9).to_dict()


def test_single_vertex_damping():
    dec = decompose(adapt(parse("(y - x^2)^2")))
    assert len(dec) == 2
    assert all(s.kind == "G" and s.damping.form == PLAIN_FYY for s in dec)
    values = damping_value(dec, np.array([0.05, -0.05]), np.array([0.01, 0.01]))
    assert values == pytest.approx([math.sqrt(2), math.sqrt(2)])


def test_locate_outside_radius():
    dec = decompose(adapt(parse("(y - x^2)^2")))
    far = np.array([10.0])
    assert locate(dec, far, far)[0] == -1
    assert locate(dec, far, far, math.inf)[0] >= 0


def test_exceptional_input_is_refused():
    with pytest.raises(ExceptionalInput):
        decompose(adapt(parse("(y + x^2)^3 + x^7")))


def test_needs_generic_coordinates():
    with pytest.raises(NotGenericAdapted):
        decompose(adapt(parse("x^2 + y^4")))


def _vertex_bounds(scale, a, b):
    return [PredictedBound("vertex", "dyF", GE, Fraction(scale, 2), a, b),
            PredictedBound("vertex", "dyF", LE, Fraction(2 * scale), a, b)]


def test_search_for_dominant_vertex():
    F = parse("y^2 + x^4")
    form = SideForm(1, F, PsiSeries(), F)
    n0, region, xs, ys = constant_search(N0_SEARCH, lambda n: SectorRegion(Fraction(2), None, n),
                                         bounds_hold(form, _vertex_bounds(1, 0, 2)))
    assert n0 == 2
    assert region.n0 == 2
    assert xs.size == ys.size > 0


def test_search_for_middle_vertex():
    F = parse("y^3 + x^2*y + x^5")
    form = SideForm(1, F, PsiSeries(), F)
    n0, region, _, _ = constant_search(N0_SEARCH, lambda n: SectorRegion(Fraction(3), Fraction(1), n),
                                       bounds_hold(form, _vertex_bounds(1, 2, 1)))
    assert n0 in (2, 4)


def test_search_on_empty_region():
    with pytest.raises(SearchBudgetExhausted):
        constant_search(N0_SEARCH, lambda n: SectorRegion(Fraction(1), Fraction(2), n), lambda xs, ys: True)


def test_halving_search():
    band = lambda dl: BandRegion(Fraction(2), Fraction(1), dl)
    delta, region, _, _ = constant_search(DELTA_SEARCH, band, lambda xs, ys: True)
    assert delta == Fraction(1, 2) and region.half_width == delta
    with pytest.raises(SearchBudgetExhausted):
        constant_search(DELTA_SEARCH, band, lambda xs, ys: False)
