from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from algebra.parsing import parse
from algebra.poly import LinearMap2, Polynomial, PsiSeries, substitute_linear, substitute_y_shift
from errors import CriticalPointViolation, StepBudgetExhausted
from geometry.adapt import (AXIS_SWAP, LINEAR_PRE, Y_SHIFT, adapt, generic_trials, genericize, height, is_adapted,
                            is_generic_adapted)
from geometry.newton import newton_distance, newton_polygon

x, y = Polynomial.x(), Polynomial.y()


@pytest.mark.parametrize("a, k, m", [(2, 2, 5), (2, 3, 7), (3, 2, 7), (2, 4, 9)])
def test_height_of_shifted_family(a, k, m):
    p = (y - x ** a) ** k + x ** m
    assert height(p).h == Fraction(k * m, k + m)


@pytest.mark.parametrize("text, h", [
    ("(y - x^2)^2", 2),
    ("x^2 + y^2", 1),
    ("y^2 + x^4", Fraction(4, 3)),
    ("x*y", 1),
    ("y^3 + x^7", Fraction(21, 10)),
])
def test_height_closed_forms(text, h):
    assert height(parse(text)).h == h
    assert height(parse(text), generic=True).h == h


def test_shift_sequence_and_replay():
    p = parse("(y - x^2 - x^3)^2 + x^9")
    ar = adapt(p)
    assert ar.psi == PsiSeries(((Fraction(1), Fraction(2)), (Fraction(1), Fraction(3))))
    assert [s.kind for s in ar.steps] == [Y_SHIFT, Y_SHIFT]
    assert ar.F == y ** 2 + x ** 9
    assert ar.replay() == ar.F
    assert substitute_y_shift(p, ar.psi) == ar.F
    assert ar.psi_order == 2


def test_step_budget():
    with pytest.raises(StepBudgetExhausted):
        adapt(parse("(y - x^2 - x^3)^2 + x^9"), max_steps=1)


def test_steep_edge_swaps_axes_first():
    p = parse("(x - y^2)^2 + y^5")
    ar = adapt(p)
    assert ar.T == LinearMap2.swap()
    assert [s.kind for s in ar.steps] == [AXIS_SWAP, Y_SHIFT]
    assert ar.F == y ** 2 + x ** 5
    assert substitute_y_shift(substitute_linear(p, ar.T), ar.psi) == ar.F


def test_linear_pre_step_is_logged():
    p = parse("(y - x^2)^2")
    T = LinearMap2(1, 0, 1, 1)
    ar = adapt(p, pre=T)
    assert ar.steps[0].kind == LINEAR_PRE
    assert ar.T == T
    assert ar.F == y ** 2
    assert ar.replay() == ar.F


@pytest.mark.parametrize("text", ["x + y^2", "1 + x^2", "x*y + y"])
def test_critical_point_required(text):
    with pytest.raises(CriticalPointViolation):
        adapt(parse(text))


def test_adaptedness():
    assert is_adapted(parse("y^2 + x^4"))[0]
    adapted, witness = is_adapted(parse("(y - x^2)^2"))
    assert not adapted
    assert witness.order == 2 and witness.d == Fraction(4, 3)
    assert is_generic_adapted(parse("y^2 + x^4"))
    assert not is_generic_adapted(parse("x^2 + y^4"))


def test_trial_sequence_prefix():
    trials = generic_trials()
    assert [next(trials) for _ in range(4)] == [LinearMap2(1, 0, 0, 1), LinearMap2(1, 1, 0, 1),
                                                LinearMap2(1, 0, 1, 1), LinearMap2(1, 1, -1, 1)]


def test_genericize_skips_degenerate_maps():
    T, q = genericize(parse("(y - x^2)^2"))
    assert T == LinearMap2(1, 0, 1, 1)
    assert q.coefficient(2, 0) != 0 and q.coefficient(0, 2) != 0


@given(st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=3),
       st.integers(min_value=-3, max_value=3).filter(lambda c: c != 0))
def test_adapted_form_has_no_degenerate_edge(k, a, c):
    m = a * k + 1 + a
    p = (y - c * x ** a) ** k + x ** m
    ar = adapt(p)
    assert is_adapted(ar.F)[0]
    assert ar.replay() == ar.F
    assert newton_distance(newton_polygon(ar.F)) == height(p).h


@given(st.integers(min_value=2, max_value=4), st.integers(min_value=1, max_value=3),
       st.integers(min_value=-3, max_value=3).filter(lambda c: c != 0),
       st.sampled_from([LinearMap2(1, 0, 0, 1), LinearMap2(2, 0, 1, 1), LinearMap2(1, 0, Fraction(-1, 2), 3),
                        LinearMap2(0, 1, 1, 0)]),
       st.fractions(min_value=-3, max_value=3, max_denominator=4), st.integers(min_value=1, max_value=4))
def test_height_survives_linear_maps_and_rational_shifts(k, a, c, T, r, j):
    m = a * k + 1 + a
    p = (y - c * x ** a) ** k + x ** m
    moved = substitute_linear(p, T)
    if r:
        moved = substitute_y_shift(moved, PsiSeries(((r, Fraction(j)),)))
    assert height(moved).h == height(p).h == Fraction(k * m, k + m)
