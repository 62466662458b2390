from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from algebra.realroots import (UniPoly, count_real_roots, isolate_real_roots, max_real_zero_order, rational_roots,
                               refine, squarefree_decomposition, sturm_sequence)
from errors import EndpointIsRoot, ZeroPolynomial

t = UniPoly([0, 1])


def test_squarefree_decomposition_splits_multiplicities():
    u = UniPoly.from_roots([1, 1, -2])
    assert squarefree_decomposition(u) == [(UniPoly([2, 1]), 1), (UniPoly([-1, 1]), 2)]


def test_squarefree_decomposition_keeps_irreducible_factors():
    u = UniPoly([1, 0, 1]) * UniPoly([1, 0, 1]) * UniPoly.from_roots([3])
    parts = dict((m, q) for q, m in squarefree_decomposition(u))
    assert parts[2] == UniPoly([1, 0, 1])
    assert parts[1] == UniPoly([-3, 1])


def test_sturm_counts():
    u = UniPoly([-2, 0, 1])
    assert count_real_roots(u) == 2
    assert count_real_roots(u, 0, 2) == 1
    assert count_real_roots(u, -1, 1) == 0
    assert len(sturm_sequence(u)) == 3


def test_endpoint_root_is_an_error():
    with pytest.raises(EndpointIsRoot):
        count_real_roots(UniPoly([-1, 1]), 1, 2)


def test_isolation_separates_roots():
    u = UniPoly.from_roots([-1, 0, 1])
    ws = isolate_real_roots(u)
    assert len(ws) == 3
    for w, r in zip(ws, (-1, 0, 1)):
        assert w.lo < r < w.hi
    assert all(a.hi <= b.lo for a, b in zip(ws, ws[1:]))


def test_refine_shrinks_to_width():
    u = UniPoly([-2, 0, 1])
    w = refine(u, isolate_real_roots(u)[1], Fraction(1, 10 ** 6))
    assert w.hi - w.lo <= Fraction(1, 10 ** 6)
    assert w.lo ** 2 < 2 < w.hi ** 2


def test_isolation_widens_exact_rational_roots():
    u = UniPoly.from_roots([Fraction(1, 3), Fraction(1, 2)])
    ws = isolate_real_roots(u)
    assert [w.lo < r < w.hi for w, r in zip(ws, (Fraction(1, 3), Fraction(1, 2)))] == [True, True]
    assert ws[0].hi <= ws[1].lo
    assert all(u(w.lo) != 0 and u(w.hi) != 0 for w in ws)


@pytest.mark.parametrize("u, roots", [
    (UniPoly([1, -5, 6]), [Fraction(1, 3), Fraction(1, 2)]),
    (UniPoly([-2, 0, 1]), []),
    (UniPoly.from_roots([0, 0, Fraction(-3, 2)]), [Fraction(-3, 2), 0]),
    (UniPoly([1, 0, 1]), []),
])
def test_rational_roots(u, roots):
    assert rational_roots(u) == roots


@given(st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=6), min_size=1, max_size=5))
def test_rational_roots_recovers_every_root(roots):
    u = UniPoly.from_roots(roots)
    assert rational_roots(u) == sorted(set(roots))


def test_max_real_zero_order():
    u = UniPoly.from_roots([1, 1, 1]) * UniPoly([1, 0, 1])
    order, w = max_real_zero_order(u)
    assert order == 3
    assert w.lo < 1 < w.hi


def test_max_real_zero_order_ignores_complex_multiplicity():
    u = UniPoly([1, 0, 1]) * UniPoly([1, 0, 1]) * UniPoly.from_roots([2])
    assert max_real_zero_order(u)[0] == 1


def test_max_real_zero_order_exclusions():
    u = UniPoly.from_roots([1, 1, 1, 0, 0])
    assert max_real_zero_order(u, exclude=UniPoly.from_roots([1]))[0] == 2
    assert max_real_zero_order(u, exclude=UniPoly.from_roots([1]), exclude_zero=True)[0] == 0
    assert max_real_zero_order(UniPoly([5]))[0] == 0


def test_max_real_zero_order_reports_multiplicity():
    order, w = max_real_zero_order(UniPoly.from_roots([Fraction(1, 2)] * 4) * UniPoly.from_roots([3]))
    assert order == 4
    assert w.multiplicity == 4
    assert w.to_dict()["multiplicity"] == 4


def test_derivative_of_cube_plus_one_keeps_double_zero():
    u = UniPoly([1, 0, 0, 1])
    order, w = max_real_zero_order(u.derivative(), exclude=u)
    assert order == 2
    assert w.lo < 0 < w.hi


@pytest.mark.parametrize("call", [squarefree_decomposition, max_real_zero_order])
def test_zero_polynomial_is_rejected(call):
    with pytest.raises(ZeroPolynomial):
        call(UniPoly())


def test_squarefree_decomposition_of_a_constant_is_empty():
    assert squarefree_decomposition(UniPoly([3])) == []


@given(st.lists(st.integers(min_value=-6, max_value=6), min_size=1, max_size=4),
       st.lists(st.integers(min_value=1, max_value=5), max_size=2))
def test_count_matches_sign_changes_on_a_fine_grid(linear_roots, quadratic_offsets):
    u = UniPoly.from_roots(sorted(set(linear_roots)))
    for c in quadratic_offsets:
        u = u * UniPoly([c, 0, 1])
    grid = [Fraction(k, 4) - Fraction(1, 8) for k in range(-40, 42)]
    values = [u(g) for g in grid]
    changes = sum(1 for a, b in zip(values, values[1:]) if (a > 0) != (b > 0))
    assert count_real_roots(u) == changes == len(set(linear_roots))


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=1, max_size=4))
def test_squarefree_parts_reconstruct_the_input(roots):
    u = UniPoly.from_roots(roots)
    out = UniPoly([1])
    for q, m in squarefree_decomposition(u):
        for _ in range(m):
            out = out * q
    assert out == u.monic()
