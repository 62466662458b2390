from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings

from algebra.parsing import parse
from geometry.newton import (AT_VERTEX, INTERIOR_OF_EDGE, ON_HORIZONTAL_RAY, ON_VERTICAL_RAY, CompactEdge,
                             bisectrix_locus, edge_polynomial, fstar, is_mixed_homogeneous, newton_distance,
                             newton_polygon, polygon_frame)
from errors import EdgeNotOfPolygon, ZeroPolynomial
from algebra.poly import Polynomial
from strategies import sparse_polynomials


def brute_force_distance(p):
    """min over the hull of max(t1, t2); optimal points use at most two exponents."""
    pts = [(Fraction(a), Fraction(b)) for a, b in p.support()]
    best = min(max(a, b) for a, b in pts)
    for (a1, b1), (a2, b2) in combinations(pts, 2):
        g1, g2 = a1 - b1, a2 - b2
        if g1 * g2 < 0:
            lam = g2 / (g2 - g1)
            best = min(best, lam * a1 + (1 - lam) * a2)
    return best


def on_or_above_boundary(np_, pt):
    """Every exponent lies on or above each edge line and right of / above the rays."""
    for e in np_.edges:
        if pt[0] + e.weight * pt[1] < e.alpha:
            return False
    first, last = np_.vertices[0], np_.vertices[-1]
    return pt[0] >= first[0] and pt[1] >= last[1]


@pytest.mark.parametrize("text, vertices, d", [
    ("y^2 + x^4", ((0, 2), (4, 0)), Fraction(4, 3)),
    ("x^2 + y^2", ((0, 2), (2, 0)), 1),
    ("x*y", ((1, 1),), 1),
    ("y^3 + x^2*y + x^5", ((0, 3), (2, 1), (5, 0)), Fraction(3, 2)),
    ("(y - x^2)^2", ((0, 2), (4, 0)), Fraction(4, 3)),
    ("y^3 + x^9", ((0, 3), (9, 0)), Fraction(9, 4)),
])
def test_polygon_and_distance(text, vertices, d):
    np_ = newton_polygon(parse(text))
    assert np_.vertices == tuple((Fraction(a), Fraction(b)) for a, b in vertices)
    assert newton_distance(np_) == d


@pytest.mark.parametrize("text, kind, d", [
    ("x^3*y^2", AT_VERTEX, 3),
    ("x^2*y^2 + x^5", AT_VERTEX, 2),
    ("y^2 + x^4", INTERIOR_OF_EDGE, Fraction(4, 3)),
    ("x^3*y + x^6", ON_VERTICAL_RAY, 3),
    ("x*y^3 + y^6", ON_HORIZONTAL_RAY, 3),
])
def test_bisectrix_locus(text, kind, d):
    locus = bisectrix_locus(newton_polygon(parse(text)))
    assert locus.kind == kind
    assert locus.point == d


@settings(max_examples=200)
@given(sparse_polynomials())
def test_distance_matches_brute_force(p):
    np_ = newton_polygon(p)
    assert newton_distance(np_) == brute_force_distance(p)
    assert all(on_or_above_boundary(np_, pt) for pt in p.support())
    assert set(np_.vertices) <= p.support()


def test_edge_polynomial():
    p = parse("(y - x^2)^2 + x^5 + x*y^3")
    e = newton_polygon(p).edges[0]
    assert edge_polynomial(p, e) == parse("(y - x^2)^2")
    with pytest.raises(EdgeNotOfPolygon):
        edge_polynomial(p, CompactEdge((Fraction(0), Fraction(3)), (Fraction(5), Fraction(0))))


def test_mixed_homogeneous():
    assert is_mixed_homogeneous(parse("y^3 + x^9"))
    assert is_mixed_homogeneous(parse("(y - x^2)^2"))
    assert not is_mixed_homogeneous(parse("(y - x^2)^2 + x^5"))


def test_zero_polynomial_has_no_polygon():
    with pytest.raises(ZeroPolynomial):
        newton_polygon(Polynomial())


def test_fstar_and_frame():
    np_ = newton_polygon(parse("y^2 + x^4"))
    F = fstar(np_)
    assert F.squared == parse("y^4 + x^8")
    assert float(F.evaluate_array(-0.5, 0.0)) == pytest.approx(0.0625)
    assert float(F.evaluate_array(0.0, -0.5)) == pytest.approx(0.25)
    frame = polygon_frame(np_)
    assert list(frame.columns) == ["t1", "t2"]
    assert np.allclose(frame["t1"], [0, 4])


def test_rays_and_edge_serialization():
    single = newton_polygon(parse("x^3*y^2"))
    assert single.edges == ()
    assert single.vertical_ray == single.horizontal_ray == (3, 2)
    out = newton_polygon(parse("y^3 + x^2*y + x^5")).to_dict()
    assert out["rays"] == {"vertical": ["0", "3"], "horizontal": ["5", "0"]}
    assert out["edges"][0] == {"upper": ["0", "3"], "lower": ["2", "1"], "slope": "-1", "weight": "1", "level": "3"}


@settings(max_examples=200)
@given(sparse_polynomials())
def test_diagonal_below_distance_is_outside(p):
    np_ = newton_polygon(p)
    d = newton_distance(np_)
    for t in (d / 2, d - Fraction(1, 100)):
        assert not on_or_above_boundary(np_, (t, t))
    assert on_or_above_boundary(np_, (d, d))


@given(sparse_polynomials())
def test_distance_doubles_for_squared_fstar(p):
    np_ = newton_polygon(p)
    assert newton_distance(newton_polygon(fstar(np_).squared)) == 2 * newton_distance(np_)
