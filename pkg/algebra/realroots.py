"""Exact real-root machinery for univariate rational polynomials.

Root counting, isolation, refinement and squarefree splitting are delegated to
``sympy.Poly`` over QQ. ``UniPoly`` keeps the ``Fraction`` view the geometry code
works with and converts at the boundary.
"""
import logging
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np
import sympy
from sympy import QQ, Poly

from errors import EndpointIsRoot, ZeroPolynomial

logger = logging.getLogger(__name__)

Y = sympy.Symbol("y")


def _to_qq(c):
    c = Fraction(c)
    return sympy.Rational(c.numerator, c.denominator)


def _to_fraction(c):
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


class UniPoly:
    """Univariate polynomial in y over QQ; ``coeffs`` are ascending ``Fraction``s."""

    __slots__ = ("poly", "coeffs")

    def __init__(self, coeffs=(), poly=None):
        if poly is None:
            poly = Poly([_to_qq(c) for c in reversed(list(coeffs))] or [0], Y, domain=QQ)
        self.poly = poly
        coeffs = [] if poly.is_zero else [_to_fraction(c) for c in reversed(poly.all_coeffs())]
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_roots(cls, roots):
        out = Poly(1, Y, domain=QQ)
        for r in roots:
            out = out * Poly(Y - _to_qq(r), Y, domain=QQ)
        return cls(poly=out)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self):
        return not self.coeffs

    def __call__(self, t):
        if isinstance(t, (int, Fraction)):
            return _to_fraction(self.poly.eval(_to_qq(t)))
        return np.polyval([float(c) for c in reversed(self.coeffs)] or [0.0], t)

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __neg__(self):
        return UniPoly(poly=-self.poly)

    def __add__(self, other):
        return UniPoly(poly=self.poly + other.poly)

    def __sub__(self, other):
        return UniPoly(poly=self.poly - other.poly)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly(poly=self.poly * _to_qq(other))
        return UniPoly(poly=self.poly * other.poly)

    __rmul__ = __mul__

    def derivative(self, order=1):
        out = self.poly
        for _ in range(order):
            out = out.diff(Y)
        return UniPoly(poly=out)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        q, r = self.poly.div(other.poly)
        return UniPoly(poly=q), UniPoly(poly=r)

    def monic(self):
        return self if self.is_zero() else UniPoly(poly=self.poly.monic())

    def gcd(self, other):
        return UniPoly(poly=self.poly.gcd(other.poly)).monic()

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q


@dataclass(frozen=True)
class RootWitness:
    """Open interval (lo, hi) holding exactly one real root, and that root's multiplicity."""

    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def to_dict(self):
        return {"lo": str(self.lo), "hi": str(self.hi), "multiplicity": self.multiplicity}


def squarefree_decomposition(u):
    """[(q_i, m_i)] with u = lc * prod q_i^m_i, q_i monic squarefree coprime, m_i ascending."""
    if u.is_zero():
        raise ZeroPolynomial("the zero polynomial has no squarefree decomposition")
    if u.degree < 1:
        return []
    _, parts = u.poly.sqf_list()
    return sorted(((UniPoly(poly=q.monic()), m) for q, m in parts), key=lambda part: part[1])


def sturm_sequence(u):
    return [UniPoly(poly=p) for p in sympy.sturm(u.poly)]


def count_real_roots(u, lo=None, hi=None):
    """Distinct real roots of squarefree u in (lo, hi); None stands for -inf / +inf."""
    if u.degree < 1:
        return 0
    for end in (lo, hi):
        if end is not None and u(Fraction(end)) == 0:
            raise EndpointIsRoot(f"endpoint {end} is a root")
    inf = None if lo is None else _to_qq(lo)
    sup = None if hi is None else _to_qq(hi)
    return int(u.poly.count_roots(inf, sup))


def _open(intervals, u):
    """Widen degenerate (r, r) intervals to open ones that still isolate r."""
    out = []
    for i, (a, b) in enumerate(intervals):
        if a != b:
            out.append(RootWitness(a, b))
            continue
        eps = Fraction(1)
        if i > 0:
            eps = min(eps, (a - intervals[i - 1][1]) / 2)
        if i + 1 < len(intervals):
            eps = min(eps, (intervals[i + 1][0] - b) / 2)
        while u(a - eps) == 0 or u(a + eps) == 0:
            eps /= 2
        out.append(RootWitness(a - eps, a + eps))
    return out


def isolate_real_roots(u):
    """Sorted disjoint isolating intervals, one per distinct real root of squarefree u."""
    if u.degree < 1:
        return []
    found = sorted((_to_fraction(a), _to_fraction(b)) for (a, b), _ in u.poly.intervals())
    return _open(found, u)


def refine(u, witness, width):
    """Shrink an isolating interval of squarefree u below the given width."""
    width = Fraction(width)
    if witness.hi - witness.lo <= width:
        return witness
    a, b = u.poly.refine_root(_to_qq(witness.lo), _to_qq(witness.hi), eps=_to_qq(width))
    a, b = _to_fraction(a), _to_fraction(b)
    if a == b:
        eps = min(width / 4, (witness.hi - witness.lo) / 4)
        return replace(witness, lo=a - eps, hi=a + eps)
    return replace(witness, lo=a, hi=b)


def rational_roots(u):
    """All distinct rational roots of u, sorted."""
    if u.degree < 1:
        return []
    return sorted(_to_fraction(r) for r in set(u.poly.ground_roots()))


def max_real_zero_order(u, exclude=None, exclude_zero=False):
    """Highest multiplicity of a real zero of u, skipping common zeros with `exclude`
    and, when asked, the zero at 0. Returns (order, RootWitness | None)."""
    if u.is_zero():
        raise ZeroPolynomial("the zero polynomial has zeros of every order")
    best = (0, None)
    for q, m in squarefree_decomposition(u):
        if m <= best[0]:
            continue
        reduced = q
        if exclude is not None and not exclude.is_zero():
            g = q.gcd(exclude)
            if g.degree > 0:
                reduced = reduced.exact_div(g)
        if exclude_zero and reduced.degree >= 1 and reduced(Fraction(0)) == 0:
            reduced = reduced.exact_div(UniPoly([0, 1]))
        witnesses = isolate_real_roots(reduced)
        if witnesses:
            best = (m, replace(witnesses[0], multiplicity=m))
    return best
