from fractions import Fraction

from hypothesis import strategies as st

from algebra.poly import Polynomial

small_ints = st.integers(min_value=-5, max_value=5).filter(lambda v: v != 0)


@st.composite
def sparse_polynomials(draw, max_degree=12, max_terms=10, min_order=2):
    """Random integer-coefficient polynomials vanishing to order >= min_order at the origin."""
    n = draw(st.integers(min_value=1, max_value=max_terms))
    terms = {}
    for _ in range(n):
        ax = draw(st.integers(min_value=0, max_value=max_degree))
        by = draw(st.integers(min_value=0, max_value=max_degree - ax))
        if ax + by < min_order:
            by = min_order - ax
        terms[(Fraction(ax), by)] = Fraction(draw(small_ints))
    return Polynomial(terms)


rationals = st.builds(Fraction, st.integers(min_value=-6, max_value=6),
                      st.integers(min_value=1, max_value=4)).filter(lambda q: q != 0)
