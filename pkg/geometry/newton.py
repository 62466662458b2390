"""Newton polygon, Newton distance, edge polynomials and the vertex majorant F*."""
import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pandas as pd

from algebra.poly import Polynomial, rational_str
from errors import EdgeNotOfPolygon, ZeroPolynomial

logger = logging.getLogger(__name__)

AT_VERTEX = "AtVertex"
INTERIOR_OF_EDGE = "InteriorOfEdge"
ON_VERTICAL_RAY = "OnVerticalRay"
ON_HORIZONTAL_RAY = "OnHorizontalRay"


def _point_str(v):
    return [rational_str(v[0]), rational_str(v[1])]


@dataclass(frozen=True)
class CompactEdge:
    upper: tuple  # smaller t1, larger t2
    lower: tuple

    @property
    def slope(self):
        return (self.lower[1] - self.upper[1]) / (self.lower[0] - self.upper[0])

    @property
    def weight(self):
        """M with the edge on the line t1 + M t2 = alpha."""
        return -1 / self.slope

    @property
    def alpha(self):
        return self.upper[0] + self.weight * self.upper[1]

    def to_dict(self):
        return {"upper": _point_str(self.upper), "lower": _point_str(self.lower),
                "slope": rational_str(self.slope), "weight": rational_str(self.weight),
                "level": rational_str(self.alpha)}


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple
    edges: tuple

    @property
    def vertical_ray(self):
        """Foot of the unbounded ray going up from the first vertex."""
        return self.vertices[0]

    @property
    def horizontal_ray(self):
        """Foot of the unbounded ray going right from the last vertex."""
        return self.vertices[-1]

    def to_dict(self):
        return {"vertices": [_point_str(v) for v in self.vertices],
                "edges": [e.to_dict() for e in self.edges],
                "rays": {"vertical": _point_str(self.vertical_ray),
                         "horizontal": _point_str(self.horizontal_ray)}}


@dataclass(frozen=True)
class BisectrixLocus:
    kind: str
    point: Fraction
    vertex: tuple = None
    edge: CompactEdge = None

    def to_dict(self):
        out = {"kind": self.kind, "d": rational_str(self.point)}
        if self.vertex is not None:
            out["vertex"] = _point_str(self.vertex)
        if self.edge is not None:
            out["edge"] = self.edge.to_dict()
        return out


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(p):
    """Boundary of the convex hull of supp(p) + the closed positive quadrant."""
    if p.is_zero():
        raise ZeroPolynomial("the zero polynomial has no Newton polygon")
    lowest = {}
    for ax, by in p.support():
        t2 = Fraction(by)
        if ax not in lowest or t2 < lowest[ax]:
            lowest[ax] = t2
    points = sorted(lowest.items())
    # the chain ends at the lowest point, leftmost among equals
    min_t2 = min(t2 for _, t2 in points)
    end_t1 = min(t1 for t1, t2 in points if t2 == min_t2)
    points = [pt for pt in points if pt[0] <= end_t1]
    chain = []
    for pt in points:
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], pt) <= 0:
            chain.pop()
        chain.append(pt)
    vertices = tuple(chain)
    edges = tuple(CompactEdge(a, b) for a, b in zip(vertices, vertices[1:]))
    return NewtonPolygon(vertices, edges)


def bisectrix_locus(np_):
    """Where the line t1 = t2 meets the polygon boundary.

    Single-vertex polygons always report AtVertex, even when the meeting point lies on one of
    the unbounded rays.
    """
    vertices = np_.vertices
    if len(vertices) == 1:
        v = vertices[0]
        return BisectrixLocus(AT_VERTEX, max(v), vertex=v)
    for v in vertices:
        if v[0] == v[1]:
            return BisectrixLocus(AT_VERTEX, v[0], vertex=v)
    for e in np_.edges:
        t = e.alpha / (1 + e.weight)
        if e.upper[0] < t < e.lower[0]:
            return BisectrixLocus(INTERIOR_OF_EDGE, t, edge=e)
    first, last = vertices[0], vertices[-1]
    if first[0] > first[1]:
        return BisectrixLocus(ON_VERTICAL_RAY, first[0], vertex=first)
    return BisectrixLocus(ON_HORIZONTAL_RAY, last[1], vertex=last)


def newton_distance(np_):
    return bisectrix_locus(np_).point


def edge_polynomial(p, e):
    """Sum of the terms of p lying on the compact edge e."""
    if e not in newton_polygon(p).edges:
        raise EdgeNotOfPolygon(f"edge {e.upper}-{e.lower} is not an edge of N(p)")
    return Polynomial({(ax, by): c for (ax, by), c in p.items() if ax + e.weight * by == e.alpha})


def edges_containing(np_, vertex):
    return [e for e in np_.edges if vertex in (e.upper, e.lower)]


def is_mixed_homogeneous(p):
    """True when every exponent of p lies on one compact edge of its polygon."""
    np_ = newton_polygon(p)
    if len(np_.edges) != 1:
        return False
    e = np_.edges[0]
    return all(ax + e.weight * by == e.alpha for ax, by in p.support())


class FStar:
    """F*(x, y) = (sum over vertices of (x^v1 y^v2)^2)^(1/2)."""

    def __init__(self, vertices):
        self.vertices = tuple(vertices)
        self.squared = Polynomial({(2 * v[0], int(2 * v[1])): 1 for v in self.vertices})

    def evaluate_array(self, xs, ys):
        ax, ay = np.abs(np.asarray(xs, dtype=float)), np.abs(np.asarray(ys, dtype=float))
        total = np.zeros(np.broadcast(ax, ay).shape)
        for v1, v2 in self.vertices:
            total = total + (np.power(ax, float(v1)) * np.power(ay, float(v2))) ** 2
        return np.sqrt(total)

    def to_dict(self):
        return {"vertices": [_point_str(v) for v in self.vertices]}


def fstar(np_):
    return FStar(np_.vertices)


def polygon_frame(np_):
    """Vertices as a two-column frame for CSV export."""
    return pd.DataFrame({"t1": [float(v[0]) for v in np_.vertices],
                         "t2": [float(v[1]) for v in np_.vertices]})
