"""Decomposition of a punctured neighbourhood into vertex sectors (D) and band slivers (E, F, G).

Vertex sectors surround the directions where one vertex monomial dominates; bands follow a compact
edge with weight M in the scaled coordinate Y = y / x^M and are cut into short intervals around the
real zeros of F_e(1, Y) and its derivative (E, G, and F when the first derivative does not vanish)
plus F slivers on the remaining stretches.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

import config
from algebra.poly import rational_str, reflect_x, restrict_x, substitute_y_shift
from algebra.realroots import UniPoly, count_real_roots, isolate_real_roots, refine, squarefree_decomposition
from errors import CoverageFailure, ExceptionalInput, NotGenericAdapted, SearchBudgetExhausted
from geometry.adapt import adapt
from geometry.newton import edge_polynomial, newton_distance, newton_polygon
from geometry.regions import (FSTAR_POWER, PLAIN_FYY, WEIGHTED_FYY, BandRegion, BoxRegion, DampingSpec, SectorRegion,
                              SideForm, dyadic)
from verification.comparability import GE, LE, PredictedBound, check_comparability, margin_of, ratios, region_samples
from verification.sampling import CONSTRUCTION_STREAM, VERIFICATION_STREAM, sobol_points, stream_seed

logger = logging.getLogger(__name__)

KIND_ORDER = {"D": 0, "E": 1, "F": 2, "G": 3}
GRID_1D = 513
N0_SEARCH = "N0"
DELTA_SEARCH = "delta"


class _RadiusTooLarge(Exception):
    pass


@dataclass(eq=False)
class Sliver:
    kind: str
    side: int
    index: int
    region: object
    form: SideForm = field(repr=False)
    damping: DampingSpec
    k: int = None
    edge: object = None
    vertex: tuple = None
    constants: dict = field(default_factory=dict)
    bounds: list = field(default_factory=list)

    @property
    def center(self):
        return getattr(self.region, "center", None)

    def sort_key(self):
        center = self.center if self.center is not None else Fraction(0)
        return KIND_ORDER[self.kind], -self.side, self.index, center

    def contains(self, xs, ys, radius):
        return self.region.contains(xs, ys, radius)

    def damping_value(self, xs, ys):
        return self.damping.evaluate(self.form, xs, ys)

    def to_dict(self):
        out = {
            "kind": self.kind,
            "side": "x>0" if self.side > 0 else "x<0",
            "index": self.index,
            "region": self.region.to_dict(),
            "damping": self.damping.to_dict(),
            "constants": {k: rational_str(v) for k, v in self.constants.items()},
            "bounds": [b.to_dict() for b in self.bounds],
        }
        if self.edge is not None:
            out["edge"] = self.edge.to_dict()
        if self.vertex is not None:
            out["vertex"] = [rational_str(self.vertex[0]), rational_str(self.vertex[1])]
        if self.center is not None:
            out["r"] = rational_str(self.region.center)
            out["delta"] = rational_str(self.region.half_width)
        if self.k is not None:
            out["k"] = self.k
        if "N0" in self.constants:
            out["N0"] = rational_str(self.constants["N0"])
        return out


@dataclass
class Decomposition:
    slivers: list
    forms: tuple
    radius: float
    d: Fraction
    d_star: Fraction

    def __iter__(self):
        return iter(self.slivers)

    def __len__(self):
        return len(self.slivers)

    def for_side(self, side):
        return [s for s in self.slivers if s.side == side]

    def form(self, side):
        return next(f for f in self.forms if f.side == side)

    def to_dict(self):
        return {"radius": self.radius, "d": rational_str(self.d), "dStar": rational_str(self.d_star),
                "slivers": [s.to_dict() for s in self.slivers]}


def side_forms(ar):
    """The adapted form on x > 0 and on x < 0, each written for x' = |x|."""
    G = substitute_y_shift(ar.F, ar.psi, sign=-1)
    plus = SideForm(1, ar.F, ar.psi, G)
    if ar.F.is_integer() and ar.psi.is_integer():
        minus = SideForm(-1, reflect_x(ar.F), ar.psi.reflected(), reflect_x(G))
    else:
        reflected = adapt(reflect_x(G))
        if not reflected.generic_adapted:
            raise NotGenericAdapted("the x < 0 half-plane does not reach generic adapted coordinates")
        minus = SideForm(-1, reflected.F, reflected.psi, reflect_x(G))
    return plus, minus


def _zero_order(u, witness):
    for q, m in squarefree_decomposition(u):
        if count_real_roots(q, witness.lo, witness.hi) > 0:
            return m
    return 0


def _squarefree_part(u):
    out = UniPoly([1])
    for q, _ in squarefree_decomposition(u):
        out = out * q
    return out


def _min_abs_on(u, lo, hi):
    grid = np.linspace(float(lo), float(hi), GRID_1D)
    return float(np.min(np.abs(u(grid))))


def _gaps(centers):
    out = []
    for i, r in enumerate(centers):
        near = [abs(r - c) for j, c in enumerate(centers) if j != i]
        out.append(min(near) if near else None)
    return out


def _complement(components, intervals):
    pieces = []
    for a, b in components:
        current = a
        for lo, hi in sorted(intervals):
            if hi <= current or lo >= b:
                continue
            if lo > current:
                pieces.append((current, lo))
            current = max(current, hi)
            if current >= b:
                break
        if current < b:
            pieces.append((current, b))
    return [(p, q) for p, q in pieces if q > p]


def bounds_hold(form, bounds, damping=None):
    """Search target: every bound holds with margin >= 1 at the given side-local samples."""
    def target(xs, ys):
        for b in bounds:
            vals = ratios(form, xs, ys, b.quantity, b.order, b.alpha, b.beta, damping)
            if vals.size == 0 or margin_of(vals, b.comparator, b.constant)[0] < 1:
                return False
        return True
    return target


def constant_search(kind, region_for, target, radius=None, samples=None, seed=None, start=None):
    """Doubling search for N0 (up from N0_START) or halving search for delta (down from DELTA_START).

    region_for maps a candidate constant to its region; target(xs, ys) accepts or rejects the
    region's samples taken at radius and radius / 4. Returns (constant, region, xs, ys).
    """
    radius = float(radius if radius is not None else config.SLIVER_RADIUS)
    samples = samples or config.VALIDATION_SAMPLES
    seed = config.DEFAULT_SEED if seed is None else seed
    if kind not in (N0_SEARCH, DELTA_SEARCH):
        raise ValueError(f"unknown search kind {kind!r}")
    growing = kind == N0_SEARCH
    if start is None:
        start = config.N0_START if growing else config.DELTA_START
    value = Fraction(start)
    while (value <= config.N0_MAX) if growing else (value >= config.DELTA_MIN):
        region = region_for(value)
        xs, ys = region_samples(region, radius, samples, seed)
        if xs.size == 0:
            raise SearchBudgetExhausted(f"{region.to_dict()} holds no sample below radius {radius}")
        if target(xs, ys):
            logger.debug("%s = %s accepted on %s", kind, value, region.to_dict())
            return value, region, xs, ys
        value = value * 2 if growing else value / 2
    limit = config.N0_MAX if growing else config.DELTA_MIN
    raise SearchBudgetExhausted(f"no {kind} within {limit} satisfies the target on radius {radius}")


class _SideBuilder:
    def __init__(self, form, radius, samples, seed):
        self.form = form
        self.radius = radius
        self.samples = samples
        self.seed = seed
        self.polygon = newton_polygon(form.F)
        self.d = newton_distance(self.polygon)
        self.d_star = max(Fraction(2), self.d)
        self.fstar_damping = DampingSpec(FSTAR_POWER, self.d_star)

    def build(self):
        vertices = self.polygon.vertices
        if len(vertices) == 1:
            return [self._single_vertex(vertices[0])]
        out = []
        n0 = {}
        for j, v in enumerate(vertices):
            if v[1] >= 1:
                sliver = self._vertex_sector(j)
                n0[j] = sliver.constants["N0"]
                out.append(sliver)
        for j, e in enumerate(self.polygon.edges):
            out.extend(self._band(j, e, n0[j], n0.get(j + 1)))
        return out

    def _samples(self, region):
        xs, ys = region_samples(region, self.radius, self.samples, self.seed)
        if xs.size == 0:
            raise _RadiusTooLarge(f"no samples in {region.to_dict()}")
        return xs, ys

    def _search(self, kind, region_for, target, start=None):
        try:
            return constant_search(kind, region_for, target, self.radius, self.samples, self.seed, start)
        except SearchBudgetExhausted as exc:
            raise _RadiusTooLarge(exc.message) from exc

    def _fstar_bounds(self, xs, ys, alpha, beta):
        vals = ratios(self.form, xs, ys, "fstar", alpha=alpha, beta=beta)
        c0 = dyadic(config.MARGIN * max(float(vals.max()), 1.0 / float(vals.min())), up=True)
        name = "fstar_vertex" if beta else "fstar_edge"
        return c0, [PredictedBound(name, "fstar", GE, 1 / c0, alpha, beta),
                    PredictedBound(name, "fstar", LE, c0, alpha, beta)]

    def _single_vertex(self, v):
        k = int(v[1])
        c = self.form.F.coefficient(*v)
        region = BoxRegion()
        bound = PredictedBound("dy_lower", "dyF", GE, abs(c) * factorial(k) / 2, order=k)
        xs, ys = self._samples(region)
        margin, _ = margin_of(ratios(self.form, xs, ys, "dyF", k), GE, bound.constant)
        if margin < 1:
            raise _RadiusTooLarge("k-th derivative bound on the single-vertex sliver")
        return Sliver("G", self.form.side, 0, region, self.form, DampingSpec(PLAIN_FYY, self.d_star), k=k,
                      vertex=v, constants={"Cr": bound.constant}, bounds=[bound])

    def _vertex_sector(self, j):
        vertices, edges = self.polygon.vertices, self.polygon.edges
        a, b = vertices[j]
        c = abs(self.form.F.coefficient(a, b))
        low = edges[j].weight if j < len(edges) else None
        high = edges[j - 1].weight if j > 0 else None
        bounds = []
        for m in range(0, min(2, int(b)) + 1):
            scale = c * factorial(int(b)) / factorial(int(b) - m)
            bounds.append(PredictedBound("vertex_derivative", "dyF", GE, scale / 2, a, b - m, order=m))
            bounds.append(PredictedBound("vertex_derivative", "dyF", LE, 2 * scale, a, b - m, order=m))
        n0, region, xs, ys = self._search(N0_SEARCH, lambda n: SectorRegion(low, high, n),
                                          bounds_hold(self.form, bounds))
        c0, fb = self._fstar_bounds(xs, ys, a, b)
        logger.info("side %+d vertex %s: N0 = %s", self.form.side, vertices[j], n0)
        return Sliver("D", self.form.side, j, region, self.form, self.fstar_damping, vertex=vertices[j],
                      constants={"N0": n0, "C0": c0}, bounds=bounds + fb)

    def _centers(self, g, g1, hi, lo):
        sqf = _squarefree_part(g * g1)
        out = []
        for w in isolate_real_roots(sqf):
            w = refine(sqf, w, Fraction(1, 2 ** 40))
            r = w.mid
            if abs(r) > 2 * hi or (lo is not None and abs(r) < lo / 2):
                continue
            out.append((r, _zero_order(g, w), _zero_order(g1, w)))
        return out

    def _band(self, j, e, n0_up, n0_low):
        M, alpha = e.weight, e.alpha
        g = restrict_x(edge_polynomial(self.form.F, e), 1)
        g1 = g.derivative()
        hi = Fraction(n0_up)
        lo = None if n0_low is None else 1 / Fraction(n0_low)
        components = [(-hi, hi)] if lo is None else [(-hi, -lo), (lo, hi)]
        centers = self._centers(g, g1, hi, lo)
        gaps = _gaps([r for r, _, _ in centers])
        out = []
        for (r, og, o1), gap in zip(centers, gaps):
            if og == 0 and o1 > self.d_star - 1:
                out.append(self._e_sliver(j, e, r, gap))
            else:
                k = og if og > 0 else o1 + 1
                if k > self.d_star:
                    logger.warning("edge %s: zero of order %d above d* = %s", e.to_dict(), k, self.d_star)
                out.append(self._center_sliver(j, e, g, r, gap, k))
        taken = [(s.region.center - s.region.half_width, s.region.center + s.region.half_width) for s in out]
        for p, q in _complement(components, taken):
            out.append(self._regular_sliver(j, e, g1, p, q))
        logger.info("side %+d edge %d (M = %s, alpha = %s): %d band slivers", self.form.side, j, M, alpha, len(out))
        return out

    def _start_delta(self, gap):
        delta = config.DELTA_START
        while gap is not None and 2 * delta >= gap:
            delta /= 2
        return delta

    def _e_sliver(self, j, e, r, gap):
        M, alpha = e.weight, e.alpha
        psi_order = self.form.psi.order
        if psi_order is not None and psi_order < M:
            raise ExceptionalInput(
                f"an E sliver at r = {float(r):.6g} on the edge of weight {M} needs a shift of order at least "
                f"{M}, but psi has order {psi_order}")

        def positive(xs, ys):
            vals = ratios(self.form, xs, ys, "fxx", alpha=alpha - 2)
            return vals.size > 0 and vals.min() > 0

        delta, region, xs, ys = self._search(DELTA_SEARCH, lambda dl: BandRegion(M, r, dl), positive,
                                             start=self._start_delta(gap))
        vals = ratios(self.form, xs, ys, "fxx", alpha=alpha - 2)
        c = dyadic(float(vals.min()) / config.MARGIN)
        c0, fb = self._fstar_bounds(xs, ys, alpha, 0)
        bounds = [PredictedBound("fxx_lower", "fxx", GE, c, alpha - 2, 0)] + fb
        return Sliver("E", self.form.side, j, region, self.form, self.fstar_damping, edge=e,
                      constants={"delta": delta, "C": c, "C0": c0}, bounds=bounds)

    def _validated_band(self, j, e, region, k, c_r):
        M, alpha = e.weight, e.alpha
        xs, ys = self._samples(region)
        bound = PredictedBound("dy_lower", "dyF", GE, c_r / 2, alpha - M * k, 0, order=k)
        margin, _ = margin_of(ratios(self.form, xs, ys, "dyF", k, alpha=bound.alpha), GE, bound.constant)
        if margin < 1:
            raise _RadiusTooLarge(f"k-th derivative lower bound fails on {region.to_dict()} (margin {margin:.3g})")
        c0, fb = self._fstar_bounds(xs, ys, alpha, 0)
        kind = "F" if k == 1 else "G"
        damping = self.fstar_damping
        bounds = [bound] + fb
        constants = {"delta": region.half_width, "Cr": c_r, "C0": c0}
        if k > 2:
            damping = DampingSpec(WEIGHTED_FYY, self.d_star, M - alpha / self.d_star)
            vals = ratios(self.form, xs, ys, "damping_ratio", damping=damping)
            c_h = dyadic(config.MARGIN * float(vals.max()), up=True)
            bounds.append(PredictedBound("damping_ceiling", "damping_ratio", LE, c_h))
            constants["CH"] = c_h
        return Sliver(kind, self.form.side, j, region, self.form, damping, k=k, edge=e,
                      constants=constants, bounds=bounds)

    def _center_sliver(self, j, e, g, r, gap, k):
        gk = g.derivative(k)
        c_r = abs(gk(r)) / 2
        delta = self._start_delta(gap)
        while _min_abs_on(gk, r - delta, r + delta) < float(c_r):
            delta /= 2
            if delta < config.DELTA_MIN:
                raise SearchBudgetExhausted(f"no interval around r = {float(r):.6g} keeps the {k}-th derivative")
        return self._validated_band(j, e, BandRegion(e.weight, r, delta), k, c_r)

    def _regular_sliver(self, j, e, g1, p, q):
        low = _min_abs_on(g1, p, q)
        if low <= 0:
            raise SearchBudgetExhausted(f"first derivative vanishes on [{float(p):.6g}, {float(q):.6g}]")
        c_r = dyadic(0.9 * low)
        return self._validated_band(j, e, BandRegion(e.weight, (p + q) / 2, (q - p) / 2), 1, c_r)


def decompose(ar, radius=None, samples=None, seed=None):
    """Validated slivers covering the punctured neighbourhood on both sides of the y-axis."""
    if not ar.generic_adapted:
        raise NotGenericAdapted("decomposition needs generic adapted coordinates")
    samples = samples or config.VALIDATION_SAMPLES
    seed = config.DEFAULT_SEED if seed is None else seed
    radius = float(radius if radius is not None else config.SLIVER_RADIUS)
    forms = side_forms(ar)
    for attempt in range(config.RADIUS_SHRINKS + 1):
        try:
            slivers = []
            d = d_star = None
            for form in forms:
                builder = _SideBuilder(form, radius, samples, stream_seed(seed, CONSTRUCTION_STREAM))
                d, d_star = builder.d, builder.d_star
                slivers.extend(builder.build())
            slivers.sort(key=Sliver.sort_key)
            dec = Decomposition(slivers, forms, radius, d, d_star)
            coverage_check(dec, seed=seed)
            return dec
        except _RadiusTooLarge as exc:
            logger.info("radius %.4g rejected (%s), shrinking", radius, exc)
            radius /= 4
    raise SearchBudgetExhausted(f"constants not validated after {config.RADIUS_SHRINKS} radius shrinks")


def coverage_check(dec, samples=None, seed=None):
    """Every quasi-random point of the punctured box lies in some sliver of its side."""
    samples = samples or config.COVERAGE_SAMPLES
    seed = config.DEFAULT_SEED if seed is None else seed
    for form in dec.forms:
        pts = sobol_points(samples, seed)
        xs = pts[:, 0] * dec.radius
        ys = (2 * pts[:, 1] - 1) * dec.radius
        keep = (xs > 0) & (ys != 0)
        xs, ys = xs[keep], ys[keep]
        covered = np.zeros(xs.shape, dtype=bool)
        for s in dec.for_side(form.side):
            covered |= s.contains(xs, ys, dec.radius)
        if not covered.all():
            i = int(np.argmin(covered))
            raise CoverageFailure(f"point ({form.side * xs[i]:.6g}, {ys[i]:.6g}) lies in no sliver")
    return True


def locate(dec, xs, ys, radius=None):
    """Index into dec.slivers of the first sliver containing each world point, -1 if none.

    radius defaults to the decomposition radius; math.inf extends every sliver along its own shape.
    """
    radius = dec.radius if radius is None else radius
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    out = np.full(xs.shape, -1)
    for form in dec.forms:
        on_side = (np.sign(xs) == form.side)
        xl, yl = form.to_local(xs, ys)
        for i, s in enumerate(dec.slivers):
            if s.side != form.side:
                continue
            hit = on_side & (out < 0) & s.contains(np.where(on_side, xl, 1.0), yl, radius)
            out[hit] = i
    return out


def damping_value(dec, xs, ys, radius=None):
    """|H| at world points (coordinates of the pre-shift polynomial), piecewise over slivers."""
    xs, ys = np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)
    out = np.ones(np.broadcast(xs, ys).shape)
    where = locate(dec, xs, ys, radius)
    for form in dec.forms:
        on_side = np.sign(xs) == form.side
        if not on_side.any():
            continue
        xl, yl = form.to_local(xs[on_side], ys[on_side])
        local = where[on_side]
        vals = DampingSpec(FSTAR_POWER, dec.d_star).evaluate(form, xl, yl)
        for i in np.unique(local):
            if i < 0:
                continue
            s = dec.slivers[i]
            if s.damping.form != FSTAR_POWER:
                mask = local == i
                vals[mask] = s.damping_value(xl[mask], yl[mask])
        out[on_side] = vals
    return out


def check_bounds(dec, samples=None, seed=None):
    """Re-sample every recorded bound of every sliver at the decomposition radius.

    Points come from the verification stream of `seed`, not the stream the constants were fitted on.
    """
    seed = stream_seed(config.DEFAULT_SEED if seed is None else seed, VERIFICATION_STREAM)
    reports = []
    for s in dec:
        for bound in s.bounds:
            reports.append(check_comparability(s.form, s.region, bound, dec.radius, samples, seed, s.damping))
    return reports
