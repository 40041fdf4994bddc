# wres/blowup.py
"""Weighted blowup charts, transforms and stabilizer bookkeeping.

Chart i of a reduced center with weights w and root factor c is

    y_i = u^(c w_i),   y_j = u^(c w_j) y_j'  (j != i, j <= k),   y_l = y_l  (l > k)

in flag coordinates y, with mu_(c w_i) acting by weight 1 on u and
-c w_j mod c w_i on y_j'.  The substitution stored on a chart already
includes the translation to the base point and the flag automorphism.
"""
import logging
import math
from dataclasses import dataclass

from sympy import QQ, integer_nthroot

from .algebra import Poly, PolyMap, Ring, rat, substitute
from .exceptions import InadmissibleCenterError, InexactAutomorphismError, TruncationBoundError
from .invariant import ContactFlag
from .localideal import Ideal

logger = logging.getLogger(__name__)

_EXCEPTIONAL_NAMES = ("u", "v", "w", "t")


@dataclass(frozen=True)
class Chart:
    """One chart of a weighted blowup.

    ``exceptional`` names the chart variable u; a codimension-one chart has
    none and carries its exceptional equation instead.
    """

    index: int
    parent: Ring
    ring: Ring
    substitution: PolyMap
    group_order: int
    action_weights: tuple
    exceptional: str = None
    exceptional_equation: Poly = None
    m: int = 1

    @property
    def exceptional_index(self):
        return None if self.exceptional is None else self.ring.index(self.exceptional)

    @property
    def is_identity(self):
        return self.exceptional is None

    def __str__(self):
        return f"chart {self.index + 1}: {self.substitution}  / mu_{self.group_order}"


@dataclass(frozen=True)
class Blowup:
    reduced: object
    root_factor: int
    charts: tuple

    def __post_init__(self):
        if self.root_factor < 1:
            raise ValueError("root factor must be >= 1")
        if len(self.charts) != len(self.reduced.flag):
            raise ValueError("one chart per center parameter is required")


# --- CHARTS ---

def _exceptional_name(taken):
    for name in _EXCEPTIONAL_NAMES:
        if name not in taken:
            return name
    i = 1
    while f"u{i}" in taken:
        i += 1
    return f"u{i}"


def _chart_names(parent, pivots, i):
    names = []
    for l, name in enumerate(parent.names):
        names.append(name + "'" if l in pivots and l != pivots[i] else name)
    taken = set(names) - {parent.names[pivots[i]]}
    names[pivots[i]] = _exceptional_name(taken)
    return names


def _local_to_flag(flag, parent, allow_inexact):
    """Map from original coordinates to flag coordinates (translation, then flag inverse)."""
    steps = []
    if any(v != 0 for v in flag.base_point):
        steps.append(PolyMap.translation(parent, flag.base_point))
    if any(p != flag.ring.gen(i) for i, p in zip(flag.pivots, flag.parameters)):
        if flag.ring.is_jet and all(p.exact for p in flag.parameters):
            exact = flag.ring.exact_ring()
            flag = ContactFlag(exact, tuple(Poly(exact, p.element) for p in flag.parameters),
                               flag.pivots, flag.base_point)
        try:
            inverse = flag.inverse
        except TruncationBoundError as exc:
            raise InexactAutomorphismError(f"flag {flag} needs a jet to invert") from exc
        if not inverse.exact and not allow_inexact:
            raise InexactAutomorphismError(
                f"flag {flag} has only a jet inverse; exact charts are impossible")
        steps.append(inverse)
    return steps


def _compose(steps, last):
    m = steps[0] if steps else last
    for step in steps[1:] + ([last] if steps else []):
        m = m.then(step)
    return m


def blowup_charts(rc, c=1, allow_inexact=False, codim_one=True):
    """The k charts of the weighted blowup of ``rc`` with root factor c.

    Raises InexactAutomorphismError if the flag cannot be inverted exactly
    and ``allow_inexact`` is off.
    """
    if c < 1:
        raise ValueError("root factor must be >= 1")
    if (rc.ell * c).denominator != 1:
        raise ValueError(f"index {rc.ell} times {c} is not an integer")
    flag = rc.flag
    parent = flag.ring if allow_inexact else flag.ring.exact_ring()
    pivots = flag.pivots
    k = len(pivots)
    m = int(rc.ell * c)

    if codim_one and k == 1 and c == 1:
        eq = flag.global_parameters()[0]
        eq = Poly(parent, eq.element, eq.exact)
        chart = Chart(0, parent, parent, PolyMap.identity(parent), 1, (0,) * parent.ngens,
                      None, eq, m)
        logger.debug("codimension-one center %s", eq)
        return Blowup(rc, c, (chart,))

    steps = _local_to_flag(flag, parent, allow_inexact)
    charts = []
    for i in range(k):
        ring = Ring(tuple(_chart_names(parent, pivots, i)), flag.ring.truncation if allow_inexact else None)
        u = ring.gen(pivots[i])
        images = list(ring.gens())
        order = c * rc.weights[i]
        weights = [0] * ring.ngens
        for j, (p, w) in enumerate(zip(pivots, rc.weights)):
            if j == i:
                images[p] = u ** (c * w)
                weights[p] = 1 % order if order > 1 else 0
            else:
                images[p] = u ** (c * w) * ring.gen(p)
                weights[p] = (-c * w) % order
        chart_map = PolyMap(flag.ring if steps else parent, ring, tuple(images))
        substitution = _compose(steps, chart_map)
        if substitution.source.names != parent.names:
            raise ValueError("chart substitution does not start at the parent ring")
        substitution = PolyMap(parent, ring, substitution.images, substitution.exact)
        charts.append(Chart(i, parent, ring, substitution, order, tuple(weights),
                            ring.names[pivots[i]], None, m))
    return Blowup(rc, c, tuple(charts))


# --- TRANSFORMS ---

def _chart_ideal(ch, generators):
    return Ideal(ch.ring, tuple(generators) or (ch.ring.zero,))


def total_transform(I, ch):
    """Pull back every generator along the chart substitution."""
    gens = [Poly(ch.parent, g.element, g.exact) for g in I.generators]
    return _chart_ideal(ch, [substitute(g, ch.substitution) for g in gens])


def weak_transform(I, ch, m=None):
    """Total transform divided by the exceptional power E^m (default ell * c).

    Raises InadmissibleCenterError if some generator is not divisible.
    """
    m = ch.m if m is None else m
    if ch.is_identity:
        divisor = ch.exceptional_equation ** m
        out = []
        for g in I.generators:
            g = Poly(ch.parent, g.element, g.exact)
            q = g.div_exact(divisor) if not g.is_zero else g
            if q is None:
                raise InadmissibleCenterError(f"({ch.exceptional_equation})^{m} does not divide {g}")
            out.append(q)
        return _chart_ideal(ch, out)
    u = ch.exceptional_index
    out = []
    for g in total_transform(I, ch).generators:
        if g.is_zero:
            out.append(g)
            continue
        if g.variable_power(u) < m:
            raise InadmissibleCenterError(f"{ch.exceptional}^{m} does not divide {g}")
        out.append(g.divide_variable_power(u, m))
    return _chart_ideal(ch, out)


def proper_transform(I, ch):
    """Every generator divided by the largest exceptional power dividing it."""
    if not I.is_principal:
        logger.warning("⚠️ proper transform of a non-principal ideal is taken generator-wise",
                       extra={"chart": ch.index})
    if ch.is_identity:
        out = []
        for g in I.generators:
            g = Poly(ch.parent, g.element, g.exact)
            while not g.is_zero:
                q = g.div_exact(ch.exceptional_equation)
                if q is None:
                    break
                g = q
            out.append(g)
        return _chart_ideal(ch, out)
    u = ch.exceptional_index
    out = []
    for g in total_transform(I, ch).generators:
        out.append(g if g.is_zero else g.divide_variable_power(u, g.variable_power(u)))
    return _chart_ideal(ch, out)


# --- POINTS ---

def _rational_root(value, n):
    """r with r^n == value, or None when no rational root exists."""
    if n == 1:
        return value
    if value < 0 and n % 2 == 0:
        return None
    num, exact_num = integer_nthroot(abs(int(value.numerator)), n)
    den, exact_den = integer_nthroot(int(value.denominator), n)
    if not (exact_num and exact_den):
        return None
    root = QQ(num, den)
    return -root if value < 0 else root


def point_image(blowup, ch, point):
    """Coordinates in chart ``ch`` of a parent point where its u is nonzero.

    None for points on the exceptional locus of the chart, or when u would
    need an irrational root.
    """
    point = tuple(rat(v) for v in point)
    if ch.is_identity:
        return point if ch.exceptional_equation.evaluate(point) != 0 else None
    flag = blowup.reduced.flag
    local = tuple(v - b for v, b in zip(point, flag.base_point))
    y = list(local)
    for p, param in zip(flag.pivots, flag.parameters):
        y[p] = param.evaluate(local)
    c, weights = blowup.root_factor, blowup.reduced.weights
    pivot = flag.pivots[ch.index]
    if y[pivot] == 0:
        return None
    u = _rational_root(y[pivot], c * weights[ch.index])
    if u is None:
        return None
    image = list(y)
    image[pivot] = u
    for j, (p, w) in enumerate(zip(flag.pivots, weights)):
        if j != ch.index:
            image[p] = y[p] / u ** (c * w)
    image = tuple(image)
    if any(g.evaluate(image) != v for g, v in zip(ch.substitution.images, point)):
        logger.debug("chart %d does not send %s back to %s", ch.index + 1, image, point)
        return None
    return image


# --- GROUP ACTION ---

def action_weight(p, ch):
    """Weight of p under the chart's cyclic action, or None if p is not semi-invariant."""
    if ch.group_order == 1 or p.is_zero:
        return 0
    seen = {sum(e * w for e, w in zip(m, ch.action_weights)) % ch.group_order
            for m, _ in p.terms()}
    return seen.pop() if len(seen) == 1 else None


def root_stack_check(rc, c):
    """Charts for weights c*w equal the c = 1 charts followed by u -> u^c."""
    if c < 1:
        raise ValueError("root factor must be >= 1")
    rooted = blowup_charts(rc, c, codim_one=False)
    plain = blowup_charts(rc, 1, codim_one=False)
    for a, b in zip(plain.charts, rooted.charts):
        if a.ring.names != b.ring.names:
            return False
        u = a.exceptional
        power = PolyMap.from_names(a.ring, b.ring, {u: b.ring.gen(u) ** c})
        if a.substitution.then(power).images != b.substitution.images:
            return False
    return True


def hypersurface_root_factor(rc):
    """gcd(w_2, ..., w_k): root-stack exponent picked up by the proper transform of V(x_1)."""
    rest = rc.weights[1:]
    return math.gcd(*rest) if rest else 1


# --- STABILIZERS ---

@dataclass(frozen=True)
class StabilizerReport:
    """Cyclic chart orders, and their products along root-to-leaf branches."""

    orders: tuple
    branches: tuple

    def __str__(self):
        lines = [f"chart {'.'.join(map(str, path))}: mu_{n}" for path, n in self.orders]
        lines += [f"branch {'.'.join(map(str, path))}: order {n}" for path, n in self.branches]
        return "\n".join(lines)


def stabilizer_report(source):
    """Report for one Blowup or for a resolution tree (anything with ``root.links``)."""
    if isinstance(source, Blowup):
        orders = tuple(((i + 1,), ch.group_order) for i, ch in enumerate(source.charts))
        return StabilizerReport(orders, orders)
    node = getattr(source, "root", source)
    orders, branches = [], []

    def walk(node, path, acc):
        links = getattr(node, "links", ())
        if not links:
            if path:
                branches.append((path, acc))
            return
        for i, link in enumerate(links):
            here = path + (i + 1,)
            orders.append((here, link.chart.group_order))
            walk(link.child, here, acc * link.chart.group_order)

    walk(node, (), 1)
    return StabilizerReport(tuple(orders), tuple(branches))
