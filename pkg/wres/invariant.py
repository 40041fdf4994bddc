# wres/invariant.py
"""Maximal contact, coefficient ideals, the point invariant and its centers.

All computations happen at the origin: an ideal is translated to its base
point first, and every flag remembers the point it was built at.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, total_ordering

from sympy import QQ

from .algebra import INFINITY, Poly, PolyMap, format_rat, invert_automorphism, rat, substitute
from .config import settings as default_settings
from .exceptions import (
    IndeterminateError,
    MonotonicityError,
    TruncationBoundError,
    UnitIdealError,
    WresError,
)
from .localideal import (
    Ideal,
    derivative_chain,
    derivative_power,
    ord_at,
    power,
    prune,
    restrict,
)
from . import groebner
from .metrics import INVARIANT_DURATION

logger = logging.getLogger(__name__)


# --- INVARIANT ---

def compare(a, b):
    """Lexicographic order in which a proper prefix counts as larger."""
    a = tuple(a.entries if isinstance(a, Invariant) else a)
    b = tuple(b.entries if isinstance(b, Invariant) else b)
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    if len(a) == len(b):
        return 0
    return 1 if len(a) < len(b) else -1


@total_ordering
@dataclass(frozen=True)
class Invariant:
    """(a_1, ..., a_k) as exact rationals; ``orders`` keeps the integer b_i."""

    entries: tuple = ()
    orders: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(rat(e) for e in self.entries))

    def __lt__(self, other):
        if not isinstance(other, Invariant):
            return NotImplemented
        return compare(self, other) < 0

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self):
        return "(" + ", ".join(format_rat(e) for e in self.entries) + ")"

    def scaled(self, k):
        return Invariant(tuple(rat(k) * e for e in self.entries))

    def is_smooth(self):
        """All ones: the point is a smooth point of the subscheme."""
        return bool(self.entries) and all(e == 1 for e in self.entries)


# --- FLAGS, CENTERS, VALUATIONS ---

@dataclass(frozen=True)
class ContactFlag:
    """Parameters x_1..x_k at ``base_point``, written in local coordinates.

    Parameter i has its pivot variable ``pivots[i]`` with coefficient 1 and
    does not involve the earlier pivots.  The automorphism sends each pivot
    variable to its parameter and fixes the remaining coordinates.
    """

    ring: object
    parameters: tuple = ()
    pivots: tuple = ()
    base_point: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "parameters", tuple(self.parameters))
        object.__setattr__(self, "pivots", tuple(self.pivots))
        point = self.ring.origin() if self.base_point is None else tuple(rat(v) for v in self.base_point)
        object.__setattr__(self, "base_point", point)
        if len(self.parameters) != len(self.pivots):
            raise ValueError("one pivot per parameter is required")

    @classmethod
    def coordinates(cls, ring, names, base_point=None):
        """Flag of plain coordinate functions."""
        pivots = tuple(ring.index(n) for n in names)
        return cls(ring, tuple(ring.gen(i) for i in pivots), pivots, base_point)

    def __len__(self):
        return len(self.parameters)

    @property
    def names(self):
        return tuple(self.ring.names[i] for i in self.pivots)

    def automorphism(self):
        """Flag coordinates -> local coordinates."""
        images = list(self.ring.gens())
        for i, p in zip(self.pivots, self.parameters):
            images[i] = p
        return PolyMap(self.ring, self.ring, tuple(images))

    @cached_property
    def inverse(self):
        """Local coordinates -> flag coordinates (exact, or a jet when it must be)."""
        return invert_automorphism(self.automorphism(), self.ring.truncation)

    @property
    def exact(self):
        return self.inverse.exact

    def global_parameters(self):
        """Parameters in the coordinates of the original ring."""
        if all(v == 0 for v in self.base_point):
            return self.parameters
        back = tuple(-v for v in self.base_point)
        return tuple(p.translate(back) for p in self.parameters)

    def rewrite(self, p):
        """A polynomial of the original coordinates, in flag coordinates."""
        if p.ring.names != self.ring.names:
            raise ValueError(f"{p.ring} is not the flag ring {self.ring}")
        local = Poly(self.ring, p.element, p.exact)
        if any(v != 0 for v in self.base_point):
            local = local.translate(self.base_point)
        return substitute(local, self.inverse)

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.global_parameters()) + ")"


def _exponent_text(value):
    value = rat(value)
    return format_rat(value) if value.denominator == 1 else f"({format_rat(value)})"


@dataclass(frozen=True)
class MonomialValuation:
    """v(prod x_i^c_i) = sum c_i * weights[i] on flag coordinates."""

    flag: ContactFlag
    weights: tuple

    def monomial_value(self, monom):
        return sum((rat(monom[i]) * w for i, w in zip(self.flag.pivots, self.weights)), QQ(0))

    def _bounds(self, p):
        """(minimum over the known support, lower bound for the dropped terms)."""
        q = self.flag.rewrite(p)
        known = min((self.monomial_value(m) for m, _ in q.terms()), default=None)
        if q.exact:
            return known, None
        floor = QQ(0)
        if len(self.flag.pivots) == q.ring.ngens:
            floor = (q.ring.truncation + 1) * min(self.weights)
        return known, floor

    def value(self, p):
        """Minimum over the support after rewriting; infinity for zero.

        Raises IndeterminateError if a jet rewrite cannot settle the value.
        """
        known, floor = self._bounds(p)
        if floor is None:
            return INFINITY if known is None else known
        if known is not None and known <= floor:
            return known
        raise IndeterminateError(f"valuation of {p} undecided by its jet")

    def at_least_one(self, p):
        known, floor = self._bounds(p)
        if known is not None and known < 1:
            return False
        if floor is None or floor >= 1:
            return True
        raise IndeterminateError(f"cannot decide v({p}) >= 1 from its jet")


@dataclass(frozen=True)
class Center:
    """The valuative Q-ideal (x_1^a_1, ..., x_k^a_k)."""

    flag: ContactFlag
    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(rat(a) for a in self.exponents))
        if len(self.exponents) != len(self.flag):
            raise ValueError("one exponent per flag parameter is required")
        if any(a <= 0 for a in self.exponents):
            raise ValueError("center exponents must be positive")

    @classmethod
    def coordinates(cls, ring, exponents, base_point=None):
        """Monomial center from ``{name: exponent}`` in ring order of the names given."""
        names = list(exponents)
        flag = ContactFlag.coordinates(ring, names, base_point)
        return cls(flag, tuple(exponents[n] for n in names))

    def valuation(self):
        return MonomialValuation(self.flag, tuple(1 / a for a in self.exponents))

    def __str__(self):
        parts = [f"{_paren(p)}^{_exponent_text(a)}"
                 for p, a in zip(self.flag.global_parameters(), self.exponents)]
        return "(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class ReducedCenter:
    """Integer weights w_i with gcd 1 and index ell, a_i = ell / w_i."""

    flag: ContactFlag
    weights: tuple
    ell: object

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "ell", rat(self.ell))
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive integers")
        if math.gcd(*self.weights) != 1:
            raise ValueError(f"weights {self.weights} are not reduced")

    @property
    def exponents(self):
        return tuple(self.ell / w for w in self.weights)

    @property
    def cocharacter(self):
        """(w_1, ..., w_k, 0, ..., 0) in flag order, padded to the ring dimension."""
        return self.weights + (0,) * (self.flag.ring.ngens - len(self.weights))

    def center(self):
        return Center(self.flag, self.exponents)

    def __str__(self):
        parts = [f"{_paren(p)}^(1/{w})" if w != 1 else _paren(p)
                 for p, w in zip(self.flag.global_parameters(), self.weights)]
        return "(" + ", ".join(parts) + ")"


def _paren(p):
    text = str(p)
    return text if len(p.element) == 1 else f"({text})"


# --- MAXIMAL CONTACT ---

def _pivot_element(D):
    best = None
    for g in D.generators:
        lin = g.linear_part()
        if not lin:
            continue
        j = min(lin)
        if best is None or j < best[0]:
            best = (j, g.scale(1 / lin[j]))
    return best


def _is_triangular(f, j):
    return all(m[j] == 0 or (m[j] == 1 and sum(m) == 1) for m, _ in f.terms())


def _stripped(f, j):
    terms = {m: c for m, c in f.element.items() if m[j] == 0}
    gen = [0] * f.ring.ngens
    gen[j] = 1
    terms[tuple(gen)] = QQ(1)
    return f.ring.from_terms(terms, f.exact)


def _simplify_contact(f, j, D, cfg):
    """Replace a non-triangular contact element by its stripped form when it is locally in D."""
    candidate = _stripped(f, j)
    q = f.div_exact(candidate)
    if q is not None and q.constant_term() != 0:
        return candidate
    if not cfg.FEATURE_FLAGS.get("local_contact_simplification", True):
        return f
    if D.ring.is_jet or not D.exact:
        return f
    quotient = groebner.ideal_quotient(list(D.generators), candidate, settings=cfg)
    if any(g.constant_term() != 0 for g in quotient):
        logger.debug("stripped contact element %s accepted", candidate)
        return candidate
    return f


def _contact(J, a, cfg):
    """(element, pivot index) of D^{<=a-1}J at the origin."""
    D = derivative_power(J, a - 1, cfg)
    found = _pivot_element(D)
    if found is None:
        if not D.exact:
            raise TruncationBoundError("no linear part survives the truncation")
        raise WresError(f"no maximal contact element in D^(<={a - 1}) of {J}")
    j, f = found
    if not _is_triangular(f, j):
        f = _simplify_contact(f, j, D, cfg)
    return f, j


def maximal_contact(I, a, settings=None):
    """Maximal contact element of I (order a at its base point), earliest pivot first."""
    cfg = settings or default_settings
    J = I.at_origin()
    if J.is_unit or ord_at(J) == 0:
        return J.ring.gen(0)
    f, _ = _contact(J, a, cfg)
    if any(v != 0 for v in I.base_point):
        f = f.translate(tuple(-v for v in I.base_point))
    return f


def _straighten(J, f, j):
    """J in coordinates where the pivot variable j means f."""
    if f == J.ring.gen(j):
        return J
    images = list(J.ring.gens())
    images[j] = f
    psi = PolyMap(J.ring, J.ring, tuple(images))
    inverse = invert_automorphism(psi, J.ring.truncation)
    return J.with_generators(tuple(substitute(g, inverse) for g in J.generators))


# --- COEFFICIENT IDEALS ---

def _vertex_sum(levels, a, cfg):
    """sum_i levels[i]^(a!/(a-i)) over nonzero levels."""
    total = math.factorial(a)
    parts = []
    for i, level in enumerate(levels[:a]):
        if level.is_zero:
            continue
        parts.extend(power(level, total // (a - i), cfg).generators)
    ring = levels[0].ring
    if not parts:
        return Ideal(ring, (ring.zero,), levels[0].base_point)
    return levels[0].with_generators(prune(parts, cfg))


def coefficient_ideal(I, a, settings=None):
    """Vertex form sum_{i<a} (D^{<=i}I)^(a!/(a-i)).

    Raises ValueError for a = 0.
    """
    if a < 1:
        raise ValueError("coefficient ideals need a >= 1")
    cfg = settings or default_settings
    return _vertex_sum(derivative_chain(I, a - 1, cfg), a, cfg)


def restricted_coefficient_ideal(I, a, kill, settings=None):
    """C(I, a) restricted to V(kill), restricting each level before powering."""
    if a < 1:
        raise ValueError("coefficient ideals need a >= 1")
    cfg = settings or default_settings
    return _vertex_sum(_restricted_levels(I, a, kill, cfg), a, cfg)


def _restricted_levels(I, a, kill, cfg):
    return [restrict(level, kill) for level in derivative_chain(I, a - 1, cfg)]


# --- MONOMIAL LEVELS ---

def _monomial_points(levels, a):
    """Exponents of sum_i levels[i]^(1/(a-i)) when every level is a monomial ideal, else None."""
    points = set()
    for i, level in enumerate(levels[:a]):
        if not level.exact:
            return None
        for g in level.generators:
            if g.is_zero:
                continue
            if not g.is_monomial():
                return None
            points.add(tuple(QQ(e, a - i) for e in g.terms()[0][0]))
    return points


def _greedy_exponents(points, order):
    """Largest exponents along ``order`` keeping (x^a_1, ...) admissible for the points."""
    residual = dict.fromkeys(points, QQ(1))
    out = []
    for t, j in enumerate(order):
        live = [p for p, r in residual.items() if r > 0]
        if not live:
            break
        rest = order[t:]
        a = min(sum((p[i] for i in rest), QQ(0)) / residual[p] for p in live)
        out.append(a)
        if a == 0:
            break
        for p in live:
            residual[p] -= p[j] / a
    return tuple(out)


def monomial_invariant(points, names):
    """(entries, flag names) of the monomial Q-ideal spanned by rational exponent ``points``.

    The maximal admissible coordinate center; among equal invariants the
    earliest ordering of the names wins.
    """
    best = None
    for order in itertools.permutations(range(len(names))):
        entries = _greedy_exponents(points, order)
        if any(x > y for x, y in zip(entries, entries[1:])):
            continue
        if best is None or compare(entries, best[0]) > 0:
            best = (entries, tuple(names[j] for j in order[:len(entries)]))
    return best


def _certify(order, depth, ideal):
    if order == INFINITY or ideal.exact or not ideal.ring.is_jet:
        return order
    if order + depth >= ideal.ring.truncation:
        raise TruncationBoundError(
            f"order {order} after {depth} derivatives is not certified at truncation "
            f"{ideal.ring.truncation}")
    return order


def coefficient_order_shortcut(I, a, kill, settings=None):
    """ord(C(I, a)|_V(kill)) = a! * min_i ord(D^{<=i}I|_V(kill)) / (a - i)."""
    if a < 1:
        raise ValueError("coefficient ideals need a >= 1")
    cfg = settings or default_settings
    chain = derivative_chain(I, a - 1, cfg)
    best = None
    for i, level in enumerate(chain[:a]):
        restricted = restrict(level, kill)
        o = _certify(ord_at(restricted), i, restricted)
        if o == INFINITY:
            continue
        ratio = QQ(int(o), a - i)
        if best is None or ratio < best:
            best = ratio
    if best is None:
        return INFINITY
    return best * math.factorial(a)


# --- THE INVARIANT ---

def _divides_all(J, f):
    return all(g.is_zero or g.div_exact(f) is not None for g in J.generators)


def _drop_unused(J):
    """J restricted to the coordinates its generators involve."""
    if J.ring.is_jet or not J.exact:
        return J
    used = set().union(*(g.variables() for g in J.generators))
    unused = [n for i, n in enumerate(J.ring.names) if i not in used]
    if not used or not unused:
        return J
    return restrict(J, unused)


def _append_monomial(points, names, b, running, out, flag_ring):
    """Finish the invariant from a monomial coefficient level.

    Only the first of these levels gets an integer order; the later ones
    would need factorials of that order.
    """
    entries, orders, params, pivots = out
    level, chosen = monomial_invariant(points, names)
    orders.append(int(level[0] * math.factorial(b)))
    for e, n in zip(level, chosen):
        entries.append(QQ(b) * e / running)
        params.append(flag_ring.gen(n))
        pivots.append(flag_ring.index(n))


def invariant_at(I, point=None, truncation=None, settings=None):
    """(Invariant, ContactFlag) of I at ``point`` (default: its base point).

    Raises UnitIdealError if I is a unit at the point.
    Raises TruncationBoundError if a jet bound is too small to certify an order.
    Raises MonotonicityError if the entries fail a_i <= a_(i+1).
    """
    cfg = settings or default_settings
    point = I.base_point if point is None else tuple(rat(v) for v in point)
    ring = I.ring.exact_ring() if truncation is None else I.ring.with_truncation(truncation)

    with INVARIANT_DURATION.time():
        work = Ideal(ring, tuple(Poly(ring, g.element, g.exact) for g in I.generators))
        if any(v != 0 for v in point):
            work = work.with_generators(tuple(g.translate(point) for g in work.generators))
        flag_ring = ring
        if work.is_zero:
            return Invariant(()), ContactFlag(flag_ring, (), (), point)
        b = ord_at(work)
        if b == 0:
            raise UnitIdealError(f"{I} is a unit at {tuple(format_rat(v) for v in point)}")
        b = _certify(b, 0, work)

        entries, orders, params, pivots = [], [], [], []
        running = 1
        current = work
        while True:
            current = _drop_unused(current)
            orders.append(int(b))
            entries.append(QQ(int(b)) / running)
            f, j = _contact(current, int(b), cfg)
            name = current.ring.names[j]
            params.append(f.embed(flag_ring))
            pivots.append(flag_ring.index(name))
            if current.ring.ngens == 1:
                break
            if b == 1 and _divides_all(current, f):
                break
            moved = _straighten(current, f, j)
            if current.ring.ngens == 2:
                nb = coefficient_order_shortcut(moved, int(b), {name}, cfg)
                if nb == INFINITY:
                    break
                running *= math.factorial(int(b) - 1)
                orders.append(int(nb))
                entries.append(QQ(int(nb)) / running)
                last = next(n for n in current.ring.names if n != name)
                params.append(flag_ring.gen(last))
                pivots.append(flag_ring.index(last))
                break
            levels = _restricted_levels(moved, int(b), {name}, cfg)
            points = _monomial_points(levels, int(b))
            if points is not None:
                if points:
                    _append_monomial(points, levels[0].ring.names, int(b), running,
                                     (entries, orders, params, pivots), flag_ring)
                break
            nxt = _vertex_sum(levels, int(b), cfg)
            if nxt.is_zero:
                break
            running *= math.factorial(int(b) - 1)
            b = _certify(ord_at(nxt), 0, nxt)
            if b == INFINITY:
                break
            current = nxt

    inv = Invariant(tuple(entries), tuple(orders))
    for x, y in zip(inv.entries, inv.entries[1:]):
        if x > y:
            raise MonotonicityError(f"invariant {inv} is not monotone")
    flag = ContactFlag(flag_ring, tuple(params), tuple(pivots), point)
    logger.debug("inv = %s", inv, extra={"inv": str(inv)})
    return inv, flag


def invariant_at_auto(I, point=None, settings=None):
    """invariant_at, falling back to jets and doubling the bound on failure."""
    cfg = settings or default_settings
    try:
        return invariant_at(I, point, None, cfg)
    except TruncationBoundError:
        pass
    start = cfg.JET_RETRY_BOUND
    bound = start
    while True:
        try:
            return invariant_at(I, point, bound, cfg)
        except TruncationBoundError:
            bound *= 2
            if bound > 8 * start:
                raise
            logger.info("🔄 raising jet bound to %d", bound)


# --- CENTERS ---

def center_from(inv, flag):
    """The center (x_1^a_1, ..., x_k^a_k) of an invariant and its flag."""
    k = len(flag)
    entries = tuple(inv.entries[:k])
    if len(entries) != k:
        raise ValueError(f"invariant {inv} is shorter than flag {flag}")
    return Center(flag, entries)


def reduce_center(center):
    """Smallest ell with every ell/a_i a positive integer; weights have gcd 1."""
    nums = [a.numerator for a in center.exponents]
    dens = [a.denominator for a in center.exponents]
    ell = QQ(math.lcm(*[int(n) for n in nums]), math.gcd(*[int(d) for d in dens]))
    weights = [ell / a for a in center.exponents]
    if any(w.denominator != 1 for w in weights):
        raise ArithmeticError(f"cannot reduce exponents {center.exponents}")
    ints = [int(w.numerator) for w in weights]
    g = math.gcd(*ints)
    return ReducedCenter(center.flag, tuple(w // g for w in ints), ell / g)


def ordinary_center(flag):
    """All-ones weights on the same flag: the classical blowup of the locus."""
    return ReducedCenter(flag, (1,) * len(flag), QQ(1))


# --- ADMISSIBILITY ---

def is_admissible(center, I):
    """v_J(f) >= 1 for every generator f of I.

    Raises IndeterminateError if a jet rewrite sits too close to the boundary.
    """
    v = center.valuation()
    return all(v.at_least_one(g) for g in I.generators if not g.is_zero)


def center_equality(c1, c2):
    """Mutual domination of the two centers' generators under each other's valuation."""
    if c1.flag.ring.names != c2.flag.ring.names or c1.flag.base_point != c2.flag.base_point:
        return False

    def dominates(c, other):
        v = c.valuation()
        for p, b in zip(other.flag.global_parameters(), other.exponents):
            value = v.value(p)
            if value != INFINITY and value * b < 1:
                return False
        return True

    return dominates(c1, c2) and dominates(c2, c1)
