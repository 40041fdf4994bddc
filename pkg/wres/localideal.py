# wres/localideal.py
"""Local ideal calculus at a marked rational point."""
import logging
from dataclasses import dataclass

from .algebra import INFINITY, Ring, rat
from .config import settings as default_settings
from .exceptions import BudgetExceededError, RingMismatchError
from . import groebner

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ideal:
    """Generators in one ring, with a marked base point (default origin)."""

    ring: Ring
    generators: tuple
    base_point: tuple = None

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator (use 0 for the zero ideal)")
        for g in gens:
            if g.ring.names != self.ring.names:
                raise RingMismatchError(f"generator {g} is not in {self.ring}")
        object.__setattr__(self, "generators", gens)
        point = self.ring.origin() if self.base_point is None else tuple(rat(v) for v in self.base_point)
        if len(point) != self.ring.ngens:
            raise ValueError(f"base point {point} does not match ring {self.ring}")
        object.__setattr__(self, "base_point", point)

    @classmethod
    def of(cls, generators, base_point=None, ring=None):
        generators = list(generators)
        ring = ring or generators[0].ring
        return cls(ring, tuple(generators), base_point)

    @classmethod
    def unit(cls, ring):
        return cls(ring, (ring.one,))

    @classmethod
    def zero(cls, ring):
        return cls(ring, (ring.zero,))

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.generators) + ")"

    @property
    def is_zero(self):
        return all(g.is_zero and g.exact for g in self.generators)

    @property
    def is_unit(self):
        """1 is one of the generators (not a full triviality test)."""
        return any(g.is_constant and not g.is_zero for g in self.generators)

    @property
    def is_principal(self):
        return len([g for g in self.generators if not g.is_zero]) <= 1

    @property
    def exact(self):
        return all(g.exact for g in self.generators)

    def at_origin(self):
        """Same ideal with the base point translated to the origin."""
        if all(v == 0 for v in self.base_point):
            return self
        return Ideal(self.ring, tuple(g.translate(self.base_point) for g in self.generators))

    def with_generators(self, generators):
        return Ideal(self.ring, tuple(generators), self.base_point)


# --- PRUNING ---

def _gen_key(p):
    return (p.total_degree(), len(p.element), tuple(p.terms()))


def _divides(m, n):
    return all(a <= b for a, b in zip(m, n))


def _echelon(polys):
    """Linear reduction by leading monomials; keeps the span, drops dependent rows."""
    pivots = {}
    order = []
    for g in sorted(polys, key=_gen_key):
        while g and g.terms()[0][0] in pivots:
            lm, lc = g.terms()[0]
            row = pivots[lm]
            g = g - row.scale(lc / row.terms()[0][1])
        if g:
            g = g.monic()
            pivots[g.terms()[0][0]] = g
            order.append(g)
    return order


def prune(polys, settings=None):
    """Drop redundant generators.

    Zero generators go, a nonzero constant absorbs everything, dependent
    rows are removed by linear reduction, and generators whose every term is
    a multiple of a monomial generator are discarded.  Small sets also drop
    generators that are exact multiples of another one.
    """
    cfg = settings or default_settings
    polys = list(polys)
    if not polys:
        raise ValueError("nothing to prune")
    ring = polys[0].ring
    inexact_zero = next((p for p in polys if p.is_zero and not p.exact), None)
    live = [p for p in polys if not p.is_zero]
    if not live:
        return (inexact_zero or ring.zero,)
    for p in live:
        if p.is_constant:
            return (ring.one,)

    rows = _echelon(live)

    monomials, kept = [], []
    for p in sorted((r for r in rows if r.is_monomial()), key=_gen_key):
        m = p.terms()[0][0]
        if not any(_divides(k, m) for k in monomials):
            monomials.append(m)
            kept.append(p)
    others = []
    for p in rows:
        if p.is_monomial():
            continue
        if monomials and all(any(_divides(k, m) for k in monomials) for m, _ in p.terms()):
            continue
        others.append(p)

    if len(others) + len(kept) <= cfg.PRUNE_DIVISION_LIMIT:
        survivors = []
        for p in sorted(others, key=_gen_key):
            if any(p.div_exact(q) is not None for q in survivors):
                continue
            survivors.append(p)
        others = survivors

    out = sorted(kept + others, key=_gen_key)
    if len(out) > cfg.MAX_GENERATORS:
        raise BudgetExceededError(f"ideal has {len(out)} generators, limit {cfg.MAX_GENERATORS}")
    return tuple(out)


# --- ORDERS ---

def ord_at(I, point=None):
    """Order of I at ``point`` (default: its base point); 0 for a local unit."""
    point = I.base_point if point is None else tuple(rat(v) for v in point)
    best = INFINITY
    for g in I.generators:
        if g.is_zero and g.exact:
            continue
        local = g.translate(point) if any(v != 0 for v in point) else g
        best = min(best, local.ord_origin())
    return best


# --- DERIVATIVES ---

def derivative_ideal(I, settings=None):
    """D^{<=1}I: the generators together with all their first partials."""
    gens = list(I.generators)
    for g in I.generators:
        for i in range(I.ring.ngens):
            gens.append(g.partial(i))
    return I.with_generators(prune(gens, settings))


def derivative_chain(I, k, settings=None):
    """[D^{<=0}I, D^{<=1}I, ..., D^{<=k}I]."""
    chain = [I.with_generators(prune(I.generators, settings))]
    for _ in range(k):
        prev = chain[-1]
        if prev.is_unit:
            chain.append(prev)
            continue
        chain.append(derivative_ideal(prev, settings))
    return chain


def derivative_power(I, k, settings=None):
    """D^{<=k}I by iteration."""
    if k == 0:
        return I
    return derivative_chain(I, k, settings)[-1]


# --- SUMS, PRODUCTS, POWERS ---

def _check_same(I, J):
    if I.ring.names != J.ring.names:
        raise RingMismatchError(f"{I.ring} vs {J.ring}")


def ideal_sum(I, J, settings=None):
    _check_same(I, J)
    return I.with_generators(prune(I.generators + J.generators, settings))


def product(I, J, settings=None):
    _check_same(I, J)
    cfg = settings or default_settings
    left = [g for g in I.generators if not g.is_zero] or [I.generators[0]]
    right = [g for g in J.generators if not g.is_zero] or [J.generators[0]]
    if len(left) * len(right) > 50 * cfg.MAX_GENERATORS:
        raise BudgetExceededError(
            f"product of {len(left)} by {len(right)} generators exceeds the budget")
    return I.with_generators(prune([f * g for f in left for g in right], cfg))


def power(I, k, settings=None):
    """k-fold product, by repeated squaring with pruning at every step."""
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return Ideal.unit(I.ring)
    if k == 1:
        return I
    gens = [g for g in I.generators if not g.is_zero]
    if len(gens) == 1:
        return I.with_generators((gens[0] ** k,))
    result, base = None, I
    while k:
        if k & 1:
            result = base if result is None else product(result, base, settings)
        k >>= 1
        if k:
            base = product(base, base, settings)
    return result


# --- RESTRICTION ---

def restrict(I, kill):
    """Set the killed coordinates to zero; the result lives in the smaller ring."""
    names = {I.ring.names[k] if isinstance(k, int) else k for k in kill}
    sub = I.ring.without(names)
    point = tuple(v for n, v in zip(I.ring.names, I.base_point) if n not in names)
    gens = [g.restrict(sub) for g in I.generators]
    nonzero = [g for g in gens if not (g.is_zero and g.exact)]
    return Ideal(sub, tuple(nonzero or [sub.zero]), point)


# --- STRATA ---

def max_order_stratum(I, settings=None):
    """Largest a with D^{<=a-1}I proper, and that ideal (the locus ord >= a).

    Raises ValueError for the zero or unit ideal.
    """
    if I.is_zero:
        raise ValueError("the zero ideal has no top order stratum")
    if groebner.is_trivial(I.generators, settings):
        raise ValueError(f"{I} is the unit ideal")
    bound = max(g.total_degree() for g in I.generators)
    current = I.with_generators(prune(I.generators, settings))
    a = 1
    while a <= bound:
        nxt = derivative_ideal(current, settings)
        if nxt.is_unit or groebner.is_trivial(nxt.generators, settings):
            break
        current = nxt
        a += 1
    logger.debug("top order stratum at a=%d", a)
    return a, current
