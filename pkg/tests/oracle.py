# tests/oracle.py
"""Brute-force cross-checks for the test suite; the wres package never imports this.

Nothing here takes the shortcuts of the production path: supports are
enumerated term by term, G_(a!) is built from every admissible tuple, and
the top order locus is searched over a rational grid.  Only the final
ranking of the top order grid points uses the library invariant, so
grid_maxinv checks candidate selection, not the invariant itself.
"""
import itertools
import logging
import math

from wres.algebra import INFINITY, rat
from wres.invariant import invariant_at_auto
from wres.localideal import Ideal

logger = logging.getLogger(__name__)

MAX_ORACLE_ORDER = 3
MAX_GRID_VARIABLES = 4


def _flag_support(center, p):
    flag = center.flag
    if all(q == flag.ring.gen(i) for i, q in zip(flag.pivots, flag.parameters)):
        local = p.translate(flag.base_point) if any(v != 0 for v in flag.base_point) else p
        return [m for m, c in local.terms() if c != 0]
    return [m for m, c in flag.rewrite(p).terms() if c != 0]


def brute_admissible(center, I):
    """sum_i alpha_i / a_i >= 1 for every monomial of every generator, in flag coordinates."""
    pivots = center.flag.pivots
    for g in I.generators:
        if g.is_zero:
            continue
        for m in _flag_support(center, g):
            total = sum((rat(m[i]) / a for i, a in zip(pivots, center.exponents)), rat(0))
            if total < 1:
                return False
    return True


# --- G_(a!) ---

def _unique(polys):
    seen = {p.monic() for p in polys if not p.is_zero}
    return sorted(seen, key=lambda p: (p.total_degree(), str(p)))


def _derivative_levels(I, a):
    levels = [_unique(I.generators) or [I.ring.zero]]
    for _ in range(a - 1):
        prev = levels[-1]
        nxt = list(prev)
        for g in prev:
            nxt.extend(g.partial(i) for i in range(I.ring.ngens))
        levels.append(_unique(nxt) or [I.ring.zero])
    return levels


def _level_power(gens, b):
    """Generators of (gens)^b, one per multiset of factors."""
    out = []
    for combo in itertools.combinations_with_replacement(gens, b):
        acc = combo[0]
        for g in combo[1:]:
            acc = acc * g
        out.append(acc)
    return out


def _products(lists):
    out = lists[0]
    for gens in lists[1:]:
        out = _unique(acc * g for acc in out for g in gens)
    return out


def full_coefficient_ideal(I, a):
    """Sum over every (b_0, ..., b_(a-1)) with sum (a-i) b_i in [a!, a!+a) of prod (D^(<=i)I)^b_i.

    Raises ValueError for a outside 1..3.
    """
    if not 1 <= a <= MAX_ORACLE_ORDER:
        raise ValueError(f"full enumeration supports 1 <= a <= {MAX_ORACLE_ORDER}, got {a}")
    target = math.factorial(a)
    levels = _derivative_levels(I, a)
    ranges = [range(0, (target + a) // (a - i) + 1) for i in range(a)]
    gens = set()
    for b in itertools.product(*ranges):
        weight = sum((a - i) * bi for i, bi in enumerate(b))
        if not target <= weight < target + a:
            continue
        factors = [_unique(_level_power(levels[i], bi)) for i, bi in enumerate(b) if bi]
        gens.update(p for p in _products(factors) if not p.is_zero)
    ordered = sorted(gens, key=lambda p: (p.total_degree(), str(p)))
    return Ideal(I.ring, tuple(ordered) or (I.ring.zero,), I.base_point)


def admissible_for_coefficient(center, I, a):
    return brute_admissible(center, full_coefficient_ideal(I, a))


# --- GRID MAXINV ---

def _grid_values(bound):
    values = {rat(p) / q for p in range(-bound, bound + 1) for q in range(1, bound + 1)}
    return sorted(values)


def _order(I, point):
    best = INFINITY
    for g in I.generators:
        if g.is_zero:
            continue
        local = g.translate(point)
        best = min(best, min(sum(m) for m, _ in local.terms()))
    return best


def grid_maxinv(I, bound, settings=None):
    """Best (point, Invariant) over rational grid points of V(I); None if the grid misses V(I).

    Points are filtered by brute-force order; the survivors are ranked by
    the library invariant.

    Raises ValueError for more than four variables.
    """
    n = I.ring.ngens
    if n > MAX_GRID_VARIABLES:
        raise ValueError(f"grid search is limited to {MAX_GRID_VARIABLES} variables")
    on_locus = [pt for pt in itertools.product(_grid_values(bound), repeat=n)
                if all(g.evaluate(pt) == 0 for g in I.generators)]
    if not on_locus:
        return None
    orders = {pt: _order(I, pt) for pt in on_locus}
    top = max(orders.values())
    best = None
    for pt in sorted((p for p in on_locus if orders[p] == top),
                     key=lambda p: (any(v != 0 for v in p), p)):
        inv, _ = invariant_at_auto(I, pt, settings)
        if best is None or best[1] < inv:
            best = (pt, inv)
    logger.debug("grid maxinv %s over %d points", best[1], len(on_locus))
    return best
