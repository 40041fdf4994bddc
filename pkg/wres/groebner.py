# wres/groebner.py
"""A small Buchberger engine over QQ.

Used for membership, triviality (1 in I), elimination, ideal quotients and
rational points of zero-dimensional loci.  Jet-mode rings are rejected.
"""
import logging
from dataclasses import dataclass, field

from sympy import QQ, Poly as SymPoly, Symbol
from sympy.polys.orderings import grlex, lex
from sympy.polys.rings import PolyRing

from .algebra import Poly, Ring
from .config import settings as default_settings
from .exceptions import BudgetExceededError, JetModeError, RingMismatchError
from .metrics import BUCHBERGER_DURATION, BUCHBERGER_RUNS

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GBasis:
    """Reduced Groebner basis of an ideal of ``ring``.

    ``order`` is ``"grlex"`` or ``"lex"``; ``eliminate`` lists the variables
    placed first (largest) in a lex block order.
    """

    ring: Ring
    generators: tuple
    order: str = "grlex"
    eliminate: tuple = ()
    work: PolyRing = field(repr=False, compare=False, default=None)
    perm: tuple = field(repr=False, compare=False, default=())
    elements: tuple = field(repr=False, compare=False, default=())

    @property
    def is_unit(self):
        return len(self.generators) == 1 and self.generators[0].is_constant \
            and not self.generators[0].is_zero

    def lead_monomials(self):
        """Leading exponents, in ``ring`` variable order."""
        inverse = _inverse(self.perm)
        return [tuple(e.LM[k] for k in inverse) for e in self.elements]

    def normal_form(self, p):
        if p.ring.names != self.ring.names:
            raise RingMismatchError(f"{p.ring} vs {self.ring}")
        if not self.elements:
            return p
        rem = _to_work(p, self.work, self.perm).rem(list(self.elements))
        return _from_work(rem, self.ring, self.perm)

    def contains(self, p):
        return self.normal_form(p).is_zero


# --- RING PLUMBING ---

def _work_ring(ring, order, eliminate):
    front = [n for n in ring.names if n in eliminate]
    back = [n for n in ring.names if n not in eliminate]
    names = front + back
    perm = tuple(ring.names.index(n) for n in names)
    work = PolyRing([Symbol(n) for n in names], QQ, lex if order == "lex" else grlex)
    return work, perm


def _inverse(perm):
    inv = [0] * len(perm)
    for slot, src in enumerate(perm):
        inv[src] = slot
    return tuple(inv)


def _to_work(p, work, perm):
    terms = {tuple(m[src] for src in perm): c for m, c in p.element.items()}
    return work.from_dict(terms) if terms else work.zero


def _from_work(element, ring, perm):
    inverse = _inverse(perm)
    return ring.from_terms({tuple(m[k] for k in inverse): c for m, c in element.items()})


def _common_ring(polys):
    if not polys:
        raise ValueError("at least one generator is required")
    ring = polys[0].ring
    for p in polys:
        if p.ring.names != ring.names:
            raise RingMismatchError(f"{p.ring} vs {ring}")
        if p.ring.is_jet or not p.exact:
            raise JetModeError(f"Groebner bases need an exact ring, got truncation {p.ring.truncation}")
    return ring


# --- BUCHBERGER ---

def _spoly(f, g, R):
    lcm = R.monomial_lcm(f.LM, g.LM)
    return f.mul_monom(R.monomial_div(lcm, f.LM)) - g.mul_monom(R.monomial_div(lcm, g.LM))


def _update(G, P, f, R):
    """Add f to G and the new pairs to P (Gebauer-Moeller criteria)."""
    lcm, mul, div = R.monomial_lcm, R.monomial_mul, R.monomial_div
    lmf = f.LM
    lmG = [g.LM for g in G]
    P = {p for p in P
         if not div(lcm(lmG[p[0]], lmG[p[1]]), lmf)
         or lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf)
         or lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf)}
    by_lcm = {}
    for i in range(len(G)):
        by_lcm.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimal = []
    for L in sorted(by_lcm, key=R.order):
        if all(not div(L, M) for M in minimal):
            minimal.append(L)
    new = set()
    for L in minimal:
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in by_lcm[L]):
            new.add((min(by_lcm[L]), len(G)))
    return G + [f], P | new


def _check_budget(G, cfg):
    if len(G) > cfg.GB_MAX_BASIS:
        raise BudgetExceededError(f"Groebner basis grew past {cfg.GB_MAX_BASIS} elements")
    degree = max(sum(g.LM) for g in G)
    if degree > cfg.GB_MAX_DEGREE:
        raise BudgetExceededError(f"Groebner basis degree {degree} exceeds {cfg.GB_MAX_DEGREE}")


def _reduced(G, R):
    """Minimalize, then interreduce to monic form."""
    minimal = []
    for f in sorted(G, key=lambda h: R.order(h.LM)):
        if all(not R.monomial_div(f.LM, g.LM) for g in minimal):
            minimal.append(f)
    out = []
    for i, g in enumerate(minimal):
        out.append(g.rem(minimal[:i] + minimal[i + 1:]).monic())
    return sorted(out, key=lambda h: R.order(h.LM), reverse=True)


def buchberger(polys, order="grlex", eliminate=(), settings=None):
    """Reduced Groebner basis; S-pairs in normal strategy with (lcm, i, j) tie-breaks.

    Raises JetModeError if any generator lives in a jet ring.
    Raises BudgetExceededError if the basis outgrows the configured guard.
    """
    cfg = settings or default_settings
    ring = _common_ring(list(polys))
    if eliminate:
        order = "lex"
    work, perm = _work_ring(ring, order, set(eliminate))
    tag = order if not eliminate else f"lex:{len(eliminate)}"
    BUCHBERGER_RUNS.labels(order=tag).inc()

    with BUCHBERGER_DURATION.labels(order=tag).time():
        F = [_to_work(p, work, perm) for p in polys]
        F = [f for f in F if f]
        if not F:
            return GBasis(ring, (ring.zero,), order, tuple(eliminate), work, perm, ())
        if any(f.is_ground for f in F):
            one = work.one
            return GBasis(ring, (ring.one,), order, tuple(eliminate), work, perm, (one,))

        G, P = [], set()
        for f in F:
            G, P = _update(G, P, f.monic(), work)
        while P:
            i, j = min(P, key=lambda p: (work.order(work.monomial_lcm(G[p[0]].LM, G[p[1]].LM)), p))
            P.remove((i, j))
            r = _spoly(G[i], G[j], work).rem(G)
            if r:
                if r.is_ground:
                    G = [work.one]
                    break
                G, P = _update(G, P, r.monic(), work)
                _check_budget(G, cfg)
        basis = _reduced(G, work)

    logger.debug("Groebner basis with %d elements", len(basis), extra={"order": tag})
    gens = tuple(_from_work(b, ring, perm) for b in basis)
    return GBasis(ring, gens, order, tuple(eliminate), work, perm, tuple(basis))


# --- QUERIES ---

def is_trivial(polys, settings=None):
    """True iff 1 lies in the ideal generated by ``polys``."""
    polys = list(polys)
    if any(p.is_constant and not p.is_zero for p in polys):
        return True
    if all(p.is_zero for p in polys):
        return False
    return buchberger(polys, settings=settings).is_unit


def member(p, polys, settings=None):
    gb = polys if isinstance(polys, GBasis) else buchberger(list(polys), settings=settings)
    return gb.contains(p)


def eliminate(polys, keep_names, settings=None):
    """Generators of the elimination ideal, living in the ring of ``keep_names``."""
    ring = _common_ring(list(polys))
    keep = set(keep_names)
    drop = [n for n in ring.names if n not in keep]
    if not drop:
        return list(buchberger(polys, settings=settings).generators)
    gb = buchberger(polys, eliminate=tuple(drop), settings=settings)
    sub = ring.without(drop)
    slots = [ring.index(n) for n in drop]
    out = [g.restrict(sub) for g in gb.generators
           if not g.is_zero and all(m[s] == 0 for s in slots for m, _ in g.terms())]
    return out or [sub.zero]


def ideal_quotient(polys, h, settings=None):
    """Generators of (I : h), via I intersected with (h) then divided by h."""
    ring = _common_ring(list(polys))
    if h.is_zero:
        return [ring.one]
    fresh = "_t"
    while fresh in ring.names:
        fresh += "_"
    big = Ring(ring.names + (fresh,))
    t = big.gen(fresh)
    lifted = [t * p.embed(big) for p in polys] + [(big.one - t) * h.embed(big)]
    meet = eliminate(lifted, ring.names, settings=settings)
    out = []
    for g in meet:
        if g.is_zero:
            continue
        q = g.embed(ring).div_exact(h)
        if q is None:
            raise ArithmeticError(f"{h} does not divide intersection generator {g}")
        out.append(q)
    return out or [ring.zero]


# --- POINTS ---

@dataclass(frozen=True)
class PointSet:
    """Rational points of a locus; the flags mark what could not be listed."""

    points: tuple = ()
    positive_dimensional: bool = False
    irrational: bool = False


def _univariate(p, index, values):
    """Coefficients (highest first) of p in x_index after fixing later coordinates."""
    coeffs = {}
    for m, c in p.element.items():
        term = c
        for j, e in enumerate(m):
            if j > index and e:
                term *= values[j] ** e
        coeffs[m[index]] = coeffs.get(m[index], QQ(0)) + term
    degree = max((d for d, c in coeffs.items() if c), default=-1)
    return [coeffs.get(d, QQ(0)) for d in range(degree, -1, -1)]


def rational_points_zero_dim(polys, settings=None):
    """All rational solutions of a zero-dimensional system.

    Back-substitutes through a lex basis, taking rational roots of the gcd
    of the univariate specializations at each level.
    """
    ring = _common_ring(list(polys))
    gb = buchberger(polys, order="lex", settings=settings)
    if gb.is_unit:
        return PointSet()
    if all(g.is_zero for g in gb.generators):
        return PointSet(positive_dimensional=True)
    n = ring.ngens
    leads = gb.lead_monomials()
    for i in range(n):
        if not any(m[i] > 0 and sum(m) == m[i] for m in leads):
            return PointSet(positive_dimensional=True)

    t = Symbol("t")
    irrational = False
    partial = [dict()]
    for i in range(n - 1, -1, -1):
        level = [g for g in gb.generators
                 if all(m[j] == 0 for m, _ in g.terms() for j in range(i))]
        extended = []
        for values in partial:
            full = [values.get(j, QQ(0)) for j in range(n)]
            common = None
            for g in level:
                coeffs = _univariate(g, i, full)
                if not coeffs or all(c == 0 for c in coeffs):
                    continue
                u = SymPoly([QQ.to_sympy(c) for c in coeffs], t, domain=QQ)
                common = u if common is None else common.gcd(u)
            if common is None:
                raise ArithmeticError(f"no eliminant for {ring.names[i]}")
            if common.degree() <= 0:
                continue
            roots = common.ground_roots()
            if common.sqf_part().degree() > len(roots):
                irrational = True
            for r in sorted(roots):
                extended.append({**values, i: QQ.from_sympy(r)})
        partial = extended
    points = []
    for values in partial:
        pt = tuple(values[j] for j in range(n))
        if all(p.evaluate(pt) == 0 for p in polys):
            points.append(pt)
    return PointSet(tuple(sorted(points)), False, irrational)


def _linear_root(f, n):
    """(j, c) when the factor f is a nonzero multiple of x_j - c, else None."""
    used = {i for m in f.keys() for i, e in enumerate(m) if e}
    if len(used) != 1 or max(sum(m) for m in f.keys()) != 1:
        return None
    (j,) = used
    slope = f[tuple(1 if i == j else 0 for i in range(n))]
    return j, -f.get((0,) * n, QQ(0)) / slope


def coordinate_values(polys, settings=None):
    """Per coordinate, 0 and every c with x_j - c dividing a generator or basis element."""
    polys = [p for p in polys if not p.is_zero]
    ring = _common_ring(polys)
    n = ring.ngens
    values = {j: {QQ(0)} for j in range(n)}
    basis = buchberger(polys, settings=settings).generators
    for p in list(polys) + list(basis):
        if p.is_constant:
            continue
        _, factors = p.element.factor_list()
        for f, _ in factors:
            root = _linear_root(f, n)
            if root is not None:
                values[root[0]].add(root[1])
    return values
