# wres/algebra.py
"""Exact arithmetic foundation.

Polynomials are thin immutable wrappers around sympy ``PolyElement`` values
over ``QQ`` in graded-lex order.  A ring may carry a truncation bound N (jet
mode), in which case every result drops terms of total degree > N and
remembers whether anything was dropped.
"""
import math
from dataclasses import dataclass
from functools import cached_property

from sympy import QQ, Symbol
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyRing

from .exceptions import (
    NotInvertibleError,
    RingMismatchError,
    TruncationBoundError,
)

Rat = type(QQ(1))
INFINITY = math.inf


def rat(value):
    """Coerce int / "p/q" text / Fraction / QQ element to an exact rational."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return QQ(int(num), int(den))
        return QQ(int(text))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    return QQ.convert(value)


def format_rat(value):
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# --- RINGS ---

@dataclass(frozen=True)
class Ring:
    names: tuple
    truncation: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise ValueError("a ring needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        if self.truncation is not None and self.truncation < 1:
            raise ValueError("truncation bound must be >= 1")

    @cached_property
    def sympy_ring(self):
        return PolyRing([Symbol(n) for n in self.names], QQ, grlex)

    @property
    def ngens(self):
        return len(self.names)

    @property
    def is_jet(self):
        return self.truncation is not None

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise RingMismatchError(f"variable {name!r} not in ring {self.names}")

    def gen(self, which):
        i = which if isinstance(which, int) else self.index(which)
        return Poly(self, self.sympy_ring.gens[i])

    def gens(self):
        return [self.gen(i) for i in range(self.ngens)]

    def const(self, value):
        return Poly(self, self.sympy_ring.ground_new(rat(value)))

    @property
    def zero(self):
        return Poly(self, self.sympy_ring.zero)

    @property
    def one(self):
        return Poly(self, self.sympy_ring.one)

    def from_terms(self, terms, exact=True):
        """Build a Poly from ``{exponent tuple: coefficient}``."""
        clean = {tuple(m): rat(c) for m, c in terms.items() if c != 0}
        return Poly(self, self.sympy_ring.from_dict(clean) if clean else self.sympy_ring.zero, exact)

    def with_truncation(self, bound):
        return Ring(self.names, bound)

    def exact_ring(self):
        return Ring(self.names)

    def without(self, names):
        """Sub-ring dropping the given variable names."""
        drop = set(names)
        return Ring(tuple(n for n in self.names if n not in drop), self.truncation)

    def origin(self):
        return tuple(QQ(0) for _ in self.names)

    def _truncate(self, element):
        bound = self.truncation
        if bound is None or not element:
            return element, False
        kept = {m: c for m, c in element.items() if sum(m) <= bound}
        if len(kept) == len(element):
            return element, False
        return (self.sympy_ring.from_dict(kept) if kept else self.sympy_ring.zero), True

    def __str__(self):
        return ",".join(self.names)


# --- POLYNOMIALS ---

class Poly:
    """Immutable sparse polynomial; ``exact`` is False once jet truncation dropped terms."""

    __slots__ = ("ring", "element", "exact")

    def __init__(self, ring, element, exact=True):
        element, dropped = ring._truncate(element)
        self.ring = ring
        self.element = element
        self.exact = exact and not dropped

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ring.names != self.ring.names:
                raise RingMismatchError(f"{other.ring} vs {self.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        return Poly(self.ring, self.element + other.element, self.exact and other.exact)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, -self.element, self.exact)

    def __sub__(self, other):
        other = self._coerce(other)
        return Poly(self.ring, self.element - other.element, self.exact and other.exact)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return Poly(self.ring, self.element * other.element, self.exact and other.exact)

    __rmul__ = __mul__

    def __pow__(self, exponent):
        if exponent < 0:
            raise ValueError("negative exponent")
        result, base = self.ring.one, self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring.names == other.ring.names and self.element == other.element
        try:
            return self.element == self.ring.const(other).element
        except Exception:
            return NotImplemented

    def __hash__(self):
        return hash((self.ring.names, frozenset(self.element.items())))

    def __bool__(self):
        return bool(self.element)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return format_poly(self)

    # inspection

    def terms(self):
        """(exponent, coefficient) pairs, descending graded-lex."""
        return self.element.terms()

    @property
    def is_zero(self):
        return not self.element

    @property
    def is_constant(self):
        return all(sum(m) == 0 for m in self.element)

    def constant_term(self):
        return self.element.get((0,) * self.ring.ngens, QQ(0))

    def is_monomial(self):
        return len(self.element) == 1

    def total_degree(self):
        return max((sum(m) for m in self.element), default=-1)

    def ord_origin(self):
        """Minimal total degree of a term; infinity for zero.

        Raises TruncationBoundError if a jet truncation left nothing to read.
        """
        if not self.element:
            if not self.exact:
                raise TruncationBoundError(
                    f"order exceeds truncation bound {self.ring.truncation}")
            return INFINITY
        return min(sum(m) for m in self.element)

    def linear_part(self):
        """Coefficients of the degree-one terms, keyed by variable index."""
        out = {}
        for m, c in self.element.items():
            if sum(m) == 1:
                out[m.index(1)] = c
        return out

    def variables(self):
        return {i for m in self.element for i, e in enumerate(m) if e}

    def lead_coefficient(self):
        return self.element.LC if self.element else QQ(0)

    def monic(self):
        return Poly(self.ring, self.element.monic(), self.exact) if self.element else self

    def scale(self, factor):
        return Poly(self.ring, self.element * rat(factor), self.exact)

    def evaluate(self, point):
        point = [rat(v) for v in point]
        total = QQ(0)
        for m, c in self.element.items():
            term = c
            for v, e in zip(point, m):
                if e:
                    term *= v ** e
            total += term
        return total

    # calculus

    def partial(self, index):
        """Formal derivative; an inexact jet loses its (unknown) top degree."""
        element = self.element.diff(self.ring.sympy_ring.gens[index])
        if not self.exact and self.ring.is_jet:
            top = self.ring.truncation
            element = self.ring.sympy_ring.from_dict(
                {m: c for m, c in element.items() if sum(m) < top})
        return Poly(self.ring, element, self.exact)

    def translate(self, point):
        """p(x + point), expanded exactly."""
        point = [rat(v) for v in point]
        if all(v == 0 for v in point):
            return self
        return substitute(self, PolyMap.translation(self.ring, point))

    # divisibility

    def div_exact(self, other):
        """Quotient when ``other`` divides ``self`` exactly, else None."""
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        quotient, remainder = self.element.div(other.element)
        if remainder:
            return None
        return Poly(self.ring, quotient, self.exact and other.exact)

    def variable_power(self, index):
        """Largest m with x_index^m dividing self (infinity for zero)."""
        if not self.element:
            return INFINITY
        return min(m[index] for m in self.element)

    def divide_variable_power(self, index, power):
        if power == 0:
            return self
        if self.variable_power(index) < power:
            raise ValueError(f"{self.ring.names[index]}^{power} does not divide {self}")
        shifted = {}
        for m, c in self.element.items():
            m = list(m)
            m[index] -= power
            shifted[tuple(m)] = c
        return self.ring.from_terms(shifted, self.exact)

    # moving between rings

    def embed(self, ring):
        """Same polynomial in a ring whose names contain ours."""
        if ring.names == self.ring.names:
            return Poly(ring, ring.sympy_ring.from_dict(dict(self.element)) if self.element
                        else ring.sympy_ring.zero, self.exact)
        slots = [ring.index(n) for n in self.ring.names]
        terms = {}
        for m, c in self.element.items():
            target = [0] * ring.ngens
            for slot, e in zip(slots, m):
                target[slot] = e
            terms[tuple(target)] = c
        return ring.from_terms(terms, self.exact)

    def restrict(self, ring):
        """Set every variable missing from ``ring`` to zero."""
        slots = [self.ring.index(n) for n in ring.names]
        keep = set(slots)
        terms = {}
        for m, c in self.element.items():
            if any(e for i, e in enumerate(m) if i not in keep):
                continue
            terms[tuple(m[s] for s in slots)] = c
        return ring.from_terms(terms, self.exact)


def format_poly(p):
    if p.is_zero:
        return "0"
    names = p.ring.names
    chunks = []
    for m, c in p.terms():
        mono = "*".join(names[i] if e == 1 else f"{names[i]}^{e}"
                        for i, e in enumerate(m) if e)
        size = -c if c < 0 else c
        if not mono:
            body = format_rat(size)
        elif size == 1:
            body = mono
        else:
            body = f"{format_rat(size)}*{mono}"
        if not chunks:
            chunks.append(f"-{body}" if c < 0 else body)
        else:
            chunks.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(chunks)


# --- MAPS ---

@dataclass(frozen=True)
class PolyMap:
    """Ring map sending source variable i to ``images[i]`` (a Poly of the target)."""

    source: Ring
    target: Ring
    images: tuple
    exact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source.ngens:
            raise ValueError("one image per source variable is required")
        for img in self.images:
            if img.ring.names != self.target.names:
                raise RingMismatchError(f"image {img} not in target ring {self.target}")

    @classmethod
    def identity(cls, ring):
        return cls(ring, ring, tuple(ring.gens()))

    @classmethod
    def translation(cls, ring, point):
        return cls(ring, ring, tuple(g + rat(v) for g, v in zip(ring.gens(), point)))

    @classmethod
    def from_names(cls, source, target, assignments):
        """Variables named in ``assignments`` go to the given images, others to themselves."""
        images = []
        for name in source.names:
            if name in assignments:
                images.append(assignments[name])
            else:
                images.append(target.gen(name))
        return cls(source, target, tuple(images))

    def __call__(self, p):
        return substitute(p, self)

    def then(self, other):
        """Map ``p -> other(self(p))``."""
        images = tuple(substitute(img, other) for img in self.images)
        return PolyMap(self.source, other.target, images, self.exact and other.exact)

    def is_identity(self):
        return (self.source.names == self.target.names
                and all(img == g for img, g in zip(self.images, self.target.gens())))

    def linear_matrix(self):
        n = self.target.ngens
        rows = []
        for img in self.images:
            lin = img.linear_part()
            rows.append([lin.get(j, QQ(0)) for j in range(n)])
        return DomainMatrix(rows, (len(rows), n), QQ)

    def __str__(self):
        return ", ".join(f"{n} = {img}" for n, img in zip(self.source.names, self.images))


def substitute(p, m):
    """Composition p(images), truncated in jet mode."""
    if p.ring.names != m.source.names:
        raise RingMismatchError(f"{p.ring} is not the source ring {m.source}")
    target = m.target
    sring = target.sympy_ring
    cache = [dict() for _ in m.images]
    dropped = False

    def cut(element):
        nonlocal dropped
        element, lost = target._truncate(element)
        dropped = dropped or lost
        return element

    def power(i, e):
        table = cache[i]
        if e not in table:
            if e == 1:
                table[e] = m.images[i].element
            else:
                half = power(i, e // 2)
                value = cut(half * half)
                if e % 2:
                    value = cut(value * m.images[i].element)
                table[e] = value
        return table[e]

    acc = sring.zero
    for monom, coeff in p.element.items():
        term = sring.ground_new(coeff)
        for i, e in enumerate(monom):
            if e:
                term = cut(term * power(i, e))
                if not term:
                    break
        acc += term
    exact = p.exact and m.exact and all(img.exact for img in m.images) and not dropped
    return Poly(target, acc, exact)


# --- AUTOMORPHISMS ---

def invert_automorphism(m, bound=None):
    """Inverse of an origin-fixing map with invertible linear part.

    Solves ``A n = s - h(n)`` by fixed-point iteration.  Triangular maps
    converge after finitely many rounds and give an exact inverse; anything
    else needs a truncation bound and yields a jet inverse marked inexact.
    """
    n = m.source.ngens
    if m.target.ngens != n:
        raise NotInvertibleError("source and target dimensions differ")
    for img in m.images:
        if img.constant_term() != 0:
            raise NotInvertibleError(f"image {img} does not fix the origin")
    matrix = m.linear_matrix()
    if matrix.det() == 0:
        raise NotInvertibleError(f"singular linear part for map [{m}]")
    inverse = matrix.inv().to_list()

    src = m.source
    nonlinear = [img - _linear(img) for img in m.images]

    def iterate(current, ring):
        guess = PolyMap(m.target, ring, current)
        hv = [substitute(h, guess) for h in nonlinear]
        gens = ring.gens()
        images = []
        for j in range(n):
            acc = ring.zero
            for i in range(n):
                coeff = inverse[j][i]
                if coeff:
                    acc = acc + (gens[i] - hv[i]).scale(coeff)
            images.append(acc)
        return tuple(images)

    def linear_start(ring):
        gens = ring.gens()
        return tuple(sum((gens[i].scale(inverse[j][i]) for i in range(n) if inverse[j][i]),
                         ring.zero) for j in range(n))

    # exact attempt
    work = src
    current = linear_start(work)
    cap = 8 * n * max(2, max(img.total_degree() for img in m.images))
    converged = False
    for _ in range(n + 2):
        nxt = iterate(current, work)
        if nxt == current:
            converged = True
            break
        current = nxt
        if any(img.total_degree() > cap for img in current):
            break

    if converged:
        candidate = PolyMap(m.target, work, current)
        if all(img.exact for img in current) and _composes_to_identity(m, candidate):
            return candidate

    bound = bound or src.truncation
    if bound is None:
        raise TruncationBoundError(
            f"map [{m}] is not triangular; a jet bound is required to invert it")
    jet = src.with_truncation(bound)
    current = linear_start(jet)
    for _ in range(bound + 1):
        nxt = iterate(current, jet)
        if nxt == current:
            break
        current = nxt
    images = tuple(Poly(jet, img.element, False) for img in current)
    return PolyMap(m.target, jet, images, exact=False)


def _linear(p):
    terms = {}
    for m, c in p.element.items():
        if sum(m) == 1:
            terms[m] = c
    return p.ring.from_terms(terms)


def _composes_to_identity(m, inverse):
    gens = inverse.target.gens()
    return all(substitute(img, inverse) == g for img, g in zip(m.images, gens))
