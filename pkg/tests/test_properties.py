"""Seeded randomized checks of the structural identities the engine relies on."""
import math
import random

import pytest
from sympy import QQ

from wres.blowup import blowup_charts, root_stack_check
from wres.invariant import Center, ReducedCenter, center_from, invariant_at, is_admissible, reduce_center
from wres.localideal import Ideal, derivative_ideal, ideal_sum, power, product
from wres.parser import parse, parse_ring
from wres.resolve import _invariant, reembedding_check, step

from tests.oracle import brute_admissible


GOLDEN = ["cusp8", "cusp9", "cusp7", "whitney", "surface", "plane_cusp"]


# --- HOMOGENEITY ---

@pytest.mark.parametrize("name", GOLDEN)
@pytest.mark.parametrize("k", [2, 3])
def test_powers_scale_the_invariant(golden, name, k):
    inv = invariant_at(golden[name])[0]
    assert invariant_at(power(golden[name], k))[0] == inv.scaled(k)


def test_homogeneity_on_a_pair():
    ring = parse_ring("x,y,z")
    I = Ideal(ring, (parse("x^2", ring), parse("y^3*z", ring)))
    inv = invariant_at(I)[0]
    assert invariant_at(power(I, 2))[0] == inv.scaled(2)


# --- ADMISSIBILITY ---

@pytest.mark.parametrize("name", GOLDEN)
def test_emitted_center_is_maximal(golden, name):
    I = golden[name]
    c = center_from(*invariant_at(I))
    assert is_admissible(c, I)
    for i in range(len(c.exponents)):
        bumped = list(c.exponents)
        bumped[i] += QQ(1, 10)
        assert not is_admissible(Center(c.flag, tuple(bumped)), I)


def random_center(rng, ring):
    exps = {name: QQ(rng.randint(1, 6), rng.randint(1, 2)) for name in ring.names
            if rng.random() < 0.8}
    return Center.coordinates(ring, exps or {ring.names[0]: QQ(1)})


def random_ideal(rng, ring):
    gens = []
    for _ in range(rng.randint(1, 3)):
        terms = [
            "*".join(f"{n}^{rng.randint(0, 4)}" for n in ring.names)
            for _ in range(rng.randint(1, 3))
        ]
        gens.append(parse(" + ".join(terms), ring))
    return Ideal(ring, tuple(g for g in gens if not g.is_zero) or (ring.one,))


def test_valuation_matches_brute_force():
    rng = random.Random(11)
    ring = parse_ring("x,y,z")
    for _ in range(200):
        c, I = random_center(rng, ring), random_ideal(rng, ring)
        assert is_admissible(c, I) == brute_admissible(c, I)


def test_admissibility_is_stable_under_sums_products_and_powers():
    rng = random.Random(5)
    ring = parse_ring("x,y")
    checked = 0
    for _ in range(400):
        c, I, J = random_center(rng, ring), random_ideal(rng, ring), random_ideal(rng, ring)
        if not (is_admissible(c, I) and is_admissible(c, J)):
            continue
        checked += 1
        assert is_admissible(c, ideal_sum(I, J))
        assert is_admissible(c, product(I, J))
        scaled = Center(c.flag, tuple(2 * a for a in c.exponents))
        assert is_admissible(scaled, power(I, 2))
    assert checked > 0


def min_valuation(c, I):
    names = c.flag.names
    idx = [I.ring.index(n) for n in names]
    return min(
        sum((QQ(m[i]) / a for i, a in zip(idx, c.exponents)), QQ(0))
        for g in I.generators if not g.is_zero
        for m, _ in g.terms()
    )


def test_derivatives_lose_at_most_the_largest_step():
    rng = random.Random(3)
    ring = parse_ring("x,y,z")
    for _ in range(200):
        c, I = random_center(rng, ring), random_ideal(rng, ring)
        D = derivative_ideal(I)
        if D.is_zero:
            continue
        step_size = max(1 / a for a in c.exponents)
        assert min_valuation(c, D) >= min_valuation(c, I) - step_size


# --- ROOT STACKS ---

@pytest.mark.parametrize("c", [2, 3])
def test_root_stack_on_random_weights(c):
    rng = random.Random(c)
    ring = parse_ring("x,y,z")
    flag = Center.coordinates(ring, {"x": 1, "y": 1, "z": 1}).flag
    for _ in range(10):
        weights = [rng.randint(1, 5) for _ in range(3)]
        g = math.gcd(*weights)
        rc = ReducedCenter(flag, tuple(w // g for w in weights), math.lcm(*weights) // g)
        assert root_stack_check(rc, c)
        assert [ch.group_order for ch in blowup_charts(rc, c).charts] == [c * w for w in rc.weights]


# --- DESCENT ---

@pytest.mark.parametrize("name", ["cusp8", "cusp9", "cusp7", "whitney", "surface"])
def test_one_step_lowers_the_invariant(golden, cfg, name):
    result = step(golden[name], cfg)
    for ch, J in zip(result.blowup.charts, result.transforms):
        if J.generators[0].constant_term() != 0:
            continue
        assert _invariant(J, ch.ring.origin(), cfg)[0] < result.candidate.invariant


def test_reduction_keeps_exponent_ratios(golden):
    for name in ("cusp8", "cusp7", "whitney", "surface"):
        c = center_from(*invariant_at(golden[name]))
        rc = reduce_center(c)
        ratios = {a * w for a, w in zip(c.exponents, rc.weights)}
        assert len(ratios) == 1


# --- RE-EMBEDDING ---

@pytest.mark.parametrize("name", ["cusp7", "surface"])
def test_reembedding_adds_a_leading_one(golden, settings, name):
    assert reembedding_check(golden[name], settings)
