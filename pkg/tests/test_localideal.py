import pytest

from wres.algebra import INFINITY
from wres.exceptions import BudgetExceededError, RingMismatchError
from wres.groebner import member
from wres.localideal import (
    Ideal,
    derivative_chain,
    derivative_ideal,
    ideal_sum,
    max_order_stratum,
    ord_at,
    power,
    product,
    prune,
    restrict,
)
from wres.parser import parse, parse_ring


def test_order_at_points(golden):
    assert ord_at(golden["cusp8"]) == 5
    assert ord_at(golden["whitney"]) == 2
    assert ord_at(golden["whitney"], (0, 1, 0, 0)) == 2
    assert ord_at(golden["whitney"], (0, 1, 1, 0)) == 1
    assert ord_at(golden["cusp8"], (1, 0)) == 0
    assert ord_at(Ideal.zero(parse_ring("x"))) == INFINITY


def test_base_point_is_respected(xy):
    I = Ideal(xy, (parse("(x-1)^2 + y^3", xy),), (1, 0))
    assert ord_at(I) == 2
    assert I.at_origin().generators[0] == parse("x^2 + y^3", xy)


def test_derivative_ideal_prunes_to_monomials(golden):
    D = derivative_ideal(golden["plane_cusp"])
    assert [str(g) for g in D.generators] == ["x", "y^2"]


def test_derivative_chain_reaches_the_unit(golden):
    chain = derivative_chain(golden["plane_cusp"], 3)
    assert len(chain) == 4
    assert chain[-1].is_unit


def test_prune_rules(xy):
    assert prune([parse("x^2", xy), parse("3", xy)]) == (xy.one,)
    assert prune([xy.zero]) == (xy.zero,)
    kept = prune([parse("x", xy), parse("2*x", xy), parse("x*y + x^3", xy), parse("y^2", xy)])
    assert [str(g) for g in kept] == ["x", "y^2"]


def test_prune_guard(xy, settings):
    tight = type("Tight", (settings,), {"MAX_GENERATORS": 2})
    with pytest.raises(BudgetExceededError):
        prune([parse("x^3", xy), parse("x*y", xy), parse("y^4", xy)], tight)


def test_sums_products_powers(xy):
    I = Ideal(xy, (parse("x", xy), parse("y", xy)))
    sq = power(I, 2)
    assert {str(g) for g in sq.generators} == {"x^2", "x*y", "y^2"}
    assert power(I, 0).is_unit
    J = Ideal(xy, (parse("x^2+y^3", xy),))
    assert power(J, 3).generators == (parse("x^2+y^3", xy) ** 3,)
    prod = product(I, J)
    assert all(member(g, [parse("x^3+x*y^3", xy), parse("x^2*y+y^4", xy)]) for g in prod.generators)
    assert len(ideal_sum(I, Ideal(xy, (parse("x*y", xy),))).generators) == 2


def test_ring_mismatch(xy):
    other = parse_ring("x,z")
    with pytest.raises(RingMismatchError):
        ideal_sum(Ideal.unit(xy), Ideal.unit(other))


def test_restrict_drops_variables(golden):
    R = restrict(golden["plane_cusp"], {"x"})
    assert R.ring.names == ("y",)
    assert str(R.generators[0]) == "y^3"
    W = restrict(golden["whitney"], [0])
    assert str(W) == "(-y1*y2*y3)"


def test_max_order_stratum(golden, xy):
    a, S = max_order_stratum(golden["cusp8"])
    assert a == 5
    assert all(g.evaluate((0, 0)) == 0 for g in S.generators)
    a, S = max_order_stratum(golden["whitney"])
    assert a == 2
    assert member(parse("x", S.ring), list(S.generators))
    with pytest.raises(ValueError):
        max_order_stratum(Ideal.unit(xy))
    with pytest.raises(ValueError):
        max_order_stratum(Ideal.zero(xy))


@pytest.mark.parametrize("name", ["cusp8", "cusp7", "plane_cusp", "whitney", "surface"])
def test_one_derivative_lowers_the_order_by_one(golden, name):
    I = golden[name]
    assert ord_at(derivative_ideal(I)) == ord_at(I) - 1


def test_derivative_order_drop_at_a_line_point(golden):
    I = golden["whitney"]
    assert ord_at(derivative_ideal(I), (0, 1, 0, 0)) == ord_at(I, (0, 1, 0, 0)) - 1 == 1


def test_fourth_derivative_ideal_of_the_cusp(golden, xy):
    D = derivative_chain(golden["cusp8"], 4)[-1]
    target = [parse("x", xy), parse("y^2", xy)]
    assert all(member(g, target) for g in D.generators)
    assert all(member(g, list(D.generators)) for g in target)
