import pytest
from sympy import QQ

from wres.exceptions import PolySyntaxError
from wres.parser import parse, parse_ideal, parse_point, parse_ring, tokenize, variables_in


def test_tokens_carry_positions():
    kinds = [(k, v, p) for k, v, p in tokenize("x^2 + 3")]
    assert kinds[0] == ("ident", "x", 0)
    assert kinds[-2] == ("int", "3", 6)
    assert kinds[-1][0] == "end"


def test_variables_in_order_of_appearance():
    assert variables_in("y*x + y") == ["y", "x"]
    assert parse("y*x + y").ring.names == ("y", "x")


def test_primed_names_and_rationals():
    ring = parse_ring("u,y'")
    p = parse("1 + y'^3 + u*y'^8", ring)
    assert str(p) == "u*y'^8 + y'^3 + 1"
    q = parse("-1/2*u", ring)
    assert q.lead_coefficient() == QQ(-1, 2)


def test_parenthesised_powers():
    ring = parse_ring("x,y")
    assert parse("(x+y)^2 - x*(x+2*y)", ring) == parse("y^2", ring)


@pytest.mark.parametrize("text,position", [
    ("x^", 2),
    ("2x", 1),
    ("x + z", 4),
    ("x $ y", 2),
    ("1/0", 2),
])
def test_syntax_errors_name_the_offset(text, position):
    ring = parse_ring("x,y")
    with pytest.raises(PolySyntaxError) as err:
        parse(text, ring)
    assert err.value.position == position


def test_parse_ideal_and_point():
    ring = parse_ring("x,y,z")
    gens = parse_ideal("x^2, y^3*z", ring)
    assert [str(g) for g in gens] == ["x^2", "y^3*z"]
    assert parse_point("0, 1/2, -3", ring) == (QQ(0), QQ(1, 2), QQ(-3))
    with pytest.raises(ValueError):
        parse_point("0,1", ring)


def test_bad_ring_name():
    with pytest.raises(PolySyntaxError):
        parse_ring("x,2y")


def test_printing_round_trips():
    ring = parse_ring("x,y1,y2,y3")
    for text in ["x^2 - y1*y2*y3", "3/4*x*y1 - y2^5 + 7", "-x"]:
        p = parse(text, ring)
        assert parse(str(p), ring) == p
