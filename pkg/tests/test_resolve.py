from dataclasses import replace

import pytest
from sympy import QQ

from wres.blowup import stabilizer_report
from wres.exceptions import InvariantDescentError
from wres.invariant import Invariant
from wres.localideal import Ideal
from wres.parser import parse, parse_ring
from wres.resolve import (
    Config,
    _check_descent,
    _check_tracked,
    describe_point,
    maxinv_candidates,
    reembedding_check,
    resolve,
    step,
)


# --- CONFIG ---

def test_config_validation(settings):
    with pytest.raises(ValueError):
        Config(max_steps=0)
    with pytest.raises(ValueError):
        Config(mode="desingularize")
    with pytest.raises(ValueError):
        Config(root_factor=0)
    cfg = Config.from_settings(settings, max_steps=None, hints=[("1/2", "0")])
    assert cfg.max_steps == settings.MAX_STEPS
    assert cfg.hints == ((QQ(1, 2), QQ(0)),)
    assert cfg.concurrent is False


def test_engine_carries_the_contact_flag(settings):
    cfg = Config.from_settings(settings)
    assert cfg.engine is settings
    plain = Config.from_settings(settings, local_contact=False)
    assert plain.engine.FEATURE_FLAGS["local_contact_simplification"] is False
    assert settings.FEATURE_FLAGS["local_contact_simplification"] is True


# --- CANDIDATES ---

def test_whitney_candidates_are_probed(golden, cfg):
    cands = maxinv_candidates(golden["whitney"], cfg)
    assert not cands.certified and cands.order == 2
    top = cands[0]
    assert top.point == (0, 0, 0, 0)
    assert top.invariant.entries == (2, 3, 3, 3)
    assert all(c.invariant <= top.invariant for c in cands)


def test_surface_candidates_are_certified(golden, cfg):
    cands = maxinv_candidates(golden["surface"], cfg)
    assert cands.certified
    assert cands[0].point == (0, 0, 0)
    assert cands[0].invariant.entries == (4, 4, 4)


def test_candidates_reject_trivial_ideals(xy, cfg):
    with pytest.raises(ValueError):
        maxinv_candidates(Ideal.unit(xy), cfg)


def test_singular_line_off_the_grid(cfg):
    ring = parse_ring("x,y,z")
    I = Ideal(ring, (parse("x^2-(z-2)^3", ring),))
    cands = maxinv_candidates(I, cfg)
    assert not cands.certified
    assert cands[0].point == (0, 0, 2)
    assert cands[0].invariant.entries == (2, 3)
    tree = resolve(I, cfg)
    assert not tree.budget_exceeded
    assert tree.status_counts()["smooth"] == len(tree.leaves())


def test_maxinv_where_singular_lines_cross(cfg):
    ring = parse_ring("x,y,z")
    cands = maxinv_candidates(Ideal(ring, (parse("x^2-y^2*(z-3)^3", ring),)), cfg)
    assert cands[0].point == (0, 0, 3)
    assert cands[0].invariant.entries == (2, 5, 5)
    assert (0, 0, 0) in [c.point for c in cands]


# --- STEP ---

def test_step_on_the_cusp(golden, cfg):
    result = step(golden["cusp8"], cfg)
    assert str(result.center) == "(x^5, y^(15/2))"
    assert result.reduced.weights == (3, 2)
    assert len(result.transforms) == 2
    assert result.transforms[1].generators[0] == parse("x'^5 + x'^3 + u", result.blowup.charts[1].ring)


def test_step_rejects_bad_input(golden, xy, cfg):
    with pytest.raises(ValueError):
        step(Ideal.unit(xy), cfg)
    pair = Ideal(xy, (parse("x^2", xy), parse("y^3", xy)))
    with pytest.raises(ValueError):
        step(pair, cfg)


def test_divisor_step_without_rational_points(settings):
    ring = parse_ring("x")
    I = Ideal(ring, (parse("x^2 + 1", ring),))
    cfg = Config.from_settings(settings, mode="principalize")
    result = step(I, cfg)
    assert not result.certified
    assert result.blowup.charts[0].is_identity
    assert result.transforms[0].generators == (ring.one,)


def test_tracked_points_keep_their_invariant(golden, cfg):
    result = step(golden["whitney"], cfg)
    line_point = (0, 1, 0, 0)
    assert line_point in [c.point for c in result.candidates]
    _check_descent(result, cfg, 0)
    wrong = [c._replace(invariant=Invariant((2, 3, 3, 3))) if c.point == line_point else c
             for c in result.candidates]
    with pytest.raises(InvariantDescentError):
        _check_tracked(replace(result, candidates=wrong), cfg, 0)


# --- DRIVER ---

@pytest.mark.parametrize("name,rounds", [
    ("cusp8", 1),
    ("cusp7", 1),
    ("cusp9", 2),
    ("whitney", 2),
])
def test_embedded_resolution(golden, cfg, name, rounds):
    tree = resolve(golden[name], cfg)
    assert tree.rounds == rounds
    assert {leaf.status for leaf in tree.leaves()} == {"smooth"}
    assert not tree.budget_exceeded


def test_principalization_of_a_monomial_pair(xy, settings):
    I = Ideal(xy, (parse("x^2", xy), parse("y^3", xy)))
    tree = resolve(I, Config.from_settings(settings, mode="principalize"))
    assert tree.rounds == 1
    assert tree.status_counts()["principalized"] == 2
    assert tree.root.reduced.weights == (3, 2)


def test_smooth_input_is_a_single_leaf(xy, cfg):
    tree = resolve(Ideal(xy, (parse("x + y^2", xy),)), cfg)
    assert tree.rounds == 0
    assert tree.root.status == "smooth" and tree.root.provenance == "root"


def test_step_budget(golden, cfg):
    tree = resolve(golden["cusp9"], replace(cfg, max_steps=1))
    assert tree.budget_exceeded
    counts = tree.status_counts()
    assert counts["smooth"] == 1 and counts["budget-exceeded"] == 1
    assert "budget" in tree.leaves()[1].note


def test_resolve_rejects_bad_input(xy, cfg):
    with pytest.raises(ValueError):
        resolve(Ideal.zero(xy), cfg)
    with pytest.raises(ValueError):
        resolve(Ideal(xy, (parse("x", xy), parse("y", xy))), cfg)


def test_concurrent_tree_matches_sequential(golden, cfg):
    one = resolve(golden["whitney"], cfg)
    many = resolve(golden["whitney"], replace(cfg, concurrent=True, workers=4))
    assert [n.provenance for n in one.nodes()] == [n.provenance for n in many.nodes()]
    assert [str(n.ideal) for n in one.leaves()] == [str(n.ideal) for n in many.leaves()]


def test_ordinary_center_is_used_once(golden, cfg):
    tree = resolve(golden["whitney"], replace(cfg, ordinary=True, max_steps=3))
    assert tree.root.reduced.weights == (1, 1, 1, 1)
    assert len(tree.root.links) == 4


def test_tree_stabilizers(golden, cfg):
    report = stabilizer_report(resolve(golden["cusp8"], cfg))
    assert report.orders == (((1,), 3), ((2,), 2))
    assert report.branches == (((1,), 3), ((2,), 2))


# --- RE-EMBEDDING ---

@pytest.mark.parametrize("name", ["cusp8", "plane_cusp", "whitney"])
def test_reembedding(golden, settings, name):
    assert reembedding_check(golden[name], settings)


def test_describe_point():
    assert describe_point((QQ(0), QQ(-1, 2))) == "(0, -1/2)"
