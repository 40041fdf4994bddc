# wres/resolve.py
"""The resolution driver: maxinv candidates, one blowup step, and the chart tree."""
import itertools
import logging
import random
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple

from .algebra import Ring, format_rat, rat
from .blowup import Blowup, blowup_charts, point_image, proper_transform, weak_transform
from .config import settings as default_settings
from .exceptions import (
    BudgetExceededError,
    InadmissibleCenterError,
    IndeterminateError,
    InexactAutomorphismError,
    InvariantDescentError,
    TruncationBoundError,
    UnitIdealError,
)
from .groebner import coordinate_values, is_trivial, rational_points_zero_dim
from .invariant import (
    Center,
    ContactFlag,
    Invariant,
    ReducedCenter,
    center_from,
    invariant_at,
    invariant_at_auto,
    is_admissible,
    ordinary_center,
    reduce_center,
)
from .localideal import Ideal, max_order_stratum
from .metrics import BLOWUP_STEPS, TREE_LEAVES

logger = logging.getLogger(__name__)

MODES = ("principalize", "embed")
STATUSES = ("active", "smooth", "principalized", "budget-exceeded")

# failures that end a branch as budget-exceeded instead of aborting the run
_BUDGET_ERRORS = (BudgetExceededError, InexactAutomorphismError, TruncationBoundError)


@dataclass(frozen=True)
class Config:
    """Driver settings; CLI flags override the environment-backed defaults."""

    truncation: int = None
    max_steps: int = 64
    hints: tuple = ()
    mode: str = "principalize"
    root_factor: int = 1
    ordinary: bool = False
    workers: int = 4
    concurrent: bool = True
    assert_descent: bool = True
    local_contact: bool = True
    probe_range: int = 1
    seed: int = None
    settings: object = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max steps must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.root_factor < 1:
            raise ValueError("root factor must be at least 1")
        object.__setattr__(self, "hints", tuple(tuple(rat(v) for v in h) for h in self.hints))

    @classmethod
    def from_settings(cls, settings=None, **overrides):
        s = settings or default_settings
        flags = s.FEATURE_FLAGS
        values = dict(
            truncation=s.TRUNCATION,
            max_steps=s.MAX_STEPS,
            root_factor=s.ROOT_FACTOR,
            workers=s.WORKERS,
            concurrent=flags.get("concurrent_charts", True),
            assert_descent=flags.get("assert_descent", True),
            local_contact=flags.get("local_contact_simplification", True),
            probe_range=s.PROBE_RANGE,
            seed=s.SEED,
            settings=s,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @property
    def engine(self):
        """Settings object handed to the algebra layers, with the contact flag applied."""
        base = self.settings or default_settings
        if base.FEATURE_FLAGS.get("local_contact_simplification", True) == self.local_contact:
            return base
        flags = dict(base.FEATURE_FLAGS, local_contact_simplification=self.local_contact)
        return type("EngineSettings", (base,), {"FEATURE_FLAGS": flags})


# --- TREE ---

class Candidate(NamedTuple):
    point: tuple
    invariant: Invariant
    flag: object


class Candidates(list):
    """Candidates sorted by descending invariant; ``certified`` marks a proven maximum."""

    certified = True
    order = None


@dataclass
class ChartLink:
    chart: object
    child: "ResolutionNode"


@dataclass
class ResolutionNode:
    ideal: Ideal
    depth: int = 0
    path: tuple = ()
    candidates: list = field(default_factory=list)
    certified: bool = True
    center: Center = None
    reduced: ReducedCenter = None
    blowup: Blowup = None
    links: list = field(default_factory=list)
    status: str = "active"
    note: str = ""

    @property
    def provenance(self):
        return "root" if not self.path else ".".join(str(i) for i in self.path)

    @property
    def maxinv(self):
        return self.candidates[0].invariant if self.candidates else None

    def walk(self):
        yield self
        for link in self.links:
            yield from link.child.walk()

    def leaves(self):
        return [n for n in self.walk() if not n.links]


@dataclass
class ResolutionTree:
    root: ResolutionNode
    mode: str
    config: Config = None

    @property
    def ring(self):
        return self.root.ideal.ring

    @property
    def rounds(self):
        """Largest number of blowups along one branch."""
        return max(len(n.path) for n in self.root.leaves())

    def nodes(self):
        return list(self.root.walk())

    def leaves(self):
        return self.root.leaves()

    def status_counts(self):
        counts = dict.fromkeys(STATUSES, 0)
        for leaf in self.leaves():
            counts[leaf.status] += 1
        return counts

    @property
    def budget_exceeded(self):
        return any(leaf.status == "budget-exceeded" for leaf in self.leaves())


# --- CANDIDATES ---

def _invariant(I, point, cfg):
    if cfg.truncation is None:
        return invariant_at_auto(I, point, cfg.engine)
    return invariant_at(I, point, cfg.truncation, cfg.engine)


def _point_key(point):
    return (any(v != 0 for v in point), tuple(point))


def _on_locus(gens, point):
    return all(g.evaluate(point) == 0 for g in gens)


def _slice_points(stratum, cfg):
    """Rational points of a positive-dimensional stratum, cut out by coordinate hyperplanes.

    Coordinates are fixed in order to 0, the hint coordinates and the roots
    of linear one-variable factors of the stratum, until the slice is finite.
    """
    ring = stratum.ring
    engine = cfg.engine
    gens = [g for g in stratum.generators if not g.is_zero]
    values = coordinate_values(gens, engine)
    for hint in cfg.hints:
        if len(hint) == ring.ngens:
            for j, v in enumerate(hint):
                values[j].add(rat(v))
    found = []

    def cut(extra, j):
        points = rational_points_zero_dim(gens + extra, engine)
        if not points.positive_dimensional:
            found.extend(points.points)
            return
        if j == ring.ngens:
            return
        for v in sorted(values[j]):
            cut(extra + [ring.gen(j) - ring.const(v)], j + 1)

    cut([], 0)
    return found


def _probe_points(I, stratum, cfg):
    ring = I.ring
    seen, out = set(), []
    r = cfg.probe_range
    grid = list(itertools.product(range(-r, r + 1), repeat=ring.ngens))
    if cfg.seed is not None:
        random.Random(cfg.seed).shuffle(grid)
    sliced = _slice_points(stratum, cfg)
    for point in itertools.chain([ring.origin()], cfg.hints, sliced, grid):
        point = tuple(rat(v) for v in point)
        if len(point) != ring.ngens or point in seen:
            continue
        seen.add(point)
        if _on_locus(stratum.generators, point):
            out.append(point)
    return out


def maxinv_candidates(I, cfg=None):
    """Points of the top order stratum with their invariants, best first.

    The stratum's rational points are used when it is zero-dimensional;
    otherwise the origin, the hints, the points of hyperplane slices of the
    stratum and a small integer grid are probed, and the result is marked
    as not certified.
    Raises ValueError for the zero or unit ideal.
    """
    cfg = cfg or Config.from_settings()
    engine = cfg.engine
    a, stratum = max_order_stratum(I, engine)
    points = rational_points_zero_dim(list(stratum.generators), engine)
    out = Candidates()
    out.order = a
    if points.positive_dimensional:
        out.certified = False
        probes = _probe_points(I, stratum, cfg)
        logger.warning("⚠️ maxinv locus not certified: order-%d stratum is positive-dimensional "
                       "(%d probe points)", a, len(probes))
    else:
        probes = list(points.points)
        if points.irrational:
            out.certified = False
            logger.warning("⚠️ maxinv locus not certified: stratum has irrational points")
    for point in probes:
        try:
            inv, flag = _invariant(I, point, cfg)
        except UnitIdealError:
            continue
        if inv.orders and inv.orders[0] == a:
            out.append(Candidate(point, inv, flag))
    out.sort(key=lambda c: _point_key(c.point))
    out.sort(key=lambda c: c.invariant, reverse=True)
    return out


# --- ONE STEP ---

@dataclass
class StepResult:
    candidate: Candidate
    center: Center
    reduced: ReducedCenter
    blowup: Blowup
    transforms: tuple
    certified: bool = True
    candidates: list = field(default_factory=list)


def _assert_admissible(center, I):
    try:
        ok = is_admissible(center, I)
    except IndeterminateError:
        logger.warning("⚠️ admissibility of %s undecided on a jet rewrite", center)
        return
    if not ok:
        logger.error("❌ center %s is not admissible for %s", center, I)
        raise InadmissibleCenterError(f"center {center} is not admissible for {I}")


def step(I, cfg=None, candidates=None):
    """Center at the top candidate, blowup, and the per-chart transforms.

    Raises ValueError for the unit ideal or a non-principal ideal in embed mode.
    Raises InadmissibleCenterError if the chosen center fails admissibility.
    """
    cfg = cfg or Config.from_settings()
    if is_trivial(list(I.generators), cfg.engine):
        raise ValueError(f"{I} is the unit ideal; nothing to blow up")
    if cfg.mode == "embed" and not I.is_principal:
        raise ValueError("embed mode handles hypersurfaces only")
    candidates = maxinv_candidates(I, cfg) if candidates is None else candidates
    if not candidates:
        if I.is_principal and getattr(candidates, "order", None) == 1:
            return _divisor_step(I, cfg)
        raise BudgetExceededError(f"no rational point attains maxinv of {I}")
    top = candidates[0]
    center = center_from(top.invariant, top.flag)
    reduced = ordinary_center(top.flag) if cfg.ordinary else reduce_center(center)
    _assert_admissible(center if not cfg.ordinary else reduced.center(), I)

    blowup = blowup_charts(reduced, cfg.root_factor)
    transform = weak_transform if cfg.mode == "principalize" else proper_transform
    transforms = tuple(transform(I, ch) for ch in blowup.charts)
    BLOWUP_STEPS.labels(mode=cfg.mode, status="ok").inc()
    logger.info("🔄 blew up %s at %s", reduced, top.point, extra={"inv": str(top.invariant)})
    return StepResult(top, center, reduced, blowup, transforms,
                      getattr(candidates, "certified", True), list(candidates))


def _divisor_step(I, cfg):
    """Blow up V(f) itself: f has order one along a locus without rational points."""
    f = next(g for g in I.generators if not g.is_zero)
    flag = ContactFlag(I.ring, (f,), (min(f.variables()),))
    center = Center(flag, (1,))
    reduced = ReducedCenter(flag, (1,), 1)
    blowup = blowup_charts(reduced, 1)
    transform = weak_transform if cfg.mode == "principalize" else proper_transform
    transforms = tuple(transform(I, ch) for ch in blowup.charts)
    BLOWUP_STEPS.labels(mode=cfg.mode, status="ok").inc()
    logger.info("🔄 divided out the divisor %s", f)
    top = Candidate(I.ring.origin(), Invariant((1,), (1,)), flag)
    return StepResult(top, center, reduced, blowup, transforms, False, [])


# --- DRIVER ---

class _StepCounter:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0
        self._lock = threading.Lock()

    def take(self):
        with self._lock:
            if self.used >= self.limit:
                raise BudgetExceededError(f"step budget of {self.limit} exhausted")
            self.used += 1


def _finished(I, cfg):
    if cfg.mode == "principalize":
        return "principalized" if is_trivial(list(I.generators), cfg.engine) else None
    f = next((g for g in I.generators if not g.is_zero), None)
    if f is None:
        return None
    partials = [f.partial(i) for i in range(f.ring.ngens)]
    return "smooth" if is_trivial([f] + partials, cfg.engine) else None


def _chart_point(ch, base_point):
    return base_point if ch.is_identity else ch.ring.origin()


def _check_descent(result, cfg, depth):
    parent = result.candidate.invariant
    for ch, J in zip(result.blowup.charts, result.transforms):
        point = _chart_point(ch, result.candidate.point)
        try:
            inv, _ = _invariant(J, point, cfg)
        except UnitIdealError:
            continue
        except _BUDGET_ERRORS as exc:
            logger.warning("⚠️ descent not checked on chart %d: %s", ch.index + 1, exc,
                           extra={"depth": depth, "chart": ch.index + 1})
            continue
        if not inv < parent:
            logger.error("❌ invariant %s does not drop below %s", inv, parent,
                         extra={"depth": depth, "chart": ch.index + 1})
            raise InvariantDescentError(
                f"chart {ch.index + 1}: invariant {inv} is not below {parent}")
    _check_tracked(result, cfg, depth)


def _check_tracked(result, cfg, depth):
    """Other stratum points keep their invariant in the first chart that sees them off the center."""
    top = result.candidate.point
    for cand in result.candidates:
        if cand.point == top:
            continue
        for ch, J in zip(result.blowup.charts, result.transforms):
            image = point_image(result.blowup, ch, cand.point)
            if image is None:
                continue
            extra = {"depth": depth, "chart": ch.index + 1}
            try:
                inv, _ = _invariant(J, image, cfg)
            except UnitIdealError:
                inv = None
            except _BUDGET_ERRORS as exc:
                logger.warning("⚠️ tracked point %s not checked: %s", describe_point(cand.point),
                               exc, extra=extra)
                break
            if inv != cand.invariant:
                logger.error("❌ point %s moved from %s to %s away from the center",
                             describe_point(cand.point), cand.invariant, inv, extra=extra)
                raise InvariantDescentError(
                    f"chart {ch.index + 1}: point {describe_point(cand.point)} has invariant "
                    f"{inv} after the blowup, {cand.invariant} before")
            break


def _resolve_node(node, cfg, counter, pool_size):
    I = node.ideal
    extra = {"depth": node.depth, "chart": node.provenance}
    done = _finished(I, cfg)
    if done:
        node.status = done
        logger.info("✅ leaf %s is %s", node.provenance, done, extra=extra)
        return node
    try:
        counter.take()
        result = step(I, cfg)
    except _BUDGET_ERRORS as exc:
        BLOWUP_STEPS.labels(mode=cfg.mode, status="failed").inc()
        node.status = "budget-exceeded"
        node.note = str(exc)
        logger.warning("⚠️ budget exceeded at %s: %s", node.provenance, exc, extra=extra)
        return node

    node.candidates = result.candidates
    node.certified = result.certified
    node.center = result.center
    node.reduced = result.reduced
    node.blowup = result.blowup
    if cfg.assert_descent and not cfg.ordinary:
        _check_descent(result, cfg, node.depth)

    # an ordinary center is used for a single step only
    child_cfg = replace(cfg, ordinary=False, hints=()) if cfg.ordinary or cfg.hints else cfg
    children = [ResolutionNode(J, node.depth + 1, node.path + (ch.index + 1,))
                for ch, J in zip(result.blowup.charts, result.transforms)]
    if cfg.concurrent and len(children) > 1 and pool_size > 1:
        with ThreadPoolExecutor(max_workers=min(pool_size, len(children))) as pool:
            futures = [pool.submit(_resolve_node, c, child_cfg, counter, pool_size)
                       for c in children]
            children = [f.result() for f in futures]
    else:
        children = [_resolve_node(c, child_cfg, counter, pool_size) for c in children]
    node.links = [ChartLink(ch, c) for ch, c in zip(result.blowup.charts, children)]
    node.status = "active"
    return node


def resolve(I, cfg=None):
    """Blow up until every leaf is smooth (embed) or principalized, or out of budget.

    Raises ValueError for the zero ideal, or a non-principal ideal in embed mode.
    """
    cfg = cfg or Config.from_settings()
    if I.is_zero:
        raise ValueError("the zero ideal cannot be resolved")
    if cfg.mode == "embed" and not I.is_principal:
        raise ValueError("embed mode handles hypersurfaces only")
    root = ResolutionNode(I)
    counter = _StepCounter(cfg.max_steps)
    _resolve_node(root, cfg, counter, cfg.workers)
    tree = ResolutionTree(root, cfg.mode, cfg)
    for status, count in tree.status_counts().items():
        TREE_LEAVES.labels(status=status).set(count)
    logger.info("✅ resolution finished after %d rounds (%d steps)", tree.rounds, counter.used)
    return tree


# --- RE-EMBEDDING ---

def _fresh(ring, stem):
    name = stem
    while name in ring.names:
        name += "_"
    return name


def reembedding_check(I, settings=None, dummy=True):
    """(x0) + I has invariant (1, inv(I)) with x0 leading the flag.

    With ``dummy`` it also checks that an unused extra variable changes nothing.
    """
    cfg = settings or default_settings
    inv, _ = invariant_at_auto(I, None, cfg)

    x0 = _fresh(I.ring, "x0")
    big = Ring((x0,) + I.ring.names, I.ring.truncation)
    gens = [big.gen(x0)] + [g.embed(big) for g in I.generators if not g.is_zero]
    lifted = Ideal(big, tuple(gens), (rat(0),) + I.base_point)
    inv0, flag0 = invariant_at_auto(lifted, None, cfg)
    ok = inv0.entries == (rat(1),) + inv.entries and flag0.names[:1] == (x0,)
    if not ok:
        logger.error("❌ re-embedding gave %s with flag %s, expected (1) + %s", inv0, flag0, inv)
        return False
    if not dummy:
        return True

    extra = _fresh(I.ring, "w0")
    wide = Ring(I.ring.names + (extra,), I.ring.truncation)
    padded = Ideal(wide, tuple(g.embed(wide) for g in I.generators), I.base_point + (rat(0),))
    inv1, _ = invariant_at_auto(padded, None, cfg)
    if inv1.entries != inv.entries:
        logger.error("❌ dummy variable changed %s into %s", inv, inv1)
        return False
    return True


def describe_point(point):
    return "(" + ", ".join(format_rat(v) for v in point) + ")"
