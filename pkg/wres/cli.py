# wres/cli.py
"""Command-line surface: one subcommand per pipeline stage.

Exit codes: 0 success, 1 input error, 2 budget exceeded.
"""
import functools
import logging
import re
from dataclasses import replace

import click

from .algebra import format_rat, rat
from .blowup import blowup_charts, proper_transform, total_transform, weak_transform
from .config import settings as default_settings
from .exceptions import BudgetExceededError, PolySyntaxError, WresError
from .invariant import (
    Center,
    ContactFlag,
    center_from,
    invariant_at,
    invariant_at_auto,
    is_admissible,
    ordinary_center,
    reduce_center,
)
from .localideal import Ideal
from .metrics import dump
from .parser import parse, parse_ideal, parse_point, parse_ring
from .report import (
    center_data,
    center_text,
    chart_data,
    chart_text,
    invariant_data,
    invariant_text,
    render_tree,
    to_json,
)
from .resolve import Config, maxinv_candidates, resolve

logger = logging.getLogger(__name__)


class InputError(click.ClickException):
    exit_code = 1


class BudgetExit(click.ClickException):
    exit_code = 2


def _guarded(func):
    """Map library failures onto CLI exit codes."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except click.ClickException:
            raise
        except BudgetExceededError as e:
            raise BudgetExit(str(e)) from e
        except (WresError, ValueError, ArithmeticError) as e:
            raise InputError(str(e)) from e
    return wrapper


# --- INPUT ---

def _load(ring_text, ideal_text, point_text, truncate):
    try:
        ring = parse_ring(ring_text)
        gens = parse_ideal(ideal_text, ring)
        point = parse_point(point_text, ring) if point_text else None
    except PolySyntaxError as e:
        raise InputError(f"--ideal/--ring: {e}") from e
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"--point: {e}") from e
    if truncate is not None and truncate < 1:
        raise InputError("--truncate must be at least 1")
    return Ideal(ring, tuple(gens)), point


def _hints(text, ring):
    if not text:
        return ()
    try:
        return tuple(parse_point(p, ring) for p in text.split(";") if p.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"--hints: {e}") from e


_CENTER_ITEM = re.compile(r"^(?P<base>.+?)\s*\^\s*\(?\s*(?P<exp>\d+(?:\s*/\s*\d+)?)\s*\)?$")


def _split_top(text):
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts if p.strip()]


def parse_center(text, ring, point=None):
    """``"x^5, y^(15/2)"`` or ``"(x+y^2)^(3/2), y^4"`` as a Center at ``point``.

    The trailing exponent of each item is the center exponent; a bare item has exponent 1.
    """
    text = text.strip()
    if text.startswith("(") and text.endswith(")") and len(_split_top(text[1:-1])) > 1:
        text = text[1:-1]
    point = point or ring.origin()
    params, pivots, exponents = [], [], []
    for item in _split_top(text):
        match = _CENTER_ITEM.match(item)
        base, exp = (match.group("base"), match.group("exp").replace(" ", "")) if match else (item, "1")
        p = parse(base, ring)
        local = p.translate(point)
        lin = {j: c for j, c in local.linear_part().items() if j not in pivots}
        if not lin or local.constant_term() != 0:
            raise InputError(f"--center: {base!r} is not a parameter at {point}")
        j = min(lin)
        params.append(local.scale(1 / lin[j]))
        pivots.append(j)
        exponents.append(rat(exp))
    return Center(ContactFlag(ring, tuple(params), tuple(pivots), point), tuple(exponents))


# --- SHARED OPTIONS ---

def _ideal_options(func):
    func = click.option("--ring", "ring_text", required=True, help="Variables, e.g. x,y,z.")(func)
    func = click.option("--ideal", "ideal_text", required=True,
                        help="Comma-separated generators.")(func)
    func = click.option("--point", "point_text", default=None,
                        help="Base point, e.g. 0,1/2 (default: origin); an extra candidate for resolve.")(func)
    func = click.option("--truncate", type=int, default=None,
                        help="Jet bound N (default: exact, jets on demand).")(func)
    func = click.option("--format", "fmt", type=click.Choice(["text", "json", "dot"]),
                        default="text", show_default=True)(func)
    return func


def _driver_options(func):
    func = click.option("--max-steps", type=int, default=None)(func)
    func = click.option("--hints", "hints_text", default=None,
                        help="Extra candidate points, p1;p2.")(func)
    func = click.option("--root-factor", type=int, default=None)(func)
    func = click.option("--ordinary", is_flag=True, default=False,
                        help="Use the all-ones center for the first step.")(func)
    return func


def _config(ctx, I, mode, truncate=None, max_steps=None, hints_text=None,
            root_factor=None, ordinary=False):
    try:
        return Config.from_settings(ctx.obj["settings"], mode=mode, truncation=truncate,
                                    max_steps=max_steps, hints=_hints(hints_text, I.ring),
                                    root_factor=root_factor, ordinary=ordinary or None)
    except ValueError as e:
        raise InputError(str(e)) from e


def _invariant(I, point, truncate, settings):
    if truncate is None:
        return invariant_at_auto(I, point, settings)
    return invariant_at(I, point, truncate, settings)


def _pick_center(I, point, cfg):
    """Center at ``point``, or at the top maxinv candidate."""
    if point is not None:
        inv, flag = _invariant(I, point, cfg.truncation, cfg.engine)
    else:
        candidates = maxinv_candidates(I, cfg)
        if not candidates:
            raise BudgetExit("no rational point attains maxinv")
        inv, flag = candidates[0].invariant, candidates[0].flag
    center = center_from(inv, flag)
    reduced = ordinary_center(flag) if cfg.ordinary else reduce_center(center)
    return center, reduced


def _emit(ctx, text):
    click.echo(text)
    if ctx.obj.get("metrics"):
        click.echo(dump(), err=True)


# --- COMMANDS ---

@click.group()
@click.option("--metrics", is_flag=True, default=False, help="Dump Prometheus metrics to stderr.")
@click.pass_context
def cli(ctx, metrics):
    """Weighted-blowup invariants, centers and resolution trees."""
    ctx.ensure_object(dict)
    ctx.obj.setdefault("settings", default_settings)
    ctx.obj["metrics"] = metrics


@cli.command()
@_ideal_options
@click.pass_context
@_guarded
def invariant(ctx, ring_text, ideal_text, point_text, truncate, fmt):
    """Point invariant and maximal-contact flag."""
    I, point = _load(ring_text, ideal_text, point_text, truncate)
    inv, flag = _invariant(I, point, truncate, ctx.obj["settings"])
    if fmt == "json":
        _emit(ctx, to_json(invariant_data(inv, flag)))
    else:
        _emit(ctx, invariant_text(inv, flag))


@cli.command()
@_ideal_options
@click.option("--ordinary", is_flag=True, default=False)
@click.pass_context
@_guarded
def center(ctx, ring_text, ideal_text, point_text, truncate, fmt, ordinary):
    """Center, reduced weights and cocharacter (at --point, else at maxinv)."""
    I, point = _load(ring_text, ideal_text, point_text, truncate)
    cfg = _config(ctx, I, "principalize", truncate, ordinary=ordinary)
    c, rc = _pick_center(I, point, cfg)
    if fmt == "json":
        _emit(ctx, to_json(center_data(c, rc)))
    else:
        _emit(ctx, center_text(c, rc))


@cli.command()
@_ideal_options
@click.option("--mode", type=click.Choice(["principalize", "embed"]), default=None,
              help="Transform to show (default: embed for one generator).")
@click.option("--root-factor", type=int, default=None)
@click.option("--ordinary", is_flag=True, default=False)
@click.pass_context
@_guarded
def blowup(ctx, ring_text, ideal_text, point_text, truncate, fmt, mode, root_factor, ordinary):
    """Charts, substitutions, group actions and transforms of one blowup."""
    I, point = _load(ring_text, ideal_text, point_text, truncate)
    mode = mode or ("embed" if I.is_principal else "principalize")
    cfg = _config(ctx, I, mode, truncate, root_factor=root_factor, ordinary=ordinary)
    c, rc = _pick_center(I, point, cfg)
    bl = blowup_charts(rc, cfg.root_factor)
    transform = weak_transform if mode == "principalize" else proper_transform
    pairs = [(ch, transform(I, ch)) for ch in bl.charts]
    if fmt == "json":
        data = center_data(c, rc)
        data["mode"] = mode
        data["root_factor"] = bl.root_factor
        data["charts"] = [dict(chart_data(ch, J), total=[str(g) for g in total_transform(I, ch)])
                          for ch, J in pairs]
        _emit(ctx, to_json(data))
        return
    lines = [center_text(c, rc), f"mode = {mode}, root factor {bl.root_factor}"]
    lines += [chart_text(ch, J) for ch, J in pairs]
    _emit(ctx, "\n".join(lines))


def _run_resolve(ctx, mode, ring_text, ideal_text, point_text, truncate, fmt, max_steps,
                 hints_text, root_factor, ordinary):
    I, point = _load(ring_text, ideal_text, point_text, truncate)
    cfg = _config(ctx, I, mode, truncate, max_steps, hints_text, root_factor, ordinary)
    if point is not None:
        # --point is one more candidate for the root
        cfg = replace(cfg, hints=cfg.hints + (point,))
    tree = resolve(I, cfg)
    _emit(ctx, render_tree(tree, fmt))
    if tree.budget_exceeded:
        ctx.exit(2)


@cli.command("resolve")
@_ideal_options
@_driver_options
@click.option("--mode", type=click.Choice(["principalize", "embed"]), default="embed",
              show_default=True)
@click.pass_context
@_guarded
def resolve_cmd(ctx, ring_text, ideal_text, point_text, truncate, fmt, max_steps, hints_text,
                root_factor, ordinary, mode):
    """Full resolution tree (embedded hypersurface by default)."""
    _run_resolve(ctx, mode, ring_text, ideal_text, point_text, truncate, fmt, max_steps,
                 hints_text, root_factor, ordinary)


@cli.command()
@_ideal_options
@_driver_options
@click.pass_context
@_guarded
def principalize(ctx, ring_text, ideal_text, point_text, truncate, fmt, max_steps, hints_text,
                 root_factor, ordinary):
    """Iterate weak transforms until the ideal is (1)."""
    _run_resolve(ctx, "principalize", ring_text, ideal_text, point_text, truncate, fmt,
                 max_steps, hints_text, root_factor, ordinary)


@cli.command("check-admissible")
@_ideal_options
@click.option("--center", "center_text_", required=True, help='e.g. "x^5, y^(15/2)"')
@click.pass_context
@_guarded
def check_admissible(ctx, ring_text, ideal_text, point_text, truncate, fmt, center_text_):
    """Whether every generator has valuation at least 1 along the center."""
    I, point = _load(ring_text, ideal_text, point_text, truncate)
    c = parse_center(center_text_, I.ring, point)
    verdict = is_admissible(c, I)
    if fmt == "json":
        _emit(ctx, to_json({"center": str(c), "exponents": [format_rat(a) for a in c.exponents],
                            "admissible": verdict}))
    else:
        _emit(ctx, f"center {c}\nadmissible: {'yes' if verdict else 'no'}")


def run(argv=None):
    """Run the command group and return its exit code instead of exiting."""
    try:
        rv = cli.main(args=argv, prog_name="wres", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return 1
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        return 1
    return rv if isinstance(rv, int) else 0
