# wres/report.py
"""Text, JSON and DOT renderings of invariants, centers, blowups and trees.

JSON output carries every rational as a "p/q" string (integers as "p").
"""
import json

from .algebra import format_rat


def _point(point):
    return "(" + ", ".join(format_rat(v) for v in point) + ")"


def _rats(values):
    return [format_rat(v) for v in values]


# --- PLAIN DATA ---

def invariant_data(inv, flag):
    return {
        "point": _rats(flag.base_point),
        "invariant": _rats(inv.entries),
        "orders": list(inv.orders),
        "flag": [str(p) for p in flag.global_parameters()],
    }


def center_data(center, reduced):
    return {
        "params": [str(p) for p in center.flag.global_parameters()],
        "exponents": _rats(center.exponents),
        "weights": list(reduced.weights),
        "l": format_rat(reduced.ell),
        "cocharacter": list(reduced.cocharacter),
    }


def chart_data(ch, transform=None):
    data = {
        "index": ch.index + 1,
        "ring": list(ch.ring.names),
        "substitution": {n: str(img) for n, img in zip(ch.parent.names, ch.substitution.images)},
        "group_order": ch.group_order,
        "action_weights": list(ch.action_weights),
        "exceptional": ch.exceptional if ch.exceptional is not None else str(ch.exceptional_equation),
    }
    if transform is not None:
        data["transform"] = [str(g) for g in transform.generators]
    return data


def node_data(node):
    data = {
        "path": list(node.path),
        "ring": list(node.ideal.ring.names),
        "ideal": [str(g) for g in node.ideal.generators],
        "status": node.status,
        "point_invariants": [{"point": _rats(c.point), "invariant": _rats(c.invariant.entries)}
                             for c in node.candidates],
        "certified": node.certified,
        "center": None,
        "charts": [],
    }
    if node.note:
        data["note"] = node.note
    if node.center is not None:
        data["center"] = center_data(node.center, node.reduced)
    for link in node.links:
        entry = chart_data(link.chart)
        entry["child"] = node_data(link.child)
        data["charts"].append(entry)
    return data


def tree_data(tree):
    return {
        "ring": list(tree.ring.names),
        "mode": tree.mode,
        "rounds": tree.rounds,
        "leaves": tree.status_counts(),
        "tree": node_data(tree.root),
    }


def to_json(data):
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False)


# --- TEXT ---

def invariant_text(inv, flag):
    return "\n".join([
        f"point = {_point(flag.base_point)}",
        f"inv = {inv}",
        f"flag = {flag}",
    ])


def center_text(center, reduced):
    return "\n".join([
        f"center {center}",
        f"reduced center {reduced}",
        "weights (" + ", ".join(str(w) for w in reduced.weights) + ")",
        f"l = {format_rat(reduced.ell)}",
        "cocharacter (" + ", ".join(str(w) for w in reduced.cocharacter) + ")",
    ])


def chart_text(ch, transform=None, indent=""):
    subst = ", ".join(f"{n} = {img}" for n, img in zip(ch.parent.names, ch.substitution.images))
    weights = ", ".join(str(w) for w in ch.action_weights)
    lines = [f"{indent}chart {ch.index + 1} [{', '.join(ch.ring.names)}]: {subst}",
             f"{indent}  mu_{ch.group_order} weights ({weights})"]
    if ch.is_identity:
        lines.append(f"{indent}  exceptional {ch.exceptional_equation} = 0")
    if transform is not None:
        lines.append(f"{indent}  transform {transform}")
    return "\n".join(lines)


def _node_lines(node, indent):
    label = f"[{node.provenance}]"
    head = f"{indent}{label} {node.ideal}  {node.status}"
    if node.maxinv is not None:
        head += f"  maxinv {node.maxinv} at {_point(node.candidates[0].point)}"
        if not node.certified:
            head += " (not certified)"
    lines = [head]
    if node.note:
        lines.append(f"{indent}  note: {node.note}")
    if node.center is not None:
        lines.append(f"{indent}  center {node.center}  reduced {node.reduced}  "
                     f"l = {format_rat(node.reduced.ell)}")
    for link in node.links:
        lines.append(chart_text(link.chart, indent=indent + "  "))
        lines.extend(_node_lines(link.child, indent + "    "))
    return lines


def tree_text(tree):
    counts = ", ".join(f"{k} {v}" for k, v in tree.status_counts().items() if v)
    lines = [f"ring: {', '.join(tree.ring.names)}", f"mode: {tree.mode}",
             f"rounds: {tree.rounds}", f"leaves: {counts}"]
    lines.extend(_node_lines(tree.root, ""))
    return "\n".join(lines)


# --- DOT ---

def _dot_escape(text):
    return text.replace("\\", "\\\\").replace('"', '\\"')


def tree_dot(tree):
    lines = ["digraph resolution {", "  node [shape=box];"]
    for node in tree.nodes():
        name = "n_" + ("_".join(str(i) for i in node.path) or "root")
        label = f"{node.provenance}\\n{_dot_escape(str(node.ideal))}\\n{node.status}"
        if node.maxinv is not None:
            label += f"\\nmaxinv {node.maxinv}"
        lines.append(f'  {name} [label="{label}"];')
        for link in node.links:
            child = "n_" + "_".join(str(i) for i in link.child.path)
            lines.append(f'  {name} -> {child} [label="chart {link.chart.index + 1} '
                         f'mu_{link.chart.group_order}"];')
    lines.append("}")
    return "\n".join(lines)


def render_tree(tree, fmt):
    if fmt == "json":
        return to_json(tree_data(tree))
    if fmt == "dot":
        return tree_dot(tree)
    return tree_text(tree)
