"""Stable serializations: JSON for every value kind, DOT for orders,
CSV for verification reports.

Outputs are byte-stable for fixed inputs: JSON keys are sorted, element
lists follow the canonical (rank, dom, img) order, and timing columns are
opt-in since wall times never repeat.
"""

from __future__ import annotations

import csv
import io
import json

from .isolated import Subsemigroup
from .nilpotent import MPoint, OrderedAPartition, StrictOrder, point_sort_key
from .pinj import ElementSet, PartialInjection
from .variant import SandwichContext

_DOT_SHAPES = {"in": "invtriangle", "a": "circle", "out": "triangle"}


def pinj_to_dict(b: PartialInjection) -> dict:
    return {"n": b.n, "img": [v for v in b.img]}


def pinj_from_dict(d: dict) -> PartialInjection:
    return PartialInjection(int(d["n"]), tuple(d["img"]))


def context_to_dict(ctx: SandwichContext) -> dict:
    return {"n": ctx.n, "A": list(ctx.a_sorted), "z": ctx.z}


def context_from_dict(d: dict) -> SandwichContext:
    return SandwichContext(int(d["n"]), frozenset(d["A"]), int(d["z"]))


def mpoint_to_dict(p: MPoint) -> dict:
    return {"tag": p.tag, "value": p.value}


def mpoint_label(p: MPoint) -> str:
    return f"{p.value}'" if p.tag == "out" else str(p.value)


def subsemigroup_to_dict(sub: Subsemigroup) -> dict:
    return {
        "name": sub.name,
        "size": len(sub),
        "members": [pinj_to_dict(b) for b in sub.members],
    }


def order_to_dict(order: StrictOrder) -> dict:
    points = sorted(order.carrier, key=point_sort_key)
    pairs = sorted(order.pairs, key=lambda uv: (point_sort_key(uv[0]), point_sort_key(uv[1])))
    return {
        "points": [mpoint_to_dict(p) for p in points],
        "pairs": [[mpoint_to_dict(u), mpoint_to_dict(v)] for u, v in pairs],
    }


def partition_to_dict(p: OrderedAPartition) -> dict:
    return {
        "blocks": [
            [mpoint_to_dict(q) for q in sorted(block, key=point_sort_key)]
            for block in p.blocks
        ],
        "sizes": list(p.sizes()),
    }


def jsonable(obj):
    """Best-effort conversion of package values to JSON-ready structures."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, PartialInjection):
        return pinj_to_dict(obj)
    if isinstance(obj, SandwichContext):
        return context_to_dict(obj)
    if isinstance(obj, MPoint):
        return mpoint_to_dict(obj)
    if isinstance(obj, StrictOrder):
        return order_to_dict(obj)
    if isinstance(obj, OrderedAPartition):
        return partition_to_dict(obj)
    if isinstance(obj, Subsemigroup):
        return subsemigroup_to_dict(obj)
    if isinstance(obj, ElementSet):
        return [pinj_to_dict(b) for b in obj]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((jsonable(v) for v in obj), key=json.dumps)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def _dot_node_id(p: MPoint) -> str:
    return f"{p.tag}_{p.value}"


def order_to_dot(order: StrictOrder, name: str = "order") -> str:
    """Graphviz rendering of the Hasse reduction, one node per point of M.

    Node shapes distinguish input copies, A-points, and output copies.
    """
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for p in sorted(order.carrier, key=point_sort_key):
        lines.append(
            f'  "{_dot_node_id(p)}" [label="{mpoint_label(p)}", shape={_DOT_SHAPES[p.tag]}];'
        )
    hasse = sorted(
        order.hasse_pairs(),
        key=lambda uv: (point_sort_key(uv[0]), point_sort_key(uv[1])),
    )
    for u, v in hasse:
        lines.append(f'  "{_dot_node_id(u)}" -> "{_dot_node_id(v)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def orders_to_dot(named_orders, name: str = "orders") -> str:
    """Several orders in one digraph, one cluster per order."""
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i, (label, order) in enumerate(named_orders):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="{label}";')
        for p in sorted(order.carrier, key=point_sort_key):
            lines.append(
                f'    "c{i}_{_dot_node_id(p)}" '
                f'[label="{mpoint_label(p)}", shape={_DOT_SHAPES[p.tag]}];'
            )
        hasse = sorted(
            order.hasse_pairs(),
            key=lambda uv: (point_sort_key(uv[0]), point_sort_key(uv[1])),
        )
        for u, v in hasse:
            lines.append(f'    "c{i}_{_dot_node_id(u)}" -> "c{i}_{_dot_node_id(v)}";')
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


_CSV_FIELDS = ["theorem", "n", "A", "status", "label", "bound", "counterexample"]


def reports_to_csv(reports, include_timing: bool = False) -> str:
    """Header plus one row per report.  Wall times are excluded unless
    asked for, keeping repeated runs byte-identical."""
    fields = _CSV_FIELDS + (["wall_ms"] if include_timing else [])
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fields)
    for r in reports:
        row = [
            r.theorem_id,
            r.n,
            ",".join(str(x) for x in r.a),
            r.status,
            r.label,
            r.bound or "",
            json.dumps(r.counterexample, sort_keys=True) if r.counterexample is not None else "",
        ]
        if include_timing:
            row.append(f"{r.wall_ms:.1f}")
        writer.writerow(row)
    return out.getvalue()


def report_to_dict(report, include_timing: bool = True) -> dict:
    d = {
        "theorem": report.theorem_id,
        "n": report.n,
        "A": list(report.a),
        "status": report.status,
        "label": report.label,
        "bound": report.bound,
        "counterexample": report.counterexample,
    }
    if include_timing:
        d["wall_ms"] = round(report.wall_ms, 1)
    return d


def export(obj, fmt: str) -> str:
    """Uniform exporter covering (semigroup|order|partition|report(s)) x
    (json|dot|csv); unsupported pairs are rejected."""
    kind = fmt.lower()
    if isinstance(obj, Subsemigroup):
        if kind == "json":
            return dumps(obj)
    elif isinstance(obj, StrictOrder):
        if kind == "json":
            return dumps(obj)
        if kind == "dot":
            return order_to_dot(obj)
    elif isinstance(obj, OrderedAPartition):
        if kind == "json":
            return dumps(obj)
    elif hasattr(obj, "theorem_id"):
        if kind == "json":
            return json.dumps(report_to_dict(obj, include_timing=False), sort_keys=True, indent=2) + "\n"
        if kind == "csv":
            return reports_to_csv([obj])
    elif isinstance(obj, (list, tuple)) and obj and hasattr(obj[0], "theorem_id"):
        if kind == "json":
            return (
                json.dumps(
                    [report_to_dict(r, include_timing=False) for r in obj],
                    sort_keys=True,
                    indent=2,
                )
                + "\n"
            )
        if kind == "csv":
            return reports_to_csv(obj)
    raise ValueError(f"unsupported export pair ({type(obj).__name__}, {fmt})")
