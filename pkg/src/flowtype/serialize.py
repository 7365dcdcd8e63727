"""JSON and DOT renderings.

Rationals are written as ``"p/q"`` strings; on input plain integers and
``"n"`` strings are accepted too.
"""

import json

from .errors import FlowTypeError
from .intervals import Interval
from .model import Arc, Flow, SmallNetwork
from .rationals import as_fraction, format_fraction, pretty_fraction
from .typings import Typing


def typing_to_json(typing):
    entries = []
    for mask, iv in typing.items():
        plus, minus = typing.split(mask)
        entries.append({
            "plus": plus,
            "minus": minus,
            "lo": None if iv.is_empty else format_fraction(iv.lo),
            "hi": None if iv.is_empty else format_fraction(iv.hi),
        })
    return {
        "inputs": list(typing.inputs),
        "outputs": list(typing.outputs),
        "accepted": not typing.is_void,
        "entries": entries,
    }


def typing_from_json(data):
    try:
        inputs, outputs = tuple(data["inputs"]), tuple(data["outputs"])
        table = {}
        for entry in data["entries"]:
            arcs = tuple(entry.get("plus", ())) + tuple(entry.get("minus", ()))
            if entry.get("lo") is None or entry.get("hi") is None:
                table[arcs] = Interval.empty()
            else:
                table[arcs] = Interval(as_fraction(entry["lo"]), as_fraction(entry["hi"]))
        if not inputs and not outputs:
            return Typing((), (), (), not data.get("accepted", True))
        typing = Typing.from_table(inputs, outputs, table)
    except (KeyError, TypeError) as exc:
        raise FlowTypeError(f"malformed typing JSON: {exc}", "bad-json") from None
    if not data.get("accepted", True) or typing.is_void:
        return Typing.empty(inputs, outputs)
    return typing


def network_to_json(net):
    return {
        "name": net.name,
        "nodes": list(net.nodes),
        "arcs": [{"name": a.name, "tail": a.tail, "head": a.head,
                  "lo": format_fraction(a.lo), "hi": format_fraction(a.hi)} for a in net.arcs],
    }


def network_from_json(data):
    try:
        arcs = tuple(Arc(a["name"], a.get("tail"), a.get("head"),
                         as_fraction(a["lo"]), as_fraction(a["hi"])) for a in data["arcs"])
        return SmallNetwork(data["name"], tuple(data["nodes"]), arcs)
    except (KeyError, TypeError) as exc:
        raise FlowTypeError(f"malformed network JSON: {exc}", "bad-json") from None


def flow_to_json(flow):
    return {"scope": flow.scope,
            "values": {a: format_fraction(v) for a, v in flow.values.items()}}


def flow_from_json(data):
    if "values" in data:
        return Flow(data["values"], data.get("scope", "io"))
    return Flow(data, "io")


def dumps(data):
    return json.dumps(data, indent=2)


def to_dot(net):
    """Graphviz source; nodes and arcs sorted so output is stable."""
    lines = [f'digraph "{net.name}" {{', "  rankdir=LR;"]
    for node in sorted(net.nodes):
        lines.append(f'  "{node}";')
    for arc in sorted(net.arcs, key=lambda a: a.name):
        label = f"{arc.name} [{pretty_fraction(arc.lo)},{pretty_fraction(arc.hi)}]"
        tail, head = arc.tail, arc.head
        if tail is None:
            tail = f"in:{arc.name}"
            lines.append(f'  "{tail}" [shape=point];')
        if head is None:
            head = f"out:{arc.name}"
            lines.append(f'  "{head}" [shape=point];')
        lines.append(f'  "{tail}" -> "{head}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
