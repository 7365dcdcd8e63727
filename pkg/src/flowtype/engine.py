"""Typing inference: small networks directly, composites by derivation.

``infer_small`` computes the tight typing of one network by projecting its
flow polytope.  ``derive`` follows the structure of an expression and only
ever works with typings.  ``flatten`` builds the equivalent single network,
which serves as an independent cross-check for ``derive``.
"""

from dataclasses import dataclass, field

from .errors import DeriveError, FlowTypeError, UnsafeSpecification
from .frontend import desugar
from .lp import Constraint, LinearExpr, is_empty, project_interval
from .model import Arc, SmallNetwork, network_system
from .ops import loop_typing, par_compose, rebase_typing, rename_typing
from .syntax import Bind, HoleRef, Let, Par, SmallRef, describe
from .typings import DEFAULT_CAP, Typing, check_cap, equiv, subset_expr


def infer_small(net, cap=DEFAULT_CAP):
    """Tight typing of a small network over its input and output arcs."""
    check_cap(len(net.inputs) + len(net.outputs), cap)
    system = network_system(net)
    if is_empty(system):
        return Typing.empty(net.inputs, net.outputs)
    ins, outs = net.inputs, net.outputs
    return Typing.build(ins, outs, lambda mask: project_interval(system, subset_expr(ins, outs, mask)))


@dataclass(frozen=True)
class Derivation:
    """One node of a typing derivation."""

    rule: str
    node: object
    typing: Typing
    premises: tuple = ()
    # a user-supplied hole typing was used somewhere below this node
    valid_only: bool = False

    def render(self, depth=0):
        pad = "  " * depth
        state = "rejected" if self.typing.is_void else f"{self.typing.m} arcs"
        lines = [f"{pad}[{self.rule}] {describe(self.node)} : {state}"]
        for mask, iv in self.typing.items():
            lines.append(f"{pad}    {self.typing.label(mask)} : {iv}")
        for p in self.premises:
            lines.append(p.render(depth + 1))
        return "\n".join(lines)

    def to_json(self):
        from .serialize import typing_to_json
        return {
            "rule": self.rule,
            "subject": describe(self.node),
            "span": list(self.node.span) if getattr(self.node, "span", None) else None,
            "valid_only": self.valid_only,
            "typing": typing_to_json(self.typing),
            "premises": [p.to_json() for p in self.premises],
        }


def _where(node):
    span = getattr(node, "span", None)
    return f" (line {span[0]}, column {span[1]})" if span else ""


def derive(expr, decls, env=None, small_typings=None, cap=DEFAULT_CAP):
    """Derive the typing of an expression from the typings of its parts.

    ``env`` maps free holes to user-supplied typings (matched to the hole's
    declared arcs by position); ``small_typings`` may pre-supply typings of
    small networks, otherwise ``infer_small`` is used.  Returns
    ``(typing, derivation)``; raises :class:`UnsafeSpecification` at the
    first constructor whose typing has an empty polytope.
    """
    expr = desugar(expr, decls)
    known = dict(small_typings or {})
    user = {}
    for key, typing in (env or {}).items():
        hole = decls.holes.get(key)
        if hole is None:
            raise DeriveError(f"typing supplied for undeclared hole {key}", "undeclared")
        user[key] = rebase_typing(typing, hole.inputs, hole.outputs)

    def small(name):
        if name not in known:
            try:
                known[name] = infer_small(decls.networks[name], cap)
            except KeyError:
                raise DeriveError(f"unknown small network {name}", "undeclared") from None
        return known[name]

    def checked(d):
        if d.typing.is_void:
            raise UnsafeSpecification(f"empty polytope at {describe(d.node)}{_where(d.node)}",
                                      d.node, getattr(d.node, "span", None), d)
        return d

    def go(e, scope):
        match e:
            case SmallRef(name, prefix):
                t = small(name)
                if prefix:
                    t = t.renamed({a: prefix + a for a in t.dims})
                return checked(Derivation("small", e, t))
            case HoleRef():
                if e.key not in scope:
                    raise DeriveError(f"hole {e.key} is not bound here{_where(e)}", "unbound-hole")
                base, from_user = scope[e.key]
                t = rename_typing(base, e.name, e.index, e.prefix)
                return checked(Derivation("hole", e, t, valid_only=from_user))
            case Par(left, right):
                d1, d2 = go(left, scope), go(right, scope)
                t = par_compose(d1.typing, d2.typing, cap)
                return checked(Derivation("par", e, t, (d1, d2), d1.valid_only or d2.valid_only))
            case Bind(a, b, body):
                d1 = go(body, scope)
                t = loop_typing(d1.typing, (a, b), cap)
                return checked(Derivation("bind", e, t, (d1,), d1.valid_only))
            case Let():
                d1 = go(e.bound, scope)
                hole = decls.holes.get(e.hole)
                if hole is None:
                    raise DeriveError(f"undeclared hole {e.hole}", "undeclared")
                t1 = d1.typing
                if (len(t1.inputs), len(t1.outputs)) != (len(hole.inputs), len(hole.outputs)):
                    raise DeriveError(f"hole {e.hole} does not match the dimensions of its "
                                      f"binding{_where(e)}", "let-dimension-mismatch")
                base = rebase_typing(t1, hole.inputs, hole.outputs)
                if e.key in user and not equiv(user[e.key], base):
                    raise DeriveError(f"supplied typing for {e.key} is not equivalent to the "
                                      f"derived one", "let-typing-mismatch")
                d2 = go(e.body, {**scope, e.key: (base, False)})
                return Derivation("let", e, d2.typing, (d1, d2), d1.valid_only or d2.valid_only)
        raise TypeError(f"not a core expression: {e!r}")

    root = go(expr, {k: (t, True) for k, t in user.items()})
    return root.typing, root


# -- flattening -----------------------------------------------------------


@dataclass
class _Flat:
    nodes: list = field(default_factory=list)
    arcs: list = field(default_factory=list)


def flatten(expr, decls, name="flat"):
    """The single small network an expression denotes.

    Let-bound networks are copied once per hole occurrence; a bind fuses
    the output and input arc into one internal arc named after the output,
    with lower bound the larger and upper bound the smaller of the two.
    Input/output arcs keep the names the expression exposes; internal arcs
    and nodes inside hole occurrences get the occurrence as a prefix
    (``X.2.a5``).
    """
    expr = desugar(expr, decls)

    def go(e, scope):
        match e:
            case SmallRef(name_, prefix):
                net = decls.networks[name_]
                stem = f"{prefix}{name_}."
                flat = _Flat([stem + n for n in net.nodes])
                for a in net.arcs:
                    flat.arcs.append(Arc(prefix + a.name,
                                         None if a.tail is None else stem + a.tail,
                                         None if a.head is None else stem + a.head,
                                         a.lo, a.hi))
                return flat
            case HoleRef():
                if e.key not in scope:
                    raise DeriveError(f"hole {e.key} is not bound here", "unbound-hole")
                bound, outer = scope[e.key]
                inner = go(bound, outer)
                ins, outs = decls.holes[e.name].occurrence_arcs(e.index, e.prefix)
                inner_ins = [a.name for a in inner.arcs if a.tail is None]
                inner_outs = [a.name for a in inner.arcs if a.head is None]
                if (len(inner_ins), len(inner_outs)) != (len(ins), len(outs)):
                    raise DeriveError(f"hole {e.name} does not match its binding",
                                      "let-dimension-mismatch")
                stem = f"{e.prefix}{e.name}.{e.index}."
                rename = dict(zip(inner_ins, ins)) | dict(zip(inner_outs, outs))
                flat = _Flat([stem + n for n in inner.nodes])
                for a in inner.arcs:
                    flat.arcs.append(Arc(rename.get(a.name, stem + a.name),
                                         None if a.tail is None else stem + a.tail,
                                         None if a.head is None else stem + a.head,
                                         a.lo, a.hi))
                return flat
            case Par(left, right):
                f1, f2 = go(left, scope), go(right, scope)
                return _Flat(f1.nodes + f2.nodes, f1.arcs + f2.arcs)
            case Let():
                return go(e.body, {**scope, e.key: (e.bound, scope)})
            case Bind(a, b, body):
                flat = go(body, scope)
                by_name = {arc.name: arc for arc in flat.arcs}
                out_arc, in_arc = by_name.get(a), by_name.get(b)
                if out_arc is None or in_arc is None or out_arc.head is not None \
                        or in_arc.tail is not None:
                    raise FlowTypeError(f"bind <{a},{b}> needs output {a} and input {b}",
                                        "bind-arcs")
                fused = Arc(a, out_arc.tail, in_arc.head,
                            max(out_arc.lo, in_arc.lo), min(out_arc.hi, in_arc.hi))
                flat.arcs = [fused if arc.name == a else arc for arc in flat.arcs if arc.name != b]
                return flat
        raise TypeError(f"not a core expression: {e!r}")

    flat = go(expr, {})
    return SmallNetwork(name, tuple(flat.nodes), tuple(flat.arcs), allow_crossed=True)


def io_sem_witness(net, io_values):
    """A full feasible flow extending ``io_values``, or None."""
    pins = [Constraint(LinearExpr.var(a), "==", v) for a, v in io_values.items()]
    unknown = set(io_values) - {a.name for a in net.arcs}
    if unknown:
        raise FlowTypeError(f"unknown arcs {sorted(unknown)}", "unknown-arc")
    return network_system(net).extended(pins).feasible_point


def io_sem_check(net, io_values):
    """Whether some feasible flow of ``net`` agrees with ``io_values``."""
    return io_sem_witness(net, io_values) is not None
