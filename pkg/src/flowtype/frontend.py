"""Desugaring, input/output signatures and well-formedness checks."""

from dataclasses import dataclass

from .errors import DesugarError, FlowTypeError
from .syntax import (Bind, BindSet, Cascade, Conn, HoleRef, Let, LetSet, Par,
                     SmallRef, describe, walk)


@dataclass(frozen=True)
class IoSignature:
    inputs: tuple
    outputs: tuple
    internal: frozenset = frozenset()


def _network(decls, name):
    try:
        return decls.networks[name]
    except KeyError:
        raise FlowTypeError(f"unknown small network {name}", "undeclared") from None


def _hole(decls, name):
    try:
        return decls.holes[name]
    except KeyError:
        raise FlowTypeError(f"undeclared hole {name}", "undeclared") from None


def io_signature(expr, decls):
    match expr:
        case SmallRef(name, prefix):
            net = _network(decls, name)
            return IoSignature(tuple(prefix + a for a in net.inputs),
                               tuple(prefix + a for a in net.outputs),
                               frozenset(prefix + a for a in net.internal))
        case HoleRef():
            ins, outs = _hole(decls, expr.name).occurrence_arcs(expr.index, expr.prefix)
            return IoSignature(ins, outs)
        case Par(left, right):
            s1, s2 = io_signature(left, decls), io_signature(right, decls)
            return IoSignature(s1.inputs + s2.inputs, s1.outputs + s2.outputs,
                               s1.internal | s2.internal)
        case Let(_, bound, body):
            inner = io_signature(body, decls)
            return IoSignature(inner.inputs, inner.outputs,
                               inner.internal | io_signature(bound, decls).internal)
        case Bind(a, b, body):
            inner = io_signature(body, decls)
            if a not in inner.outputs or b not in inner.inputs:
                raise FlowTypeError(f"bind <{a},{b}> needs output {a} and input {b}", "bind-arcs")
            return IoSignature(tuple(x for x in inner.inputs if x != b),
                               tuple(x for x in inner.outputs if x != a),
                               inner.internal | {a})
    return io_signature(desugar(expr, decls), decls)


def _nest(pairs, body, span):
    for a, b in reversed(pairs):
        body = Bind(a, b, body, span=span)
    return body


def _check_theta(pairs, outputs, inputs):
    outs = [a for a, _ in pairs]
    ins = [b for _, b in pairs]
    if len(set(outs)) != len(outs) or len(set(ins)) != len(ins):
        raise DesugarError("connection map is not one-to-one")
    for a in outs:
        if a not in outputs:
            raise DesugarError(f"{a} is not an available output arc")
    for b in ins:
        if b not in inputs:
            raise DesugarError(f"{b} is not an available input arc")


def _bound_keys(expr):
    return {e.key for e in walk(expr) if isinstance(e, Let)}


def _copy(expr, hole, fresh, prefix, inner):
    """Copy of a LetSet body for one choice: every name gets ``prefix``."""
    def go(e):
        match e:
            case SmallRef():
                return SmallRef(e.name, prefix + e.prefix, span=e.span)
            case HoleRef():
                if e.key == hole:
                    binder = fresh
                elif e.key in inner:
                    binder = prefix + e.key
                else:
                    binder = e.binder
                return HoleRef(e.name, e.index, binder, prefix + e.prefix, span=e.span)
            case Par():
                return Par(go(e.left), go(e.right), span=e.span)
            case Let():
                return Let(e.hole, go(e.bound), go(e.body), prefix + e.key, span=e.span)
            case Bind():
                return Bind(prefix + e.out_arc, prefix + e.in_arc, go(e.body), span=e.span)
        raise TypeError(f"unexpected node {e!r}")
    return go(expr)


def desugar(expr, decls):
    """Rewrite every sugar form into core forms."""
    def go(e):
        match e:
            case SmallRef() | HoleRef():
                return e
            case Par(left, right):
                return Par(go(left), go(right), span=e.span)
            case Let():
                return Let(e.hole, go(e.bound), go(e.body), e.binder, span=e.span)
            case Bind(a, b, body):
                return Bind(a, b, go(body), span=e.span)
            case BindSet(pairs, body):
                body = go(body)
                sig = io_signature(body, decls)
                _check_theta(pairs, sig.outputs, sig.inputs)
                return _nest(pairs, body, e.span)
            case Conn(pairs, left, right):
                left, right = go(left), go(right)
                _check_theta(pairs, io_signature(left, decls).outputs,
                             io_signature(right, decls).inputs)
                return _nest(pairs, Par(left, right, span=e.span), e.span)
            case Cascade(left, right):
                left, right = go(left), go(right)
                outs = io_signature(left, decls).outputs
                ins = io_signature(right, decls).inputs
                if len(outs) != len(ins):
                    raise DesugarError(f"cascade joins {len(outs)} outputs to {len(ins)} inputs",
                                       "dimension-mismatch")
                return _nest(tuple(zip(outs, ins)), Par(left, right, span=e.span), e.span)
            case LetSet(hole, choices, body):
                body = go(body)
                inner = _bound_keys(body)
                copies, binders = [], []
                for k in range(1, len(choices) + 1):
                    fresh = f"{hole}~{k}"
                    binders.append(fresh)
                    copies.append(_copy(body, hole, fresh, f"{fresh}:", inner))
                result = copies[0]
                for c in copies[1:]:
                    result = Par(result, c, span=e.span)
                for choice, fresh in reversed(list(zip(choices, binders))):
                    result = Let(hole, go(choice), result, fresh, span=e.span)
                return result
        raise TypeError(f"not a network expression: {e!r}")
    return go(expr)


# -- well-formedness -------------------------------------------------------

MATCHING_DIMENSIONS = "matching-dimensions"
UNIQUE_ARCS = "unique-arc-naming"
ONE_BINDING = "one-binding-occurrence"
UNDECLARED = "undeclared"
BIND_ARCS = "bind-arcs"
SUGAR = "desugar"


@dataclass(frozen=True)
class WfError:
    condition: str
    message: str
    span: tuple = None

    def __str__(self):
        where = f"{self.span[0]}:{self.span[1]}: " if self.span else ""
        return f"{where}{self.condition}: {self.message}"


@dataclass(frozen=True)
class WellFormedReport:
    errors: tuple = ()

    @property
    def ok(self):
        return not self.errors

    def __bool__(self):
        return self.ok


def check_well_formed(expr, decls, closed=True):
    """Collect every well-formedness problem; never raises.

    With ``closed`` set, each hole occurrence must sit inside the body of
    the ``let`` that binds it.  Otherwise free holes are allowed provided
    no ``let`` binds them elsewhere.
    """
    errors = []

    def report(condition, message, node=None):
        errors.append(WfError(condition, message, getattr(node, "span", None)))

    try:
        core = desugar(expr, decls)
    except FlowTypeError as exc:
        report(SUGAR, str(exc), expr)
        return WellFormedReport(tuple(errors))
    except TypeError as exc:
        report(SUGAR, str(exc))
        return WellFormedReport(tuple(errors))

    let_keys = [e.key for e in walk(core) if isinstance(e, Let)]
    all_bound = set(let_keys)
    arc_owner = {}
    seen_nets = set()
    seen_occurrences = set()
    seen_binders = set()

    def claim(arcs, owner, node):
        for arc in arcs:
            if arc in arc_owner:
                report(UNIQUE_ARCS, f"arc {arc} is exposed by both {arc_owner[arc]} and {owner}", node)
            else:
                arc_owner[arc] = owner

    def signature(node):
        try:
            return io_signature(node, decls)
        except FlowTypeError:
            return None

    def visit(e, scope):
        match e:
            case SmallRef(name, prefix):
                if name not in decls.networks:
                    report(UNDECLARED, f"unknown small network {name}", e)
                    return
                if (prefix, name) in seen_nets:
                    report(UNIQUE_ARCS, f"network {name} is used more than once; "
                           f"declare an isomorphic copy (network {name}2 = copy {name})", e)
                    return
                seen_nets.add((prefix, name))
                net = decls.networks[name]
                claim([prefix + a.name for a in net.arcs], describe(e), e)
            case HoleRef():
                if e.name not in decls.holes:
                    report(UNDECLARED, f"undeclared hole {e.name}", e)
                    return
                if e.key not in scope and (closed or e.key in all_bound):
                    report(ONE_BINDING, f"hole {e.key} is used outside the scope of its let", e)
                if e.index < 1:
                    report(UNIQUE_ARCS, f"hole {e.key} occurrence has no renaming index", e)
                occ = (e.key, e.prefix, e.index)
                if occ in seen_occurrences:
                    report(UNIQUE_ARCS, f"renaming index {e.index} of hole {e.key} is reused", e)
                seen_occurrences.add(occ)
                ins, outs = decls.holes[e.name].occurrence_arcs(e.index, e.prefix)
                claim(ins + outs, describe(e), e)
            case Par(left, right):
                visit(left, scope)
                visit(right, scope)
            case Let():
                if e.key in seen_binders:
                    report(ONE_BINDING, f"hole {e.key} is bound more than once", e)
                seen_binders.add(e.key)
                visit(e.bound, scope)
                visit(e.body, scope | {e.key})
                hole = decls.holes.get(e.hole)
                if hole is None:
                    report(UNDECLARED, f"undeclared hole {e.hole}", e)
                    return
                sig = signature(e.bound)
                if sig is not None and (len(sig.inputs), len(sig.outputs)) != (
                        len(hole.inputs), len(hole.outputs)):
                    report(MATCHING_DIMENSIONS,
                           f"hole {e.hole} has {len(hole.inputs)} inputs and {len(hole.outputs)} "
                           f"outputs but is bound to a network with {len(sig.inputs)} and "
                           f"{len(sig.outputs)}", e)
            case Bind(a, b, body):
                visit(body, scope)
                sig = signature(body)
                if sig is not None and (a not in sig.outputs or b not in sig.inputs):
                    report(BIND_ARCS, f"bind <{a},{b}> needs output {a} and input {b}", e)

    visit(core, frozenset())
    return WellFormedReport(tuple(errors))
