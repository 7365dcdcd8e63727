"""Optimal flows under additive objectives.

Two objectives are supported, both summed over output and internal arcs
(never over inputs):

* ``hr`` (hop routing): the flow itself, so longer routes cost more;
* ``au`` (arc utilisation): flow divided by the arc's upper capacity.

A spec is optimised through a *coupled* linear system built from its
syntax: the systems of the small networks side by side, an equality per
bind, and a renamed copy of the bound network per hole occurrence.  When a
bind joins two arcs, the joined arc's capacity is the smaller of the two,
and ``au`` divides by that joined capacity.
"""

from dataclasses import dataclass, field

from .engine import derive
from .errors import FlowTypeError, ObjectiveError
from .frontend import desugar
from .lp import OPTIMAL, Constraint, LinearExpr, LinearSystem, lp_optimize
from .model import FULL, IO, Flow, network_system
from .syntax import Bind, HoleRef, Let, Par, SmallRef, walk
from .typings import DEFAULT_CAP

HR = "hr"
AU = "au"
OBJECTIVES = (HR, AU)


def _weights(summed, kind):
    if kind not in OBJECTIVES:
        raise ObjectiveError(f"unknown objective {kind!r}", "bad-objective")
    if kind == HR:
        return {a: 1 for a in summed}
    zero = sorted(a for a, cap in summed.items() if cap == 0)
    if zero:
        raise ObjectiveError(f"utilisation is undefined on zero-capacity arcs {zero}",
                             "zero-capacity")
    return {a: 1 / cap for a, cap in summed.items()}


def objective_value(net, flow, kind):
    """Objective of a full flow on a (flattened) network."""
    summed = {a.name: a.hi for a in net.arcs if a.tail is not None}
    weights = _weights(summed, kind)
    return sum(w * flow[a] for a, w in weights.items())


@dataclass
class _Part:
    variables: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    outputs: list = field(default_factory=list)
    summed: dict = field(default_factory=dict)
    upper: dict = field(default_factory=dict)

    def renamed(self, mapping):
        def r(a):
            return mapping.get(a, a)
        return _Part([r(v) for v in self.variables],
                     [Constraint(c.expr.substitute(mapping), c.rel, c.bound) for c in self.constraints],
                     [r(a) for a in self.inputs], [r(a) for a in self.outputs],
                     {r(a): u for a, u in self.summed.items()},
                     {r(a): u for a, u in self.upper.items()})


@dataclass(frozen=True)
class CoupledSystem:
    system: LinearSystem
    inputs: tuple
    outputs: tuple
    summed: tuple  # (arc, capacity used by "au")

    @property
    def io_arcs(self):
        return self.inputs + self.outputs

    def objective(self, kind):
        return LinearExpr(_weights(dict(self.summed), kind))


def build_coupled(expr, decls):
    expr = desugar(expr, decls)

    def go(e, scope):
        match e:
            case SmallRef(name, prefix):
                net = decls.networks[name]
                mapping = {a.name: prefix + a.name for a in net.arcs}
                base = network_system(net)
                return _Part([mapping[v] for v in base.variables],
                             [Constraint(c.expr.substitute(mapping), c.rel, c.bound)
                              for c in base.constraints],
                             [mapping[a] for a in net.inputs],
                             [mapping[a] for a in net.outputs],
                             {prefix + a.name: a.hi for a in net.arcs if a.tail is not None},
                             {prefix + a.name: a.hi for a in net.arcs})
            case HoleRef():
                if e.key not in scope:
                    raise FlowTypeError(f"hole {e.key} is not bound", "unbound-hole")
                bound, outer = scope[e.key]
                inner = go(bound, outer)
                ins, outs = decls.holes[e.name].occurrence_arcs(e.index, e.prefix)
                stem = f"{e.prefix}{e.name}.{e.index}."
                mapping = {v: stem + v for v in inner.variables}
                mapping.update(zip(inner.inputs, ins))
                mapping.update(zip(inner.outputs, outs))
                return inner.renamed(mapping)
            case Par(left, right):
                p1, p2 = go(left, scope), go(right, scope)
                return _Part(p1.variables + p2.variables, p1.constraints + p2.constraints,
                             p1.inputs + p2.inputs, p1.outputs + p2.outputs,
                             p1.summed | p2.summed, p1.upper | p2.upper)
            case Let():
                return go(e.body, {**scope, e.key: (e.bound, scope)})
            case Bind(a, b, body):
                part = go(body, scope)
                if a not in part.outputs or b not in part.inputs:
                    raise FlowTypeError(f"bind <{a},{b}> needs output {a} and input {b}",
                                        "bind-arcs")
                part.constraints.append(Constraint(LinearExpr({a: 1, b: -1}), "==", 0))
                part.inputs.remove(b)
                part.outputs.remove(a)
                joined = min(part.upper[a], part.upper[b])
                part.summed[a] = joined
                part.upper[a] = joined
                return part
        raise TypeError(f"not a core expression: {e!r}")

    part = go(expr, {})
    return CoupledSystem(LinearSystem(tuple(part.variables), tuple(part.constraints)),
                         tuple(part.inputs), tuple(part.outputs), tuple(part.summed.items()))


@dataclass(frozen=True)
class Optimum:
    io_flow: Flow
    witness: Flow
    value: object


def optimize_coupled(coupled, fixed, kind):
    """Minimise the objective with the arcs in ``fixed`` pinned."""
    unknown = set(fixed) - set(coupled.io_arcs)
    if unknown:
        raise FlowTypeError(f"pinned arcs {sorted(unknown)} are not inputs or outputs",
                            "unknown-arc")
    pins = [Constraint(LinearExpr.var(a), "==", v) for a, v in fixed.items()]
    result = lp_optimize(coupled.system.extended(pins), coupled.objective(kind), "min")
    if result.status != OPTIMAL:
        return None
    witness = Flow(result.witness, FULL)
    return Optimum(witness.restrict(coupled.io_arcs, IO), witness, result.value)


def _require_closed(expr):
    bound = {e.key for e in walk(expr) if isinstance(e, Let)}
    free = sorted({e.key for e in walk(expr) if isinstance(e, HoleRef)} - bound)
    if free:
        raise FlowTypeError(f"open specs are not supported here (free holes {free})",
                            "relativized-open-spec-unsupported")


def optimize(expr, decls, fixed, kind):
    """Optimal flow for ``expr`` given values on some input/output arcs.

    Returns an :class:`Optimum` (io restriction, full witness, objective
    value) or None when no feasible flow matches ``fixed``.
    """
    core = desugar(expr, decls)
    _require_closed(core)
    return optimize_coupled(build_coupled(core, decls), fixed, kind)


@dataclass(frozen=True)
class Membership:
    ok: bool
    reason: str

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class RelativizedTyping:
    """A principal typing plus an exact optimisation oracle."""

    typing: object
    derivation: object
    coupled: CoupledSystem
    kind: str

    def optimize(self, fixed):
        return optimize_coupled(self.coupled, fixed, self.kind)

    def member(self, io_values, pinned, value):
        """Is ``io_values`` with objective ``value`` an optimal choice when
        only the arcs in ``pinned`` are prescribed?"""
        io = set(self.coupled.io_arcs)
        if set(io_values) != io:
            return Membership(False, "not-total")
        if not set(pinned) <= io:
            return Membership(False, "unknown-arc")
        best_here = self.optimize(dict(io_values))
        if best_here is None:
            return Membership(False, "not-in-ioSem")
        if best_here.value != value:
            return Membership(False, "objective-mismatch")
        best = self.optimize({a: io_values[a] for a in pinned})
        if best.value != value:
            return Membership(False, "not-optimal")
        return Membership(True, "ok")


def derive_relativized(expr, decls, kind, cap=DEFAULT_CAP):
    core = desugar(expr, decls)
    _require_closed(core)
    _weights({}, kind)
    typing, derivation = derive(core, decls, cap=cap)
    return RelativizedTyping(typing, derivation, build_coupled(core, decls), kind)


def member_relativized(expr, decls, io_values, pinned, value, kind):
    core = desugar(expr, decls)
    _require_closed(core)
    return RelativizedTyping(None, None, build_coupled(core, decls), kind).member(
        io_values, pinned, value)
