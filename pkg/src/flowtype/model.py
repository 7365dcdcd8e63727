"""Small flow networks, holes and flows."""

from dataclasses import dataclass, field, replace
from fractions import Fraction
from types import MappingProxyType

from .errors import FlowError, NetworkError
from .lp import Constraint, LinearExpr, LinearSystem
from .rationals import as_fraction, pretty_fraction

INPUT = "input"
OUTPUT = "output"
INTERNAL = "internal"


@dataclass(frozen=True)
class Arc:
    """A directed arc.  ``None`` for ``tail`` or ``head`` means dangling."""

    name: str
    tail: str | None
    head: str | None
    lo: Fraction = Fraction(0)
    hi: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))

    @property
    def kind(self):
        if self.tail is None:
            return INPUT
        if self.head is None:
            return OUTPUT
        return INTERNAL

    def __str__(self):
        return f"{self.name} [{pretty_fraction(self.lo)},{pretty_fraction(self.hi)}]"


@dataclass(frozen=True)
class SmallNetwork:
    name: str
    nodes: tuple
    arcs: tuple
    # fused arcs of a flattened network may end up with crossing bounds
    allow_crossed: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        arcs = tuple(self.arcs)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "arcs", arcs)
        if not nodes:
            raise NetworkError(f"network {self.name} has no nodes", "no-nodes")
        if len(set(nodes)) != len(nodes):
            raise NetworkError(f"network {self.name} repeats a node name", "duplicate-node")
        names = [a.name for a in arcs]
        if len(set(names)) != len(names):
            raise NetworkError(f"network {self.name} repeats an arc name", "duplicate-arc")
        known = set(nodes)
        for arc in arcs:
            if arc.tail is None and arc.head is None:
                raise NetworkError(f"arc {arc.name} dangles at both ends", "dangling-arc")
            for end in (arc.tail, arc.head):
                if end is not None and end not in known:
                    raise NetworkError(f"arc {arc.name} touches unknown node {end}", "unknown-node")
            if arc.lo < 0:
                raise NetworkError(f"arc {arc.name} has a negative lower bound", "negative-bound")
            if arc.lo > arc.hi and not self.allow_crossed:
                raise NetworkError(f"arc {arc.name} has lower bound above upper bound",
                                   "inverted-bounds")

    def _of_kind(self, kind):
        return tuple(a.name for a in self.arcs if a.kind == kind)

    @property
    def inputs(self):
        return self._of_kind(INPUT)

    @property
    def outputs(self):
        return self._of_kind(OUTPUT)

    @property
    def internal(self):
        return self._of_kind(INTERNAL)

    @property
    def io_arcs(self):
        return self.inputs + self.outputs

    def arc(self, name):
        for a in self.arcs:
            if a.name == name:
                return a
        raise NetworkError(f"network {self.name} has no arc {name}", "unknown-arc")

    @property
    def lower(self):
        return {a.name: a.lo for a in self.arcs}

    @property
    def upper(self):
        return {a.name: a.hi for a in self.arcs}

    def renamed(self, arc_prefix="", node_prefix="", name=None):
        """Copy with every arc and node name prefixed."""
        def node(n):
            return None if n is None else node_prefix + n
        return SmallNetwork(
            name or self.name,
            tuple(node_prefix + n for n in self.nodes),
            tuple(replace(a, name=arc_prefix + a.name, tail=node(a.tail), head=node(a.head))
                  for a in self.arcs),
            self.allow_crossed,
        )


@dataclass(frozen=True)
class Hole:
    name: str
    inputs: tuple
    outputs: tuple

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        names = self.inputs + self.outputs
        if len(set(names)) != len(names):
            raise NetworkError(f"hole {self.name} repeats an arc name", "duplicate-arc")

    def occurrence_arcs(self, index, prefix=""):
        stem = f"{prefix}{self.name}.{index}."
        return tuple(stem + a for a in self.inputs), tuple(stem + a for a in self.outputs)


FULL = "full"
IO = "io"


@dataclass(frozen=True)
class Flow:
    values: dict = field(default_factory=dict)
    scope: str = FULL

    def __post_init__(self):
        if self.scope not in (FULL, IO):
            raise FlowError(f"unknown flow scope {self.scope!r}", "bad-scope")
        values = {name: as_fraction(v) for name, v in dict(self.values).items()}
        for name, v in values.items():
            if v < 0:
                raise FlowError(f"flow on {name} is negative", "negative-flow")
        object.__setattr__(self, "values", MappingProxyType(values))

    def __getitem__(self, arc):
        try:
            return self.values[arc]
        except KeyError:
            raise FlowError(f"flow does not assign arc {arc}", "unknown-arc") from None

    def restrict(self, arcs, scope=IO):
        return Flow({a: self[a] for a in arcs}, scope)


def flow_sum(flow, arcs):
    return sum((flow[a] for a in arcs), Fraction(0))


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    detail: str

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.detail}"


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple = ()

    @property
    def feasible(self):
        return not self.violations

    def __bool__(self):
        return self.feasible


def check_flow_feasible(net, flow):
    """Check conservation at every node and bounds on every arc."""
    if flow.scope != FULL:
        raise FlowError("feasibility needs a flow on every arc", "scope-mismatch")
    names = {a.name for a in net.arcs}
    extra = set(flow.values) - names
    missing = names - set(flow.values)
    if extra or missing:
        raise FlowError(f"flow domain differs from the arcs of {net.name}: "
                        f"missing {sorted(missing)}, unknown {sorted(extra)}", "unknown-arc")
    violations = []
    for node in net.nodes:
        entering = flow_sum(flow, [a.name for a in net.arcs if a.head == node])
        leaving = flow_sum(flow, [a.name for a in net.arcs if a.tail == node])
        if entering != leaving:
            violations.append(Violation("conservation", node,
                                        f"in {pretty_fraction(entering)} != out {pretty_fraction(leaving)}"))
    for arc in net.arcs:
        v = flow[arc.name]
        if v < arc.lo:
            violations.append(Violation("lower-bound", arc.name,
                                        f"{pretty_fraction(v)} < {pretty_fraction(arc.lo)}"))
        if v > arc.hi:
            violations.append(Violation("upper-bound", arc.name,
                                        f"{pretty_fraction(v)} > {pretty_fraction(arc.hi)}"))
    return FeasibilityReport(tuple(violations))


def arc_partition(net):
    return net.inputs, net.outputs, frozenset(net.internal)


def network_system(net):
    """Conservation equalities and capacity bounds, one variable per arc."""
    constraints = []
    for node in net.nodes:
        entering = [a.name for a in net.arcs if a.head == node]
        leaving = [a.name for a in net.arcs if a.tail == node]
        if entering or leaving:
            constraints.append(Constraint(LinearExpr.of(entering, leaving), "==", 0))
    for arc in net.arcs:
        var = LinearExpr.var(arc.name)
        if arc.lo == arc.hi:
            constraints.append(Constraint(var, "==", arc.lo))
        else:
            constraints.append(Constraint(var, ">=", arc.lo))
            constraints.append(Constraint(var, "<=", arc.hi))
    return LinearSystem(tuple(a.name for a in net.arcs), tuple(constraints))
