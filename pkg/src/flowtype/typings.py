"""Interval typings over the input/output arcs of a network.

A typing assigns a closed interval to every nonempty subset ``A`` of the
ordered arcs ``inputs + outputs``; the constrained quantity is the signed
sum ``sum(A & inputs) - sum(A & outputs)``.  Subsets are bitmasks: bit
``k`` stands for the ``k``-th arc of ``inputs + outputs`` and entry
``mask - 1`` of ``entries`` holds the interval for ``mask``.
"""

from dataclasses import dataclass

from .errors import DimensionCapExceeded, TypingError
from .intervals import Interval
from .lp import (UNBOUNDED, Constraint, LinearExpr, LinearSystem, is_empty,
                 lp_optimize, project_interval)
from .model import Flow

DEFAULT_CAP = 16


def check_cap(m, cap=DEFAULT_CAP):
    if m > cap:
        raise DimensionCapExceeded(f"{m} input/output arcs exceed the cap of {cap}")


def subset_expr(inputs, outputs, mask):
    """``sum(selected inputs) - sum(selected outputs)`` for a subset mask."""
    plus = [a for k, a in enumerate(inputs) if mask >> k & 1]
    off = len(inputs)
    minus = [a for k, a in enumerate(outputs) if mask >> (off + k) & 1]
    return LinearExpr.of(plus, minus)


def _as_interval(value):
    if isinstance(value, Interval):
        return value
    lo, hi = value
    return Interval(lo, hi)


@dataclass(frozen=True)
class Typing:
    inputs: tuple
    outputs: tuple
    entries: tuple
    rejected: bool = False

    def __post_init__(self):
        inputs, outputs = tuple(self.inputs), tuple(self.outputs)
        entries = tuple(_as_interval(e) for e in self.entries)
        dims = inputs + outputs
        if len(set(dims)) != len(dims):
            raise TypingError("typing repeats an arc name", "duplicate-arc")
        if len(entries) != (1 << len(dims)) - 1:
            raise TypingError(f"typing over {len(dims)} arcs needs {(1 << len(dims)) - 1} "
                              f"entries, got {len(entries)}", "dimension-mismatch")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "entries", entries)

    # construction

    @classmethod
    def build(cls, inputs, outputs, interval_of, rejected=False):
        """Fill every subset by calling ``interval_of(mask)``."""
        m = len(inputs) + len(outputs)
        return cls(inputs, outputs, tuple(interval_of(mask) for mask in range(1, 1 << m)), rejected)

    @classmethod
    def empty(cls, inputs, outputs):
        m = len(inputs) + len(outputs)
        return cls(inputs, outputs, (Interval.empty(),) * ((1 << m) - 1), True)

    @classmethod
    def from_table(cls, inputs, outputs, table):
        """``table`` maps iterables of arc names to intervals or pairs."""
        dims = tuple(inputs) + tuple(outputs)
        index = {a: k for k, a in enumerate(dims)}
        entries = [None] * ((1 << len(dims)) - 1)
        for arcs, value in table.items():
            arcs = (arcs,) if isinstance(arcs, str) else tuple(arcs)
            mask = sum(1 << index[a] for a in arcs)
            if mask == 0:
                raise TypingError("empty subset in typing table", "bad-subset")
            entries[mask - 1] = _as_interval(value)
        if None in entries:
            raise TypingError("typing table does not cover every subset", "dimension-mismatch")
        return cls(inputs, outputs, tuple(entries))

    # access

    @property
    def dims(self):
        return self.inputs + self.outputs

    @property
    def m(self):
        return len(self.inputs) + len(self.outputs)

    @property
    def is_void(self):
        """True when some entry is empty (or the typing is marked rejected)."""
        return self.rejected or any(e.is_empty for e in self.entries)

    def mask_of(self, arcs):
        index = {a: k for k, a in enumerate(self.dims)}
        try:
            return sum(1 << index[a] for a in set(arcs))
        except KeyError as exc:
            raise TypingError(f"arc {exc.args[0]} is not in the typing", "unknown-arc") from None

    def split(self, mask):
        """The (plus, minus) arc lists of a subset."""
        plus = [a for k, a in enumerate(self.inputs) if mask >> k & 1]
        off = len(self.inputs)
        minus = [a for k, a in enumerate(self.outputs) if mask >> (off + k) & 1]
        return plus, minus

    def expr(self, mask):
        return subset_expr(self.inputs, self.outputs, mask)

    def label(self, mask):
        plus, minus = self.split(mask)
        return "".join(["+" + a for a in plus] + ["-" + a for a in minus]).lstrip("+")

    def __getitem__(self, key):
        mask = key if isinstance(key, int) else self.mask_of([key] if isinstance(key, str) else key)
        if not 0 < mask < 1 << self.m:
            raise TypingError(f"subset mask {mask} out of range", "bad-subset")
        return self.entries[mask - 1]

    def items(self):
        return ((mask, self.entries[mask - 1]) for mask in range(1, 1 << self.m))

    def renamed(self, mapping):
        return Typing(tuple(mapping.get(a, a) for a in self.inputs),
                      tuple(mapping.get(a, a) for a in self.outputs),
                      self.entries, self.rejected)

    def __str__(self):
        head = f"in: {', '.join(self.inputs) or '-'}; out: {', '.join(self.outputs) or '-'}"
        if self.m == 0:
            return head + ("\nrejected" if self.rejected else "\naccepted")
        return "\n".join([head] + [f"{self.label(mask)} : {iv}" for mask, iv in self.items()])


def align(typing, like):
    """Rename ``typing`` onto the arc names of ``like``.

    Matching name sets are reordered by name; otherwise names are mapped by
    position, which needs equal input and output counts.
    """
    if typing.inputs == like.inputs and typing.outputs == like.outputs:
        return typing
    if (len(typing.inputs), len(typing.outputs)) != (len(like.inputs), len(like.outputs)):
        raise TypingError("typings have different input/output counts", "dimension-mismatch")
    if set(typing.inputs) == set(like.inputs) and set(typing.outputs) == set(like.outputs):
        bit = {a: k for k, a in enumerate(typing.dims)}
        moves = [1 << bit[a] for a in like.dims]

        def source(mask):
            old = sum(b for k, b in enumerate(moves) if mask >> k & 1)
            return typing.entries[old - 1]
        return Typing.build(like.inputs, like.outputs, source, typing.rejected)
    return Typing(like.inputs, like.outputs, typing.entries, typing.rejected)


def poly_of(typing):
    """The polytope of input/output assignments that satisfy the typing."""
    constraints = []
    if typing.is_void:
        constraints.append(Constraint(LinearExpr(), ">=", 1))
    else:
        for mask, iv in typing.items():
            e = typing.expr(mask)
            if iv.lo == iv.hi:
                constraints.append(Constraint(e, "==", iv.lo))
            else:
                constraints.append(Constraint(e, ">=", iv.lo))
                constraints.append(Constraint(e, "<=", iv.hi))
    return LinearSystem(typing.dims, tuple(constraints))


def first_violation(typing, flow):
    """The first subset whose interval misses the flow, as ``(mask, value)``."""
    values = flow.values if isinstance(flow, Flow) else flow
    missing = set(typing.dims) - set(values)
    extra = set(values) - set(typing.dims)
    if missing or extra:
        raise TypingError(f"flow and typing disagree on arcs: missing {sorted(missing)}, "
                          f"extra {sorted(extra)}", "dimension-mismatch")
    if typing.m == 0:
        return None if not typing.rejected else (0, 0)
    for mask, iv in typing.items():
        value = typing.expr(mask).evaluate(values)
        if value not in iv:
            return mask, value
    return None


def satisfies(typing, flow):
    return first_violation(typing, flow) is None


def tight(typing):
    """Shrink every interval to the exact range over the polytope."""
    system = poly_of(typing)
    if is_empty(system):
        return Typing.empty(typing.inputs, typing.outputs)
    return Typing.build(typing.inputs, typing.outputs,
                        lambda mask: project_interval(system, typing.expr(mask)))


def is_tight(typing):
    return tight(typing) == typing


def is_subtype(sub, sup):
    """``sub <: sup``: every assignment allowed by ``sup`` is allowed by ``sub``.

    A subtype may be less tight than its supertype; the polytope of the
    supertype must sit inside that of the subtype.
    """
    sup = align(sup, sub)
    system = poly_of(sup)
    if is_empty(system):
        return True
    if sub.is_void:
        return False
    for mask, iv in sub.items():
        own = sup.entries[mask - 1]
        if own.issubset(iv):
            continue
        e = sub.expr(mask)
        low = lp_optimize(system, e, "min")
        if low.status == UNBOUNDED or low.value < iv.lo:
            return False
        high = lp_optimize(system, e, "max")
        if high.status == UNBOUNDED or high.value > iv.hi:
            return False
    return True


def equiv(first, second):
    return is_subtype(first, second) and is_subtype(second, first)
