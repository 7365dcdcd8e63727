"""Operations on typings that mirror the network constructors."""

from .errors import TypingError
from .lp import Constraint, LinearSystem, is_empty, project_interval
from .typings import DEFAULT_CAP, Typing, check_cap, subset_expr


def interval_add(first, second):
    return first + second


def par_compose(first, second, cap=DEFAULT_CAP):
    """Typing of two networks placed side by side."""
    shared = set(first.dims) & set(second.dims)
    if shared:
        raise TypingError(f"typings share arcs {sorted(shared)}", "overlapping-dimensions")
    inputs = first.inputs + second.inputs
    outputs = first.outputs + second.outputs
    check_cap(len(inputs) + len(outputs), cap)
    if first.is_void or second.is_void:
        return Typing.empty(inputs, outputs)

    # new bit k -> (bit in first, bit in second); exactly one is nonzero
    n1, n2 = len(first.inputs), len(second.inputs)
    spread = ([(1 << k, 0) for k in range(n1)]
              + [(0, 1 << k) for k in range(n2)]
              + [(1 << (n1 + k), 0) for k in range(len(first.outputs))]
              + [(0, 1 << (n2 + k)) for k in range(len(second.outputs))])

    def entry(mask):
        m1 = m2 = 0
        for k, (b1, b2) in enumerate(spread):
            if mask >> k & 1:
                m1 |= b1
                m2 |= b2
        if not m2:
            return first.entries[m1 - 1]
        if not m1:
            return second.entries[m2 - 1]
        return first.entries[m1 - 1] + second.entries[m2 - 1]

    return Typing.build(inputs, outputs, entry)


def _check_pair(typing, pair):
    out_arc, in_arc = pair
    missing = [a for a in pair if a not in typing.dims]
    if missing:
        raise TypingError(f"arcs {missing} are not in the typing", "arcs-not-found")
    if out_arc not in typing.outputs or in_arc not in typing.inputs:
        raise TypingError(f"bind <{out_arc},{in_arc}> needs an output then an input",
                          "wrong-polarity")


def loop_system(typing, pair):
    """``poly(typing)`` with the two bound arcs identified.

    The input arc is replaced by the output arc throughout, and constraints
    that become identical are merged.  Returns None when that merge alone
    already shows emptiness.
    """
    out_arc, in_arc = pair
    merged = {}
    for mask, iv in typing.items():
        e = typing.expr(mask).substitute({in_arc: out_arc})
        key = e.terms
        if key in merged:
            iv = merged[key][1].intersect(iv)
        if iv.is_empty or (not key and 0 not in iv):
            return None
        merged[key] = (e, iv)
    constraints = []
    for e, iv in merged.values():
        if not e.terms:
            continue
        if iv.lo == iv.hi:
            constraints.append(Constraint(e, "==", iv.lo))
        else:
            constraints.append(Constraint(e, ">=", iv.lo))
            constraints.append(Constraint(e, "<=", iv.hi))
    variables = tuple(a for a in typing.dims if a != in_arc)
    return LinearSystem(variables, tuple(constraints))


def loop_typing(typing, pair, cap=DEFAULT_CAP):
    """Typing after feeding output ``pair[0]`` back into input ``pair[1]``.

    Every interval over the remaining arcs is recomputed exactly over the
    original polytope cut by the hyperplane ``x_out = x_in``.  An empty cut
    yields the all-empty (rejected) typing.
    """
    _check_pair(typing, pair)
    out_arc, in_arc = pair
    inputs = tuple(a for a in typing.inputs if a != in_arc)
    outputs = tuple(a for a in typing.outputs if a != out_arc)
    check_cap(len(inputs) + len(outputs), cap)
    if typing.is_void:
        return Typing.empty(inputs, outputs)
    system = loop_system(typing, pair)
    if system is None or is_empty(system):
        return Typing.empty(inputs, outputs)
    return Typing.build(inputs, outputs,
                        lambda mask: project_interval(system, subset_expr(inputs, outputs, mask)))


def loop_capacities(lower, upper, pair):
    """Capacities after fusing output ``a`` with input ``b`` into one arc ``a``."""
    out_arc, in_arc = pair
    lower, upper = dict(lower), dict(upper)
    lower[out_arc] = max(lower[out_arc], lower.pop(in_arc))
    upper[out_arc] = min(upper[out_arc], upper.pop(in_arc))
    return lower, upper


def occurrence_prefix(hole, index, prefix=""):
    return f"{prefix}{hole}.{index}."


def rename_typing(typing, hole, index, prefix=""):
    """Rename arcs for occurrence ``index`` of ``hole``; idempotent."""
    stem = occurrence_prefix(hole, index, prefix)
    return typing.renamed({a: a if a.startswith(stem) else stem + a for a in typing.dims})


def rebase_typing(typing, inputs, outputs):
    """Replace arc names positionally."""
    if (len(inputs), len(outputs)) != (len(typing.inputs), len(typing.outputs)):
        raise TypingError("rebase needs matching input and output counts", "dimension-mismatch")
    return Typing(tuple(inputs), tuple(outputs), typing.entries, typing.rejected)
