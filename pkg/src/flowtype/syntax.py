"""Abstract syntax of network expressions.

Core forms are ``SmallRef``, ``HoleRef``, ``Par``, ``Let`` and ``Bind``.
``BindSet``, ``Conn``, ``Cascade`` and ``LetSet`` are sugar removed by
:func:`flowtype.frontend.desugar`.

Leaves carry a ``prefix`` that is prepended to every arc they expose; the
prefix is empty in source programs and is set when desugaring duplicates a
subexpression.  ``span`` is a ``(line, column)`` pair and never takes part
in equality.
"""

from dataclasses import dataclass, field


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class SmallRef:
    name: str
    prefix: str = ""
    span: tuple = _span()


@dataclass(frozen=True)
class HoleRef:
    """Occurrence ``index`` of a hole.

    ``name`` is the declared hole (it fixes the arcs); ``binder`` names
    the ``Let`` that binds it when that differs from ``name``.
    """

    name: str
    index: int = 0
    binder: str | None = None
    prefix: str = ""
    span: tuple = _span()

    @property
    def key(self):
        return self.binder or self.name


@dataclass(frozen=True)
class Par:
    left: object
    right: object
    span: tuple = _span()


@dataclass(frozen=True)
class Let:
    hole: str
    bound: object
    body: object
    binder: str | None = None
    span: tuple = _span()

    @property
    def key(self):
        return self.binder or self.hole


@dataclass(frozen=True)
class Bind:
    out_arc: str
    in_arc: str
    body: object
    span: tuple = _span()


@dataclass(frozen=True)
class BindSet:
    pairs: tuple
    body: object
    span: tuple = _span()


@dataclass(frozen=True)
class Conn:
    pairs: tuple
    left: object
    right: object
    span: tuple = _span()


@dataclass(frozen=True)
class Cascade:
    left: object
    right: object
    span: tuple = _span()


@dataclass(frozen=True)
class LetSet:
    hole: str
    choices: tuple
    body: object
    span: tuple = _span()


CORE = (SmallRef, HoleRef, Par, Let, Bind)
SUGAR = (BindSet, Conn, Cascade, LetSet)


def children(expr):
    match expr:
        case Par(left, right) | Cascade(left, right) | Conn(_, left, right):
            return (left, right)
        case Let(_, bound, body):
            return (bound, body)
        case Bind(_, _, body) | BindSet(_, body):
            return (body,)
        case LetSet(_, choices, body):
            return tuple(choices) + (body,)
    return ()


def walk(expr):
    """Pre-order, left to right."""
    yield expr
    for child in children(expr):
        yield from walk(child)


def is_core(expr):
    return all(isinstance(e, CORE) for e in walk(expr))


def describe(expr):
    """One-line summary of the outermost constructor."""
    match expr:
        case SmallRef(name, prefix):
            return f"network {prefix}{name}"
        case HoleRef():
            return f"hole {expr.prefix}{expr.name}#{expr.index}"
        case Par():
            return "parallel composition"
        case Let():
            return f"let {expr.key}"
        case Bind(a, b):
            return f"bind <{a},{b}>"
        case BindSet(pairs) | Conn(pairs):
            return "connect {" + ", ".join(f"{a}->{b}" for a, b in pairs) + "}"
        case Cascade():
            return "cascade"
        case LetSet(hole):
            return f"let {hole} in {{...}}"
    return type(expr).__name__


def show(expr):
    """Concrete syntax for a core or sugared expression."""
    match expr:
        case SmallRef(name, prefix):
            return prefix + name
        case HoleRef():
            return f"{expr.prefix}{expr.key}#{expr.index}"
        case Par(left, right):
            return f"({show(left)} || {show(right)})"
        case Let():
            return f"(let {expr.key} = {show(expr.bound)} in {show(expr.body)})"
        case Bind(a, b, body):
            return f"bind <{a},{b}> {_atom(body)}"
        case BindSet(pairs, body):
            return f"loop {{{_pairs(pairs)}}} {_atom(body)}"
        case Conn(pairs, left, right):
            return f"conn {{{_pairs(pairs)}}} ({show(left)}, {show(right)})"
        case Cascade(left, right):
            return f"({show(left)} |> {show(right)})"
        case LetSet(hole, choices, body):
            return f"(let {hole} in {{{', '.join(show(c) for c in choices)}}} in {show(body)})"
    raise TypeError(f"not a network expression: {expr!r}")


def _pairs(pairs):
    return ", ".join(f"{a}->{b}" for a, b in pairs)


def _atom(expr):
    text = show(expr)
    if isinstance(expr, (Let, LetSet)):
        return f"({text})"
    return text
