import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowtype.errors import DesugarError, FlowTypeError, SyntaxFault
from flowtype.frontend import check_well_formed, desugar, io_signature
from flowtype.parser import parse, parse_program
from flowtype.syntax import (Bind, BindSet, Cascade, Conn, HoleRef, Let, LetSet, Par,
                             SmallRef, is_core, show, walk)

from generators import random_spec, rng_for
from tables import load_spec

DECLS = """
network A { in a1 : n [0,5]; out a2 : n [0,5]; }
network B { in b1 : n [0,5]; out b2 : n [0,5]; }
network C { in c1 : n [0,5]; in c2 : n [0,5]; out c3 : n [0,9]; }
hole X { in e1; out e2; }
"""


def program(main):
    return parse_program(DECLS + f"main = {main};")


def conditions(main, closed=True):
    prog = program(main)
    return sorted({e.condition for e in check_well_formed(prog.main, prog, closed).errors})


def test_precedence_and_holes():
    e = parse("A || B |> C", holes=())
    assert e == Par(SmallRef("A"), Cascade(SmallRef("B"), SmallRef("C")))
    e = parse("let X = A in X || X")
    assert e == Let("X", SmallRef("A"), Par(HoleRef("X", 1), HoleRef("X", 2)))
    e = parse("bind <a2, a1> A || B")
    assert e == Par(Bind("a2", "a1", SmallRef("A")), SmallRef("B"))
    assert parse("Y || Y", holes=("Y",)) == Par(HoleRef("Y", 1), HoleRef("Y", 2))


def test_sugar_forms_parse():
    assert isinstance(parse("loop {a2->a1} A"), BindSet)
    c = parse("conn {a2->b1} (A, B)")
    assert c == Conn((("a2", "b1"),), SmallRef("A"), SmallRef("B"))
    s = parse("let X in {A, B} in X")
    assert isinstance(s, LetSet) and s.choices == (SmallRef("A"), SmallRef("B"))


def test_show_is_readable():
    assert show(parse("bind <a2,a1> (A || B)")) == "bind <a2,a1> (A || B)"
    assert show(parse("loop {a2->a1, b2->b1} A")) == "loop {a2->a1, b2->b1} A"


@pytest.mark.parametrize("text, code", [
    ("main = A ||", "syntax-error"),
    ("main = (A", "syntax-error"),
    ("network A { in a : n [0,1]; } main = try A;", "unsupported-binder"),
    ("network A { in a : n [0,1]; } main = letrec;", "unsupported-binder"),
    ("network A { in a : n [0,inf]; } main = A;", "infinite-capacity"),
    ("network A { in a : n; } main = A;", "infinite-capacity"),
    ("network A { in a : n [2,1]; } main = A;", "inverted-bounds"),
    ("network A { in a : n [0,1]; } network A { in b : n [0,1]; } main = A;",
     "duplicate-declaration"),
    ("network B = copy A; main = B;", "undeclared"),
])
def test_parse_errors(text, code):
    with pytest.raises(SyntaxFault) as err:
        parse_program(text)
    assert err.value.code == code


def test_error_positions():
    with pytest.raises(SyntaxFault) as err:
        parse_program("network A {\n  in a : n [0,1]\n}\nmain = A;")
    assert "3:1" in str(err.value)


def test_big_replaces_inf_and_copy_renames():
    prog = parse_program(DECLS + "network A2 = copy A;\nnetwork D { in d : n [0, inf]; out e : n; }"
                         "\nmain = A || A2;", big=100)
    assert prog.networks["D"].upper == {"d": 100, "e": 100}
    assert prog.networks["A2"].inputs == ("A2.a1",)


def test_io_signature():
    prog = program("bind <a2, b1> (A || B)")
    sig = io_signature(prog.main, prog)
    assert sig.inputs == ("a1",) and sig.outputs == ("b2",)
    assert sig.internal == frozenset({"a2"})
    prog = program("let X = A in X || X")
    assert io_signature(prog.main, prog).inputs == ("X.1.e1", "X.2.e1")


def test_desugar_cascade_and_conn():
    prog = program("A |> B |> C")
    with pytest.raises(DesugarError) as err:
        desugar(prog.main, prog)
    assert err.value.code == "dimension-mismatch"
    prog = program("A |> B")
    core = desugar(prog.main, prog)
    assert core == Bind("a2", "b1", Par(SmallRef("A"), SmallRef("B")))
    prog = program("conn {a2->c1, b2->c2} (A || B, C)")
    core = desugar(prog.main, prog)
    assert core == Bind("a2", "c1", Bind("b2", "c2", Par(Par(SmallRef("A"), SmallRef("B")),
                                                          SmallRef("C"))))
    assert all(is_core(n) for n in walk(core))


def test_desugar_rejects_bad_maps():
    for main in ("loop {a2->a1, a2->b1} (A || B)", "loop {a1->a2} A", "conn {b2->a1} (A, B)"):
        prog = program(main)
        with pytest.raises(DesugarError) as err:
            desugar(prog.main, prog)
        assert err.value.code == "bad-theta"


def test_letset_makes_prefixed_copies():
    prog = program("let X in {A, B} in X || C")
    core = desugar(prog.main, prog)
    assert isinstance(core, Let) and core.key == "X~1"
    assert isinstance(core.body, Let) and core.body.key == "X~2"
    refs = [n for n in walk(core) if isinstance(n, (HoleRef, SmallRef))]
    assert HoleRef("X", 1, "X~1", "X~1:") in refs and HoleRef("X", 1, "X~2", "X~2:") in refs
    assert SmallRef("C", "X~1:") in refs and SmallRef("C", "X~2:") in refs
    assert check_well_formed(prog.main, prog).ok
    sig = io_signature(prog.main, prog)
    assert sig.inputs == ("X~1:X.1.e1", "X~1:c1", "X~1:c2", "X~2:X.1.e1", "X~2:c1", "X~2:c2")


def test_well_formed_programs():
    assert conditions("let X = A in X || X") == []
    assert conditions("bind <a2, b1> (A || B)") == []
    for name in ("gadget.flow", "chain.flow", "unsafe.flow"):
        prog = load_spec(name)
        assert check_well_formed(prog.main, prog).ok


def test_each_condition_is_reported():
    assert conditions("let X = C in X") == ["matching-dimensions"]
    assert conditions("A || A") == ["unique-arc-naming"]
    assert conditions("X") == ["one-binding-occurrence"]
    assert conditions("X", closed=False) == []
    assert conditions("(let X = A in X) || X") == ["one-binding-occurrence"]
    assert conditions("Q") == ["undeclared"]
    assert conditions("A |> C") == ["desugar"]


def test_reuse_hint_names_copy_declaration():
    prog = program("A || A")
    (error,) = check_well_formed(prog.main, prog).errors
    assert "network A2 = copy A" in error.message
    assert error.span == (6, 13)


def test_bind_arcs_and_double_binding():
    prog = program("A")
    bad = Bind("a1", "a2", SmallRef("A"))
    assert [e.condition for e in check_well_formed(bad, prog).errors] == ["bind-arcs"]
    twice = Let("X", SmallRef("A"), Let("X", SmallRef("B"), HoleRef("X", 1)))
    assert "one-binding-occurrence" in {e.condition for e in check_well_formed(twice, prog).errors}
    with pytest.raises(FlowTypeError) as err:
        io_signature(bad, prog)
    assert err.value.code == "bind-arcs"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_desugar_idempotent_and_signature_disjoint(seed):
    prog = random_spec(rng_for(seed))
    once = desugar(prog.main, prog)
    assert desugar(once, prog) == once
    sig = io_signature(once, prog)
    sets = [set(sig.inputs), set(sig.outputs), set(sig.internal)]
    assert not (sets[0] & sets[1] or sets[0] & sets[2] or sets[1] & sets[2])
    for node in walk(once):
        if isinstance(node, Bind):
            inner = io_signature(node.body, prog)
            outer = io_signature(node, prog)
            assert len(inner.inputs) - len(outer.inputs) == 1
            assert len(inner.outputs) - len(outer.outputs) == 1


def test_reparsing_gives_identical_indices():
    text = "let X = A in (X || let Y = B in Y || X) || Y"
    assert parse(text, holes=("Y",)) == parse(text, holes=("Y",))
    refs = [(n.name, n.index) for n in walk(parse(text, holes=("Y",))) if isinstance(n, HoleRef)]
    assert refs == [("X", 1), ("Y", 1), ("X", 2), ("Y", 2)]


def test_cascade_is_associative_on_signatures():
    prog = parse_program(DECLS + """
        network D { in d1 : n [0,5]; out d2 : n [0,5]; }
        network E { in f1 : n [0,5]; out f2 : n [0,5]; }
        main = A;""")
    left = parse("(A |> D) |> E")
    right = parse("A |> (D |> E)")
    assert io_signature(left, prog) == io_signature(right, prog)
