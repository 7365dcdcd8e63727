"""End-to-end acceptance checks, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per
criterion is printed at the end of the session.
"""

from fractions import Fraction

import pytest

from flowtype.cli import main
from flowtype.engine import derive, flatten, infer_small
from flowtype.errors import UnsafeSpecification
from flowtype.lp import (OPTIMAL, Constraint, LinearExpr, enumerate_vertices, is_empty,
                         lp_optimize, project_interval)
from flowtype.model import FULL, check_flow_feasible, network_system
from flowtype.objectives import AU, HR, derive_relativized, objective_value
from flowtype.ops import loop_typing, par_compose, rename_typing
from flowtype.typings import Typing, equiv, is_subtype, poly_of, tight

from generators import random_network, random_spec, random_typing, rng_for
from tables import GADGET_A, GADGET_B, SPECS, load_spec

criterion = pytest.mark.criterion


def vertex_typing(system, inputs, outputs):
    """Typing read off the vertices of ``system``; the independent oracle."""
    vertices = enumerate_vertices(system)
    if not vertices:
        return Typing.empty(inputs, outputs)
    probe = Typing.empty(inputs, outputs)

    def entry(mask):
        values = [probe.expr(mask).evaluate(v) for v in vertices]
        return (min(values), max(values))
    return Typing.build(inputs, outputs, entry)


def assorted_typing(rng):
    """A random typing: a network's tight typing, a loosened one, or a raw table."""
    roll = rng.random()
    if roll < 0.4:
        return infer_small(random_network(rng, "N", max_nodes=3))
    if roll < 0.7:
        t = infer_small(random_network(rng, "N", max_nodes=3))
        if t.is_void:
            return t
        return Typing.build(t.inputs, t.outputs,
                            lambda mask: (t[mask].lo - rng.randint(0, 3), t[mask].hi + rng.randint(0, 3)))
    return random_typing(rng, rng.randint(1, 2), rng.randint(1, 2), spread=rng.choice([0.3, 0.6, 0.9]))


@criterion(1, "small-network typings equal the vertex-enumeration oracle")
def test_small_networks_against_vertex_oracle():
    rng = rng_for(101)
    for k in range(200):
        net = random_network(rng, "N", inputs=(1, 2), outputs=(1, 2), max_arcs=8, max_nodes=5)
        system = network_system(net)
        got = infer_small(net)
        want = vertex_typing(system, net.inputs, net.outputs)
        assert got.is_void == is_empty(system) == want.is_void, k
        if not got.is_void:
            assert got == want, k


@criterion(2, "derived typing equals the typing of the flattened network")
def test_compositional_equals_monolithic():
    rng = rng_for(202)
    verdicts = {True: 0, False: 0}
    for k in range(100):
        prog = random_spec(rng)
        flat = flatten(prog.main, prog)
        empty = is_empty(network_system(flat))
        try:
            typing, _ = derive(prog.main, prog)
        except UnsafeSpecification:
            assert empty, k
            verdicts[False] += 1
            continue
        assert not empty, k
        assert equiv(typing, infer_small(flat)), k
        verdicts[True] += 1
    # both verdicts must actually occur for the comparison to mean anything
    assert verdicts[True] > 20 and verdicts[False] > 5


@criterion(3, "reference gadget typings: tightness and subtyping")
def test_reference_tables():
    assert tight(GADGET_A) == GADGET_A
    assert tight(GADGET_B) == GADGET_B
    assert is_subtype(GADGET_B, GADGET_A)
    assert not is_subtype(GADGET_A, GADGET_B)
    assert not equiv(GADGET_A, GADGET_B)
    assert infer_small(load_spec("gadget.flow").networks["A"]) == GADGET_A


@criterion(4, "loop typing equals projection of the polytope cut by x_a = x_b")
def test_loop_equation():
    rng = rng_for(404)
    cases = 0
    while cases < 100:
        t = assorted_typing(rng)
        if not t.inputs or not t.outputs:
            continue
        cases += 1
        pair = (rng.choice(t.outputs), rng.choice(t.inputs))
        got = loop_typing(t, pair)
        cut = poly_of(t).extended([Constraint(LinearExpr.var(pair[0]) - LinearExpr.var(pair[1]),
                                              "==", 0)])
        assert got.is_void == is_empty(cut), cases
        if got.is_void:
            continue
        for mask, iv in got.items():
            assert iv == project_interval(cut, got.expr(mask)), (cases, mask)
        if t.m <= 4:
            assert got == vertex_typing(cut, got.inputs, got.outputs), cases


def _vertex_samples(rng, system, count=4):
    """Optimal vertices for a few random directions."""
    points = []
    for _ in range(count):
        direction = LinearExpr({a: rng.randint(-3, 3) for a in system.variables})
        result = lp_optimize(system, direction)
        if result.status == OPTIMAL and result.witness not in points:
            points.append(result.witness)
    return points


def _nudge(rng, point):
    """A point near ``point``, often outside the polytope."""
    a = rng.choice(sorted(point))
    return dict(point, **{a: point[a] + rng.choice([-3, -1, Fraction(1, 2), 1, 3])})


@criterion(5, "parallel composition is the product of polytopes")
def test_parallel_product_law():
    rng = rng_for(505)
    for k in range(100):
        t1 = assorted_typing(rng)
        t2 = rename_typing(assorted_typing(rng), "R", 1)
        both = par_compose(t1, t2)
        p1, p2, p12 = poly_of(t1), poly_of(t2), poly_of(both)
        samples1, samples2 = _vertex_samples(rng, p1), _vertex_samples(rng, p2)
        samples1 += [_nudge(rng, v) for v in samples1] or [{a: 0 for a in t1.dims}]
        samples2 += [_nudge(rng, v) for v in samples2] or [{a: 0 for a in t2.dims}]
        for x in samples1:
            for y in samples2:
                assert p12.contains({**x, **y}) == (p1.contains(x) and p2.contains(y)), k
        if t1.is_void or t2.is_void:
            assert both.is_void
            continue
        tt1, tt2, tboth = tight(t1), tight(t2), tight(both)
        if tt1.is_void or tt2.is_void:
            assert tboth.is_void
            continue
        for mask, iv in tboth.items():
            plus, minus = tboth.split(mask)
            arcs = plus + minus
            left = [a for a in arcs if a in t1.dims]
            right = [a for a in arcs if a in t2.dims]
            if left and right:
                assert iv == tt1[left] + tt2[right], (k, mask)


@criterion(6, "tightening is idempotent and preserves the polytope")
def test_tightening():
    rng = rng_for(606)
    for k in range(200):
        t = assorted_typing(rng)
        once = tight(t)
        assert tight(once) == once, k
        assert equiv(once, t), k


def _random_point(coupled, rng):
    """A feasible assignment of the coupled system, or None."""
    objective = LinearExpr({a: rng.randint(-3, 3) for a in coupled.io_arcs})
    result = lp_optimize(coupled.system, objective, rng.choice(["min", "max"]))
    return result.witness if result.status == OPTIMAL else None


def _flat_lp(flat, fixed, kind):
    summed = [a for a in flat.arcs if a.tail is not None]
    weights = {a.name: (1 if kind == HR else Fraction(1) / a.hi) for a in summed}
    pins = [Constraint(LinearExpr.var(a), "==", v) for a, v in fixed.items()]
    return lp_optimize(network_system(flat).extended(pins), LinearExpr(weights), "min")


@criterion(7, "relativized optimum equals LP on the flattened network; monotone in pins")
def test_relativized_correctness():
    rng = rng_for(707)
    checked = 0
    specs = 0
    while specs < 50:
        prog = random_spec(rng, max_io=6, lower_rate=0.1, min_cap=1)
        flat = flatten(prog.main, prog)
        if is_empty(network_system(flat)):
            continue
        specs += 1
        for kind in (HR, AU):
            rt = derive_relativized(prog.main, prog, kind)
            point = _random_point(rt.coupled, rng)
            arcs = list(rt.coupled.io_arcs)
            rng.shuffle(arcs)
            chain = [arcs[:n] for n in range(len(arcs) + 1)]
            previous = None
            for pinned in chain:
                fixed = {a: point[a] for a in pinned}
                best = rt.optimize(fixed)
                want = _flat_lp(flat, fixed, kind)
                assert want.status == OPTIMAL
                assert best.value == want.value
                witness = best.witness.restrict([a.name for a in flat.arcs], FULL)
                assert check_flow_feasible(flat, witness).feasible
                assert objective_value(flat, witness, kind) == best.value
                if previous is not None:
                    assert best.value >= previous
                previous = best.value
                checked += 1
            # the full pin set reproduces the membership verdict
            full = {a: point[a] for a in rt.coupled.io_arcs}
            assert rt.member(full, list(full), rt.optimize(full).value)
    assert checked >= 100


@criterion(8, "unsafe bind is rejected end to end")
def test_unsafe_rejection(capsys):
    code = main(["check", str(SPECS / "unsafe.flow")])
    out = capsys.readouterr().out
    assert code == 2
    assert "bind <a,b>" in out
    prog = load_spec("unsafe.flow")
    flat = flatten(prog.main, prog)
    assert flat.arc("a").lo == 3 and flat.arc("a").hi == 2
    assert is_empty(network_system(flat))


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
