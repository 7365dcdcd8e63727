from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowtype.errors import FlowError, NetworkError
from flowtype.model import (Arc, Flow, Hole, SmallNetwork, arc_partition,
                            check_flow_feasible, flow_sum, network_system)
from flowtype.lp import is_empty

from generators import random_network, rng_for


def pipe():
    return SmallNetwork("Pipe", ("n",), (Arc("a1", None, "n", 0, 10), Arc("a2", "n", None, 0, 5)))


def two_path():
    return SmallNetwork("Two", ("u", "v"), (
        Arc("s", None, "u", 0, 20), Arc("p", "u", "v", 0, 5),
        Arc("q", "u", "v", 0, 10), Arc("t", "v", None, 0, 20)))


def test_arc_kinds_and_partition():
    net = two_path()
    assert arc_partition(net) == (("s",), ("t",), frozenset({"p", "q"}))
    assert net.arc("p").kind == "internal"
    assert net.lower["q"] == 0 and net.upper["q"] == 10


@pytest.mark.parametrize("nodes, arcs, code", [
    ((), (), "no-nodes"),
    (("n",), (Arc("a", None, None, 0, 1),), "dangling-arc"),
    (("n",), (Arc("a", None, "m", 0, 1),), "unknown-node"),
    (("n",), (Arc("a", None, "n", 2, 1),), "inverted-bounds"),
    (("n",), (Arc("a", None, "n", -1, 1),), "negative-bound"),
    (("n",), (Arc("a", None, "n", 0, 1), Arc("a", "n", None, 0, 1)), "duplicate-arc"),
])
def test_malformed_networks(nodes, arcs, code):
    with pytest.raises(NetworkError) as err:
        SmallNetwork("Bad", nodes, arcs)
    assert err.value.code == code


def test_flow_sum_of_nothing_is_zero():
    assert flow_sum(Flow({}), []) == 0
    assert flow_sum(Flow({"a": "1/2", "b": 2}), ["a", "b"]) == Fraction(5, 2)


def test_flow_rejects_negative_and_unknown():
    with pytest.raises(FlowError):
        Flow({"a": -1})
    with pytest.raises(FlowError):
        Flow({"a": 1})["b"]


def test_feasibility_report():
    net = two_path()
    good = Flow({"s": 7, "p": 2, "q": 5, "t": 7})
    assert check_flow_feasible(net, good).feasible
    bad = Flow({"s": 7, "p": 6, "q": 5, "t": 7})
    kinds = sorted(v.kind for v in check_flow_feasible(net, bad).violations)
    assert kinds == ["conservation", "conservation", "upper-bound"]


def test_feasibility_needs_full_scope_and_domain():
    with pytest.raises(FlowError) as err:
        check_flow_feasible(pipe(), Flow({"a1": 1, "a2": 1}, "io"))
    assert err.value.code == "scope-mismatch"
    with pytest.raises(FlowError):
        check_flow_feasible(pipe(), Flow({"a1": 1}))


def test_network_system_and_emptiness():
    assert not is_empty(network_system(pipe()))
    tight = SmallNetwork("T", ("n",), (Arc("a", None, "n", 3, 4), Arc("b", "n", None, 0, 2)))
    assert is_empty(network_system(tight))


def test_hole_occurrence_arcs_and_renamed_copy():
    hole = Hole("X", ("e1",), ("e2",))
    assert hole.occurrence_arcs(2) == (("X.2.e1",), ("X.2.e2",))
    copy = pipe().renamed(arc_prefix="P2.", name="P2")
    assert copy.inputs == ("P2.a1",) and copy.name == "P2"
    with pytest.raises(NetworkError):
        Hole("Y", ("a",), ("a",))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_validated_networks_partition_their_arcs(seed):
    net = random_network(rng_for(seed), "N", max_nodes=4)
    ins, outs, internal = arc_partition(net)
    classes = [set(ins), set(outs), set(internal)]
    assert sum(len(c) for c in classes) == len(net.arcs)
    assert set().union(*classes) == {a.name for a in net.arcs}
    assert all(a.lo <= a.hi for a in net.arcs)


@settings(max_examples=80, deadline=None)
@given(st.dictionaries(st.sampled_from("abcdef"), st.fractions(0, 20), min_size=1), st.data())
def test_flow_sum_is_additive(values, data):
    flow = Flow(values)
    names = sorted(values)
    left = data.draw(st.lists(st.sampled_from(names), unique=True))
    right = [a for a in names if a not in left]
    assert flow_sum(flow, names) == flow_sum(flow, left) + flow_sum(flow, right)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_feasible_flows_balance_every_node_exactly(seed):
    net = random_network(rng_for(seed), "N", max_nodes=4)
    point = network_system(net).feasible_point
    if point is None:
        return
    flow = Flow(point)
    assert check_flow_feasible(net, flow).feasible
    for node in net.nodes:
        inflow = flow_sum(flow, [a.name for a in net.arcs if a.head == node])
        outflow = flow_sum(flow, [a.name for a in net.arcs if a.tail == node])
        assert inflow == outflow
