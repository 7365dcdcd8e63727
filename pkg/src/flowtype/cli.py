"""Command line front end.

Exit codes: 0 accepted, 1 malformed input, 2 unsafe specification,
3 disagreement between the derived typing and the flattened network.
"""

import argparse
import json
import sys
from fractions import Fraction

from .engine import derive, flatten, infer_small, io_sem_check
from .errors import FlowTypeError, UnsafeSpecification
from .frontend import check_well_formed
from .objectives import OBJECTIVES, optimize
from .parser import parse_program
from .rationals import as_fraction, pretty_fraction
from .serialize import (dumps, flow_from_json, flow_to_json, network_to_json,
                        to_dot, typing_from_json, typing_to_json)
from .typings import DEFAULT_CAP, equiv, first_violation, is_subtype, tight

OK, MALFORMED, UNSAFE, DISAGREE = 0, 1, 2, 3
DEFAULT_BIG = 10 ** 6


class Disagreement(Exception):
    pass


def _load_program(path, big):
    with open(path) as fh:
        text = fh.read()
    program = parse_program(text, big=big)
    report = check_well_formed(program.main, program)
    if not report.ok:
        raise FlowTypeError("; ".join(str(e) for e in report.errors), "ill-formed")
    return program


def _is_json(path):
    return path.endswith(".json")


def _typing_of(path, args):
    """A typing from a JSON file, or derived from a spec."""
    if _is_json(path):
        with open(path) as fh:
            return typing_from_json(json.load(fh))
    program = _load_program(path, args.big)
    typing, _ = derive(program.main, program, cap=args.cap)
    return typing


def _print_typing(typing, fmt):
    if fmt == "json":
        print(dumps(typing_to_json(typing)))
    else:
        print(typing)


def _parse_fix(text):
    fixed = {}
    if not text:
        return fixed
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise FlowTypeError(f"bad --fix item {item!r}; expected arc=value", "bad-argument")
        fixed[name.strip()] = as_fraction(value)
    return fixed


def _verify(program, typing, cap):
    flat_typing = infer_small(flatten(program.main, program), cap)
    if not equiv(typing, flat_typing):
        raise Disagreement("derived typing differs from the typing of the flattened network")


def cmd_check(args):
    program = _load_program(args.spec, args.big)
    typing, derivation = derive(program.main, program, cap=args.cap)
    if args.verify:
        _verify(program, typing, args.cap)
    if args.format == "json":
        print(dumps({"verdict": "accepted", "typing": typing_to_json(typing)}))
    else:
        print("accepted")
        print(typing)
    return OK


def cmd_infer(args):
    program = _load_program(args.spec, args.big)
    typing, derivation = derive(program.main, program, cap=args.cap)
    if args.tight:
        typing = tight(typing)
    if args.verify:
        _verify(program, typing, args.cap)
    if args.format == "json":
        data = typing_to_json(typing)
        if args.derivation:
            data = {"typing": data, "derivation": derivation.to_json()}
        text = dumps(data)
    else:
        text = derivation.render() if args.derivation else str(typing)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return OK


def cmd_satisfy(args):
    typing = _typing_of(args.typing, args)
    with open(args.flow) as fh:
        flow = flow_from_json(json.load(fh))
    values = dict(flow.values)
    miss = first_violation(typing, values)
    verdict = miss is None
    if not _is_json(args.typing):
        program = _load_program(args.typing, args.big)
        if io_sem_check(flatten(program.main, program), values) != verdict:
            raise Disagreement("typing and flattened network disagree on this flow")
    if verdict:
        print("satisfies")
    else:
        mask, value = miss
        print(f"violates {typing.label(mask)} = {pretty_fraction(value)} "
              f"not in {typing[mask]}")
    return OK


def cmd_optimize(args):
    program = _load_program(args.spec, args.big)
    derive(program.main, program, cap=args.cap)
    best = optimize(program.main, program, _parse_fix(args.fix), args.objective)
    if best is None:
        print("infeasible")
        return OK
    if args.format == "json":
        print(dumps({"objective": args.objective, "value": str(best.value),
                     "io": flow_to_json(best.io_flow)["values"],
                     "witness": flow_to_json(best.witness)["values"]}))
    else:
        print(f"{args.objective} = {pretty_fraction(best.value)}")
        for arc, v in best.io_flow.values.items():
            print(f"  {arc} = {pretty_fraction(v)}")
    return OK


def cmd_subtype(args):
    first = _typing_of(args.first, args)
    second = _typing_of(args.second, args)
    forward = is_subtype(first, second)
    backward = is_subtype(second, first)
    if args.format == "json":
        print(dumps({"subtype": forward, "supertype": backward, "equivalent": forward and backward}))
    else:
        print(f"first <: second  {str(forward).lower()}")
        print(f"second <: first  {str(backward).lower()}")
        print(f"equivalent       {str(forward and backward).lower()}")
    return OK


def cmd_flatten(args):
    program = _load_program(args.spec, args.big)
    net = flatten(program.main, program)
    fmt = "dot" if args.dot else args.format
    if fmt == "dot":
        sys.stdout.write(to_dot(net))
    elif fmt == "json":
        print(dumps(network_to_json(net)))
    else:
        print(f"network {net.name}: {len(net.nodes)} nodes, {len(net.arcs)} arcs")
        for arc in net.arcs:
            print(f"  {arc.tail or '.'} -> {arc.head or '.'}  {arc}")
    return OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP,
                        help="largest number of input/output arcs a typing may have")
    common.add_argument("--big", type=Fraction, default=Fraction(DEFAULT_BIG),
                        help="finite value used for 'inf' capacities")
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")

    parser = argparse.ArgumentParser(prog="flowtype", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="accept or reject a spec")
    p.add_argument("spec")
    p.add_argument("--verify", action="store_true",
                   help="cross-check against the flattened network")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("infer", parents=[common], help="print the principal typing")
    p.add_argument("spec")
    p.add_argument("--tight", action="store_true")
    p.add_argument("--derivation", action="store_true")
    p.add_argument("--verify", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(run=cmd_infer)

    p = sub.add_parser("satisfy", parents=[common], help="test a flow against a typing")
    p.add_argument("typing", help="spec file, or typing .json")
    p.add_argument("flow", help="flow .json")
    p.set_defaults(run=cmd_satisfy)

    p = sub.add_parser("optimize", parents=[common], help="optimal flow under an objective")
    p.add_argument("spec")
    p.add_argument("--objective", choices=OBJECTIVES, default="hr")
    p.add_argument("--fix", default="", help="pinned arcs, e.g. c1=10,d3=10")
    p.set_defaults(run=cmd_optimize)

    p = sub.add_parser("subtype", parents=[common], help="compare two typings")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(run=cmd_subtype)

    p = sub.add_parser("flatten", parents=[common], help="print the flattened network")
    p.add_argument("spec")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(run=cmd_flatten)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except UnsafeSpecification as exc:
        print(f"rejected: {exc.args[0]}")
        return UNSAFE
    except Disagreement as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return DISAGREE
    except (FlowTypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MALFORMED


if __name__ == "__main__":
    sys.exit(main())
