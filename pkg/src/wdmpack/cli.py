"""``wdmpack`` command-line entry point.

Exit status: 0 on success, 1 when input is valid syntax but fails a check
(or a scheme cannot run on it), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

import numpy as np

from . import bounds, construct, experiment, packing, pathsys, worked
from .errors import PackingError
from .topology import chain, cycle, load_topology
from .traffic import load_demands


def _write(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbelow(2**32)
        print(f"seed={args.seed}", file=sys.stderr)
    return args.seed


def _sizes(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# -- subcommands ------------------------------------------------------------------

def cmd_phi(args):
    if args.n is None:
        topo = load_topology(args.kind)
        kind, n = topo.kind, topo.node_count
    else:
        kind, n = args.kind, args.n
    if kind == "cycle":
        value = bounds.phi_cycle(n)
    elif kind == "chain":
        value = bounds.phi_chain(n)
    else:
        raise PackingError(f"no closed form for {kind} topologies; try `wdmpack oracle`")
    print(value)
    return 0


def _system_for(args, seed) -> pathsys.PathSystem:
    if args.system:
        return pathsys.load_system(args.system)
    if args.n is None:
        raise PackingError("give --n or --system")
    topo = chain(args.n) if args.topology == "chain" else cycle(args.n)
    if args.demands:
        ds = load_demands(args.demands)
        if ds.node_count != args.n:
            raise PackingError(f"demand file is for {ds.node_count} nodes, not {args.n}")
        return pathsys.route_demands(topo, ds.demands, args.tie_policy, seed)
    if topo.kind == "chain":
        return pathsys.chain_system(args.n)
    return pathsys.shortest_system_cycle(args.n, args.tie_policy, seed)


def cmd_assign(args):
    if args.scheme == "ip":
        if args.system or args.demands or args.topology == "chain":
            raise PackingError("IP runs on the shortest system of an odd cycle only")
        if args.n is None:
            raise PackingError("IP needs --n")
        result, _ = packing.intelligent_packing(args.n)
    else:
        route_seed, scheme_seed = np.random.SeedSequence(_seed(args)).spawn(2)
        system = _system_for(args, route_seed)
        if args.scheme == "lfp":
            result = packing.length_first_packing(system, scheme_seed)
        else:
            result = packing.random_packing(system, scheme_seed, args.rp_redraw)
    print(f"total={result.total}", file=sys.stderr)
    _write(packing.format_gp_array(result) if args.gp_array else packing.format_assignment_csv(result), args.out)
    return 0


def cmd_construct(args):
    if args.what == "even-cycle":
        if args.m is None:
            raise PackingError("even-cycle needs --m")
        partition = construct.ideal_even_partition(args.m)
        assignment = construct.partition_assignment(partition, pathsys.shortest_system_even_cycle(2 * args.m))
        print(f"total={assignment.total}", file=sys.stderr)
        if args.listing:
            _write(partition.listing(), args.listing)
        _write(packing.format_assignment_csv(assignment), args.out)
        return 0
    if args.n is None or not args.lengths:
        raise PackingError("rotation needs --n and --lengths")
    _write(construct.rotation_packings(args.n, args.lengths).listing(), args.out)
    return 0


def cmd_verify(args):
    system = pathsys.load_system(args.system)
    assignment = packing.parse_assignment_csv(Path(args.assignment).read_text(), system)
    verdict = packing.verify(assignment)
    if verdict.ok:
        print(f"valid total={assignment.total}")
        return 0
    for x, y in verdict.violations:
        print(f"conflict: routes {x} ({system[x]}) and {y} ({system[y]}) share wavelength "
              f"{assignment[x]} and a link")
    for r in verdict.unassigned:
        print(f"unassigned: route {r} ({system[r]})")
    return 1


def cmd_oracle(args):
    system = pathsys.load_system(args.system)
    result = bounds.solve_chromatic(bounds.conflict_graph(system), args.budget, args.node_limit)
    print(result.value)
    print(json.dumps(result.certificate(), sort_keys=True))
    return 0


def cmd_bench(args):
    instances, tests = experiment.FULL if args.full else experiment.DESK
    cfg = experiment.ExperimentConfig(
        sizes=tuple(args.sizes), model=args.model, schemes=tuple(args.schemes.split(",")),
        instances=args.instances or instances, tests=args.tests or tests, seed=_seed(args),
        tie_policy=args.tie_policy, rp_redraw=args.rp_redraw, workers=args.workers)
    report = experiment.run_experiment(cfg)
    fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "csv")
    _write(experiment.emit_json(report) if fmt == "json" else experiment.emit_csv(report), args.out)
    return 0


def _demo_example1():
    partition = construct.ideal_even_partition(9)
    ok = construct.verify_partition(partition, pathsys.shortest_system_even_cycle(18))
    return partition.listing() + f"{len(partition)} packings, {'valid' if ok else 'INVALID'}\n"


def _demo_example2():
    assignment, trace = packing.intelligent_packing(11)
    system = assignment.system
    order = packing.ip_order(system)
    lines = []
    for length, rnd in trace.rounds.items():
        routes = [rid for rid in order if system.lengths[rid] == length]
        lines.append(f"round l={length}: " + " ".join(f"{system[r]}:{assignment[r]}" for r in routes))
        lines.append(f"  T={rnd.top}")
        for k in range(1, rnd.top + 1):
            bands = " ".join(f"({s},{t})" for s, t in sorted(rnd.idle[k]))
            lines.append(f"  L({k}) = {{{bands}}}")
    lines.append(f"total={assignment.total}")
    return "\n".join(lines) + "\n"


def _demo_table1():
    assignment = worked.c4_nonshortest()
    lines = ["pair route wavelength"]
    for r in assignment.system.routes:
        lines.append(f"{{{r.pair[0]},{r.pair[1]}}} {r} {assignment[r.route_id]}")
    verdict = packing.verify(assignment)
    lines.append(f"total={assignment.total} phi={bounds.phi_cycle(4)} {'valid' if verdict else 'INVALID'}")
    return "\n".join(lines) + "\n"


def _demo_d6():
    system, order = worked.d6_bad_order()
    result = packing.greedy_assign(system, order)
    steps = [f"P{{{system[r].pair[0]},{system[r].pair[1]}}} -> {result[r]}" for r in order]
    return "\n".join(steps) + f"\ntotal={result.total} phi={bounds.phi_chain(6)}\n"


DEMOS = {"example1": _demo_example1, "example2": _demo_example2,
         "table1": _demo_table1, "d6-bad-order": _demo_d6}


def cmd_demo(args):
    _write(DEMOS[args.name](), args.out)
    return 0


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wdmpack", description="Wavelength assignment on rings and chains.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("phi", help="closed-form global packing number")
    s.add_argument("kind", help="cycle, chain, or a topology file")
    s.add_argument("n", type=int, nargs="?")
    s.set_defaults(func=cmd_phi)

    s = sub.add_parser("assign", help="run IP, LFP or RP")
    s.add_argument("scheme", choices=("ip", "lfp", "rp"))
    s.add_argument("--n", type=int)
    s.add_argument("--topology", choices=("cycle", "chain"), default="cycle")
    s.add_argument("--system", help="path-system file")
    s.add_argument("--demands", help="demand file, routed on shortest paths")
    s.add_argument("--tie-policy", choices=("alternating", "random"), default="alternating")
    s.add_argument("--rp-redraw", action="store_true", help="RP: fresh random order per wavelength")
    s.add_argument("--gp-array", action="store_true", help="print the n x n wavelength array")
    s.add_argument("--seed", type=int)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_assign)

    s = sub.add_parser("construct", help="explicit optimal constructions")
    s.add_argument("what", choices=("even-cycle", "rotation"))
    s.add_argument("--m", type=int, help="half-order of the even cycle")
    s.add_argument("--n", type=int, help="cycle order for rotation")
    s.add_argument("--lengths", type=_sizes, help="comma-separated route lengths for rotation")
    s.add_argument("--listing", help="also write the per-wavelength packing listing here ('-' for stdout)")
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", help="check an assignment CSV against a path system")
    s.add_argument("system")
    s.add_argument("assignment")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("oracle", help="exact chromatic number of a path system's conflict graph")
    s.add_argument("system")
    s.add_argument("--budget", type=int, default=60, help="maximum number of routes")
    s.add_argument("--node-limit", type=int)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("bench", help="Monte Carlo comparison over traffic instances")
    s.add_argument("--sizes", type=_sizes, default=list(range(5, 41, 5)))
    s.add_argument("--model", choices=("uniform", "full-random", "quasi-random"), default="uniform")
    s.add_argument("--schemes", default="lfp,rp")
    s.add_argument("--instances", type=int)
    s.add_argument("--tests", type=int)
    s.add_argument("--full", action="store_true", help="100 instances x 10000 tests")
    s.add_argument("--tie-policy", choices=("alternating", "random"))
    s.add_argument("--rp-redraw", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--seed", type=int)
    s.add_argument("--format", choices=("csv", "json"))
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("demo", help="print a worked example")
    s.add_argument("name", choices=sorted(DEMOS))
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (PackingError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
