"""Command-line interface: route, verify, oracle, bench, gen-arch.

Exit codes: 0 success, 1 usage or verification failure, 2 deadlock,
3 infeasible instance. All diagnostics go to stderr; results go to the
requested output file or stdout.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
import time
from pathlib import Path

from .arch import Architecture, ArchitectureError, generate_grid_architecture, load_architecture
from .baseline import run_greedy
from .benchcircuits import BENCHMARK_NAMES, make_benchmark
from .circuit import CircuitDag, ParseError, parse_circuit
from .energy import RouterParams
from .initial import InfeasibleError, initial_layout, optimize_initial
from .oracle import OracleTimeout, solve_exact
from .router import DeadlockError, run
from .schedule import Schedule, emit, parse_schedule
from .verifier import verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DEADLOCK = 2
EXIT_INFEASIBLE = 3

log = logging.getLogger("telesabre")

ARCH_PRESETS = {
    "A": "grid:2x1,2x2,1",  # 8 qubits, 2 cores
    "B": "grid:2x2,3x3,1",  # 36 qubits, 4 cores
    "C": "grid:3x2,4x4,1",  # 96 qubits, 6 cores
}


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors must exit 1, not argparse's 2
        raise UsageError(message)


def arch_from_spec(spec: str) -> Architecture:
    """Resolve an architecture argument: preset letter, grid:... spec, or JSON file."""
    spec = ARCH_PRESETS.get(spec, spec)
    if spec.startswith("grid:"):
        try:
            cores_part, size_part, comm_part = spec[5:].split(",")
            cx, cy = (int(v) for v in cores_part.lower().split("x"))
            rows, cols = (int(v) for v in size_part.lower().split("x"))
            comm = int(comm_part)
        except ValueError as exc:
            raise UsageError(f"bad grid spec '{spec}': expected grid:CXxCY,RxC,comm") from exc
        return generate_grid_architecture(cx, cy, rows, cols, comm)
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"architecture file '{spec}' not found")
    return load_architecture(path)


def circuit_from_path(path: str) -> CircuitDag:
    p = Path(path)
    if not p.exists():
        raise UsageError(f"circuit file '{path}' not found")
    fmt = "gate-list" if p.suffix == ".json" else "qasm"
    return parse_circuit(p.read_text(), fmt)


def _params_from_args(args, seed: int) -> RouterParams:
    return RouterParams(
        lookahead_k=args.lookahead_k,
        extended_size=args.extended_size,
        decay_delta=args.decay,
        capacity_penalty=args.capacity_penalty,
        traffic_coeff=args.traffic,
        teleport_base_weight=args.teleport_weight,
        max_stall=args.max_stall,
        seed=seed,
    )


def _add_param_flags(sub) -> None:
    sub.add_argument("--lookahead-k", type=float, default=0.5)
    sub.add_argument("--extended-size", type=int, default=20)
    sub.add_argument("--decay", type=float, default=0.001)
    sub.add_argument("--capacity-penalty", type=float, default=None)
    sub.add_argument("--traffic", type=float, default=0.5)
    sub.add_argument("--teleport-weight", type=float, default=1.0)
    sub.add_argument("--max-stall", type=int, default=None)


def _route_once(dag, arch, args, seed: int) -> tuple[Schedule, object]:
    params = _params_from_args(args, seed)
    if args.initial_opt == "bidirectional":
        start = optimize_initial(arch, dag, seed, params)
    else:
        start = initial_layout(arch, dag, seed)
    if args.mapper == "greedy":
        return run_greedy(dag, arch, start, seed)
    return run(dag, arch, params, start_layout=start)


def cmd_route(args) -> int:
    arch = arch_from_spec(args.arch)
    dag = circuit_from_path(args.circuit)
    started = time.monotonic()
    best: Schedule | None = None
    for trial in range(args.trials):
        schedule, _ = _route_once(dag, arch, args, args.seed + trial)
        key = (schedule.intercore_total, schedule.counts["swaps"], schedule.depth)
        if best is None or key < (best.intercore_total, best.counts["swaps"], best.depth):
            best = schedule
    runtime_ms = round(1000 * (time.monotonic() - started), 3)

    text = emit(best, "json")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        meta = {
            "circuit": Path(args.circuit).name,
            "arch": arch.name,
            "seed": args.seed,
            "runtime_ms": runtime_ms,
        }
        Path(args.csv).write_text(emit(best, "csv-summary", meta=meta))
    log.info(
        "routed %s: swaps=%d teledata=%d telegate=%d depth=%d",
        args.circuit,
        best.counts["swaps"],
        best.counts["teledata"],
        best.counts["telegate"],
        best.depth,
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    arch = arch_from_spec(args.arch)
    dag = circuit_from_path(args.circuit)
    schedule = parse_schedule(Path(args.schedule).read_text())
    report = verify(dag, arch, schedule)
    if report.ok:
        print("OK: schedule is legal")
        return EXIT_OK
    print(str(report), file=sys.stderr)
    return EXIT_USAGE


def cmd_oracle(args) -> int:
    arch = arch_from_spec(args.arch)
    dag = circuit_from_path(args.circuit)
    layout = initial_layout(arch, dag, args.seed)
    result = solve_exact(dag, arch, layout, max_ops=args.max_ops, time_budget=args.time_budget)
    doc = {"intercore": result.intercore, "swaps": result.swaps}
    print(json.dumps(doc, sort_keys=True))
    if args.out:
        Path(args.out).write_text(emit(result.schedule, "json"))
    return EXIT_OK


def _geomean(values: list[int]) -> float:
    vals = [max(v, 1) for v in values]
    return math.exp(sum(math.log(v) for v in vals) / len(vals)) if vals else 0.0


def cmd_bench(args) -> int:
    arch = arch_from_spec(args.arch)
    qubit_sizes = [int(v) for v in args.qubits.split(",")]
    seeds = [int(v) for v in args.seeds.split(",")]
    circuits = args.circuits.split(",")
    mappers = ["telesabre", "greedy"] if args.mapper == "both" else [args.mapper]

    rows = []
    intercore_by_mapper: dict[str, list[int]] = {m: [] for m in mappers}
    for name in circuits:
        for n in qubit_sizes:
            for seed in seeds:
                dag = make_benchmark(name, n, seed=seed)
                for mapper in mappers:
                    params = _params_from_args(args, seed)
                    start = initial_layout(arch, dag, seed)
                    t0 = time.monotonic()
                    if mapper == "greedy":
                        schedule, _ = run_greedy(dag, arch, start, seed)
                    else:
                        schedule, _ = run(dag, arch, params, start_layout=start)
                    ms = round(1000 * (time.monotonic() - t0), 1)
                    rows.append(
                        (
                            f"{name}{n}",
                            arch.name,
                            seed,
                            mapper,
                            schedule.counts["swaps"],
                            schedule.counts["teledata"],
                            schedule.counts["telegate"],
                            schedule.intercore_total,
                            schedule.depth,
                            ms,
                        )
                    )
                    intercore_by_mapper[mapper].append(schedule.intercore_total)

    rows.sort(key=lambda r: (r[0], r[2], r[3]))
    header = "circuit,arch,seed,mapper,swaps,teledata,telegate,intercore_total,depth,runtime_ms"
    lines = [header] + [",".join(str(v) for v in row) for row in rows]
    for mapper in mappers:
        gm = _geomean(intercore_by_mapper[mapper])
        lines.append(f"GEOMEAN,{arch.name},,{mapper},,,,{gm:.3f},,")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_gen_arch(args) -> int:
    arch = arch_from_spec(args.grid if args.grid.startswith("grid:") else f"grid:{args.grid}")
    text = json.dumps(arch.to_descriptor(), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="telesabre", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_route = sub.add_parser("route", help="route a circuit onto an architecture")
    p_route.add_argument("--arch", required=True, help="preset (A/B/C), grid:CXxCY,RxC,comm, or JSON file")
    p_route.add_argument("--circuit", required=True, help=".qasm or gate-list .json file")
    p_route.add_argument("--seed", type=int, default=0)
    p_route.add_argument("--trials", type=int, default=1, help="best-of-N by (intercore, swaps, depth)")
    p_route.add_argument("--initial-opt", choices=("none", "bidirectional"), default="none")
    p_route.add_argument("--mapper", choices=("telesabre", "greedy"), default="telesabre")
    p_route.add_argument("--out", help="schedule JSON path (default: stdout)")
    p_route.add_argument("--csv", help="one-row CSV summary path")
    _add_param_flags(p_route)
    p_route.set_defaults(func=cmd_route)

    p_verify = sub.add_parser("verify", help="verify an emitted schedule")
    p_verify.add_argument("--schedule", required=True)
    p_verify.add_argument("--circuit", required=True)
    p_verify.add_argument("--arch", required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_oracle = sub.add_parser("oracle", help="exhaustive optimal solve of a tiny instance")
    p_oracle.add_argument("--arch", required=True)
    p_oracle.add_argument("--circuit", required=True)
    p_oracle.add_argument("--seed", type=int, default=0)
    p_oracle.add_argument("--max-ops", type=int, default=10)
    p_oracle.add_argument("--time-budget", type=float, default=60.0)
    p_oracle.add_argument("--out", help="witness schedule JSON path")
    p_oracle.set_defaults(func=cmd_oracle)

    p_bench = sub.add_parser("bench", help="run a circuit x size x seed matrix")
    p_bench.add_argument("--arch", required=True)
    p_bench.add_argument("--qubits", default="26", help="comma-separated logical sizes")
    p_bench.add_argument("--seeds", default="0", help="comma-separated seeds")
    p_bench.add_argument("--circuits", default=",".join(BENCHMARK_NAMES))
    p_bench.add_argument("--mapper", choices=("telesabre", "greedy", "both"), default="both")
    p_bench.add_argument("--out", help="CSV path (default: stdout)")
    _add_param_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_gen = sub.add_parser("gen-arch", help="write a generated architecture as JSON")
    p_gen.add_argument("--grid", required=True, help="CXxCY,RxC,comm")
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=cmd_gen_arch)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("TELESABRE_LOG", "WARNING").upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ArchitectureError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DeadlockError as exc:
        print(f"deadlock: {exc}", file=sys.stderr)
        return EXIT_DEADLOCK
    except InfeasibleError as exc:
        print(f"infeasible instance: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OracleTimeout as exc:
        print(f"oracle limit: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
