"""Teleport-aware SABRE-style search: candidate generation, scoring, main loop.

Each iteration executes every front gate the current layout allows. When none
is executable, candidate movement operations are generated, each is virtually
applied and scored by the lookahead energy times a usage decay factor, and a
uniform random choice among the minimum-score candidates is committed. A run
that commits too many movement operations without executing a gate, or that
runs out of candidates or routes, is declared deadlocked.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .arch import Architecture, DistanceTable
from .circuit import CircuitDag
from .energy import RouterParams, UnroutableError, route_gate, total_energy
from .initial import initial_layout
from .layout import (
    Layout,
    Swap,
    Teledata,
    Telegate,
    apply_operation,
    is_gate_executable,
    nearest_free,
    telegate_feasible,
    teleport_feasible,
    touched_qubits,
)
from .schedule import Schedule, ScheduleBuilder


class DeadlockError(RuntimeError):
    """Routing can no longer make progress; carries diagnostics for reporting."""

    def __init__(self, message: str, blocked_gates=(), full_cores=(), layout=None):
        detail = message
        if blocked_gates:
            detail += f"; blocked gates: {sorted(blocked_gates)}"
        if full_cores:
            detail += f"; full cores: {sorted(full_cores)}"
        super().__init__(detail)
        self.blocked_gates = tuple(sorted(blocked_gates))
        self.full_cores = tuple(sorted(full_cores))
        self.layout = layout


@dataclass
class RouterState:
    dag: CircuitDag
    layout: Layout
    rng: random.Random
    stall_counter: int = 0


def _full_cores(layout: Layout, arch: Architecture) -> list[int]:
    return [core.id for core in arch.cores if layout.free_count(core.id) < 2]


def _op_sort_key(op) -> tuple:
    if isinstance(op, Swap):
        return (0, op.p1, op.p2, 0)
    if isinstance(op, Teledata):
        return (1, op.qubit, op.src_comm, op.dst_comm)
    return (2, op.gate_id, op.src_comm, op.dst_comm)


def obtain_candidate_ops(
    state: RouterState,
    arch: Architecture,
    dist: DistanceTable,
    params: RouterParams,
    route_cache: dict | None = None,
) -> list:
    """Candidate movement operations for the current blocked state.

    (a) swaps on intra edges incident to the physical qubits of front-gate
        logical qubits;
    (b) for every occupied communication qubit on a cross-core front gate's
        route, the swap that walks its nearest free qubit one hop closer,
        so repeated selection vacates the comm qubit;
    (c) feasible teledata moves of front-gate logical qubits over links on
        their own gate's route;
    (d) feasible telegates for cross-core front gates.
    """
    layout, dag = state.layout, state.dag
    front_gates = [dag.gates[g] for g in sorted(dag.front)]
    cands: set = set()

    for g in front_gates:
        for q in g.qubits:
            p = layout.phys(q)
            for nb in arch.neighbors[p]:
                if not (layout.is_free(p) and layout.is_free(nb)):
                    cands.add(Swap(p, nb))

    # routing plans for cross-core front gates, sharing one traffic tally
    traffic: dict[tuple[int, int], int] = {}
    plans: list[tuple] = []
    for g in front_gates:
        if layout.core_of(g.qubits[0]) == layout.core_of(g.qubits[1]):
            continue
        try:
            _, path, links = route_gate(layout, arch, dist, g, params, traffic, None, route_cache)
        except UnroutableError:
            continue
        for key in links:
            traffic[key] = traffic.get(key, 0) + 1
        plans.append((g, path, links))

    for g, path, links in plans:
        # (b) vacating swaps for occupied comm qubits on the plan
        for node in path:
            if node < 0 or layout.is_free(node):
                continue
            d, f = nearest_free(layout, arch, node)
            if f is None:
                continue
            if d == 1:
                cands.add(Swap(node, f))
                continue
            # walk the hole at f one hop toward the comm qubit
            step = [m for m in arch.neighbors[f] if dist.hops(node, m) == d - 1]
            if step:
                cands.add(Swap(f, min(step)))
        # (c) teledata of this gate's qubits over links on its route
        for q in g.qubits:
            qcore = layout.core_of(q)
            for a, b in links:
                for c_s, c_d in ((a, b), (b, a)):
                    if arch.qubit_core[c_s] == qcore and teleport_feasible(layout, arch, q, (c_s, c_d)):
                        cands.add(Teledata(q, c_s, c_d))

    # (d) telegates for cross-core front gates
    for g in front_gates:
        core1, core2 = layout.core_of(g.qubits[0]), layout.core_of(g.qubits[1])
        if core1 == core2:
            continue
        for ca, cb in arch.links_between(core1, core2):
            e1, e2 = (ca, cb) if arch.qubit_core[ca] == core1 else (cb, ca)
            if telegate_feasible(layout, arch, g, (e1, e2)):
                cands.add(Telegate(g.id, e1, e2))

    if not cands:
        raise DeadlockError(
            "no candidate operations",
            blocked_gates=dag.front,
            full_cores=_full_cores(layout, arch),
            layout=layout,
        )
    return sorted(cands, key=_op_sort_key)


def score_and_select(
    state: RouterState,
    candidates: list,
    arch: Architecture,
    dist: DistanceTable,
    params: RouterParams,
    route_cache: dict | None = None,
) -> object:
    """Virtually apply each candidate, score it, and sample among the minima.

    Score = lookahead energy of the post-application layout times the maximum
    usage decay over the touched physical qubits. A telegate candidate is
    evaluated with its gate dropped from the front (successors join only on
    commit).
    """
    layout, dag = state.layout, state.dag
    front_ids = sorted(dag.front)
    ext_ids = dag.extended_set(params.extended_size)
    ext_gates = [dag.gates[g] for g in ext_ids]

    best_score = float("inf")
    best: list = []
    for op in candidates:
        gate = dag.gates[op.gate_id] if isinstance(op, Telegate) else None
        touched = touched_qubits(op, layout, gate)
        vlayout = apply_operation(layout, op)
        if isinstance(op, Telegate):
            eval_front = [dag.gates[g] for g in front_ids if g != op.gate_id]
        else:
            eval_front = [dag.gates[g] for g in front_ids]
        try:
            energy = total_energy(vlayout, arch, dist, eval_front, ext_gates, params, route_cache)
        except UnroutableError:
            continue
        score = energy * max(layout.usage[p] for p in touched)
        if score < best_score:
            best_score = score
            best = [op]
        elif score == best_score:
            best.append(op)
    if not best:
        raise DeadlockError(
            "all candidate operations are unroutable",
            blocked_gates=dag.front,
            full_cores=_full_cores(layout, arch),
            layout=layout,
        )
    return state.rng.choice(best)


def run(
    dag: CircuitDag,
    arch: Architecture,
    params: RouterParams | None = None,
    start_layout: Layout | None = None,
) -> tuple[Schedule, Layout]:
    """Route a circuit: returns the compiled schedule and the final layout.

    The input DAG is not mutated. When no start layout is given, the
    frontier-packing initial layout seeded from params.seed is used.
    """
    params = (params or RouterParams()).resolved(arch)
    work = dag.copy()
    dist = arch.distances
    if start_layout is None:
        layout = initial_layout(arch, work, params.seed)
    else:
        if start_layout.num_logical != dag.num_logical_qubits:
            raise ValueError("start layout size does not match circuit")
        layout = start_layout.copy()
        layout.reset_usage()

    state = RouterState(dag=work, layout=layout, rng=random.Random(params.seed))
    builder = ScheduleBuilder(work, layout)

    while work.front:
        executable = sorted(
            gid for gid in work.front if is_gate_executable(state.layout, arch, work.gates[gid])
        )
        if executable:
            for gid in executable:
                g = work.gates[gid]
                builder.local_gate(g, state.layout.phys(g.qubits[0]), state.layout.phys(g.qubits[1]))
                work.execute_gate(gid)
            state.layout.reset_usage()
            state.stall_counter = 0
            continue

        route_cache: dict = {}
        candidates = obtain_candidate_ops(state, arch, dist, params, route_cache)
        op = score_and_select(state, candidates, arch, dist, params, route_cache)
        gate = work.gates[op.gate_id] if isinstance(op, Telegate) else None
        touched = touched_qubits(op, state.layout, gate)
        pre_layout = state.layout
        state.layout = apply_operation(pre_layout, op)

        if isinstance(op, Swap):
            builder.swap(op.p1, op.p2)
        elif isinstance(op, Teledata):
            builder.teledata(op.qubit, op.src_comm, op.dst_comm, src_data=pre_layout.phys(op.qubit))
        else:
            builder.telegate(
                gate,
                op.src_comm,
                op.dst_comm,
                state.layout.phys(gate.qubits[0]),
                state.layout.phys(gate.qubits[1]),
            )

        if isinstance(op, Telegate):
            work.execute_gate(op.gate_id)
            state.layout.reset_usage()
            state.stall_counter = 0
        else:
            state.layout.bump_usage(touched, params.decay_delta)
            state.stall_counter += 1
            if state.stall_counter > params.max_stall:
                raise DeadlockError(
                    f"no gate executed within {params.max_stall} movement operations",
                    blocked_gates=work.front,
                    full_cores=_full_cores(state.layout, arch),
                    layout=state.layout,
                )

    return builder.finish(state.layout), state.layout
