"""Exhaustive near-optimal solver for tiny instances.

Iterative deepening over (inter-core ops, swaps) budgets in lexicographic
order: the first budget admitting a complete execution is the lexicographic
minimum cost. Local gate executions are free and applied greedily, every
feasible swap / teledata / telegate is branched on, and refuted states are
memoized with a pareto frontier of failed remaining-budget pairs so later
rounds reuse earlier refutations.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .arch import Architecture
from .circuit import CircuitDag
from .layout import (
    Layout,
    Swap,
    Teledata,
    Telegate,
    apply_operation,
    is_gate_executable,
    telegate_feasible,
    teleport_feasible,
)
from .schedule import Schedule, ScheduleBuilder


class OracleTimeout(RuntimeError):
    """Search hit its time or op budget; carries the refuted-budget bound."""

    def __init__(self, message: str, bound: tuple[int, int]):
        super().__init__(f"{message}; every budget lexicographically below {bound} is refuted")
        self.bound = bound


@dataclass
class OracleResult:
    intercore: int
    swaps: int
    schedule: Schedule
    final_layout: Layout


def _greedy_execute(dag: CircuitDag, layout: Layout, arch: Architecture, trace: list) -> None:
    progress = True
    while progress:
        progress = False
        for gid in sorted(dag.front):
            if is_gate_executable(layout, arch, dag.gates[gid]):
                trace.append(("exec", gid))
                dag.execute_gate(gid)
                progress = True


def _branch_ops(dag: CircuitDag, layout: Layout, arch: Architecture):
    """All budget-consuming ops, deterministic order: swaps, teledata, telegates."""
    swaps = []
    for a, b in arch.intra_edges:
        if layout.is_free(a) and layout.is_free(b):
            continue
        swaps.append(Swap(a, b))
    teles = []
    for q in range(layout.num_logical):
        for ca, cb in arch.links:
            for c_s, c_d in ((ca, cb), (cb, ca)):
                if teleport_feasible(layout, arch, q, (c_s, c_d)):
                    teles.append(Teledata(q, c_s, c_d))
    tgates = []
    for gid in sorted(dag.front):
        g = dag.gates[gid]
        core1, core2 = layout.core_of(g.qubits[0]), layout.core_of(g.qubits[1])
        if core1 == core2:
            continue
        for ca, cb in arch.links_between(core1, core2):
            e1, e2 = (ca, cb) if arch.qubit_core[ca] == core1 else (cb, ca)
            if telegate_feasible(layout, arch, g, (e1, e2)):
                tgates.append(Telegate(gid, e1, e2))
    teles.sort(key=lambda t: (t.qubit, t.src_comm, t.dst_comm))
    tgates.sort(key=lambda t: (t.gate_id, t.src_comm, t.dst_comm))
    return swaps + teles + tgates


def solve_exact(
    dag: CircuitDag,
    arch: Architecture,
    start_layout: Layout,
    max_ops: int = 10,
    time_budget: float = 60.0,
) -> OracleResult:
    """Minimize (inter-core ops, swaps) lexicographically over all op sequences.

    Intended for desk-size instances (around 10 physical qubits and up to 8
    two-qubit gates); raises OracleTimeout past the limits.
    """
    deadline = time.monotonic() + time_budget
    # state -> pareto set of (ic_left, sw_left) refuted from that state
    failed: dict[tuple, list[tuple[int, int]]] = {}

    def dfs(dag_state: CircuitDag, layout: Layout, ic_left: int, sw_left: int, trace: list):
        _greedy_execute(dag_state, layout, arch, trace)
        if dag_state.remaining == 0:
            return trace
        if time.monotonic() > deadline:
            raise OracleTimeout("time budget exhausted", bound)
        key = (tuple(layout.phys_of), frozenset(dag_state.executed))
        for f_ic, f_sw in failed.get(key, ()):
            if f_ic >= ic_left and f_sw >= sw_left:
                return None
        for op in _branch_ops(dag_state, layout, arch):
            is_swap = isinstance(op, Swap)
            if is_swap and sw_left == 0:
                continue
            if not is_swap and ic_left == 0:
                continue
            sub_dag = dag_state.copy()
            sub_layout = apply_operation(layout, op)
            sub_trace = list(trace)
            sub_trace.append(("op", op))
            if isinstance(op, Telegate):
                sub_dag.execute_gate(op.gate_id)
            found = dfs(
                sub_dag,
                sub_layout,
                ic_left - (0 if is_swap else 1),
                sw_left - (1 if is_swap else 0),
                sub_trace,
            )
            if found is not None:
                return found
        frontier = failed.setdefault(key, [])
        frontier[:] = [(i, s) for i, s in frontier if not (i <= ic_left and s <= sw_left)]
        frontier.append((ic_left, sw_left))
        return None

    bound = (0, 0)
    for ic_budget in range(max_ops + 1):
        for sw_budget in range(max_ops - ic_budget + 1):
            bound = (ic_budget, sw_budget)
            trace = dfs(dag.copy(), start_layout.copy(), ic_budget, sw_budget, [])
            if trace is not None:
                return _witness(dag, arch, start_layout, trace, ic_budget, sw_budget)
    raise OracleTimeout("op budget exhausted", (max_ops + 1, 0))


def _witness(
    dag: CircuitDag,
    arch: Architecture,
    start_layout: Layout,
    trace: list,
    ic_budget: int,
    sw_budget: int,
) -> OracleResult:
    work = dag.copy()
    layout = start_layout.copy()
    builder = ScheduleBuilder(work, layout)
    for tag, item in trace:
        if tag == "exec":
            g = work.gates[item]
            builder.local_gate(g, layout.phys(g.qubits[0]), layout.phys(g.qubits[1]))
            work.execute_gate(item)
            continue
        op = item
        if isinstance(op, Swap):
            new_layout = apply_operation(layout, op)
            builder.swap(op.p1, op.p2)
        elif isinstance(op, Teledata):
            src = layout.phys(op.qubit)
            new_layout = apply_operation(layout, op)
            builder.teledata(op.qubit, op.src_comm, op.dst_comm, src_data=src)
        else:
            g = work.gates[op.gate_id]
            new_layout = apply_operation(layout, op)
            builder.telegate(
                g, op.src_comm, op.dst_comm, layout.phys(g.qubits[0]), layout.phys(g.qubits[1])
            )
            work.execute_gate(op.gate_id)
        layout = new_layout
    schedule = builder.finish(layout)
    counts = schedule.counts
    intercore = counts["teledata"] + counts["telegate"]
    assert (intercore, counts["swaps"]) == (ic_budget, sw_budget), "witness cost must equal its budget"
    return OracleResult(intercore, counts["swaps"], schedule, layout)
