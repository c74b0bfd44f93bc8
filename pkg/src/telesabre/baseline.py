"""Greedy teleport-on-demand comparator.

Resolves front gates strictly in id order with no lookahead and no telegates:
same-core gates are walked together along the shortest hop path, cross-core
gates teleport the first qubit one core at a time along the fewest-link core
path, vacating communication qubits with nearest-free hole walks and evicting
a bystander qubit when a destination core lacks capacity. Deliberately weak,
but every schedule it emits is hardware-legal.
"""
from __future__ import annotations

from collections import deque

from .arch import Architecture
from .circuit import CircuitDag
from .router import DeadlockError
from .layout import (
    Layout,
    Swap,
    Teledata,
    apply_operation,
    is_gate_executable,
    nearest_free,
    teleport_feasible,
)
from .schedule import Schedule, ScheduleBuilder


def _core_path(arch: Architecture, src: int, dst: int) -> list[int]:
    """Fewest-link core path by BFS, deterministic neighbor order."""
    if src == dst:
        return [src]
    parent = {src: None}
    queue = deque([src])
    while queue:
        c = queue.popleft()
        for nb in arch.core_neighbors(c):
            if nb not in parent:
                parent[nb] = c
                if nb == dst:
                    path = [dst]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    return path[::-1]
                queue.append(nb)
    raise DeadlockError(f"no inter-core path from core {src} to core {dst}")


def run_greedy(
    dag: CircuitDag, arch: Architecture, start_layout: Layout, seed: int = 0
) -> tuple[Schedule, Layout]:
    """Route a circuit greedily; returns (schedule, final layout).

    The seed is accepted for interface parity; the algorithm is deterministic.
    """
    work = dag.copy()
    layout = start_layout.copy()
    layout.reset_usage()
    dist = arch.distances
    builder = ScheduleBuilder(work, layout)
    budget = 50 * arch.num_qubits * (work.num_gates + 1)
    ops_used = 0

    def spend() -> None:
        nonlocal ops_used
        ops_used += 1
        if ops_used > budget:
            raise DeadlockError("operation budget exceeded; instance looks stuck")

    def emit_swap(a: int, b: int) -> None:
        nonlocal layout
        layout = apply_operation(layout, Swap(a, b))
        builder.swap(a, b)
        spend()

    def vacate(target: int) -> None:
        """Free a physical qubit by walking the nearest hole onto it."""
        if layout.is_free(target):
            return
        d, hole = nearest_free(layout, arch, target)
        if hole is None:
            raise DeadlockError(f"no free qubit in core {arch.qubit_core[target]}")
        while hole != target:
            step = min(
                m for m in arch.neighbors[hole] if dist.hops(target, m) == dist.hops(target, hole) - 1
            )
            emit_swap(hole, step)
            hole = step

    def walk_adjacent(q: int, target: int) -> None:
        """Swap logical q along a shortest path until adjacent to target."""
        while dist.hops(layout.phys(q), target) > 1:
            p = layout.phys(q)
            step = min(
                m for m in arch.neighbors[p] if dist.hops(target, m) == dist.hops(target, p) - 1
            )
            emit_swap(p, step)

    def execute_ready() -> None:
        progress = True
        while progress:
            progress = False
            for gid in sorted(work.front):
                g = work.gates[gid]
                if is_gate_executable(layout, arch, g):
                    builder.local_gate(g, layout.phys(g.qubits[0]), layout.phys(g.qubits[1]))
                    work.execute_gate(gid)
                    progress = True

    def teleport(q: int, c_s: int, c_d: int) -> None:
        nonlocal layout
        src = layout.phys(q)
        layout = apply_operation(layout, Teledata(q, c_s, c_d))
        builder.teledata(q, c_s, c_d, src_data=src)
        spend()

    def evict_one(core_id: int, protect: set[int]) -> None:
        """Teleport some hosted qubit out of a packed core to regain capacity."""
        hosted = sorted(
            q for q in range(layout.num_logical) if layout.core_of(q) == core_id and q not in protect
        )
        for r in hosted:
            for other in sorted(arch.core_neighbors(core_id)):
                if layout.free_count(other) < 2:
                    continue
                links = sorted(arch.links_between(core_id, other))
                if not links:
                    continue
                ca, cb = links[0]
                c_s, c_d = (ca, cb) if arch.qubit_core[ca] == core_id else (cb, ca)
                vacate(c_s)
                vacate(c_d)
                walk_adjacent(r, c_s)
                if teleport_feasible(layout, arch, r, (c_s, c_d)):
                    teleport(r, c_s, c_d)
                    return
        raise DeadlockError(f"cannot free capacity in core {core_id}")

    while True:
        execute_ready()
        if not work.front:
            break
        gid = min(work.front)
        g = work.gates[gid]
        q1, q2 = g.qubits
        core1, core2 = layout.core_of(q1), layout.core_of(q2)
        if core1 == core2:
            walk_adjacent(q1, layout.phys(q2))
            if not is_gate_executable(layout, arch, g):
                raise DeadlockError(f"gate {gid} still blocked after local walk")
            continue
        nxt = _core_path(arch, core1, core2)[1]
        if layout.free_count(nxt) < 2:
            evict_one(nxt, protect={q1, q2})
        links = sorted(arch.links_between(core1, nxt))
        ca, cb = links[0]
        c_s, c_d = (ca, cb) if arch.qubit_core[ca] == core1 else (cb, ca)
        vacate(c_s)
        vacate(c_d)
        walk_adjacent(q1, c_s)
        if not teleport_feasible(layout, arch, q1, (c_s, c_d)):
            raise DeadlockError(f"teleport of {q1} over ({c_s},{c_d}) infeasible after staging")
        teleport(q1, c_s, c_d)

    return builder.finish(layout), layout
