"""Starting layout: frontier-pair packing plus optional bidirectional refinement."""
from __future__ import annotations

import random

from .arch import Architecture
from .circuit import CircuitDag
from .layout import Layout


class InfeasibleError(ValueError):
    """The circuit cannot be placed while keeping one free qubit per core."""


def initial_layout(arch: Architecture, dag: CircuitDag, seed: int) -> Layout:
    """Assign logical qubits to physical qubits.

    Pairs interacting in the initial front are packed into one core each
    (chosen by most remaining capacity, seeded-random tiebreak); everything
    else is spread round-robin. Physical positions within a core are
    seeded-random. Every core keeps at least one free qubit.
    """
    num_logical = dag.num_logical_qubits
    remaining = [core.size - 1 for core in arch.cores]
    if num_logical > sum(remaining):
        raise InfeasibleError(
            f"{num_logical} logical qubits exceed capacity "
            f"{sum(remaining)} ({arch.num_qubits} qubits minus one spare per core)"
        )
    rng = random.Random(seed)
    core_of: dict[int, int] = {}
    assignment: list[list[int]] = [[] for _ in arch.cores]

    def place(q: int, cid: int) -> None:
        core_of[q] = cid
        assignment[cid].append(q)
        remaining[cid] -= 1

    for gid in sorted(dag.front):
        q1, q2 = dag.gates[gid].qubits
        best = max(remaining)
        if best < 2:
            continue  # nothing can host the pair; both fall through to round-robin
        tied = [cid for cid, r in enumerate(remaining) if r == best]
        cid = rng.choice(tied)
        place(q1, cid)
        place(q2, cid)

    cursor = 0
    ncores = arch.num_cores
    for q in range(num_logical):
        if q in core_of:
            continue
        for attempt in range(ncores):
            cid = (cursor + attempt) % ncores
            if remaining[cid] > 0:
                break
        else:
            raise InfeasibleError("no core with spare capacity during round-robin fill")
        place(q, cid)
        cursor = cid + 1

    phys_of = [0] * num_logical
    for core in arch.cores:
        hosted = assignment[core.id]
        spots = rng.sample(sorted(core.qubits), len(hosted))
        for q, p in zip(hosted, spots):
            phys_of[q] = p
    return Layout(arch, phys_of)


def optimize_initial(arch: Architecture, dag: CircuitDag, seed: int, params) -> Layout:
    """Bidirectional refinement: forward pass, then a backward pass over the
    reversed circuit; the backward pass's final layout seeds the caller's
    definitive forward run."""
    from .router import run  # deferred: router imports initial_layout

    lay0 = initial_layout(arch, dag, seed)
    if not dag.gates:
        return lay0
    _, final_fwd = run(dag, arch, params, start_layout=lay0)
    _, final_bwd = run(dag.reverse(), arch, params, start_layout=final_fwd)
    final_bwd.reset_usage()
    return final_bwd
