"""Logical-to-physical assignment, free-qubit bookkeeping, and movement primitives.

Three movement primitives act on a layout:
  Swap      exchanges the occupants of two intra-adjacent physical qubits
            (one endpoint may be a hole, which then moves);
  Teledata  teleports a logical qubit from a data qubit adjacent to a free
            source communication qubit onto the free linked destination
            communication qubit;
  Telegate  executes a remote gate across a link and leaves the layout intact.

A layout in which some core has zero free physical qubits is a forbidden state:
it could never free a communication qubit again, so every operation that would
create one is rejected.
"""
from __future__ import annotations

from dataclasses import dataclass

from .arch import Architecture


@dataclass(frozen=True)
class Swap:
    p1: int
    p2: int

    def __post_init__(self):
        if self.p1 > self.p2:
            lo, hi = self.p2, self.p1
            object.__setattr__(self, "p1", lo)
            object.__setattr__(self, "p2", hi)


@dataclass(frozen=True)
class Teledata:
    qubit: int  # logical qubit being teleported
    src_comm: int
    dst_comm: int


@dataclass(frozen=True)
class Telegate:
    gate_id: int
    src_comm: int  # endpoint on the first gate qubit's side
    dst_comm: int


CandidateOp = Swap | Teledata | Telegate


class Layout:
    """Bijective partial map between logical and physical qubits plus usage decay."""

    __slots__ = ("arch", "phys_of", "log_of", "free", "usage")

    def __init__(self, arch: Architecture, phys_of: list[int]):
        self.arch = arch
        self.phys_of = list(phys_of)
        self.log_of: list[int | None] = [None] * arch.num_qubits
        for q, p in enumerate(self.phys_of):
            if self.log_of[p] is not None:
                raise ValueError(f"physical qubit {p} hosts two logical qubits")
            self.log_of[p] = q
        self.free: list[set[int]] = [
            {p for p in core.qubits if self.log_of[p] is None} for core in arch.cores
        ]
        for core in arch.cores:
            if not self.free[core.id]:
                raise ValueError(f"core {core.id} has no free physical qubit")
        self.usage: list[float] = [1.0] * arch.num_qubits

    @property
    def num_logical(self) -> int:
        return len(self.phys_of)

    def phys(self, q: int) -> int:
        return self.phys_of[q]

    def logical_at(self, p: int) -> int | None:
        return self.log_of[p]

    def is_free(self, p: int) -> bool:
        return self.log_of[p] is None

    def core_of(self, q: int) -> int:
        return self.arch.qubit_core[self.phys_of[q]]

    def free_count(self, core: int) -> int:
        return len(self.free[core])

    def copy(self) -> "Layout":
        dup = object.__new__(Layout)
        dup.arch = self.arch
        dup.phys_of = list(self.phys_of)
        dup.log_of = list(self.log_of)
        dup.free = [set(s) for s in self.free]
        dup.usage = list(self.usage)
        return dup

    def bump_usage(self, qubits, delta: float) -> None:
        for p in qubits:
            self.usage[p] += delta

    def reset_usage(self) -> None:
        self.usage = [1.0] * self.arch.num_qubits

    def as_dict(self) -> dict[int, int]:
        return {q: p for q, p in enumerate(self.phys_of)}

    def __eq__(self, other) -> bool:
        return isinstance(other, Layout) and self.phys_of == other.phys_of

    def __repr__(self) -> str:
        return f"Layout({self.phys_of})"


def is_gate_executable(layout: Layout, arch: Architecture, gate) -> bool:
    """True iff the gate's qubits sit on intra-adjacent physical qubits of one core."""
    p1, p2 = layout.phys(gate.qubits[0]), layout.phys(gate.qubits[1])
    return arch.qubit_core[p1] == arch.qubit_core[p2] and arch.are_adjacent(p1, p2)


def teleport_feasible(layout: Layout, arch: Architecture, q: int, link: tuple[int, int]) -> bool:
    """Teledata q over (src_comm, dst_comm): both comm qubits free, q adjacent to
    the source comm, and the destination core keeps a spare free qubit."""
    c_s, c_d = link
    if not layout.is_free(c_s) or not layout.is_free(c_d):
        return False
    p = layout.phys(q)
    if p == c_s or not arch.are_adjacent(p, c_s):
        return False
    # destination loses one free qubit (c_d), so it needs two now
    return layout.free_count(arch.qubit_core[c_d]) >= 2


def telegate_feasible(layout: Layout, arch: Architecture, gate, link: tuple[int, int]) -> bool:
    """Telegate across a link: both comm endpoints free and each gate qubit
    intra-adjacent to the endpoint of its own core."""
    ca, cb = link
    if not layout.is_free(ca) or not layout.is_free(cb):
        return False
    p1, p2 = layout.phys(gate.qubits[0]), layout.phys(gate.qubits[1])
    core1, core2 = arch.qubit_core[p1], arch.qubit_core[p2]
    if core1 == arch.qubit_core[ca] and core2 == arch.qubit_core[cb]:
        e1, e2 = ca, cb
    elif core1 == arch.qubit_core[cb] and core2 == arch.qubit_core[ca]:
        e1, e2 = cb, ca
    else:
        return False
    return arch.are_adjacent(p1, e1) and arch.are_adjacent(p2, e2)


def touched_qubits(op: CandidateOp, layout: Layout, gate=None) -> tuple[int, ...]:
    """Physical qubits an operation acts on, for usage decay and depth.

    Telegate needs its Gate to resolve the two gate-qubit positions."""
    if isinstance(op, Swap):
        return (op.p1, op.p2)
    if isinstance(op, Teledata):
        return (layout.phys(op.qubit), op.src_comm, op.dst_comm)
    if isinstance(op, Telegate):
        if gate is None:
            raise ValueError("telegate touched set needs the gate object")
        return (layout.phys(gate.qubits[0]), layout.phys(gate.qubits[1]), op.src_comm, op.dst_comm)
    raise TypeError(f"unknown op {op!r}")


def apply_operation(layout: Layout, op: CandidateOp) -> Layout:
    """Return a new layout with the operation applied; all invariants re-checked."""
    arch = layout.arch
    new = layout.copy()
    if isinstance(op, Swap):
        if not arch.are_adjacent(op.p1, op.p2):
            raise ValueError(f"swap endpoints {op.p1},{op.p2} are not intra-adjacent")
        l1, l2 = new.log_of[op.p1], new.log_of[op.p2]
        if l1 is None and l2 is None:
            raise ValueError("swap of two free qubits is a no-op and not allowed")
        new.log_of[op.p1], new.log_of[op.p2] = l2, l1
        core = arch.qubit_core[op.p1]
        if l1 is None:
            new.phys_of[l2] = op.p1
            new.free[core].discard(op.p1)
            new.free[core].add(op.p2)
        elif l2 is None:
            new.phys_of[l1] = op.p2
            new.free[core].discard(op.p2)
            new.free[core].add(op.p1)
        else:
            new.phys_of[l1], new.phys_of[l2] = op.p2, op.p1
    elif isinstance(op, Teledata):
        if not teleport_feasible(layout, arch, op.qubit, (op.src_comm, op.dst_comm)):
            raise ValueError(f"infeasible teledata {op}")
        src_data = new.phys_of[op.qubit]
        src_core = arch.qubit_core[src_data]
        dst_core = arch.qubit_core[op.dst_comm]
        new.phys_of[op.qubit] = op.dst_comm
        new.log_of[src_data] = None
        new.log_of[op.dst_comm] = op.qubit
        new.free[src_core].add(src_data)
        new.free[dst_core].discard(op.dst_comm)
    elif isinstance(op, Telegate):
        pass  # layout unchanged; the paired gate execution happens at commit
    else:
        raise TypeError(f"unknown op {op!r}")
    for core in arch.cores:
        if not new.free[core.id]:
            raise ValueError(f"operation {op} would leave core {core.id} with no free qubit")
    return new


def nearest_free(layout: Layout, arch: Architecture, comm: int) -> tuple[float, int | None]:
    """Hop distance from a communication qubit to the closest free qubit of its
    core, with the smallest-id witness; (0, comm) when comm itself is free."""
    if layout.is_free(comm):
        return 0.0, comm
    dist = arch.distances
    core = arch.qubit_core[comm]
    best: tuple[float, int] | None = None
    for f in sorted(layout.free[core]):
        d = dist.hops(comm, f)
        if best is None or d < best[0]:
            best = (d, f)
    if best is None:
        return float("inf"), None
    return best
