"""Independent schedule verification by replay.

Deliberately shares no routing logic with the router: adjacency, link, and
feasibility checks are re-derived here straight from the architecture tables,
and the front layer is recomputed from the executed set at every step, so
agreement between router and verifier is meaningful evidence of legality.
"""
from __future__ import annotations

from dataclasses import dataclass

from .arch import Architecture
from .circuit import CircuitDag
from .schedule import LOCAL_GATE, SWAP, TELEDATA, TELEGATE, Schedule


@dataclass(frozen=True)
class Violation:
    seq: int  # -1 for end-state violations
    code: str
    message: str


@dataclass
class VerificationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "schedule verified: no violations"
        lines = [f"{len(self.violations)} violation(s):"]
        lines += [f"  op {v.seq}: [{v.code}] {v.message}" for v in self.violations]
        return "\n".join(lines)


def verify(dag: CircuitDag, arch: Architecture, schedule: Schedule) -> VerificationReport:
    """Replay a schedule from its initial layout, collecting every violation."""
    edges = {(min(a, b), max(a, b)) for a, b in arch.intra_edges}
    links = {(min(a, b), max(a, b)) for a, b in arch.links}
    violations: list[Violation] = []

    pos: dict[int, int] = dict(schedule.initial_layout)
    occ: dict[int, int] = {}
    for q, p in pos.items():
        if p in occ:
            violations.append(Violation(-1, "layout", f"initial layout maps two qubits to {p}"))
        occ[p] = q
    executed: set[int] = set()

    def adjacent(a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in edges

    def in_front(gid: int) -> bool:
        gate = dag.gates.get(gid)
        return gate is not None and gid not in executed and gate.preds <= executed

    def free_count(core_id: int) -> int:
        return sum(1 for p in arch.cores[core_id].qubits if p not in occ)

    def bad(seq: int, code: str, message: str) -> None:
        violations.append(Violation(seq, code, message))

    for op in schedule.ops:
        seq = op.seq
        if op.kind == SWAP:
            a, b = op.qubits
            if not adjacent(a, b):
                bad(seq, "swap-adjacency", f"swap endpoints {a},{b} share no intra-core edge")
            else:
                la, lb = occ.pop(a, None), occ.pop(b, None)
                if lb is not None:
                    occ[a] = lb
                    pos[lb] = a
                if la is not None:
                    occ[b] = la
                    pos[la] = b

        elif op.kind == LOCAL_GATE:
            gid = op.gate_id
            gate = dag.gates.get(gid)
            if gate is None:
                bad(seq, "unknown-gate", f"gate {gid} not in circuit")
                continue
            if not in_front(gid):
                bad(seq, "ordering", f"gate {gid} executed before its dependencies")
            p1, p2 = pos.get(gate.qubits[0]), pos.get(gate.qubits[1])
            if p1 is None or p2 is None:
                bad(seq, "layout", f"gate {gid} qubits unmapped")
            else:
                if arch.qubit_core[p1] != arch.qubit_core[p2]:
                    bad(seq, "locality", f"gate {gid} qubits in cores {arch.qubit_core[p1]} and {arch.qubit_core[p2]}")
                elif not adjacent(p1, p2):
                    bad(seq, "adjacency", f"gate {gid} qubits at {p1},{p2} are not adjacent")
                if tuple(op.qubits) != (p1, p2):
                    bad(seq, "replay", f"gate {gid} recorded at {op.qubits} but replay puts it at {(p1, p2)}")
            executed.add(gid)

        elif op.kind == TELEDATA:
            q, c_s, c_d, src = op.logical, op.src_comm, op.dst_comm, op.src_data
            if (min(c_s, c_d), max(c_s, c_d)) not in links:
                bad(seq, "link", f"no inter-core link between {c_s} and {c_d}")
            if c_s in occ:
                bad(seq, "comm-occupied", f"source comm {c_s} hosts logical {occ[c_s]}")
            if c_d in occ:
                bad(seq, "comm-occupied", f"destination comm {c_d} hosts logical {occ[c_d]}")
            actual = pos.get(q)
            if actual != src:
                bad(seq, "replay", f"teledata source recorded {src} but logical {q} is at {actual}")
            if actual is not None:
                if actual == c_s or not adjacent(actual, c_s):
                    bad(seq, "adjacency", f"teledata source {actual} not adjacent to comm {c_s}")
            if free_count(arch.qubit_core[c_d]) < 2:
                bad(seq, "capacity", f"destination core {arch.qubit_core[c_d]} lacks a spare free qubit")
            if actual is not None:
                occ.pop(actual, None)
                occ[c_d] = q
                pos[q] = c_d

        elif op.kind == TELEGATE:
            gid = op.gate_id
            gate = dag.gates.get(gid)
            if gate is None:
                bad(seq, "unknown-gate", f"gate {gid} not in circuit")
                continue
            if not in_front(gid):
                bad(seq, "ordering", f"gate {gid} executed before its dependencies")
            c_s, c_d = op.src_comm, op.dst_comm
            if (min(c_s, c_d), max(c_s, c_d)) not in links:
                bad(seq, "link", f"no inter-core link between {c_s} and {c_d}")
            if c_s in occ or c_d in occ:
                bad(seq, "comm-occupied", f"telegate comm qubits {c_s},{c_d} not both free")
            p1, p2 = pos.get(gate.qubits[0]), pos.get(gate.qubits[1])
            if p1 is None or p2 is None:
                bad(seq, "layout", f"gate {gid} qubits unmapped")
            else:
                ok_fwd = arch.qubit_core[p1] == arch.qubit_core[c_s] and arch.qubit_core[p2] == arch.qubit_core[c_d]
                if not ok_fwd:
                    bad(seq, "locality", f"telegate gate {gid} qubits not in the linked cores as recorded")
                elif not (adjacent(p1, c_s) and adjacent(p2, c_d)):
                    bad(seq, "adjacency", f"telegate gate {gid} qubits at {p1},{p2} not adjacent to comms {c_s},{c_d}")
                if tuple(op.qubits) != (p1, p2):
                    bad(seq, "replay", f"gate {gid} recorded at {op.qubits} but replay puts it at {(p1, p2)}")
            executed.add(gid)

        else:
            bad(seq, "unknown-op", f"unrecognized op kind {op.kind!r}")

        for core in arch.cores:
            if free_count(core.id) == 0:
                bad(seq, "zero-free", f"core {core.id} has no free qubit after op {seq}")

    missing = sorted(set(dag.gates) - executed)
    if missing:
        violations.append(Violation(-1, "incomplete", f"gates never executed: {missing}"))
    if pos != dict(schedule.final_layout):
        violations.append(Violation(-1, "final-layout", "replayed layout differs from recorded final layout"))
    return VerificationReport(violations)
