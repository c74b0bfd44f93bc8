"""Compiled operation stream: metrics, ASAP depth, and serialization.

The schedule is a flat record of what the router decided, replayable from the
initial layout without any router state. Single-qubit annotations ride on the
op that executed their anchor gate (or on the prologue) and are excluded from
depth by default.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, asdict

LOCAL_GATE = "local_gate"
SWAP = "swap"
TELEDATA = "teledata"
TELEGATE = "telegate"

DEFAULT_DURATIONS = {LOCAL_GATE: 1, SWAP: 1, TELEDATA: 1, TELEGATE: 1, "single": 1}


@dataclass(frozen=True)
class CompiledOp:
    seq: int
    kind: str
    qubits: tuple[int, ...] = ()  # physical: gate positions or swap endpoints
    gate_id: int | None = None
    gate_kind: str | None = None
    gate_qubits: tuple[int, ...] = ()  # logical qubits of the executed gate
    logical: int | None = None  # teledata payload
    src_comm: int | None = None
    dst_comm: int | None = None
    src_data: int | None = None
    annotations: tuple[tuple[str, int], ...] = ()  # (kind, logical qubit)

    def touched(self) -> tuple[int, ...]:
        if self.kind == TELEDATA:
            return (self.src_data, self.src_comm, self.dst_comm)
        if self.kind == TELEGATE:
            return self.qubits + (self.src_comm, self.dst_comm)
        return self.qubits


@dataclass
class Schedule:
    num_logical_qubits: int
    ops: list[CompiledOp]
    initial_layout: dict[int, int]  # logical -> physical
    final_layout: dict[int, int]
    prologue: tuple[tuple[str, int], ...] = ()
    counts: dict[str, int] = field(default_factory=dict)
    depth: int = 0

    @property
    def intercore_total(self) -> int:
        return self.counts.get("teledata", 0) + self.counts.get("telegate", 0)


def tally_counts(ops: list[CompiledOp]) -> dict[str, int]:
    counts = {"swaps": 0, "teledata": 0, "telegate": 0}
    for op in ops:
        if op.kind == SWAP:
            counts["swaps"] += 1
        elif op.kind == TELEDATA:
            counts["teledata"] += 1
        elif op.kind == TELEGATE:
            counts["telegate"] += 1
    return counts


def compute_depth(
    schedule: Schedule,
    durations: dict[str, int] | None = None,
    include_annotations: bool = False,
) -> int:
    """ASAP makespan: each op starts when all its touched physical qubits are
    free and occupies them for its kind's duration."""
    dur = dict(DEFAULT_DURATIONS)
    if durations:
        dur.update(durations)
    ready: dict[int, int] = {}

    def schedule_on(qubits: tuple[int, ...], length: int) -> None:
        start = max((ready.get(p, 0) for p in qubits), default=0)
        for p in qubits:
            ready[p] = start + length

    if include_annotations:
        for kind, q in schedule.prologue:
            schedule_on((schedule.initial_layout[q],), dur["single"])
    for op in schedule.ops:
        schedule_on(op.touched(), dur[op.kind])
        if include_annotations and op.annotations:
            pos = {lq: pp for lq, pp in zip(op.gate_qubits, op.qubits)}
            for kind, q in op.annotations:
                schedule_on((pos[q],), dur["single"])
    return max(ready.values(), default=0)


class ScheduleBuilder:
    """Accumulates compiled ops in order; shared by router, baseline, and oracle."""

    def __init__(self, dag, initial_layout):
        self._ops: list[CompiledOp] = []
        self._num_logical = dag.num_logical_qubits
        self._prologue = tuple((a.kind, a.qubit) for a in dag.prologue)
        self._initial = dict(initial_layout.as_dict())

    def _push(self, **kw) -> None:
        self._ops.append(CompiledOp(seq=len(self._ops), **kw))

    def swap(self, p1: int, p2: int) -> None:
        self._push(kind=SWAP, qubits=(min(p1, p2), max(p1, p2)))

    def local_gate(self, gate, p1: int, p2: int) -> None:
        self._push(
            kind=LOCAL_GATE,
            qubits=(p1, p2),
            gate_id=gate.id,
            gate_kind=gate.kind,
            gate_qubits=tuple(gate.qubits),
            annotations=tuple((a.kind, a.qubit) for a in gate.annotations),
        )

    def teledata(self, logical: int, src_comm: int, dst_comm: int, src_data: int) -> None:
        self._push(
            kind=TELEDATA,
            logical=logical,
            src_comm=src_comm,
            dst_comm=dst_comm,
            src_data=src_data,
        )

    def telegate(self, gate, src_comm: int, dst_comm: int, p1: int, p2: int) -> None:
        self._push(
            kind=TELEGATE,
            qubits=(p1, p2),
            gate_id=gate.id,
            gate_kind=gate.kind,
            gate_qubits=tuple(gate.qubits),
            src_comm=src_comm,
            dst_comm=dst_comm,
            annotations=tuple((a.kind, a.qubit) for a in gate.annotations),
        )

    @property
    def movement_ops(self) -> int:
        return sum(1 for op in self._ops if op.kind != LOCAL_GATE)

    def finish(self, final_layout, durations: dict[str, int] | None = None) -> Schedule:
        sched = Schedule(
            num_logical_qubits=self._num_logical,
            ops=self._ops,
            initial_layout=self._initial,
            final_layout=dict(final_layout.as_dict()),
            prologue=self._prologue,
            counts=tally_counts(self._ops),
        )
        sched.depth = compute_depth(sched, durations)
        return sched


def _op_to_dict(op: CompiledOp) -> dict:
    doc = {"seq": op.seq, "kind": op.kind}
    if op.qubits:
        doc["qubits"] = list(op.qubits)
    if op.gate_id is not None:
        doc["gate"] = op.gate_id
        doc["gate_kind"] = op.gate_kind
        doc["gate_qubits"] = list(op.gate_qubits)
        doc["annotations"] = [list(a) for a in op.annotations]
    if op.kind == TELEDATA:
        doc["logical"] = op.logical
        doc["src_data"] = op.src_data
    if op.kind in (TELEDATA, TELEGATE):
        doc["src_comm"] = op.src_comm
        doc["dst_comm"] = op.dst_comm
    return doc


def schedule_to_dict(schedule: Schedule) -> dict:
    return {
        "num_logical_qubits": schedule.num_logical_qubits,
        "counts": dict(schedule.counts),
        "depth": schedule.depth,
        "initial_layout": {str(q): p for q, p in sorted(schedule.initial_layout.items())},
        "final_layout": {str(q): p for q, p in sorted(schedule.final_layout.items())},
        "prologue": [list(a) for a in schedule.prologue],
        "ops": [_op_to_dict(op) for op in schedule.ops],
    }


def parse_schedule(text: str) -> Schedule:
    doc = json.loads(text)
    ops = []
    for od in doc["ops"]:
        ops.append(
            CompiledOp(
                seq=od["seq"],
                kind=od["kind"],
                qubits=tuple(od.get("qubits", ())),
                gate_id=od.get("gate"),
                gate_kind=od.get("gate_kind"),
                gate_qubits=tuple(od.get("gate_qubits", ())),
                logical=od.get("logical"),
                src_comm=od.get("src_comm"),
                dst_comm=od.get("dst_comm"),
                src_data=od.get("src_data"),
                annotations=tuple((a[0], a[1]) for a in od.get("annotations", [])),
            )
        )
    return Schedule(
        num_logical_qubits=doc["num_logical_qubits"],
        ops=ops,
        initial_layout={int(q): p for q, p in doc["initial_layout"].items()},
        final_layout={int(q): p for q, p in doc["final_layout"].items()},
        prologue=tuple((a[0], a[1]) for a in doc.get("prologue", [])),
        counts=dict(doc["counts"]),
        depth=doc["depth"],
    )


def _teleport_phases(arch, src_comm: int, dst_comm: int, detail: str) -> list[str]:
    sc = arch.qubit_core[src_comm] if arch else "?"
    dc = arch.qubit_core[dst_comm] if arch else "?"
    return [
        f"    entangle: Bell pair distributed to comm {src_comm} (core {sc}) and comm {dst_comm} (core {dc})",
        f"    measure: {detail}",
        f"    classical: measurement bits sent core {sc} -> core {dc}",
        f"    correct: conditional X and Z corrections applied at core {dc}",
    ]


def emit(schedule: Schedule, fmt: str, meta: dict | None = None, arch=None) -> str:
    """Serialize a schedule: 'json' (full, deterministic), 'csv-summary' (one
    metrics row), or 'annotated-text' (teleport protocols expanded into their
    entangle / measure / classical / correct phases)."""
    if fmt == "json":
        return json.dumps(schedule_to_dict(schedule), indent=2, sort_keys=True) + "\n"

    if fmt == "csv-summary":
        meta = meta or {}
        header = "circuit,arch,seed,swaps,teledata,telegate,intercore_total,depth,runtime_ms"
        row = ",".join(
            str(x)
            for x in (
                meta.get("circuit", ""),
                meta.get("arch", ""),
                meta.get("seed", ""),
                schedule.counts.get("swaps", 0),
                schedule.counts.get("teledata", 0),
                schedule.counts.get("telegate", 0),
                schedule.intercore_total,
                schedule.depth,
                meta.get("runtime_ms", ""),
            )
        )
        return header + "\n" + row + "\n"

    if fmt == "annotated-text":
        c = schedule.counts
        lines = [
            f"# {schedule.num_logical_qubits} logical qubits | swaps={c.get('swaps', 0)} "
            f"teledata={c.get('teledata', 0)} telegate={c.get('telegate', 0)} depth={schedule.depth}"
        ]
        for kind, q in schedule.prologue:
            lines.append(f"  single {kind} on logical {q} (prologue)")
        for op in schedule.ops:
            if op.kind == SWAP:
                lines.append(f"[{op.seq}] swap {op.qubits[0]} <-> {op.qubits[1]}")
            elif op.kind == LOCAL_GATE:
                lines.append(
                    f"[{op.seq}] {op.gate_kind} gate {op.gate_id} on physical {op.qubits}"
                )
            elif op.kind == TELEDATA:
                lines.append(
                    f"[{op.seq}] teledata logical {op.logical}: data {op.src_data} via comm "
                    f"{op.src_comm} => comm {op.dst_comm}"
                )
                lines.extend(
                    _teleport_phases(
                        arch, op.src_comm, op.dst_comm,
                        f"CX data {op.src_data} -> comm {op.src_comm}, H on data, measure both",
                    )
                )
            elif op.kind == TELEGATE:
                lines.append(
                    f"[{op.seq}] telegate {op.gate_kind} gate {op.gate_id} on physical "
                    f"{op.qubits} via comm {op.src_comm} ~ comm {op.dst_comm}"
                )
                lines.extend(
                    _teleport_phases(
                        arch, op.src_comm, op.dst_comm,
                        f"local CX on each side, H on comm {op.dst_comm}, measure both comms",
                    )
                )
            for akind, aq in op.annotations:
                lines.append(f"    single {akind} on logical {aq}")
        return "\n".join(lines) + "\n"

    raise ValueError(f"unknown emit format '{fmt}'")
