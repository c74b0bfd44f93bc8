"""Circuit ingestion and the dependency DAG over two-qubit gates.

Only two-qubit gates participate in routing. Single-qubit gates ride along as
annotations on the nearest preceding two-qubit gate touching the same qubit
(or on a circuit prologue slot) and are re-emitted in schedule order.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass


class ParseError(ValueError):
    """Syntax or structural error in a circuit source, with line/column info."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, col {col}: {message}" if line else message)
        self.line = line
        self.col = col


class UnsupportedGateError(ParseError):
    """Gate acting on three or more qubits."""


@dataclass(frozen=True)
class Annotation:
    kind: str
    qubit: int


class Gate:
    """A two-qubit gate node of the dependency DAG."""

    __slots__ = ("id", "kind", "qubits", "preds", "succs", "annotations")

    def __init__(self, gid: int, kind: str, qubits: tuple[int, int]):
        self.id = gid
        self.kind = kind
        self.qubits = qubits
        self.preds: set[int] = set()
        self.succs: set[int] = set()
        self.annotations: list[Annotation] = []

    def __repr__(self) -> str:
        return f"Gate({self.id}, {self.kind}, {self.qubits})"


class CircuitDag:
    """Dependency DAG with an executable front layer and a lookahead window.

    Edges run between gates sharing a qubit (immediate predecessor per wire).
    The front is the set of unexecuted gates whose predecessors all executed.
    """

    def __init__(self, num_logical_qubits: int):
        self.num_logical_qubits = num_logical_qubits
        self.gates: dict[int, Gate] = {}
        self.prologue: list[Annotation] = []
        self.executed: set[int] = set()
        self.front: set[int] = set()

    @property
    def num_gates(self) -> int:
        return len(self.gates)

    @property
    def remaining(self) -> int:
        return len(self.gates) - len(self.executed)

    def add_gate(self, kind: str, q1: int, q2: int, last_on_wire: dict[int, int]) -> Gate:
        gid = len(self.gates)
        gate = Gate(gid, kind, (q1, q2))
        for q in (q1, q2):
            prev = last_on_wire.get(q)
            if prev is not None and prev != gid:
                gate.preds.add(prev)
                self.gates[prev].succs.add(gid)
            last_on_wire[q] = gid
        self.gates[gid] = gate
        if not gate.preds:
            self.front.add(gid)
        return gate

    def execute_gate(self, gid: int) -> set[int]:
        """Mark a front gate executed; return the successors it newly enables."""
        if gid not in self.front:
            raise ValueError(f"gate {gid} is not in the front layer")
        self.front.discard(gid)
        self.executed.add(gid)
        enabled: set[int] = set()
        for s in self.gates[gid].succs:
            if s not in self.executed and self.gates[s].preds <= self.executed:
                enabled.add(s)
                self.front.add(s)
        return enabled

    def extended_set(self, size: int) -> list[int]:
        """Up to `size` unexecuted non-front gates in breadth-first order from
        front successors, gate id breaking ties within a level."""
        if size <= 0:
            return []
        out: list[int] = []
        seen = set(self.front) | self.executed
        level = sorted(self.front)
        while level and len(out) < size:
            nxt: set[int] = set()
            for gid in level:
                for s in self.gates[gid].succs:
                    if s not in seen:
                        nxt.add(s)
            level = sorted(nxt)
            seen.update(level)
            for gid in level:
                out.append(gid)
                if len(out) == size:
                    break
        return out

    def recompute_front(self) -> set[int]:
        """Front layer derived from scratch; used to audit incremental updates."""
        return {
            gid
            for gid, g in self.gates.items()
            if gid not in self.executed and g.preds <= self.executed
        }

    def reverse(self) -> "CircuitDag":
        """Fresh DAG with every dependency edge inverted; gate qubits unchanged."""
        rev = CircuitDag(self.num_logical_qubits)
        rev.prologue = list(self.prologue)
        for gid, g in self.gates.items():
            ng = Gate(gid, g.kind, g.qubits)
            ng.preds = set(g.succs)
            ng.succs = set(g.preds)
            ng.annotations = list(g.annotations)
            rev.gates[gid] = ng
        rev.front = {gid for gid, g in rev.gates.items() if not g.preds}
        return rev

    def copy(self) -> "CircuitDag":
        dup = CircuitDag(self.num_logical_qubits)
        dup.prologue = list(self.prologue)
        for gid, g in self.gates.items():
            ng = Gate(gid, g.kind, g.qubits)
            ng.preds = set(g.preds)
            ng.succs = set(g.succs)
            ng.annotations = list(g.annotations)
            dup.gates[gid] = ng
        dup.executed = set(self.executed)
        dup.front = set(self.front)
        return dup


def build_dag(num_qubits: int, ops: list[tuple[str, tuple[int, ...]]]) -> CircuitDag:
    """Assemble a CircuitDag from (kind, qubits) pairs in program order."""
    dag = CircuitDag(num_qubits)
    last_on_wire: dict[int, int] = {}
    for kind, qubits in ops:
        for q in qubits:
            if not 0 <= q < num_qubits:
                raise ParseError(f"qubit {q} out of range for {num_qubits}-qubit circuit")
        if len(qubits) == 1:
            ann = Annotation(kind, qubits[0])
            prev = last_on_wire.get(qubits[0])
            if prev is None:
                dag.prologue.append(ann)
            else:
                dag.gates[prev].annotations.append(ann)
        elif len(qubits) == 2:
            if qubits[0] == qubits[1]:
                raise ParseError(f"two-qubit gate {kind} with identical qubits {qubits[0]}")
            dag.add_gate(kind, qubits[0], qubits[1], last_on_wire)
        else:
            raise UnsupportedGateError(f"gate {kind} acts on {len(qubits)} qubits; only 1- and 2-qubit gates supported")
    return dag


def _parse_operand(tok: str, registers: dict[str, tuple[int, int]], line: int, col: int) -> int:
    tok = tok.strip()
    if "[" in tok:
        name, _, rest = tok.partition("[")
        idx_text = rest.rstrip("]").strip()
        name = name.strip()
        if not rest.endswith("]") or not idx_text.isdigit():
            raise ParseError(f"malformed operand '{tok}'", line, col)
        if name not in registers:
            raise ParseError(f"unknown register '{name}'", line, col)
        offset, size = registers[name]
        idx = int(idx_text)
        if idx >= size:
            raise ParseError(f"index {idx} out of range for register '{name}' of size {size}", line, col)
        return offset + idx
    # bare qN form, usable when no registers were declared
    if tok.startswith("q") and tok[1:].isdigit():
        return int(tok[1:])
    raise ParseError(f"malformed operand '{tok}'", line, col)


def parse_qasm(text: str) -> CircuitDag:
    """Parse the QASM subset: qreg, creg (ignored), cx/cz two-qubit gates, any
    other named gate with one operand as a single-qubit annotation. Measurement
    and barrier lines are ignored."""
    registers: dict[str, tuple[int, int]] = {}
    num_qubits = 0
    ops: list[tuple[str, tuple[int, ...]]] = []
    implicit_max = -1

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        col = 0
        while line.strip():
            if ";" not in line:
                raise ParseError("missing ';'", lineno, col + len(line.rstrip()) + 1)
            stmt, _, line = line.partition(";")
            col_here = col + 1 + (len(stmt) - len(stmt.lstrip()))
            col += len(stmt) + 1
            stmt = stmt.strip()
            if not stmt:
                continue
            head = stmt.split(None, 1)[0].lower()
            if head in ("openqasm", "include"):
                continue
            if head in ("qreg", "creg"):
                rest = stmt[len(head):].strip()
                if "[" not in rest or not rest.endswith("]"):
                    raise ParseError(f"malformed {head} declaration", lineno, col_here)
                name, _, size_text = rest.partition("[")
                size_text = size_text[:-1]
                if not size_text.isdigit():
                    raise ParseError(f"malformed {head} size", lineno, col_here)
                if head == "qreg":
                    registers[name.strip()] = (num_qubits, int(size_text))
                    num_qubits += int(size_text)
                continue
            if head in ("measure", "barrier", "reset"):
                continue
            # gate application: name may carry a parameter list, e.g. rz(pi/2) q[0]
            if "(" in stmt.split(None, 1)[0]:
                close = stmt.find(")")
                if close == -1:
                    raise ParseError("unterminated parameter list", lineno, col_here)
                kind = stmt[: close + 1].strip()
                rest = stmt[close + 1 :].strip()
            else:
                kind, _, rest = stmt.partition(" ")
                rest = rest.strip()
            if not rest:
                raise ParseError(f"gate '{kind}' has no operands", lineno, col_here)
            operands = [_parse_operand(t, registers, lineno, col_here) for t in rest.split(",")]
            if not registers:
                implicit_max = max([implicit_max, *operands])
            base = kind.split("(", 1)[0].lower()
            if base in ("cx", "cz"):
                if len(operands) != 2:
                    raise ParseError(f"{base} needs exactly 2 operands", lineno, col_here)
                ops.append((base, tuple(operands)))
            elif len(operands) == 1:
                ops.append((kind, (operands[0],)))
            elif len(operands) >= 3:
                raise UnsupportedGateError(
                    f"gate '{kind}' acts on {len(operands)} qubits", lineno, col_here
                )
            else:
                raise ParseError(f"unknown two-qubit gate '{kind}'", lineno, col_here)

    if not registers:
        num_qubits = implicit_max + 1
    return build_dag(max(num_qubits, 0), ops)


def parse_gate_list(text: str) -> CircuitDag:
    """Parse the gate-list JSON format:
    {"num_qubits": n, "gates": [{"kind": "cx", "qubits": [a, b]}, ...]}"""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict) or "num_qubits" not in doc:
        raise ParseError("gate-list document must be an object with 'num_qubits'")
    ops = []
    for entry in doc.get("gates", []):
        try:
            ops.append((str(entry["kind"]), tuple(int(q) for q in entry["qubits"])))
        except (TypeError, KeyError, ValueError) as exc:
            raise ParseError(f"malformed gate entry {entry!r}") from exc
    return build_dag(int(doc["num_qubits"]), ops)


def parse_circuit(text: str, fmt: str = "qasm") -> CircuitDag:
    """Parse circuit source in the named format ('qasm' or 'gate-list')."""
    if fmt == "qasm":
        return parse_qasm(text)
    if fmt in ("gate-list", "gatelist", "json"):
        return parse_gate_list(text)
    raise ValueError(f"unknown circuit format '{fmt}'")
