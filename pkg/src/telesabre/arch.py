"""Multi-core architecture model: cores, qubit kinds, coupling edges, inter-core links.

Physical qubits are numbered globally. Each qubit belongs to exactly one core and
is either a data qubit or a communication qubit; only communication qubits can
terminate an inter-core link. SWAPs and two-qubit gates need an intra-core
coupling edge, so hop distances are defined within a core only.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class ArchitectureError(ValueError):
    """Raised when an architecture description violates a structural constraint."""


@dataclass(frozen=True)
class Core:
    id: int
    qubits: tuple[int, ...]
    comm: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.qubits)


class DistanceTable:
    """All-pairs intra-core hop distances (SWAP hops). Cross-core entries are inf."""

    def __init__(self, matrix: np.ndarray):
        self._m = matrix

    def hops(self, a: int, b: int) -> float:
        return float(self._m[a, b])

    @property
    def matrix(self) -> np.ndarray:
        return self._m


@dataclass
class Architecture:
    num_qubits: int
    cores: list[Core]
    qubit_core: list[int]
    qubit_kind: list[str]  # "data" or "comm"
    intra_edges: list[tuple[int, int]]
    links: list[tuple[int, int]]
    name: str = "arch"

    # derived lookups, filled in __post_init__
    neighbors: list[list[int]] = field(default_factory=list, repr=False)
    comm_qubits: list[int] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        self.intra_edges = [(min(a, b), max(a, b)) for a, b in self.intra_edges]
        self.intra_edges.sort()
        self.links = [tuple(l) for l in self.links]
        nbrs: list[list[int]] = [[] for _ in range(self.num_qubits)]
        for a, b in self.intra_edges:
            nbrs[a].append(b)
            nbrs[b].append(a)
        self.neighbors = [sorted(ns) for ns in nbrs]
        self.comm_qubits = sorted(p for p in range(self.num_qubits) if self.qubit_kind[p] == "comm")
        self._edge_set = frozenset(self.intra_edges)
        self._links_between: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for ca, cb in self.links:
            key = self._core_pair(ca, cb)
            self._links_between.setdefault(key, []).append((ca, cb))
        self._distances: DistanceTable | None = None

    def _core_pair(self, qa: int, qb: int) -> tuple[int, int]:
        ca, cb = self.qubit_core[qa], self.qubit_core[qb]
        return (min(ca, cb), max(ca, cb))

    @property
    def num_cores(self) -> int:
        return len(self.cores)

    def core_of(self, p: int) -> int:
        return self.qubit_core[p]

    def are_adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self._edge_set

    def links_between(self, core_a: int, core_b: int) -> list[tuple[int, int]]:
        """Inter-core links joining the two cores, as stored (comm_a, comm_b) pairs."""
        return self._links_between.get((min(core_a, core_b), max(core_a, core_b)), [])

    def core_neighbors(self, core: int) -> list[int]:
        out = set()
        for (ca, cb) in self._links_between:
            if ca == core:
                out.add(cb)
            elif cb == core:
                out.add(ca)
        return sorted(out)

    @property
    def distances(self) -> DistanceTable:
        if self._distances is None:
            self._distances = compute_distances(self)
        return self._distances

    def to_descriptor(self) -> dict:
        return {
            "cores": [
                {"qubits": list(c.qubits), "comm_qubits": list(c.comm), "edges": [list(e) for e in self.intra_edges if self.qubit_core[e[0]] == c.id]}
                for c in self.cores
            ],
            "links": [list(l) for l in self.links],
        }


def _validate(arch: Architecture) -> None:
    n = arch.num_qubits
    seen: set[int] = set()
    for core in arch.cores:
        if core.size < 2:
            raise ArchitectureError(f"core {core.id} has {core.size} qubits, need at least 2")
        for q in core.qubits:
            if q in seen:
                raise ArchitectureError(f"qubit {q} assigned to more than one core")
            seen.add(q)
        for c in core.comm:
            if c not in core.qubits:
                raise ArchitectureError(f"comm qubit {c} not in core {core.id}")
    if seen != set(range(n)):
        raise ArchitectureError("core qubit sets do not partition the qubit range")
    for a, b in arch.intra_edges:
        if arch.qubit_core[a] != arch.qubit_core[b]:
            raise ArchitectureError(f"intra edge ({a},{b}) crosses cores")
        if a == b:
            raise ArchitectureError(f"self-loop edge on qubit {a}")
    for ca, cb in arch.links:
        if arch.qubit_core[ca] == arch.qubit_core[cb]:
            raise ArchitectureError(f"link ({ca},{cb}) joins two qubits of the same core")
        if arch.qubit_kind[ca] != "comm" or arch.qubit_kind[cb] != "comm":
            raise ArchitectureError(f"link ({ca},{cb}) endpoint is not a communication qubit")
    # multi-core devices need a comm qubit in every core to be routable at all
    if arch.num_cores > 1:
        for core in arch.cores:
            if not core.comm:
                raise ArchitectureError(f"core {core.id} has no communication qubit")
    # connectivity of each core's coupling graph
    for core in arch.cores:
        todo = {core.qubits[0]}
        reached: set[int] = set()
        while todo:
            q = todo.pop()
            reached.add(q)
            todo.update(nb for nb in arch.neighbors[q] if nb not in reached)
        if reached != set(core.qubits):
            raise ArchitectureError(f"core {core.id} coupling graph is disconnected")


def load_architecture(source: str | Path | dict) -> Architecture:
    """Build and validate an Architecture from a JSON file path, JSON text, or descriptor dict.

    Descriptor schema:
      {"cores": [{"qubits": [...], "comm_qubits": [...], "edges": [[a,b],...]}, ...],
       "links": [[c1,c2], ...]}
    """
    name = "arch"
    if isinstance(source, dict):
        desc = source
    else:
        path = Path(source)
        if path.exists():
            desc = json.loads(path.read_text())
            name = path.stem
        else:
            desc = json.loads(str(source))
    try:
        core_descs = desc["cores"]
        link_list = desc.get("links", [])
    except (TypeError, KeyError) as exc:
        raise ArchitectureError(f"descriptor missing required field: {exc}") from exc

    cores: list[Core] = []
    qubit_core: dict[int, int] = {}
    qubit_kind: dict[int, str] = {}
    intra_edges: list[tuple[int, int]] = []
    for cid, cd in enumerate(core_descs):
        try:
            qubits = tuple(int(q) for q in cd["qubits"])
            comm = tuple(int(q) for q in cd.get("comm_qubits", []))
            edges = [(int(a), int(b)) for a, b in cd.get("edges", [])]
        except (TypeError, KeyError, ValueError) as exc:
            raise ArchitectureError(f"malformed core descriptor {cid}: {exc}") from exc
        cores.append(Core(cid, qubits, tuple(sorted(comm))))
        for q in qubits:
            qubit_core[q] = cid
            qubit_kind[q] = "comm" if q in comm else "data"
        intra_edges.extend(edges)

    n = len(qubit_core)
    if sorted(qubit_core) != list(range(n)):
        raise ArchitectureError("qubit ids must be 0..N-1 with no gaps")
    arch = Architecture(
        num_qubits=n,
        cores=cores,
        qubit_core=[qubit_core[q] for q in range(n)],
        qubit_kind=[qubit_kind[q] for q in range(n)],
        intra_edges=intra_edges,
        links=[(int(a), int(b)) for a, b in link_list],
        name=name,
    )
    _validate(arch)
    return arch


def generate_grid_architecture(
    cores_x: int,
    cores_y: int,
    core_rows: int,
    core_cols: int,
    comm_per_side: int = 1,
) -> Architecture:
    """Generate a cores_x by cores_y grid of identical lattice cores.

    Each core is a core_rows x core_cols nearest-neighbor lattice. Adjacent cores
    are joined by comm_per_side links between facing boundary qubits. Qubit
    numbering is row-major within a core and core-major overall, so regeneration
    with the same parameters is byte-identical.
    """
    if min(cores_x, cores_y, core_rows, core_cols, comm_per_side) < 1:
        raise ArchitectureError("all grid parameters must be >= 1")
    if cores_x > 1 and comm_per_side > core_rows:
        raise ArchitectureError("comm_per_side exceeds core height for horizontal links")
    if cores_y > 1 and comm_per_side > core_cols:
        raise ArchitectureError("comm_per_side exceeds core width for vertical links")
    if core_rows * core_cols < 2:
        raise ArchitectureError("cores need at least 2 qubits")

    core_size = core_rows * core_cols

    def qubit_id(gx: int, gy: int, r: int, c: int) -> int:
        core_id = gy * cores_x + gx
        return core_id * core_size + r * core_cols + c

    # link positions are centered on each side, with horizontal and vertical
    # anchors rounded in opposite directions so a corner qubit is not asked to
    # serve two links at once
    row0 = (core_rows - comm_per_side) // 2
    col0 = (core_cols - comm_per_side + 1) // 2

    comm: set[int] = set()
    links: list[tuple[int, int]] = []
    for gy in range(cores_y):
        for gx in range(cores_x):
            if gx + 1 < cores_x:
                for i in range(comm_per_side):
                    a = qubit_id(gx, gy, row0 + i, core_cols - 1)
                    b = qubit_id(gx + 1, gy, row0 + i, 0)
                    comm.update((a, b))
                    links.append((a, b))
            if gy + 1 < cores_y:
                for i in range(comm_per_side):
                    a = qubit_id(gx, gy, core_rows - 1, col0 + i)
                    b = qubit_id(gx, gy + 1, 0, col0 + i)
                    comm.update((a, b))
                    links.append((a, b))

    cores: list[Core] = []
    intra_edges: list[tuple[int, int]] = []
    for gy in range(cores_y):
        for gx in range(cores_x):
            cid = gy * cores_x + gx
            qubits = tuple(range(cid * core_size, (cid + 1) * core_size))
            cores.append(Core(cid, qubits, tuple(sorted(q for q in qubits if q in comm))))
            for r in range(core_rows):
                for c in range(core_cols):
                    q = qubit_id(gx, gy, r, c)
                    if c + 1 < core_cols:
                        intra_edges.append((q, qubit_id(gx, gy, r, c + 1)))
                    if r + 1 < core_rows:
                        intra_edges.append((q, qubit_id(gx, gy, r + 1, c)))

    n = cores_x * cores_y * core_size
    arch = Architecture(
        num_qubits=n,
        cores=cores,
        qubit_core=[q // core_size for q in range(n)],
        qubit_kind=["comm" if q in comm else "data" for q in range(n)],
        intra_edges=intra_edges,
        links=links,
        name=f"grid:{cores_x}x{cores_y},{core_rows}x{core_cols},{comm_per_side}",
    )
    _validate(arch)
    return arch


def compute_distances(arch: Architecture) -> DistanceTable:
    """All-pairs intra-core hop distances via Floyd-Warshall over intra edges only.

    Inter-core links are excluded: SWAPs cannot cross cores, so cross-core
    entries stay infinite.
    """
    n = arch.num_qubits
    m = np.full((n, n), np.inf)
    np.fill_diagonal(m, 0.0)
    for a, b in arch.intra_edges:
        m[a, b] = 1.0
        m[b, a] = 1.0
    for k in range(n):
        np.minimum(m, m[:, k, None] + m[None, k, :], out=m)
    return DistanceTable(m)
