"""Heuristic energy: local hop distance, contracted-graph routing, lookahead total.

A gate whose qubits share a core costs their hop distance. A cross-core gate is
priced by shortest-path routing on a contracted graph whose nodes are the two
gate qubits plus every communication qubit. Edge weights fold in three effects:
the intra-core hop distance between endpoints, half the distance from each
communication qubit to its nearest free qubit (the swaps needed to free it),
and a large penalty on cores whose capacity is depleted (fewer than two free
qubits). Inter-core link edges carry a base weight plus a traffic surcharge for
links already claimed by earlier front gates in the same scoring round.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from heapq import heappop, heappush

from .arch import Architecture, DistanceTable
from .layout import Layout, nearest_free

# node ids for the two gate qubits in the contracted graph; communication
# qubits keep their physical ids (>= 0)
GATE_SRC = -1
GATE_DST = -2


class UnroutableError(RuntimeError):
    """No path exists between the gate qubits in the contracted graph."""


@dataclass(frozen=True)
class RouterParams:
    """Tunable knobs of the router; None means derive from the architecture."""

    lookahead_k: float = 0.5
    extended_size: int = 20
    decay_delta: float = 0.001
    capacity_penalty: float | None = None  # default: num physical qubits
    traffic_coeff: float = 0.5
    teleport_base_weight: float = 1.0
    max_stall: int | None = None  # default: 10 * num physical qubits
    seed: int = 0

    def resolved(self, arch: Architecture) -> "RouterParams":
        cp = self.capacity_penalty if self.capacity_penalty is not None else float(arch.num_qubits)
        ms = self.max_stall if self.max_stall is not None else 10 * arch.num_qubits
        return dataclasses.replace(self, capacity_penalty=cp, max_stall=ms)


class ContractedGraph:
    """Small weighted undirected graph used for cross-core route pricing."""

    def __init__(self):
        self.edges: dict[tuple[int, int], float] = {}
        self.link_edges: set[tuple[int, int]] = set()
        self._adj: dict[int, list[tuple[int, float]]] | None = None

    def add_edge(self, u: int, v: int, w: float, is_link: bool = False) -> None:
        key = (min(u, v), max(u, v))
        if key in self.edges:
            self.edges[key] = min(self.edges[key], w)
        else:
            self.edges[key] = w
        if is_link:
            self.link_edges.add(key)
        self._adj = None

    @property
    def nodes(self) -> list[int]:
        ns = set()
        for u, v in self.edges:
            ns.update((u, v))
        return sorted(ns)

    def neighbors(self, u: int) -> list[tuple[int, float]]:
        if self._adj is None:
            adj: dict[int, list[tuple[int, float]]] = {}
            for (a, b), w in self.edges.items():
                adj.setdefault(a, []).append((b, w))
                adj.setdefault(b, []).append((a, w))
            self._adj = {k: sorted(v) for k, v in adj.items()}
        return self._adj.get(u, [])


def _layout_costs(layout: Layout, arch: Architecture) -> tuple[dict[int, float], set[int]]:
    """Freeing cost of every comm qubit and the set of capacity-depleted cores."""
    nf = {c: nearest_free(layout, arch, c)[0] for c in arch.comm_qubits}
    depleted = {core.id for core in arch.cores if layout.free_count(core.id) < 2}
    return nf, depleted


def _costs_key(layout_costs: tuple[dict[int, float], set[int]]) -> tuple:
    nf, depleted = layout_costs
    return (tuple(sorted(nf.items())), tuple(sorted(depleted)))


def build_contracted_graph(
    layout: Layout,
    arch: Architecture,
    dist: DistanceTable,
    gate,
    params: RouterParams,
    traffic: dict[tuple[int, int], int] | None = None,
    layout_costs: tuple[dict[int, float], set[int]] | None = None,
) -> ContractedGraph:
    """Contracted routing graph for a cross-core gate.

    Edges: intra-core comm-comm pairs at their hop distance; each gate qubit to
    every comm qubit of its own core at |hops - 1| (zero when adjacent and not
    overlapping); architecture links at the teleport base weight plus traffic.
    Every edge incident to a comm qubit pays half that qubit's nearest-free
    distance, and every edge incident to a depleted core's comm qubits pays the
    capacity penalty once per such core.
    """
    p1, p2 = layout.phys(gate.qubits[0]), layout.phys(gate.qubits[1])
    core1, core2 = arch.qubit_core[p1], arch.qubit_core[p2]
    if core1 == core2:
        raise ValueError(f"gate {gate.id} qubits share core {core1}; contracted graph is for cross-core gates")
    nf, depleted = layout_costs if layout_costs is not None else _layout_costs(layout, arch)
    penalty = params.capacity_penalty if params.capacity_penalty is not None else float(arch.num_qubits)
    # a comm qubit occupied by one of this gate's own qubits carries no freeing
    # cost here: the step-off swap is already priced by the |hops - 1| term, and
    # charging it again would make every intermediate teleport hop look uphill
    overlap = {p for p in (p1, p2) if arch.qubit_kind[p] == "comm"}

    def freeing(c: int) -> float:
        return 0.0 if c in overlap else nf[c] / 2.0

    def comm_cost(c: int) -> float:
        extra = freeing(c)
        if arch.qubit_core[c] in depleted:
            extra += penalty
        return extra

    def comm_pair_cost(ca: int, cb: int) -> float:
        extra = freeing(ca) + freeing(cb)
        cores = {arch.qubit_core[ca], arch.qubit_core[cb]}
        extra += penalty * len(cores & depleted)
        return extra

    graph = ContractedGraph()
    for core in arch.cores:
        comms = core.comm
        for i, ca in enumerate(comms):
            for cb in comms[i + 1 :]:
                graph.add_edge(ca, cb, dist.hops(ca, cb) + comm_pair_cost(ca, cb))
    for ca, cb in arch.links:
        w = params.teleport_base_weight + comm_pair_cost(ca, cb)
        if traffic:
            key = (min(ca, cb), max(ca, cb))
            w += params.traffic_coeff * traffic.get(key, 0)
        graph.add_edge(ca, cb, w, is_link=True)
    for node, p, core_id in ((GATE_SRC, p1, core1), (GATE_DST, p2, core2)):
        for c in arch.cores[core_id].comm:
            graph.add_edge(node, c, abs(dist.hops(p, c) - 1.0) + comm_cost(c))
    return graph


def route(graph: ContractedGraph, src: int, dst: int) -> tuple[float, tuple[int, ...]]:
    """Dijkstra shortest path; ties broken by lexicographically smallest path.

    Raises UnroutableError when dst is unreachable from src.
    """
    if src == dst:
        return 0.0, (src,)
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (src,))]
    settled: set[int] = set()
    while heap:
        d, path = heappop(heap)
        u = path[-1]
        if u in settled:
            continue
        settled.add(u)
        if u == dst:
            return d, path
        for v, w in graph.neighbors(u):
            if v not in settled:
                heappush(heap, (d + w, path + (v,)))
    raise UnroutableError(f"no route from {src} to {dst}")


def _path_links(graph: ContractedGraph, path: tuple[int, ...]) -> list[tuple[int, int]]:
    out = []
    for u, v in zip(path, path[1:]):
        key = (min(u, v), max(u, v))
        if key in graph.link_edges:
            out.append(key)
    return out


def route_gate(
    layout: Layout,
    arch: Architecture,
    dist: DistanceTable,
    gate,
    params: RouterParams,
    traffic: dict[tuple[int, int], int] | None = None,
    layout_costs: tuple[dict[int, float], set[int]] | None = None,
    route_cache: dict | None = None,
) -> tuple[float, tuple[int, ...], list[tuple[int, int]]]:
    """Route a cross-core gate; returns (length, node path, links used).

    The optional route_cache memoizes results across the many virtual layouts
    of one scoring round: the result is a pure function of the two endpoint
    positions, the comm-qubit cost state, and the traffic tally.
    """
    if route_cache is not None:
        if layout_costs is None:
            layout_costs = _layout_costs(layout, arch)
        key = (
            layout.phys(gate.qubits[0]),
            layout.phys(gate.qubits[1]),
            _costs_key(layout_costs),
            tuple(sorted(traffic.items())) if traffic else (),
        )
        hit = route_cache.get(key)
        if hit is not None:
            return hit
    graph = build_contracted_graph(layout, arch, dist, gate, params, traffic, layout_costs)
    length, path = route(graph, GATE_SRC, GATE_DST)
    assert length >= params.teleport_base_weight or params.teleport_base_weight <= 0
    result = (length, path, _path_links(graph, path))
    if route_cache is not None:
        route_cache[key] = result
    return result


def gate_energy(
    layout: Layout,
    arch: Architecture,
    dist: DistanceTable,
    gate,
    params: RouterParams,
    traffic: dict[tuple[int, int], int] | None = None,
    layout_costs: tuple[dict[int, float], set[int]] | None = None,
    route_cache: dict | None = None,
) -> float:
    """Hop distance for same-core gates, contracted route length otherwise."""
    p1, p2 = layout.phys(gate.qubits[0]), layout.phys(gate.qubits[1])
    if arch.qubit_core[p1] == arch.qubit_core[p2]:
        return dist.hops(p1, p2)
    length, _, _ = route_gate(layout, arch, dist, gate, params, traffic, layout_costs, route_cache)
    return length


def total_energy(
    layout: Layout,
    arch: Architecture,
    dist: DistanceTable,
    front_gates: list,
    ext_gates: list,
    params: RouterParams,
    route_cache: dict | None = None,
) -> float:
    """Mean front-gate energy plus the lookahead factor times the mean energy of
    the extended set.

    Front gates are routed in gate-id order, each adding traffic to the links it
    claims. An unroutable front gate raises; an unroutable extended-set gate
    contributes a fixed large sentinel so lookahead never aborts the search.
    """
    costs = _layout_costs(layout, arch)
    traffic: dict[tuple[int, int], int] = {}
    total = 0.0
    if front_gates:
        fsum = 0.0
        for g in sorted(front_gates, key=lambda g: g.id):
            p1, p2 = layout.phys(g.qubits[0]), layout.phys(g.qubits[1])
            if arch.qubit_core[p1] == arch.qubit_core[p2]:
                fsum += dist.hops(p1, p2)
            else:
                length, _, links = route_gate(layout, arch, dist, g, params, traffic, costs, route_cache)
                for key in links:
                    traffic[key] = traffic.get(key, 0) + 1
                fsum += length
        total += fsum / len(front_gates)
    if ext_gates:
        sentinel = 10.0 * arch.num_qubits
        hsum = 0.0
        for g in ext_gates:
            try:
                hsum += gate_energy(layout, arch, dist, g, params, traffic, costs, route_cache)
            except UnroutableError:
                hsum += sentinel
        total += params.lookahead_k * hsum / len(ext_gates)
    return total
