"""Benchmark circuit families used by the bench subcommand and the test suite."""
from __future__ import annotations

import random

from .circuit import CircuitDag, build_dag


def ghz(n: int) -> CircuitDag:
    """GHZ state preparation: Hadamard then a CX fan-out from qubit 0."""
    ops = [("h", (0,))] + [("cx", (0, i)) for i in range(1, n)]
    return build_dag(n, ops)


def graph_state(n: int, seed: int = 0, degree: int = 3) -> CircuitDag:
    """Random graph state: H on every qubit, CZ per sampled edge."""
    rng = random.Random(seed)
    target_edges = max(1, n * degree // 2)
    edges: set[tuple[int, int]] = set()
    while len(edges) < target_edges:
        a, b = rng.sample(range(n), 2)
        edges.add((min(a, b), max(a, b)))
    ops = [("h", (q,)) for q in range(n)]
    ops += [("cz", e) for e in sorted(edges)]
    return build_dag(n, ops)


def qft_like(n: int, band: int | None = None) -> CircuitDag:
    """QFT interaction pattern: H on each qubit followed by controlled-phase
    style gates against all (or the nearest `band`) later qubits."""
    ops: list[tuple[str, tuple[int, ...]]] = []
    for i in range(n):
        ops.append(("h", (i,)))
        hi = n if band is None else min(n, i + 1 + band)
        for j in range(i + 1, hi):
            ops.append(("cz", (j, i)))
    return build_dag(n, ops)


def adder_like(n: int) -> CircuitDag:
    """Ripple-carry style ladder: nearest-neighbor CX pairs with a skip link."""
    ops: list[tuple[str, tuple[int, ...]]] = []
    for i in range(n - 2):
        ops.append(("cx", (i, i + 1)))
        ops.append(("cx", (i, i + 2)))
    if n >= 2:
        ops.append(("cx", (n - 2, n - 1)))
    return build_dag(n, ops)


def random_circuit(n: int, num_gates: int, seed: int = 0) -> CircuitDag:
    """Uniformly random two-qubit gates on distinct qubit pairs."""
    rng = random.Random(seed)
    ops = [("cx", tuple(rng.sample(range(n), 2))) for _ in range(num_gates)]
    return build_dag(n, ops)


def make_benchmark(name: str, n: int, seed: int = 0) -> CircuitDag:
    """Build a named benchmark circuit at the given logical width."""
    if name == "ghz":
        return ghz(n)
    if name == "graphstate":
        return graph_state(n, seed=seed)
    if name == "qft":
        return qft_like(n)
    if name == "adder":
        return adder_like(n)
    if name == "random":
        return random_circuit(n, num_gates=3 * n, seed=seed)
    raise ValueError(f"unknown benchmark '{name}'")


BENCHMARK_NAMES = ("ghz", "graphstate", "qft", "adder", "random")
