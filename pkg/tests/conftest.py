"""Shared fixtures and small instance builders."""
from __future__ import annotations

import random

import pytest

from telesabre.arch import Architecture, generate_grid_architecture, load_architecture
from telesabre.circuit import CircuitDag, build_dag
from telesabre.layout import Layout


def mk_dag(n: int, pairs: list[tuple[int, int]], kind: str = "cx") -> CircuitDag:
    return build_dag(n, [(kind, p) for p in pairs])


def line_cores(num_cores: int, core_len: int) -> Architecture:
    """num_cores cores in a row, each a 1 x core_len line, one link per border."""
    return generate_grid_architecture(num_cores, 1, 1, core_len, 1)


def random_grid_arch(rng: random.Random) -> Architecture:
    """Random small-to-medium grid architecture, 2..6 cores, 8..96 qubits."""
    while True:
        cx, cy = rng.choice([(2, 1), (3, 1), (2, 2), (3, 2), (2, 3), (6, 1), (5, 1), (4, 1)])
        rows = rng.randint(2, 4)
        cols = rng.randint(2, 4)
        comm = rng.randint(1, min(rows, cols))
        n = cx * cy * rows * cols
        if 8 <= n <= 96:
            return generate_grid_architecture(cx, cy, rows, cols, comm)


def random_dag(rng: random.Random, num_qubits: int, num_gates: int) -> CircuitDag:
    pairs = [tuple(rng.sample(range(num_qubits), 2)) for _ in range(num_gates)]
    return mk_dag(num_qubits, pairs)


@pytest.fixture
def arch_2x4() -> Architecture:
    """Two 4-qubit line cores: 0-1-2-3 and 4-5-6-7, linked at comm qubits 3,4."""
    return line_cores(2, 4)


@pytest.fixture
def arch_a() -> Architecture:
    """Two 2x2 lattice cores (8 qubits), one link between comm qubits 1 and 4."""
    return generate_grid_architecture(2, 1, 2, 2, 1)
