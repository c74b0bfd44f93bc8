"""Layout synthesis for multi-core quantum architectures with teleport interconnects."""

from .arch import (
    Architecture,
    ArchitectureError,
    DistanceTable,
    compute_distances,
    generate_grid_architecture,
    load_architecture,
)
from .circuit import CircuitDag, Gate, ParseError, UnsupportedGateError, parse_circuit
from .energy import (
    RouterParams,
    UnroutableError,
    build_contracted_graph,
    gate_energy,
    route,
    total_energy,
)
from .initial import InfeasibleError, initial_layout, optimize_initial
from .layout import (
    Layout,
    Swap,
    Teledata,
    Telegate,
    apply_operation,
    is_gate_executable,
    nearest_free,
    telegate_feasible,
    teleport_feasible,
)
from .oracle import OracleResult, OracleTimeout, solve_exact
from .router import DeadlockError, run
from .baseline import run_greedy
from .schedule import CompiledOp, Schedule, compute_depth, emit, parse_schedule
from .verifier import VerificationReport, verify

__version__ = "0.1.0"

__all__ = [
    "Architecture",
    "ArchitectureError",
    "CircuitDag",
    "CompiledOp",
    "DeadlockError",
    "DistanceTable",
    "Gate",
    "InfeasibleError",
    "Layout",
    "OracleResult",
    "OracleTimeout",
    "ParseError",
    "RouterParams",
    "Schedule",
    "Swap",
    "Teledata",
    "Telegate",
    "UnroutableError",
    "UnsupportedGateError",
    "VerificationReport",
    "apply_operation",
    "build_contracted_graph",
    "compute_depth",
    "compute_distances",
    "emit",
    "gate_energy",
    "generate_grid_architecture",
    "initial_layout",
    "is_gate_executable",
    "load_architecture",
    "nearest_free",
    "optimize_initial",
    "parse_circuit",
    "parse_schedule",
    "route",
    "run",
    "run_greedy",
    "solve_exact",
    "telegate_feasible",
    "teleport_feasible",
    "total_energy",
    "verify",
]
