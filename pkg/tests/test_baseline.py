"""Greedy teleport-on-demand baseline: legality and shape of its output."""
import random

from telesabre.baseline import run_greedy
from telesabre.initial import initial_layout
from telesabre.layout import Layout
from telesabre.verifier import verify
from conftest import line_cores, mk_dag, random_dag


def test_all_local_circuit_has_no_intercore_ops(arch_a):
    dag = mk_dag(3, [(0, 1), (1, 2), (0, 2)])
    lay = Layout(arch_a, [0, 1, 2])  # everything in core 0
    sched, _ = run_greedy(dag, arch_a, lay)
    assert sched.intercore_total == 0
    assert verify(dag, arch_a, sched).ok


def test_single_cross_core_gate_teleports_never_telegates(arch_a):
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch_a, [3, 5])
    sched, _ = run_greedy(dag, arch_a, lay)
    assert sched.counts["telegate"] == 0
    assert sched.counts["teledata"] >= 1
    assert verify(dag, arch_a, sched).ok


def test_greedy_never_telegates_anywhere():
    rng = random.Random(8)
    for trial in range(10):
        arch = line_cores(rng.randint(2, 4), 4)
        n = rng.randint(2, arch.num_qubits - arch.num_cores - 1)
        dag = random_dag(rng, n, rng.randint(2, 10))
        lay = initial_layout(arch, dag, seed=trial)
        sched, final = run_greedy(dag, arch, lay, seed=trial)
        assert sched.counts["telegate"] == 0
        report = verify(dag, arch, sched)
        assert report.ok, str(report)
        assert dict(final.as_dict()) == sched.final_layout


def test_greedy_deterministic(arch_a):
    dag = mk_dag(4, [(0, 1), (2, 3), (0, 3)])
    lay = initial_layout(arch_a, dag, seed=3)
    a, _ = run_greedy(dag, arch_a, lay)
    b, _ = run_greedy(dag, arch_a, lay)
    from telesabre.schedule import schedule_to_dict

    assert schedule_to_dict(a) == schedule_to_dict(b)
