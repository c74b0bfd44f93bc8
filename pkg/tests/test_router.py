"""Candidate generation, scoring/selection, and the main routing loop."""
import random
from collections import Counter

import pytest

from telesabre.arch import generate_grid_architecture, load_architecture
from telesabre.circuit import parse_circuit
from telesabre.energy import RouterParams
from telesabre.layout import Layout, Swap, Teledata, Telegate
from telesabre.router import (
    DeadlockError,
    RouterState,
    obtain_candidate_ops,
    run,
    score_and_select,
)
from telesabre.schedule import LOCAL_GATE, TELEGATE, schedule_to_dict
from telesabre.verifier import verify
from conftest import line_cores, mk_dag


def make_state(arch, dag, layout, seed=0) -> RouterState:
    return RouterState(dag=dag, layout=layout, rng=random.Random(seed))


def test_candidates_include_swaps_around_front_qubits():
    arch = generate_grid_architecture(1, 1, 1, 6, 1)
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch, [0, 2])  # distance 2, middle qubit 1
    state = make_state(arch, dag, lay)
    cands = obtain_candidate_ops(state, arch, arch.distances, RouterParams().resolved(arch))
    assert Swap(0, 1) in cands
    assert Swap(1, 2) in cands


def test_candidates_include_vacating_swap_for_occupied_comm(arch_2x4):
    # cross-core gate; comm 3 occupied by a bystander whose nearest free is adjacent
    dag = mk_dag(3, [(0, 1)])
    lay = Layout(arch_2x4, [1, 6, 3])
    state = make_state(arch_2x4, dag, lay)
    cands = obtain_candidate_ops(state, arch_2x4, arch_2x4.distances, RouterParams().resolved(arch_2x4))
    assert Swap(2, 3) in cands  # the single swap vacating comm 3


def test_candidates_include_hole_walk_when_free_is_far(arch_2x4):
    # comm 3 occupied; only free qubit of core 0 is qubit 0, at distance 3;
    # the hole at 0 should step toward the comm via Swap(0, 1)
    dag = mk_dag(4, [(0, 1)])
    lay = Layout(arch_2x4, [1, 6, 3, 2])
    state = make_state(arch_2x4, dag, lay)
    cands = obtain_candidate_ops(state, arch_2x4, arch_2x4.distances, RouterParams().resolved(arch_2x4))
    assert Swap(0, 1) in cands


def test_candidates_include_telegate_in_direct_configuration(arch_2x4):
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch_2x4, [2, 5])
    state = make_state(arch_2x4, dag, lay)
    cands = obtain_candidate_ops(state, arch_2x4, arch_2x4.distances, RouterParams().resolved(arch_2x4))
    assert Telegate(0, 3, 4) in cands


def test_candidates_include_teledata_on_route(arch_2x4):
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch_2x4, [2, 6])  # q0 adjacent to comm 3; both comms free
    state = make_state(arch_2x4, dag, lay)
    cands = obtain_candidate_ops(state, arch_2x4, arch_2x4.distances, RouterParams().resolved(arch_2x4))
    assert Teledata(0, 3, 4) in cands


def test_candidates_deduplicated_and_ordered(arch_2x4):
    dag = mk_dag(4, [(0, 1), (2, 3)])
    lay = Layout(arch_2x4, [1, 6, 2, 5])
    state = make_state(arch_2x4, dag, lay)
    cands = obtain_candidate_ops(state, arch_2x4, arch_2x4.distances, RouterParams().resolved(arch_2x4))
    assert len(cands) == len(set(cands))
    kinds = [(0 if isinstance(c, Swap) else 1 if isinstance(c, Teledata) else 2) for c in cands]
    assert kinds == sorted(kinds)


def test_select_minimum_energy_candidate():
    arch = generate_grid_architecture(1, 1, 1, 6, 1)
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch, [0, 2])
    state = make_state(arch, dag, lay)
    # moving q0 toward q1 yields energy 1; moving q1 away yields energy 3
    op = score_and_select(
        state, [Swap(0, 1), Swap(2, 3)], arch, arch.distances, RouterParams().resolved(arch)
    )
    assert op == Swap(0, 1)


def test_select_prefers_lower_usage_on_energy_tie():
    arch = generate_grid_architecture(1, 1, 1, 6, 1)
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch, [1, 3])  # symmetric: either qubit can step to middle 2
    lay.usage[1] = 1.001  # Swap(1,2) touches qubit 1; penalize it
    state = make_state(arch, dag, lay)
    op = score_and_select(
        state, [Swap(1, 2), Swap(2, 3)], arch, arch.distances, RouterParams().resolved(arch)
    )
    assert op == Swap(2, 3)


def test_tied_scores_sampled_uniformly_across_seeds():
    arch = generate_grid_architecture(1, 1, 1, 6, 1)
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch, [1, 3])
    picks = Counter()
    for seed in range(1000):
        state = make_state(arch, dag, lay, seed=seed)
        op = score_and_select(
            state, [Swap(1, 2), Swap(2, 3)], arch, arch.distances, RouterParams().resolved(arch)
        )
        picks[op] += 1
    assert picks[Swap(1, 2)] + picks[Swap(2, 3)] == 1000
    # binomial(1000, 0.5): 3.5 sigma is about 55
    assert 430 <= picks[Swap(1, 2)] <= 570


def test_run_no_movement_when_already_satisfiable():
    arch = generate_grid_architecture(1, 1, 1, 5, 1)
    dag = mk_dag(4, [(0, 1), (1, 2), (2, 3)])
    start = Layout(arch, [0, 1, 2, 3])
    sched, final = run(dag, arch, RouterParams(seed=0), start_layout=start)
    assert sched.counts == {"swaps": 0, "teledata": 0, "telegate": 0}
    assert len(sched.ops) == 3
    assert final.phys_of == start.phys_of


def test_run_single_cross_core_gate_uses_one_telegate(arch_2x4):
    dag = mk_dag(2, [(0, 1)])
    start = Layout(arch_2x4, [2, 5])
    sched, _ = run(dag, arch_2x4, RouterParams(seed=0), start_layout=start)
    assert [op.kind for op in sched.ops] == [TELEGATE]
    assert sched.counts == {"swaps": 0, "teledata": 0, "telegate": 1}


def test_run_deterministic_for_fixed_seed(arch_a):
    dag = parse_circuit("cx q0,q1; cx q1,q2; cx q0,q3; cx q2,q3; cx q0,q2;", "qasm")
    docs = []
    for _ in range(3):
        sched, _ = run(dag, arch_a, RouterParams(seed=11))
        docs.append(schedule_to_dict(sched))
    assert docs[0] == docs[1] == docs[2]


def test_run_schedules_verify_on_random_instances():
    rng = random.Random(5)
    for trial in range(10):
        arch = line_cores(rng.randint(2, 3), 4)
        n_logical = rng.randint(2, arch.num_qubits - arch.num_cores - 1)
        pairs = [tuple(rng.sample(range(n_logical), 2)) for _ in range(rng.randint(2, 12))]
        dag = mk_dag(n_logical, pairs)
        sched, final = run(dag, arch, RouterParams(seed=trial))
        report = verify(dag, arch, sched)
        assert report.ok, str(report)
        assert dict(final.as_dict()) == sched.final_layout


DEADLOCK_ARCH = {
    "cores": [
        {"qubits": [0, 1], "comm_qubits": [1], "edges": [[0, 1]]},
        {"qubits": [2, 3], "comm_qubits": [2, 3], "edges": [[2, 3]]},
        {"qubits": [4, 5], "comm_qubits": [4], "edges": [[4, 5]]},
    ],
    "links": [[1, 2], [3, 4]],
}


def test_run_detects_deadlock_through_full_core():
    # one qubit per two-qubit core: the middle core can never accept a teleport,
    # and the gate spans the two outer cores, so no movement op ever helps
    arch = load_architecture(DEADLOCK_ARCH)
    dag = mk_dag(3, [(0, 2)])
    with pytest.raises(DeadlockError) as err:
        run(dag, arch, RouterParams(seed=0, max_stall=30))
    assert 1 in err.value.full_cores
    assert 0 in err.value.blocked_gates


def test_stall_bound_between_executions(arch_a):
    dag = parse_circuit("cx q0,q1; cx q1,q2; cx q0,q3; cx q2,q3;", "qasm")
    params = RouterParams(seed=2)
    sched, _ = run(dag, arch_a, params)
    max_stall = params.resolved(arch_a).max_stall
    streak = 0
    for op in sched.ops:
        if op.kind in (LOCAL_GATE, TELEGATE):
            streak = 0
        else:
            streak += 1
            assert streak <= max_stall


def test_run_does_not_mutate_input_dag(arch_a):
    dag = mk_dag(4, [(0, 1), (1, 2)])
    run(dag, arch_a, RouterParams(seed=0))
    assert dag.executed == set()
    assert dag.front == {0}
