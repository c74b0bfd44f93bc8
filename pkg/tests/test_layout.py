"""Layout state, movement primitives, and feasibility predicates."""
import random

import pytest

from telesabre.layout import (
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
from conftest import line_cores, mk_dag, random_grid_arch

# arch_2x4 layout positions: core0 = 0-1-2-3 (comm 3), core1 = 4-5-6-7 (comm 4), link (3,4)


def test_gate_executable_cases(arch_2x4):
    dag = mk_dag(3, [(0, 1), (0, 2)])
    lay = Layout(arch_2x4, [0, 1, 4])
    assert is_gate_executable(lay, arch_2x4, dag.gates[0])  # adjacent, same core
    assert not is_gate_executable(lay, arch_2x4, dag.gates[1])  # different cores
    lay2 = Layout(arch_2x4, [0, 2, 4])
    assert not is_gate_executable(lay2, arch_2x4, dag.gates[0])  # same core, distance 2


def test_teleport_feasible_all_conditions(arch_2x4):
    lay = Layout(arch_2x4, [2, 5])  # q0 adjacent to comm 3; comms 3,4 free; core1 free >= 2
    assert teleport_feasible(lay, arch_2x4, 0, (3, 4))


def test_teleport_infeasible_when_dst_comm_occupied(arch_2x4):
    # the destination comm hosts a logical qubit that must be relocated first
    lay = Layout(arch_2x4, [2, 4])
    assert not teleport_feasible(lay, arch_2x4, 0, (3, 4))


def test_teleport_infeasible_when_src_comm_occupied(arch_2x4):
    lay = Layout(arch_2x4, [2, 3, 6])
    assert not teleport_feasible(lay, arch_2x4, 0, (3, 4))


def test_teleport_infeasible_when_not_adjacent(arch_2x4):
    lay = Layout(arch_2x4, [1, 5])  # q0 at distance 2 from comm 3
    assert not teleport_feasible(lay, arch_2x4, 0, (3, 4))


def test_teleport_infeasible_when_on_comm_itself(arch_2x4):
    lay = Layout(arch_2x4, [3, 5])
    assert not teleport_feasible(lay, arch_2x4, 0, (3, 4))


def test_teleport_infeasible_when_dst_core_would_fill(arch_2x4):
    # destination core keeps exactly one free qubit (comm 4 itself): post-state
    # would have zero free, which is a forbidden layout
    lay = Layout(arch_2x4, [2, 5, 6, 7])
    assert teleport_feasible(lay, arch_2x4, 0, (3, 4)) is False


def test_telegate_feasible_direct_configuration(arch_2x4):
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch_2x4, [2, 5])  # both gate qubits adjacent to their free comms
    assert telegate_feasible(lay, arch_2x4, dag.gates[0], (3, 4))
    assert telegate_feasible(lay, arch_2x4, dag.gates[0], (4, 3))  # either orientation


def test_telegate_infeasible_gate_qubit_on_comm(arch_2x4):
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch_2x4, [3, 5])
    assert not telegate_feasible(lay, arch_2x4, dag.gates[0], (3, 4))


def test_telegate_infeasible_nonadjacent_cores():
    arch = line_cores(3, 4)  # cores 0,1,2 in a row; no direct 0-2 link
    dag = mk_dag(2, [(0, 1)])
    lay = Layout(arch, [2, 10])  # q0 in core 0, q1 in core 2
    for link in arch.links:
        assert not telegate_feasible(lay, arch, dag.gates[0], link)
        assert not telegate_feasible(lay, arch, dag.gates[0], (link[1], link[0]))


def test_apply_teledata_updates_free_sets(arch_2x4):
    lay = Layout(arch_2x4, [2, 5])
    before_src_free = lay.free_count(0)
    before_dst_free = lay.free_count(1)
    new = apply_operation(lay, Teledata(0, 3, 4))
    assert new.phys(0) == 4
    assert new.is_free(2)
    assert new.is_free(3)  # source comm consumed within the protocol, stays free
    assert new.free_count(0) == before_src_free + 1
    assert new.free_count(1) == before_dst_free - 1
    # original untouched (value semantics)
    assert lay.phys(0) == 2


def test_apply_swap_with_hole(arch_2x4):
    lay = Layout(arch_2x4, [0, 4])
    new = apply_operation(lay, Swap(0, 1))
    assert new.phys(0) == 1
    assert new.is_free(0)


def test_swap_twice_restores_layout(arch_2x4):
    lay = Layout(arch_2x4, [0, 1, 4])
    once = apply_operation(lay, Swap(1, 2))
    twice = apply_operation(once, Swap(1, 2))
    assert twice.phys_of == lay.phys_of


def test_swap_of_two_free_qubits_rejected(arch_2x4):
    lay = Layout(arch_2x4, [0, 4])
    with pytest.raises(ValueError):
        apply_operation(lay, Swap(1, 2))


def test_swap_non_edge_rejected(arch_2x4):
    lay = Layout(arch_2x4, [0, 4])
    with pytest.raises(ValueError):
        apply_operation(lay, Swap(0, 2))


def test_infeasible_teledata_rejected(arch_2x4):
    lay = Layout(arch_2x4, [1, 5])
    with pytest.raises(ValueError):
        apply_operation(lay, Teledata(0, 3, 4))


def test_telegate_leaves_layout_unchanged(arch_2x4):
    lay = Layout(arch_2x4, [2, 5])
    new = apply_operation(lay, Telegate(0, 3, 4))
    assert new.phys_of == lay.phys_of


def test_layout_requires_one_free_per_core(arch_2x4):
    with pytest.raises(ValueError):
        Layout(arch_2x4, [0, 1, 2, 3, 4])  # core 0 completely full


def test_nearest_free_zero_when_comm_free(arch_2x4):
    lay = Layout(arch_2x4, [0, 4])
    assert nearest_free(lay, arch_2x4, 3) == (0, 3)


def test_nearest_free_adjacent(arch_2x4):
    lay = Layout(arch_2x4, [3, 4, 5])  # comm 3 occupied, qubit 2 free
    assert nearest_free(lay, arch_2x4, 3) == (1, 2)


def test_nearest_free_distance_two_smallest_id_witness():
    from telesabre.arch import generate_grid_architecture

    # 2x3 lattice core: qubits 0 1 2 / 3 4 5, comm 2 linked out
    arch = generate_grid_architecture(2, 1, 2, 3, 1)
    # comm qubit of core 0 facing right is 2; occupy 2 and its neighbors 1, 5
    lay = Layout(arch, [2, 1, 5, 4])
    # exhaustive oracle over the free set
    d = arch.distances
    frees = [p for p in arch.cores[0].qubits if lay.is_free(p)]
    best = min((d.hops(2, f), f) for f in frees)
    assert nearest_free(lay, arch, 2) == best
    assert best[0] == 2  # free qubits 0 and 3 both at hop distance 2; smallest id wins
    assert best[1] == 0


def test_bijectivity_preserved_under_random_ops():
    rng = random.Random(21)
    for _ in range(15):
        arch = random_grid_arch(rng)
        num_logical = rng.randint(2, arch.num_qubits - 2 * arch.num_cores)
        from telesabre.initial import initial_layout

        lay = initial_layout(arch, mk_dag(num_logical, []), seed=rng.randint(0, 999))
        mapped = lay.num_logical
        for _ in range(40):
            ops = []
            for a, b in arch.intra_edges:
                if not (lay.is_free(a) and lay.is_free(b)):
                    ops.append(Swap(a, b))
            for q in range(lay.num_logical):
                for link in arch.links:
                    for c_s, c_d in (link, link[::-1]):
                        if teleport_feasible(lay, arch, q, (c_s, c_d)):
                            ops.append(Teledata(q, c_s, c_d))
            if not ops:
                break
            lay = apply_operation(lay, rng.choice(ops))
            # bijectivity and conservation
            assert sorted(q for q in lay.log_of if q is not None) == sorted(range(mapped))
            for q in range(mapped):
                assert lay.log_of[lay.phys(q)] == q
            for core in arch.cores:
                assert lay.free_count(core.id) >= 1
