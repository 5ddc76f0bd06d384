import pytest

from splaylab.generators import random_t_program, random_tree, rng_for_trial
from splaylab.machine import (
    CostLedger,
    IllegalOpError,
    MachineOp,
    OpKind,
    TreeState,
    build_tree,
    run_program,
)
from splaylab.restricted import (
    DOWN_LEFT,
    DOWN_RIGHT,
    UP,
    check_restricted,
    cursor_trace,
    init_prime,
    is_subsequence,
    simulate_move,
    simulate_program,
    simulate_rotation,
)

L, R, U, ROT = (MachineOp(k) for k in (OpKind.LEFT, OpKind.RIGHT, OpKind.UP, OpKind.ROTATE))


class TestInitPrime:
    def test_singleton(self):
        st = init_prime(TreeState.singleton(5))
        prime = st.prime
        assert prime.root == 5
        assert prime.left[5] == 4 and prime.right[5] == 6
        assert len(prime) == 3
        assert prime.in_order() == [4, 5, 6]

    def test_five_keys(self):
        T = build_tree(range(5), "(((..)(..))(..))")  # root 3
        st = init_prime(T)
        prime = st.prime
        assert prime.root == 3
        assert prime.left[3] == st.min_key == -1
        assert prime.right[3] == st.max_key == 5
        # T's subtrees hang verbatim under the sentinels.
        assert prime.right[-1] == 1 and prime.left[5] == 4
        assert prime.left[1] == 0 and prime.right[1] == 2
        assert prime.in_order() == [-1, 0, 1, 2, 3, 4, 5]

    def test_node_count(self):
        for n in (1, 2, 7):
            T = random_tree(n, rng_for_trial(1, n))
            assert len(init_prime(T).prime) == n + 2


class TestMoveSimulation:
    def test_down_then_up_restores_shape(self):
        T = build_tree(range(5), "(((..)(..))(..))")
        st = init_prime(T)
        before = st.prime.copy()
        simulate_move(st, DOWN_LEFT)
        assert st.prime.root == 1  # new simulated cursor pinned at the root
        simulate_move(st, UP)
        assert st.prime.same_structure(before)
        assert st.ledger.moves == 8 and st.ledger.rotations == 4

    def test_move_costs(self):
        T = build_tree(range(3), "((..)(..))")
        st = init_prime(T)
        simulate_move(st, DOWN_RIGHT)
        assert (st.ledger.moves, st.ledger.rotations) == (4, 2)
        simulate_rotation(st)
        assert (st.ledger.moves, st.ledger.rotations) == (7, 3)

    def test_in_order_preserved(self):
        from splaylab.restricted import apply_t_op

        rng = rng_for_trial(23, 0)
        for _ in range(50):
            T = random_tree(rng.randint(2, 10), rng)
            st = init_prime(T)
            order = st.prime.in_order()
            program = random_t_program(T, rng, max_moves=30, max_rotations=15)
            for op in program.ops:
                apply_t_op(st, op)
                st.prime.validate()
            assert st.prime.in_order() == order

    def test_illegal_move_rejected(self):
        T = TreeState.singleton(0)
        st = init_prime(T)
        with pytest.raises(IllegalOpError):
            simulate_move(st, DOWN_LEFT)
        with pytest.raises(IllegalOpError):
            simulate_rotation(st)


class TestProgramSimulation:
    def test_exact_counts_fuzzed(self):
        rng = rng_for_trial(29, 0)
        for _ in range(200):
            T = random_tree(rng.randint(2, 10), rng)
            program = random_t_program(T, rng)
            M, Rc = program.move_count, program.rotation_count
            out, ledger = simulate_program(T, program)
            assert ledger.moves == 4 * M + 3 * Rc
            assert ledger.rotations == 2 * M + Rc
            assert out.restricted

    def test_simulation_tracks_t_program(self):
        # After the simulation, the subtrees hanging off the restricted tree's
        # sentinel spine match the simulated tree around its cursor.
        rng = rng_for_trial(31, 0)
        for _ in range(100):
            T = random_tree(rng.randint(2, 8), rng)
            program = random_t_program(T, rng, max_moves=20, max_rotations=10)
            sim = T.copy()
            run_program(sim, program.ops, CostLedger())
            st = init_prime(T)
            for op in program.ops:
                from splaylab.restricted import apply_t_op

                apply_t_op(st, op)
            assert st.prime.root == sim.cursor
            assert st.prime.in_order() == [st.min_key] + sim.in_order() + [st.max_key]

    def test_cursor_trace_subsequence(self):
        rng = rng_for_trial(37, 0)
        for _ in range(100):
            T = random_tree(rng.randint(2, 10), rng)
            program = random_t_program(T, rng, max_moves=30, max_rotations=10)
            out, _ = simulate_program(T, program)
            sim_keys = cursor_trace(T, program)
            prime_keys = cursor_trace(init_prime(T).prime, out)
            assert is_subsequence(sim_keys, prime_keys)


class TestRestrictedChecker:
    def test_deep_visit_flagged(self):
        T = build_tree(range(7), "(((..)(..))((..)(..)))")
        prime = init_prime(T).prime
        report = check_restricted(prime, [L, R, L])  # walks to depth 3
        assert not report.passed
        assert any("depth >= 3" in v for v in report.violations)

    def test_missed_return_flagged(self):
        T = build_tree(range(5), "(((..)(..))(..))")
        prime = init_prime(T).prime
        report = check_restricted(prime, [L, R, ROT])  # rotation at depth 2
        assert not report.passed
        assert any("ends before" in v for v in report.violations)

    def test_sideways_after_rotation_flagged(self):
        T = build_tree(range(5), "(((..)(..))(..))")
        prime = init_prime(T).prime
        report = check_restricted(prime, [L, R, ROT, R])
        assert not report.passed
        assert any("sideways" in v for v in report.violations)

    def test_legal_sequence_passes(self):
        T = build_tree(range(3), "((..)(..))")
        prime = init_prime(T).prime
        report = check_restricted(prime, [L, ROT])  # zig; ends at the new root
        assert report.passed

    def test_is_subsequence(self):
        assert is_subsequence([1, 3], [1, 2, 3])
        assert not is_subsequence([3, 1], [1, 2, 3])
        assert is_subsequence([], [1])
