import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distilcheck.tensor import (
    Cut,
    PureState,
    SizeLimitError,
    cut_to_pair_vector,
    kron_all,
    matrix_from_json,
    matrix_to_json,
    pair_to_cut_operator,
    pair_to_cut_vector,
    partial_trace,
    partial_transpose,
    permute_operator,
    reorder_subsystems,
    schmidt,
    schmidt_coefficients,
    standard_ops,
    state_from_json,
    state_to_json,
    tensor_product,
)


def rand_vec(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def rand_mat(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


class TestTensorProduct:
    def test_identity_case(self):
        out = tensor_product(np.eye(2), np.eye(2))
        assert np.array_equal(out, np.eye(4))

    def test_trace_multiplicativity_sym_anti(self):
        ops = standard_ops(4)
        prod = tensor_product(ops.proj_sym, ops.proj_anti)
        assert abs(np.trace(prod) - 60) < 1e-12  # 10 * 6

    def test_mixed_product_identity(self):
        rng = np.random.default_rng(0)
        a, b = rand_mat(rng, 4), rand_mat(rng, 4)
        lhs = tensor_product(a, np.eye(4)) @ tensor_product(np.eye(4), b)
        assert np.abs(lhs - tensor_product(a, b)).max() < 1e-12

    def test_size_cap(self):
        with pytest.raises(SizeLimitError):
            tensor_product(np.eye(128), np.eye(64), cap=4096)

    def test_associativity_up_to_reindexing(self):
        rng = np.random.default_rng(1)
        mats = [rand_mat(rng, 2), rand_mat(rng, 3), rand_mat(rng, 2)]
        left = tensor_product(tensor_product(mats[0], mats[1]), mats[2])
        right = tensor_product(mats[0], tensor_product(mats[1], mats[2]))
        assert np.abs(left - right).max() < 1e-12
        assert np.abs(kron_all(mats) - left).max() == 0.0


class TestPartialTranspose:
    def test_werner_boundary_transpose(self, ops4):
        # rho_W^Gamma at the boundary is proportional to I - (d/2) P+
        from distilcheck.projectors import WernerParams, werner_density

        rho = werner_density(WernerParams.boundary(4))
        rho_g = partial_transpose(rho, (4, 4), [1])
        target = ops4.identity - 2.0 * ops4.proj_max_ent
        scale = np.trace(rho_g @ target) / np.trace(target @ target)
        assert np.abs(rho_g - scale * target).max() < 1e-12

    def test_no_subsystems_is_identity(self):
        rng = np.random.default_rng(2)
        m = rand_mat(rng, 16)
        assert np.array_equal(partial_transpose(m, (4, 4), []), m)

    def test_max_ent_projector_maps_to_swap(self, ops4, psi_plus):
        proj = np.outer(psi_plus, psi_plus.conj())
        assert np.abs(partial_transpose(proj, (4, 4), [1]) - ops4.swap / 4).max() < 1e-14

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.sampled_from([(2, 2), (2, 3), (4, 4), (2, 2, 3)]))
    def test_involution_exact(self, seed, dims):
        rng = np.random.default_rng(seed)
        side = int(np.prod(dims))
        m = rand_mat(rng, side)
        systems = [i for i in range(len(dims)) if rng.integers(2)]
        twice = partial_transpose(partial_transpose(m, dims, systems), dims, systems)
        assert np.array_equal(twice, m)


class TestPartialTrace:
    def test_product_factorizes(self):
        rng = np.random.default_rng(3)
        a, b = rand_mat(rng, 4), rand_mat(rng, 4)
        out = partial_trace(np.kron(a, b), (4, 4), [1])
        assert np.abs(out - a * np.trace(b)).max() < 1e-12

    def test_max_ent_reduction(self, psi_plus):
        proj = np.outer(psi_plus, psi_plus.conj())
        out = partial_trace(proj, (4, 4), [1])
        assert np.abs(out - np.eye(4) / 4).max() < 1e-14

    def test_against_index_summation(self):
        rng = np.random.default_rng(4)
        c = rand_mat(rng, 16)
        got = partial_trace(c, (4, 4), [1])
        want = np.zeros((4, 4), dtype=complex)
        for i in range(4):
            for j in range(4):
                for k in range(4):
                    want[i, j] += c[i * 4 + k, j * 4 + k]
        assert np.abs(got - want).max() < 1e-12

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_trace_preserved(self, seed):
        rng = np.random.default_rng(seed)
        m = rand_mat(rng, 24)
        out = partial_trace(m, (2, 3, 4), [int(rng.integers(3))])
        assert abs(np.trace(out) - np.trace(m)) < 1e-10


class TestSchmidt:
    def test_max_ent_coefficients(self, psi_plus):
        state = PureState((4, 4), psi_plus)
        dec = schmidt(state, Cut((0,), (1,)))
        assert np.abs(dec.coefficients - 0.5).max() < 1e-14
        assert dec.rank() == 4

    def test_product_state_rank_one(self):
        rng = np.random.default_rng(5)
        a, b = rand_vec(rng, 4), rand_vec(rng, 4)
        state = PureState((4, 4), np.kron(a, b)).normalized()
        dec = schmidt(state, Cut((0,), (1,)))
        assert dec.rank() == 1
        assert abs(dec.coefficients[0] - 1.0) < 1e-12

    def test_equality_family_rank_two(self, equality_state_half):
        coeffs = schmidt_coefficients(equality_state_half, (16, 16))
        assert int(np.sum(coeffs > 1e-9)) == 2

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_sum_rule(self, seed):
        rng = np.random.default_rng(seed)
        amps = rand_vec(rng, 36)
        state = PureState((2, 3, 2, 3), amps)
        left = tuple(sorted(rng.choice(4, size=2, replace=False)))
        right = tuple(i for i in range(4) if i not in left)
        dec = schmidt(state, Cut(left, right))
        assert abs(np.sum(dec.coefficients ** 2) - np.vdot(amps, amps).real) < 1e-10

    def test_orthonormal_factors(self):
        rng = np.random.default_rng(6)
        state = PureState((4, 4, 4, 4), rand_vec(rng, 256)).normalized()
        dec = schmidt(state, Cut((0, 1), (2, 3)))
        gram_l = dec.left_vectors.conj().T @ dec.left_vectors
        gram_r = dec.right_vectors.conj().T @ dec.right_vectors
        assert np.abs(gram_l - np.eye(16)).max() < 1e-10
        assert np.abs(gram_r - np.eye(16)).max() < 1e-10

    def test_reconstruction_from_factors(self):
        rng = np.random.default_rng(7)
        state = PureState((4, 4, 4, 4), rand_vec(rng, 256)).normalized()
        dec = schmidt(state, Cut((0, 1), (2, 3)))
        rebuilt = (dec.left_vectors * dec.coefficients) @ dec.right_vectors.T
        assert np.abs(rebuilt.reshape(-1) - state.amplitudes).max() < 1e-12


class TestStandardOps:
    def test_dimensions_and_traces(self):
        for d in (2, 3, 4, 5):
            ops = standard_ops(d)
            assert abs(np.trace(ops.proj_sym) - d * (d + 1) / 2) < 1e-12
            assert abs(np.trace(ops.proj_anti) - d * (d - 1) / 2) < 1e-12
            assert np.abs(ops.swap - (ops.proj_sym - ops.proj_anti)).max() < 1e-12
            assert np.abs(ops.proj_sym + ops.proj_anti - ops.identity).max() < 1e-12
            assert np.abs(ops.proj_sym @ ops.proj_anti).max() < 1e-12

    def test_projector_algebra(self, ops4):
        assert np.abs(ops4.proj_max_ent @ ops4.proj_max_ent - ops4.proj_max_ent).max() < 1e-14
        assert np.abs(ops4.proj_ortho @ ops4.proj_max_ent).max() < 1e-14

    def test_swap_action(self, ops4):
        rng = np.random.default_rng(7)
        a, b = rand_vec(rng, 4), rand_vec(rng, 4)
        assert np.abs(ops4.swap @ np.kron(a, b) - np.kron(b, a)).max() < 1e-12


class TestReorder:
    def test_identity_permutation(self):
        rng = np.random.default_rng(8)
        state = PureState((2, 3, 4), rand_vec(rng, 24))
        out = reorder_subsystems(state, (0, 1, 2))
        assert np.array_equal(out.amplitudes, state.amplitudes)

    def test_inverse_round_trip(self):
        rng = np.random.default_rng(9)
        state = PureState((2, 3, 4), rand_vec(rng, 24))
        perm = (2, 0, 1)
        inv = tuple(np.argsort(perm))
        back = reorder_subsystems(reorder_subsystems(state, perm), inv)
        assert np.array_equal(back.amplitudes, state.amplitudes)

    def test_invalid_permutation(self):
        state = PureState((2, 2), np.ones(4))
        with pytest.raises(ValueError):
            reorder_subsystems(state, (0, 0))

    def test_operator_conjugation_matches_vector_reorder(self, q2_cut):
        rng = np.random.default_rng(10)
        from distilcheck.projectors import two_copy_projector

        q_pair = two_copy_projector(4, order="pair")
        v_pair = rand_vec(rng, 256)
        v_cut = pair_to_cut_vector(v_pair, 4)
        lhs = np.vdot(v_pair, q_pair @ v_pair)
        rhs = np.vdot(v_cut, q2_cut @ v_cut)
        assert abs(lhs - rhs) < 1e-10
        assert np.abs(cut_to_pair_vector(v_cut, 4) - v_pair).max() == 0.0

    def test_pair_to_cut_operator_is_permutation_conjugation(self):
        rng = np.random.default_rng(11)
        m = rand_mat(rng, 16)
        back = permute_operator(pair_to_cut_operator(m, 2, 2), (2,) * 4,
                                tuple(np.argsort((0, 2, 1, 3))))
        assert np.array_equal(back, m)


class TestSerialization:
    def test_state_round_trip_exact(self):
        rng = np.random.default_rng(12)
        state = PureState((4, 4), rand_vec(rng, 16), ("A", "B"))
        got = state_from_json(state_to_json(state))
        assert got.dims == state.dims
        assert got.labels == state.labels
        assert np.array_equal(got.amplitudes, state.amplitudes)

    def test_matrix_round_trip_exact(self):
        rng = np.random.default_rng(13)
        m = rand_mat(rng, 5)
        assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)

    def test_schema_checked(self):
        with pytest.raises(ValueError):
            state_from_json(json.dumps({"schema": "nope", "dims": [2], "amplitudes": []}))

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.tuples(
        st.floats(allow_nan=False, allow_infinity=False, width=64),
        st.floats(allow_nan=False, allow_infinity=False, width=64)),
        min_size=2, max_size=2))
    def test_round_trip_arbitrary_doubles(self, pairs):
        amps = np.array([complex(re, im) for re, im in pairs])
        state = PureState((2,), amps)
        got = state_from_json(state_to_json(state))
        assert np.array_equal(got.amplitudes, state.amplitudes)
