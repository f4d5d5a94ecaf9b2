import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distilcheck import rng as rngmod
from distilcheck.optimize import (
    RankKState,
    SeesawConfig,
    fit_cut_product,
    max_overlap_rank_k,
    overlap,
    seesaw_value_trace,
    verify_ip_maximizer_form,
)
from distilcheck.projectors import build_qn_direct
from distilcheck.tensor import pair_to_cut_operator, standard_ops
from tests.conftest import equality_family_state


class TestOverlap:
    def test_eigenvector_of_q1(self, ops4, psi_plus):
        assert abs(overlap(psi_plus, ops4.proj_max_ent) - 1.0) < 1e-12

    def test_product_across_pairs_formula(self, q2_cut, ops4):
        # <phi (x) chi|Q|phi (x) chi> = p + q - 2 p q with the pair overlaps
        rng = rngmod.stream(0, 1)
        for _ in range(10):
            a = rngmod.haar_unit_vector(rng, 16)
            b = rngmod.haar_unit_vector(rng, 16)
            from distilcheck.tensor import pair_to_cut_vector

            v = pair_to_cut_vector(np.kron(a, b), 4)
            p = overlap(a, ops4.proj_max_ent)
            q = overlap(b, ops4.proj_max_ent)
            assert abs(overlap(v, q2_cut) - (p + q - 2 * p * q)) < 1e-10

    def test_equality_family_half(self, q2_cut):
        for r in (0.0, 0.25, 0.5, 1.0):
            assert abs(overlap(equality_family_state(r), q2_cut) - 0.5) < 1e-12

    def test_non_hermitian_flagged(self):
        rng = np.random.default_rng(0)
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        v /= np.linalg.norm(v)
        with pytest.raises(ValueError):
            overlap(v, m)
        assert isinstance(overlap(v, m, require_real=False), complex)


class TestRankKState:
    def test_round_trip_exact_rank(self):
        rng = np.random.default_rng(1)
        v = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        v /= np.linalg.norm(v)
        state = RankKState.from_vector(v, (16, 16), 16)
        assert np.abs(state.to_vector() - v).max() < 1e-12

    def test_truncation_is_best_rank_k(self):
        rng = np.random.default_rng(2)
        v = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        v /= np.linalg.norm(v)
        state = RankKState.from_vector(v, (8, 8), 2)
        s = np.linalg.svd(v.reshape(8, 8), compute_uv=False)
        expected = np.sqrt(s[0] ** 2 + s[1] ** 2)
        assert abs(abs(np.vdot(state.to_vector(), v)) - expected) < 1e-12

    def test_random_state_normalized_orthonormal(self):
        rng = rngmod.stream(3, 0)
        st_ = RankKState.random(rng, (16, 16), 3)
        v = st_.to_vector()
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12
        gram = st_.left_vectors.conj().T @ st_.left_vectors
        assert np.abs(gram - np.eye(3)).max() < 1e-10


class TestSeesaw:
    def test_monotone_trace(self, q2_cut):
        trace = seesaw_value_trace(q2_cut, k=2, seed=5)
        assert all(b - a > -1e-12 for a, b in zip(trace, trace[1:]))

    def test_pplus_rank2_is_half(self, ops4):
        rep = max_overlap_rank_k(ops4.proj_max_ent, k=2,
                                 config=SeesawConfig(restarts=8, seed=0))
        assert abs(rep.best_value - 0.5) < 1e-9

    def test_q2_rank1_three_eighths(self, q2_cut):
        rep = max_overlap_rank_k(q2_cut, k=1, config=SeesawConfig(restarts=16, seed=0))
        assert abs(rep.best_value - 0.375) < 1e-6

    def test_q2_rank2_half_window(self, q2_cut):
        rep = max_overlap_rank_k(q2_cut, k=2, config=SeesawConfig(restarts=30, seed=0))
        assert rep.best_value >= 0.5 - 1e-6
        assert rep.best_value <= 0.5 + 1e-9

    def test_q3_matrix_free_rank1(self):
        rep = max_overlap_rank_k(build_qn_direct(3), k=1,
                                 config=SeesawConfig(restarts=10, seed=0))
        assert abs(rep.best_value - 7 / 16) < 1e-6

    def test_schwarz_doubling_bound(self):
        rng = rngmod.stream(7, 0)
        basis = rngmod.haar_orthonormal(rng, 36, 5)
        proj = basis @ basis.conj().T
        r1 = max_overlap_rank_k(proj, k=1, config=SeesawConfig(restarts=10, seed=1))
        r2 = max_overlap_rank_k(proj, k=2, config=SeesawConfig(restarts=10, seed=1))
        assert r2.best_value <= min(1.0, 2 * r1.best_value) + 1e-9

    def test_bitwise_reproducible(self, q2_cut):
        a = max_overlap_rank_k(q2_cut, k=2, config=SeesawConfig(restarts=6, seed=11))
        b = max_overlap_rank_k(q2_cut, k=2, config=SeesawConfig(restarts=6, seed=11))
        assert a.best_value == b.best_value
        assert np.array_equal(a.best_state.to_vector(), b.best_state.to_vector())
        assert a.iterations == b.iterations

    def test_parallel_matches_serial(self, q2_cut):
        serial = max_overlap_rank_k(q2_cut, k=2, config=SeesawConfig(restarts=4, seed=3))
        par = max_overlap_rank_k(q2_cut, k=2,
                                 config=SeesawConfig(restarts=4, seed=3, workers=2))
        assert serial.best_value == par.best_value
        assert serial.best_restart == par.best_restart

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 2 ** 16))
    def test_value_in_unit_interval(self, q2_cut, seed):
        rep = max_overlap_rank_k(q2_cut, k=2, config=SeesawConfig(restarts=1, seed=seed))
        assert -1e-12 <= rep.best_value <= 1.0 + 1e-12


class TestIpMaximizerForm:
    def _ipplus(self):
        ops = standard_ops(4)
        return pair_to_cut_operator(np.kron(ops.identity, ops.proj_max_ent), 4, 2)

    def test_optimizer_output_fits_cut_product(self):
        rep = max_overlap_rank_k(self._ipplus(), k=2, config=SeesawConfig(restarts=10, seed=0))
        fit = verify_ip_maximizer_form(rep)
        assert fit.value_matches_2_over_d
        assert fit.fidelity >= 1 - 1e-6

    def test_analytic_maximizer_fidelity_one(self):
        # |x>_A |y>_B (x) rank-2 equal-coefficient state on A'B'
        rng = rngmod.stream(0, 3)
        x = rngmod.haar_unit_vector(rng, 4)
        y = rngmod.haar_unit_vector(rng, 4)
        chi = np.zeros(16, dtype=complex)
        chi[1] = chi[4] = 1 / np.sqrt(2)
        t = np.einsum("a,b,ij->aibj", x, y,
                      chi.reshape(4, 4)).reshape(-1)
        fit = fit_cut_product(t)
        assert fit.fidelity >= 1 - 1e-9

    def test_equality_family_is_not_cut_product(self, equality_state_half):
        fit = fit_cut_product(equality_state_half)
        assert fit.fidelity < 1 - 1e-3  # nontrivial maximizers exist
