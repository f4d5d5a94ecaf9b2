import numpy as np
import pytest

from distilcheck import rng as rngmod
from distilcheck.bounds import (
    chi_overlap,
    coherence_term,
    conjugate_product_state,
    f_of_gamma,
    final_bound,
    fit_conjugate_product,
    g_function,
    lambda0,
    numrange_max,
    product_max,
    product_state_structure_lemmas,
    rank1_maximizer_form_check,
    superposition_overlap,
    takagi_max,
    two_state_block_value,
)
from distilcheck.optimize import SeesawConfig


def rand_psi(rng, d=4):
    return rngmod.haar_unit_vector(rng, d)


def orthogonalized(psis, tildes, copy=0):
    out = [t.copy() for t in tildes]
    out[copy] = out[copy] - psis[copy] * np.vdot(psis[copy], out[copy])
    out[copy] /= np.linalg.norm(out[copy])
    return out


class TestProductMax:
    @pytest.mark.parametrize("n,target", [(1, 0.25), (2, 0.375), (3, 7 / 16)])
    def test_lambda0_values(self, n, target):
        assert abs(lambda0(n) - target) < 1e-15

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_seesaw_confirms(self, n):
        row = product_max(n, SeesawConfig(restarts=12, seed=n))
        assert abs(row["numeric"] - row["analytic"]) < 1e-6
        assert row["numeric"] <= row["analytic"] + 1e-9


class TestClosedForms:
    def test_superposition_examples(self, q2_cut):
        rng = rngmod.stream(0, 0)
        e0 = np.array([1, 0, 0, 0], dtype=complex)
        e1 = np.array([0, 1, 0, 0], dtype=complex)
        x = rand_psi(rng)
        # orthogonal on exactly one copy, equal on the other, p = 1/2 -> 1/2
        assert abs(superposition_overlap(0.5, [e0, x], [e1, x]) - 0.5) < 1e-14
        # p = 0 degenerates to the product maximum
        assert abs(superposition_overlap(0.0, [e0, x], [e1, x]) - 0.375) < 1e-14
        # orthogonal on both copies at p = 1/2: 3/8 - (1/2)(1/4) = 1/4
        assert abs(superposition_overlap(0.5, [e0, e0], [e1, e1]) - 0.25) < 1e-14

    def test_superposition_rejects_nonorthogonal(self):
        rng = rngmod.stream(1, 0)
        psis = [rand_psi(rng), rand_psi(rng)]
        with pytest.raises(ValueError):
            superposition_overlap(0.5, psis, psis)

    def test_superposition_matches_dense(self, q2_cut):
        rng = rngmod.stream(2, 0)
        for _ in range(50):
            psis = [rand_psi(rng), rand_psi(rng)]
            tildes = orthogonalized(psis, [rand_psi(rng), rand_psi(rng)])
            p = float(rng.uniform())
            mix = (np.sqrt(p) * conjugate_product_state(psis)
                   + np.sqrt(1 - p) * conjugate_product_state(tildes))
            dense = float(np.real(np.vdot(mix, q2_cut @ mix)))
            assert abs(superposition_overlap(p, psis, tildes) - dense) < 1e-12

    def test_coherence_matches_dense_everywhere(self, q2_cut):
        rng = rngmod.stream(3, 0)
        for _ in range(50):
            psis = [rand_psi(rng), rand_psi(rng)]
            tildes = [rand_psi(rng), rand_psi(rng)]
            v1 = conjugate_product_state(psis)
            v2 = conjugate_product_state(tildes)
            dense = complex(np.vdot(v1, q2_cut @ v2))
            assert abs(dense.imag) < 1e-12
            assert abs(coherence_term(psis, tildes) - dense.real) < 1e-12

    def test_coherence_orthogonal_reduces_to_product_form(self):
        rng = rngmod.stream(4, 0)
        psis = [rand_psi(rng), rand_psi(rng)]
        tildes = orthogonalized(psis, [rand_psi(rng), rand_psi(rng)])
        g = [abs(np.vdot(a, b)) ** 2 for a, b in zip(psis, tildes)]
        assert abs(coherence_term(psis, tildes) - (-0.5) * np.prod(np.array(g) - 0.5)) < 1e-14

    def test_coherence_n1_orthogonal_quarter(self):
        e0 = np.array([1, 0, 0, 0], dtype=complex)
        e1 = np.array([0, 1, 0, 0], dtype=complex)
        assert abs(coherence_term([e0], [e1]) - 0.25) < 1e-15

    def test_coherence_equal_copies_matches_dense(self, q2_cut):
        # all copies equal: the closed form must still match dense application
        rng = rngmod.stream(5, 0)
        psis = [rand_psi(rng), rand_psi(rng)]
        v = conjugate_product_state(psis)
        dense = float(np.real(np.vdot(v, q2_cut @ v)))
        assert abs(coherence_term(psis, psis) - dense) < 1e-13
        assert abs(dense - lambda0(2)) < 1e-12

    def test_chi_overlap(self, q2_cut):
        rng = rngmod.stream(6, 0)
        x, y = rand_psi(rng), rand_psi(rng)
        assert abs(chi_overlap(x, y, x, y) - 0.375) < 1e-14
        xo = orthogonalized([x], [rand_psi(rng)])[0]
        yo = orthogonalized([y], [rand_psi(rng)])[0]
        assert abs(chi_overlap(x, y, xo, yo) + 0.125) < 1e-14
        for _ in range(20):
            xt, yt = rand_psi(rng), rand_psi(rng)
            v1 = conjugate_product_state([x, y])
            v2 = conjugate_product_state([xt, yt])
            dense = float(np.real(np.vdot(v1, q2_cut @ v2)))
            assert abs(chi_overlap(x, y, xt, yt) - dense) < 1e-12


class TestTwoStateBlock:
    def test_zero_cross_term_gives_max_of_diagonals(self, q2_cut):
        # engineer q12 = 0: take v2 orthogonal to both v1 and Q v1
        rng = rngmod.stream(7, 0)
        v1 = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        v1 /= np.linalg.norm(v1)
        v2 = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        basis = np.linalg.qr(np.stack([v1, q2_cut @ v1], axis=1))[0]
        v2 = v2 - basis @ (basis.conj().T @ v2)
        v2 /= np.linalg.norm(v2)
        q11 = float(np.real(np.vdot(v1, q2_cut @ v1)))
        q22 = float(np.real(np.vdot(v2, q2_cut @ v2)))
        assert abs(np.vdot(v1, q2_cut @ v2)) < 1e-12
        assert abs(two_state_block_value(v1, v2, q2_cut) - max(q11, q22)) < 1e-12

    def test_cross_term_matches_coherence_formula(self, q2_cut):
        e0 = np.array([1, 0, 0, 0], dtype=complex)
        e1 = np.array([0, 1, 0, 0], dtype=complex)
        e2 = np.array([0, 0, 1, 0], dtype=complex)
        e3 = np.array([0, 0, 0, 1], dtype=complex)
        v1 = conjugate_product_state([e0, e1])
        v2 = conjugate_product_state([e2, e3])
        q12 = float(np.real(np.vdot(v1, q2_cut @ v2)))
        assert abs(q12 - coherence_term([e0, e1], [e2, e3])) < 1e-14

    def test_orthogonal_on_one_copy_gives_half(self, q2_cut):
        e0 = np.array([1, 0, 0, 0], dtype=complex)
        e1 = np.array([0, 1, 0, 0], dtype=complex)
        y = np.array([0, 0, 1, 0], dtype=complex)
        v1 = conjugate_product_state([e0, y])
        v2 = conjugate_product_state([e1, y])
        assert abs(two_state_block_value(v1, v2, q2_cut) - 0.5) < 1e-12

    def test_matches_refined_grid(self, q2_cut):
        from distilcheck.verify import _grid_sup_p

        rng = rngmod.stream(8, 0)
        for _ in range(20):
            v1 = rng.standard_normal(256) + 1j * rng.standard_normal(256)
            v1 /= np.linalg.norm(v1)
            v2 = rng.standard_normal(256) + 1j * rng.standard_normal(256)
            v2 -= v1 * np.vdot(v1, v2)
            v2 /= np.linalg.norm(v2)
            block = two_state_block_value(v1, v2, q2_cut)
            q11 = float(np.real(np.vdot(v1, q2_cut @ v1)))
            q22 = float(np.real(np.vdot(v2, q2_cut @ v2)))
            q12 = float(np.real(np.vdot(v1, q2_cut @ v2)))
            assert abs(_grid_sup_p(q11, q22, q12) - block) < 1e-10

    def test_rejects_nonorthogonal(self, q2_cut):
        v = np.zeros(256, dtype=complex)
        v[0] = 1.0
        with pytest.raises(ValueError):
            two_state_block_value(v, v, q2_cut)


class TestNumericKernels:
    def test_takagi_equals_sigma1(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            m = m + m.T
            val, x = takagi_max(m)
            sigma1 = np.linalg.svd(m, compute_uv=False)[0]
            assert abs(val - sigma1) < 1e-10
            assert abs(abs(x @ m @ x) - sigma1) < 1e-10

    def test_numerical_radius_bounds(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            val, x = numrange_max(m)
            sigma1 = np.linalg.svd(m, compute_uv=False)[0]
            # w(M) in [sigma1/2, sigma1]; attained value is a valid witness
            assert val <= sigma1 + 1e-10
            assert val >= sigma1 / 2 - 1e-10
            assert abs(abs(np.vdot(x, m @ x)) - val) < 1e-12

    def test_numerical_radius_hermitian_case(self):
        rng = np.random.default_rng(2)
        m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        m = 0.5 * (m + m.conj().T)
        val, _ = numrange_max(m)
        assert abs(val - np.abs(np.linalg.eigvalsh(m)).max()) < 1e-10


class TestMaximizerForm:
    def test_constructed_state_value(self, q2_cut):
        rng = rngmod.stream(9, 0)
        v = conjugate_product_state([rand_psi(rng), rand_psi(rng)])
        assert abs(float(np.real(np.vdot(v, q2_cut @ v))) - 0.375) < 1e-12

    @pytest.mark.parametrize("n", [1, 2])
    def test_fit_recovers_family(self, n):
        rng = rngmod.stream(10, n)
        v = conjugate_product_state([rand_psi(rng) for _ in range(n)])
        fit = fit_conjugate_product(v, n)
        assert fit["fidelity"] >= 1 - 1e-9

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_optimizer_output_has_form(self, n):
        res = rank1_maximizer_form_check(n, SeesawConfig(restarts=10, seed=n))
        assert abs(res["value"] - res["analytic"]) < 1e-6
        assert res["fidelity"] >= 1 - 1e-6


class TestStructureLemmas:
    def test_random_product_states(self):
        rng = rngmod.stream(11, 0)
        for i in range(5):
            e = rngmod.haar_unit_vector(rng, 16)
            f = rngmod.haar_unit_vector(rng, 16)
            rep = product_state_structure_lemmas(e, f, seed=i)
            assert rep.slack_sym_vs_gamma > -1e-9
            assert rep.slack_xxyy_vs_sym > -1e-9
            assert rep.slack_chi_vs_q > -1e-9

    def test_maximal_chi_state_is_tight(self):
        # phi of the chi form: sup |<phi|chi>|^2 = 1 = 16 * (3/8) - 5
        rng = rngmod.stream(12, 0)
        x, y = rand_psi(rng), rand_psi(rng)
        e = np.kron(x, y)
        f = np.kron(x.conj(), y.conj())
        rep = product_state_structure_lemmas(e, f, seed=0)
        assert abs(rep.q_overlap - 0.375) < 1e-12
        assert rep.sup_chi >= 1 - 1e-9
        assert abs(rep.slack_chi_vs_q) < 1e-9  # equality case

    def test_low_overlap_is_vacuous(self):
        # <phi|Q|phi> < 5/16 makes the third inequality trivial
        e0 = np.zeros(16, dtype=complex)
        e0[0] = 1.0
        f0 = np.zeros(16, dtype=complex)
        f0[5] = 1.0
        rep = product_state_structure_lemmas(e0, f0, seed=0)
        assert rep.q_overlap < 5 / 16
        assert 16 * rep.q_overlap - 5 < 0


class TestEnvelope:
    def test_g_corner_values(self):
        assert abs(g_function(1.0, 1.0) - 0.125) < 1e-15
        assert abs(g_function(0.0, 0.0) - 1.0) < 1e-15

    def test_g_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            g_function(1.5, 0.0)

    def test_g_continuity_on_grid(self):
        # b = sqrt(1 - a^2) has a sqrt cusp at a = 1, so the modulus of
        # continuity on step h is O(sqrt(h)), not O(h)
        h = 1e-3
        a = np.linspace(0, 1, 1001)
        vals = np.array([g_function(x, x) for x in a])
        assert np.abs(np.diff(vals)).max() < 3.0 * np.sqrt(h)

    def test_f_fast_path_agrees_with_2d(self):
        for gamma in (5 / 16, 0.34, 0.36, 0.37, 0.374):
            res = f_of_gamma(gamma)
            assert abs(res.diag_fast_path - res.two_d_check) < 1e-6

    def test_f_monotone_nonincreasing(self):
        gs = np.linspace(5 / 16, 3 / 8, 9)
        vals = [f_of_gamma(float(g)).value for g in gs]
        assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))

    def test_grid_maximizer_matches_fine_grid(self):
        res = f_of_gamma(0.36)
        a = np.linspace(np.sqrt(16 * 0.36 - 5), 1.0, 2001)
        grid = max(g_function(float(x), float(x)) for x in a)
        assert abs(res.value - grid) < 1e-5

    def test_final_bound_value(self):
        fb = final_bound()
        assert fb.value <= 0.75 + 1e-12
        assert abs(fb.crossing_residual) < 1e-6
        assert 5 / 16 <= fb.gamma_star <= 3 / 8
        # the faithfully evaluated crossing lands slightly below the
        # published rounding of the same estimate
        assert 0.7486 < fb.value < 0.7491
        assert fb.value <= fb.published_value


class TestEqualityWitnesses:
    def test_family_hits_half_with_rank_two(self, q2_cut):
        from distilcheck.tensor import schmidt_coefficients
        from tests.conftest import equality_family_state

        for r in (0.0, 0.25, 0.5, 1.0):
            v = equality_family_state(r)
            assert abs(float(np.real(np.vdot(v, q2_cut @ v))) - 0.5) < 1e-12
            assert int(np.sum(schmidt_coefficients(v, (16, 16)) > 1e-9)) == 2
