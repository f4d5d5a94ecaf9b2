"""The executable property suite behind ``distilcheck verify``.

Each check is named, prints one PASS/FAIL line, and carries the measured
quantity so failures are diagnosable from the report alone.  ``quick`` trims
sample counts and restarts; tolerances never change.
"""

from __future__ import annotations

import time

import numpy as np

from . import rng as rngmod
from .bounds import (
    chi_overlap,
    coherence_term,
    conjugate_product_state,
    final_bound,
    g_function,
    product_max,
    product_state_structure_lemmas,
    rank1_maximizer_form_check,
    strict_three_quarters_report,
    superposition_overlap,
    two_state_block_value,
)
from .certificates import (
    apply_local_pair_unitaries,
    cdf,
    certify_by_cdf,
    certify_by_schmidt_ranks,
    q_invariance_check,
)
from .matrix_iso import (
    QSubspaceVector,
    appendix_max,
    c_matrix_pipeline,
    is_normal_projection,
    psiq_to_ab,
    sample_normal_pair_values,
    top2_singular_sq_sum,
)
from .measures import (
    IsotropicTwoPairState,
    apply_two_positive_map,
    halfp_schmidt_fact_check,
    monotonicity_bound,
    negativity_sigma_closed,
    rank2_state,
    trace_norm_partial_transpose,
    twirl,
    two_positive_witness,
    two_positive_witness_closed,
    witness_midline_scan,
)
from .optimize import SeesawConfig, max_overlap_rank_k, seesaw_value_trace
from .projectors import (
    WernerParams,
    build_qn_direct,
    build_qn_recursive,
    q3_four_term_apply,
    qn_gamma_spectrum,
    rho_gamma_power,
    two_copy_projector,
    werner_density,
    werner_density_alpha,
)
from .tensor import (
    maximally_entangled,
    pair_to_cut_operator,
    pair_to_cut_vector,
    partial_transpose,
    schmidt_coefficients,
    standard_ops,
)


class _Suite:
    def __init__(self):
        self.checks = []
        self.failures = []

    def check(self, name: str, ok: bool, detail: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        print(f"  [{status}] {name}" + (f"  ({detail})" if detail else ""))
        self.checks.append({"name": name, "passed": bool(ok), "detail": detail})
        if not ok:
            self.failures.append(name)


def _equality_family_state(r: float) -> np.ndarray:
    psi2 = np.zeros(16, dtype=complex)
    psi2[0] = psi2[5] = 1.0 / np.sqrt(2.0)
    e01 = np.zeros(16, dtype=complex)
    e01[1] = 1.0
    pair_vec = np.sqrt(r) * np.kron(e01, psi2) + np.sqrt(1.0 - r) * np.kron(psi2, e01)
    return pair_to_cut_vector(pair_vec, 4)


def _random_low_cdf_state(rng: np.random.Generator, d: int = 4) -> np.ndarray:
    # zero the diagonal |ii> components of each pair outside a 2-element set
    vec = rng.standard_normal(d ** 4) + 1j * rng.standard_normal(d ** 4)
    t = vec.reshape((d,) * 4)
    keep_ab = sorted(rng.choice(d, size=2, replace=False))
    keep_apbp = sorted(rng.choice(d, size=2, replace=False))
    for i in range(d):
        if i not in keep_ab:
            t[i, :, i, :] = 0.0
        if i not in keep_apbp:
            t[:, i, :, i] = 0.0
    out = t.reshape(-1)
    return out / np.linalg.norm(out)


def _random_rank2_vec(rng: np.random.Generator, d: int = 4) -> np.ndarray:
    left = rngmod.haar_orthonormal(rng, d * d, 2)
    right = rngmod.haar_orthonormal(rng, d * d, 2)
    c = rng.uniform(0.1, 0.9)
    a, b = np.sqrt(c), np.sqrt(1 - c)
    return rank2_state(a, b, left[:, 0], right[:, 0], left[:, 1], right[:, 1])


def _grid_sup_p(q11: float, q22: float, q12: float) -> float:
    """Independent oracle for the 2x2 block value: refined grid over p.

    The sign of re q12 is absorbed into the relative phase of the
    superposition (phi2 -> -phi2 stays in the family), so the grid scans
    the |re q12| branch.
    """
    cross = abs(q12)
    lo, hi = 0.0, 1.0
    best = -np.inf
    for _ in range(4):
        ps = np.linspace(lo, hi, 2001)
        vals = ps * q11 + (1 - ps) * q22 + 2 * np.sqrt(np.clip(ps * (1 - ps), 0, None)) * cross
        j = int(np.argmax(vals))
        best = max(best, float(vals[j]))
        step = (hi - lo) / 2000
        lo, hi = max(0.0, ps[j] - 2 * step), min(1.0, ps[j] + 2 * step)
    return best


def run_suite(quick: bool = False, seed: int = 0, threads: int = 1) -> dict:
    t0 = time.time()
    s = _Suite()
    rng = rngmod.stream(seed, rngmod.CLI, 0)
    d = 4
    ops = standard_ops(d)
    q2 = two_copy_projector(d, order="cut")

    n_small = 20 if quick else 100
    n_big = 100 if quick else 1000

    # ---------------- tensor core ----------------
    m = rng.standard_normal((256, 256)) + 1j * rng.standard_normal((256, 256))
    ptpt = partial_transpose(partial_transpose(m, (4,) * 4, [2, 3]), (4,) * 4, [2, 3])
    s.check("tensor/partial-transpose-involution", np.array_equal(ptpt, m))

    dev = 0.0
    for _ in range(n_small):
        v = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        coeffs = schmidt_coefficients(v, (16, 16))
        dev = max(dev, abs(np.sum(coeffs ** 2) - np.linalg.norm(v) ** 2))
    s.check("tensor/schmidt-sum-rule", dev < 1e-10, f"max dev {dev:.2e}")

    s.check(
        "tensor/projector-algebra",
        np.abs(ops.proj_sym + ops.proj_anti - ops.identity).max() < 1e-12
        and np.abs(ops.proj_sym @ ops.proj_anti).max() < 1e-12
        and np.abs(ops.swap - (ops.proj_sym - ops.proj_anti)).max() < 1e-12
        and abs(np.trace(ops.proj_sym) - 10) < 1e-12
        and abs(np.trace(ops.proj_anti) - 6) < 1e-12
        and np.abs(ops.proj_max_ent @ ops.proj_max_ent - ops.proj_max_ent).max() < 1e-12
        and np.abs(ops.proj_ortho @ ops.proj_max_ent).max() < 1e-12,
    )

    psi = maximally_entangled(d)
    v_over_d = ops.swap / d
    pt_pplus = partial_transpose(ops.proj_max_ent, (d, d), [1])
    s.check("tensor/psi-plus-transpose-is-swap", np.abs(pt_pplus - v_over_d).max() < 1e-12)

    # ---------------- projectors ----------------
    q2_rec = build_qn_recursive(2).dense(order="pair")
    q2_dir = build_qn_direct(2).dense(order="pair")
    explicit = np.kron(ops.proj_ortho, ops.proj_max_ent) + np.kron(ops.proj_max_ent, ops.proj_ortho)
    s.check(
        "projectors/q2-recursive-direct-explicit",
        np.abs(q2_rec - q2_dir).max() < 1e-12 and np.abs(q2_rec - explicit).max() < 1e-12,
        f"max dev {np.abs(q2_rec - q2_dir).max():.2e}",
    )
    q1 = build_qn_direct(1).dense(order="pair")
    s.check("projectors/q1-is-max-ent-projector", np.abs(q1 - ops.proj_max_ent).max() < 1e-15)

    q3d = build_qn_direct(3)
    q3r = build_qn_recursive(3)
    dev_form = 0.0
    dev_rec = 0.0
    dev_proj = 0.0
    for _ in range(8 if quick else 25):
        v = rng.standard_normal(4096) + 1j * rng.standard_normal(4096)
        v /= np.linalg.norm(v)
        pv = q3d.apply_pair(v)
        dev_form = max(dev_form, np.abs(pv - q3_four_term_apply(v)).max())
        dev_rec = max(dev_rec, np.abs(pv - q3r.apply_pair(v)).max())
        dev_proj = max(dev_proj, np.abs(q3d.apply_pair(pv) - pv).max())
    s.check("projectors/q3-four-term-form", dev_form < 1e-12, f"max dev {dev_form:.2e}")
    s.check("projectors/q3-recursive-vs-direct", dev_rec < 1e-12, f"max dev {dev_rec:.2e}")
    s.check("projectors/q3-idempotent", dev_proj < 1e-10, f"max dev {dev_proj:.2e}")
    s.check(
        "projectors/q2-projector",
        np.abs(q2 @ q2 - q2).max() < 1e-10 and np.abs(q2 - q2.conj().T).max() < 1e-10,
    )

    comps = qn_gamma_spectrum(2)
    q2g = partial_transpose(q2, (4,) * 4, [2, 3])
    eigs = np.linalg.eigvalsh(q2g)
    target = {0.375: 100, 0.125: 120, -0.625: 36}
    ok = True
    for lam, mult in target.items():
        ok = ok and int(np.sum(np.abs(eigs - lam) < 1e-10)) == mult
    ok = ok and sorted(c.eigenvalue for c in comps) == sorted(target)
    ok = ok and all(target[round(c.eigenvalue, 12)] == c.multiplicity for c in comps)
    recon = sum(
        c.eigenvalue * pair_to_cut_operator(c.projector, 4, 2) for c in comps
    )
    ok = ok and np.abs(recon - q2g).max() < 1e-12
    s.check("projectors/q2-gamma-spectrum", ok)

    comps1 = qn_gamma_spectrum(1)
    q1g = partial_transpose(ops.proj_max_ent, (d, d), [1])
    ok = (
        abs(comps1[0].eigenvalue - 0.25) < 1e-15
        and abs(comps1[1].eigenvalue + 0.25) < 1e-15
        and np.abs(q1g - (0.25 * ops.proj_sym - 0.25 * ops.proj_anti)).max() < 1e-12
    )
    s.check("projectors/q1-gamma-spectrum", ok)

    wp = WernerParams.boundary(4)
    dev = np.abs(werner_density(wp) - werner_density_alpha(4, -0.5)).max()
    rho = werner_density(WernerParams(4, float(rng.uniform(0, 1))))
    s.check(
        "projectors/werner-parametrizations",
        abs(wp.p - 5 / 14) < 1e-15 and abs(wp.alpha + 0.5) < 1e-12 and dev < 1e-12
        and abs(np.trace(rho) - 1) < 1e-12
        and np.linalg.eigvalsh(rho).min() > -1e-12,
        f"boundary p={wp.p:.6f}",
    )

    g2 = rho_gamma_power(2)
    blocks = (
        np.kron(ops.proj_ortho, ops.proj_ortho) + np.kron(ops.proj_max_ent, ops.proj_max_ent)
        - np.kron(ops.proj_ortho, ops.proj_max_ent) - np.kron(ops.proj_max_ent, ops.proj_ortho)
    )
    s.check("projectors/rho-gamma-two-copy-blocks", np.abs(g2 - blocks).max() < 1e-12)

    sign_ok = True
    for _ in range(n_small):
        v = _random_rank2_vec(rng)
        qv = float(np.real(np.vdot(v, q2 @ v)))
        rv = float(np.real(np.vdot(v, pair_to_cut_operator(g2, 4, 2) @ v)))
        sign_ok = sign_ok and ((qv <= 0.5 + 1e-12) == (rv >= -1e-12))
    s.check("projectors/qn-sign-equivalence", sign_ok)

    # ---------------- sr-opt ----------------
    trace = seesaw_value_trace(q2, k=2, seed=seed)
    mono = all(b - a > -1e-12 for a, b in zip(trace, trace[1:]))
    s.check("sr-opt/seesaw-monotone", mono, f"{len(trace)} iterations")

    rep = max_overlap_rank_k(ops.proj_max_ent, k=2, config=SeesawConfig(restarts=8, seed=seed))
    s.check("sr-opt/pplus-rank2-half", abs(rep.best_value - 0.5) < 1e-9,
            f"value {rep.best_value:.12f}")

    rep = max_overlap_rank_k(q2, k=1, config=SeesawConfig(restarts=16, seed=seed))
    s.check("sr-opt/q2-rank1-three-eighths", abs(rep.best_value - 0.375) < 1e-6,
            f"value {rep.best_value:.12f}")

    probe_restarts = 40 if quick else 200
    rep2 = max_overlap_rank_k(q2, k=2, config=SeesawConfig(restarts=probe_restarts, seed=seed,
                                                           workers=threads))
    s.check(
        "sr-opt/q2-rank2-half-probe",
        rep2.best_value >= 0.5 - 1e-6 and rep2.best_value <= 0.5 + 1e-9,
        f"value {rep2.best_value:.15f} over {probe_restarts} restarts",
    )

    proj_rng = rngmod.stream(seed, rngmod.CLI, 77)
    basis = rngmod.haar_orthonormal(proj_rng, 36, 7)
    p_rand = basis @ basis.conj().T
    r1 = max_overlap_rank_k(p_rand, k=1, config=SeesawConfig(restarts=12, seed=seed))
    r2 = max_overlap_rank_k(p_rand, k=2, config=SeesawConfig(restarts=12, seed=seed))
    s.check("sr-opt/schwarz-rank2-le-twice-rank1",
            r2.best_value <= min(1.0, 2 * r1.best_value) + 1e-9,
            f"r1 {r1.best_value:.6f} r2 {r2.best_value:.6f}")

    rep_again = max_overlap_rank_k(q2, k=1, config=SeesawConfig(restarts=16, seed=seed))
    s.check("sr-opt/seeded-reproducibility",
            rep_again.best_value == rep.best_value
            and np.array_equal(rep_again.best_state.to_vector(), rep.best_state.to_vector()))

    ipplus = pair_to_cut_operator(np.kron(ops.identity, ops.proj_max_ent), 4, 2)
    from .optimize import verify_ip_maximizer_form

    rep_ip = max_overlap_rank_k(ipplus, k=2, config=SeesawConfig(restarts=12, seed=seed))
    fit = verify_ip_maximizer_form(rep_ip, fit_seed=seed)
    s.check("sr-opt/ipplus-maximizer-form",
            fit.value_matches_2_over_d and fit.fidelity >= 1 - 1e-6,
            f"value {rep_ip.best_value:.9f} fidelity {fit.fidelity:.9f}")

    from .optimize import fit_cut_product

    fam = fit_cut_product(_equality_family_state(0.5), seed=seed)
    s.check("sr-opt/equality-family-not-cut-product", fam.fidelity < 1 - 1e-3,
            f"fidelity {fam.fidelity:.6f}")

    # ---------------- matrix-iso ----------------
    dev = 0.0
    for _ in range(n_small):
        v = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        x = v.reshape(16, 16)
        dev = max(dev, abs(np.vdot(v, v) - np.trace(x.conj().T @ x)))
        sv = np.linalg.svd(x, compute_uv=False)
        dev = max(dev, np.abs(np.sort(sv) - np.sort(schmidt_coefficients(v, (16, 16)))).max())
    s.check("matrix-iso/isometry-and-singular-values", dev < 1e-10, f"max dev {dev:.2e}")

    dev = 0.0
    for _ in range(n_small // 2):
        p = float(rng.uniform(0, 1))
        psi1 = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        psi1 -= psi * (psi.conj() @ psi1)
        psi1 /= np.linalg.norm(psi1)
        psi2 = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        psi2 -= psi * (psi.conj() @ psi2)
        psi2 /= np.linalg.norm(psi2)
        qv = QSubspaceVector(p, psi1, psi2)
        pair = psiq_to_ab(qv)
        x = pair.x_matrix()
        x_direct = qv.assemble_cut_order().reshape(16, 16)
        dev = max(dev, np.abs(x - x_direct).max())
        tr_dev, norm_dev = pair.constraint_residuals()
        dev = max(dev, tr_dev, norm_dev)
    s.check("matrix-iso/psiq-to-ab-assembly", dev < 1e-12, f"max dev {dev:.2e}")

    from .matrix_iso import random_normal_pair, top2_from_eigs

    dev = 0.0
    for _ in range(10):
        pair = random_normal_pair(rng)
        ea = np.linalg.eigvals(pair.A)
        eb = np.linalg.eigvals(pair.B)
        ex = np.linalg.eigvals(pair.x_matrix())
        sums = list(np.add.outer(ea, eb).reshape(-1))
        for lam in ex:  # greedy multiset matching; robust to sort instabilities
            j = int(np.argmin(np.abs(np.array(sums) - lam)))
            dev = max(dev, abs(sums[j] - lam))
            sums.pop(j)
        dev = max(dev, abs(top2_singular_sq_sum(pair) - top2_from_eigs(ea, eb)))
    s.check("matrix-iso/kronecker-sum-eigenvalues", dev < 1e-8, f"max dev {dev:.2e}")

    n_samples = 10_000 if quick else 100_000
    vals = sample_normal_pair_values(n_samples, seed=seed)
    s.check(
        "matrix-iso/normal-theorem-bound",
        float(vals.max()) <= 0.5 + 1e-9,
        f"max {vals.max():.12f} over {n_samples} samples",
    )
    s.check("matrix-iso/normal-theorem-tightness", float(vals.max()) > 0.49,
            f"sup {vals.max():.6f}")

    for dd in (3, 4, 5):
        res = appendix_max(dd, n_starts=1000 if quick else 10_000, seed=seed)
        s.check(
            f"matrix-iso/appendix-d{dd}",
            abs(res.numeric - res.closed_form) < 1e-6
            and abs(res.reduction_numeric - res.closed_form) < 1e-6,
            f"closed {res.closed_form:.9f} ascent {res.numeric:.9f}",
        )

    from .matrix_iso import _project_constraints

    z = _project_constraints(
        rng.standard_normal((n_big, 8)) + 1j * rng.standard_normal((n_big, 8)), 4
    )
    first_pair = np.abs(z[:, 0] + z[:, 4]) ** 2 + np.abs(z[:, 1] + z[:, 5]) ** 2
    s.check("matrix-iso/first-pair-parallelogram-bound",
            float(first_pair.max()) <= 0.5 + 1e-9, f"max {first_pair.max():.9f}")

    dev = 0.0
    for _ in range(n_small):
        v = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        v /= np.linalg.norm(v)
        cm = c_matrix_pipeline(v)
        dev = max(dev, cm.reconstruction_residual,
                  abs(np.trace(cm.Y)), abs(np.trace(cm.Y_prime)))
    s.check("matrix-iso/c-matrix-reconstruction", dev < 1e-10, f"max dev {dev:.2e}")

    ok = True
    for _ in range(n_small // 4):
        e_basis = rngmod.haar_orthonormal(rng, 16, 2)
        w = float(rng.uniform(0.1, 0.9))
        a, b = np.sqrt(w), np.sqrt(1 - w)
        vpos = rank2_state(a, b, e_basis[:, 0], e_basis[:, 0].conj(),
                           e_basis[:, 1], e_basis[:, 1].conj())
        reppos = is_normal_projection(vpos)
        ok = ok and reppos.classification in ("normal", "zero-projection")
        ok = ok and reppos.overlap <= 0.5 + 1e-10
    s.check("matrix-iso/positive-c-states-normal-certified", ok)

    psi2mes = np.kron(psi, psi)
    repz = is_normal_projection(pair_to_cut_vector(psi2mes, 4))
    s.check("matrix-iso/zero-projection-certified",
            repz.classification == "zero-projection" and repz.certified
            and repz.overlap < 1e-12)

    repeq = is_normal_projection(_equality_family_state(0.5))
    s.check("matrix-iso/equality-state-half-overlap",
            abs(repeq.overlap - 0.5) < 1e-12,
            f"classification {repeq.classification}")

    # ---------------- structure-certs ----------------
    dev_sets = cdf(_equality_family_state(0.5), "AB")
    s.check("certs/equality-family-cdf", dev_sets == (0, 1), f"cdf(AB) = {dev_sets}")
    mes2 = pair_to_cut_vector(np.kron(psi, psi), 4)
    s.check("certs/mes-cdf-full", cdf(mes2, "AB") == (0, 1, 2, 3))

    cert = certify_by_cdf(mes2)
    s.check("certs/mes-refused", not cert.certified)

    ok = True
    worst = 0.0
    for _ in range(n_big):
        v = _random_low_cdf_state(rng)
        cert = certify_by_cdf(v)
        ok = ok and cert.certified and cert.overlap <= 0.5 + 1e-10
        worst = max(worst, cert.overlap)
    s.check("certs/low-cdf-batch-sound", ok,
            f"{n_big} states, max overlap {worst:.9f}")

    ok = True
    for _ in range(n_small // 4):
        v = _random_low_cdf_state(rng)
        u = rngmod.haar_unitary(rng, 4)
        w = rngmod.haar_unitary(rng, 4)
        rot = apply_local_pair_unitaries(v, u, w)
        cert = certify_by_schmidt_ranks(rot)
        base = float(np.real(np.vdot(v, q2 @ v)))
        ok = ok and (not cert.certified or abs(cert.overlap - base) < 1e-10)
    s.check("certs/rank-route-rotation-invariant", ok)

    low = np.zeros(256, dtype=complex)
    t = low.reshape(4, 4, 4, 4)
    blob = rng.standard_normal((2, 2, 2, 2)) + 1j * rng.standard_normal((2, 2, 2, 2))
    t[:2, :2, :2, :2] = blob
    low /= np.linalg.norm(low)
    u = rngmod.haar_unitary(rng, 4)
    w = rngmod.haar_unitary(rng, 4)
    rot = apply_local_pair_unitaries(low, u, w)
    cert = certify_by_schmidt_ranks(rot)
    cert_cdf_raw = certify_by_cdf(rot)
    s.check("certs/rank-certifies-rotated-low-support",
            cert.certified and abs(cert.overlap - float(np.real(np.vdot(low, q2 @ low)))) < 1e-10,
            f"raw cdf certified: {cert_cdf_raw.certified}")

    worst = 0.0
    for _ in range(10 if quick else 50):
        u = rngmod.haar_unitary(rng, 4)
        w = rngmod.haar_unitary(rng, 4)
        worst = max(worst, q_invariance_check(u, w))
    s.check("certs/q-invariance", worst < 1e-10, f"max residual {worst:.2e}")

    # ---------------- bounds ----------------
    dev_s = 0.0
    dev_c = 0.0
    dev_chi = 0.0
    for _ in range(n_big):
        psis = [rngmod.haar_unit_vector(rng, 4) for _ in range(2)]
        tilde = [rngmod.haar_unit_vector(rng, 4) for _ in range(2)]
        # orthogonalize on copy 0 for the superposition identity
        tilde_orth = [tilde[0] - psis[0] * np.vdot(psis[0], tilde[0]), tilde[1]]
        tilde_orth[0] /= np.linalg.norm(tilde_orth[0])
        v1 = conjugate_product_state(psis)
        v2o = conjugate_product_state(tilde_orth)
        p = float(rng.uniform(0, 1))
        sup = superposition_overlap(p, psis, tilde_orth)
        mix = np.sqrt(p) * v1 + np.sqrt(1 - p) * v2o
        dev_s = max(dev_s, abs(sup - float(np.real(np.vdot(mix, q2 @ mix)))))
        v2 = conjugate_product_state(tilde)
        dev_c = max(dev_c, abs(coherence_term(psis, tilde) - complex(np.vdot(v1, q2 @ v2)).real),
                    abs(complex(np.vdot(v1, q2 @ v2)).imag))
        xs = [rngmod.haar_unit_vector(rng, 4) for _ in range(4)]
        chi1 = conjugate_product_state([xs[0], xs[1]])
        chi2 = conjugate_product_state([xs[2], xs[3]])
        dev_chi = max(dev_chi, abs(chi_overlap(xs[0], xs[1], xs[2], xs[3])
                                   - complex(np.vdot(chi1, q2 @ chi2)).real))
    s.check("bounds/superposition-closed-form", dev_s < 1e-12, f"max dev {dev_s:.2e}")
    s.check("bounds/coherence-closed-form", dev_c < 1e-12, f"max dev {dev_c:.2e}")
    s.check("bounds/chi-overlap-closed-form", dev_chi < 1e-12, f"max dev {dev_chi:.2e}")

    ok = True
    for n in (1, 2, 3):
        cfg = SeesawConfig(restarts=8 if quick else 24, seed=seed + n, workers=threads)
        row = product_max(n, cfg)
        ok = ok and abs(row["numeric"] - row["analytic"]) < 1e-6
        ok = ok and row["numeric"] <= row["analytic"] + 1e-9
    s.check("bounds/product-maxima", ok)

    form = rank1_maximizer_form_check(2, SeesawConfig(restarts=8, seed=seed))
    s.check("bounds/rank1-maximizer-form", form["fidelity"] >= 1 - 1e-6,
            f"fidelity {form['fidelity']:.9f}")

    dev = 0.0
    for _ in range(n_small // 2):
        v1 = _random_rank2_vec(rng)
        v1 /= np.linalg.norm(v1)
        v2 = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        v2 -= v1 * np.vdot(v1, v2)
        v2 /= np.linalg.norm(v2)
        block = two_state_block_value(v1, v2, q2)
        q11 = float(np.real(np.vdot(v1, q2 @ v1)))
        q22 = float(np.real(np.vdot(v2, q2 @ v2)))
        q12 = float(np.real(np.vdot(v1, q2 @ v2)))
        dev = max(dev, abs(_grid_sup_p(q11, q22, q12) - block))
    s.check("bounds/two-state-block-value", dev < 1e-10,
            f"|grid - closed| {dev:.2e}")

    ok = True
    worst = -1.0
    for _ in range(6 if quick else 20):
        e = rngmod.haar_unit_vector(rng, 16)
        f = rngmod.haar_unit_vector(rng, 16)
        repl = product_state_structure_lemmas(e, f, seed=seed)
        ok = ok and repl.slack_sym_vs_gamma > -1e-9
        ok = ok and repl.slack_xxyy_vs_sym > -1e-9
        ok = ok and repl.slack_chi_vs_q > -1e-9
        worst = max(worst, -min(repl.slack_sym_vs_gamma, repl.slack_xxyy_vs_sym,
                                repl.slack_chi_vs_q))
    s.check("bounds/product-structure-lemmas", ok, f"worst violation {worst:.2e}")

    s.check("bounds/g-corner-values",
            abs(g_function(1, 1) - 0.125) < 1e-15 and abs(g_function(0, 0) - 1.0) < 1e-15)

    fb = final_bound()
    s.check("bounds/final-bound-below-three-quarters",
            fb.value <= 0.75 + 1e-12 and abs(fb.crossing_residual) < 1e-6,
            f"value {fb.value:.6f} at gamma* {fb.gamma_star:.6f}")
    s.check("bounds/rank2-probe-below-final-bound", rep2.best_value <= fb.value,
            f"{rep2.best_value:.6f} <= {fb.value:.6f}")

    strict = strict_three_quarters_report(restarts=40 if quick else 500, seed=seed)
    s.check("bounds/max-form-coherence-eighth",
            strict["max_form_coherence"] <= 0.125 + 1e-9)
    s.check("bounds/strictly-below-three-quarters",
            strict["strictly_below_three_quarters"],
            f"sup diag+coh {strict['sup_diag_plus_coherence']:.6f}")
    soft_ok_17 = abs(strict["sup_diag_plus_coherence"] - 17 / 32) < 2e-3
    soft_ok_58 = abs(strict["implied_split_bound"] - 0.625) < 2e-3
    print(f"  [info] soft target 17/32: estimate {strict['sup_diag_plus_coherence']:.6f} "
          f"({'hit' if soft_ok_17 else 'missed'}, non-fatal)")
    print(f"  [info] soft target 5/8: estimate {strict['implied_split_bound']:.6f} "
          f"({'hit' if soft_ok_58 else 'missed'}, non-fatal)")

    # ---------------- equality witnesses ----------------
    ok = True
    for r in (0.0, 0.25, 0.5, 1.0):
        v = _equality_family_state(r)
        val = float(np.real(np.vdot(v, q2 @ v)))
        rank = int(np.sum(schmidt_coefficients(v, (16, 16)) > 1e-9))
        ok = ok and abs(val - 0.5) < 1e-12 and rank == 2
    s.check("bounds/equality-family-witnesses", ok)

    # ---------------- measures ----------------
    dev = 0.0
    dev_q = 0.0
    grid_n = 6 if quick else 20
    for p in np.linspace(0, 1, grid_n):
        for s_ in np.linspace(0, 1 - p, grid_n):
            st = IsotropicTwoPairState(float(p), float(s_))
            dense = trace_norm_partial_transpose(st.density())
            dev = max(dev, abs(dense - negativity_sigma_closed(st)))
            from .measures import q_weight

            dev_q = max(dev_q, abs(q_weight(st) - st.p))
    s.check("measures/negativity-closed-vs-dense", dev < 1e-10,
            f"max dev {dev:.2e} on {grid_n}x{grid_n} grid")
    s.check("measures/q-weight-is-p", dev_q < 1e-12, f"max dev {dev_q:.2e}")

    st = twirl(IsotropicTwoPairState(0.3, 0.2).density())
    s.check("measures/twirl-idempotent",
            abs(st.p - 0.3) < 1e-12 and abs(st.s - 0.2) < 1e-12)

    dev = 0.0
    for _ in range(n_small // 2):
        c = float(rng.uniform(0.05, 0.95))
        a, b = float(np.sqrt(c)), float(np.sqrt(1 - c))
        left = rngmod.haar_orthonormal(rng, 16, 2)
        right = rngmod.haar_orthonormal(rng, 16, 2)
        v = rank2_state(a, b, left[:, 0], right[:, 0], left[:, 1], right[:, 1])
        dense = trace_norm_partial_transpose(np.outer(v, v.conj()))
        dev = max(dev, abs(dense - (a + b) ** 2))
    s.check("measures/pure-rank2-negativity", dev < 1e-10, f"max dev {dev:.2e}")

    ok = True
    for _ in range(n_big):
        v = _random_rank2_vec(rng)
        repm = monotonicity_bound(v)
        ok = ok and repm.holds_loose and repm.holds_sharp
        ok = ok and repm.s <= repm.max_ent_overlap_bound + 1e-9
    s.check("measures/monotonicity-bound", ok, f"{n_big} random rank-2 states")

    worst = 0.0
    for _ in range(n_big):
        v = _random_rank2_vec(rng)
        v /= np.linalg.norm(v)
        w = apply_two_positive_map(np.outer(v, v.conj()))
        worst = min(worst, float(np.linalg.eigvalsh(w)[0]))
    s.check("measures/two-positive-on-rank2", worst >= -1e-9, f"min eig {worst:.2e}")

    dev = 0.0
    for _ in range(10):
        p = float(rng.uniform(0, 1))
        s_ = float(rng.uniform(0, 1 - p))
        st = IsotropicTwoPairState(p, s_)
        dev = max(dev, abs(two_positive_witness(st) - two_positive_witness_closed(st)))
    s.check("measures/witness-closed-vs-dense", dev < 1e-12, f"max dev {dev:.2e}")

    scan = witness_midline_scan([0.70, 0.74, 0.76, 0.80])
    signs = [np.sign(row["min_eig"]) for row in scan]
    s.check("measures/witness-midline-sign-flip",
            signs[0] == signs[1] == -1.0 and signs[2] == signs[3] == 1.0,
            " ".join(f"p={r['p']:.2f}:{r['min_eig']:+.4f}" for r in scan))

    ok = True
    for p in np.linspace(0, 1, 9):
        smax = min(1.0 - p, 0.125)
        for s_ in np.linspace(0, smax, 5):
            ok = ok and two_positive_witness_closed(IsotropicTwoPairState(float(p), float(s_))) >= -1e-12
    s.check("measures/no-detection-on-rank2-reachable-region", ok)

    eqc = halfp_schmidt_fact_check(_equality_family_state(0.5))
    prodc = halfp_schmidt_fact_check(conjugate_product_state(
        [rngmod.haar_unit_vector(rng, 4), rngmod.haar_unit_vector(rng, 4)]))
    randc = halfp_schmidt_fact_check(_random_rank2_vec(rng))
    s.check("measures/fact-spot-checks",
            abs(eqc["p"] - 0.5) < 1e-10 and abs(prodc["p"] - 0.375) < 1e-10
            and randc["residual"] < 1e-10,
            f"equality p {eqc['p']:.9f}, product p {prodc['p']:.9f}")

    elapsed = time.time() - t0
    all_passed = not s.failures
    print(f"verify: {len(s.checks)} checks, {len(s.failures)} failures, {elapsed:.1f}s")
    return {
        "all_passed": all_passed,
        "n_checks": len(s.checks),
        "failures": s.failures,
        "checks": s.checks,
        "elapsed_s": round(elapsed, 2),
        "quick": quick,
        "soft_targets": {
            "sup_diag_plus_coherence": strict["sup_diag_plus_coherence"],
            "target_17_32": 17 / 32,
            "implied_split_bound": strict["implied_split_bound"],
            "target_5_8": 0.625,
        },
        "final_bound": fb.to_dict(),
    }
