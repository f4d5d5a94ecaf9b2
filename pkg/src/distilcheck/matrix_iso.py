"""State-operator isomorphism and the Kronecker-sum singular value problem.

A bipartite vector sum a_ij |i>|j> maps to the matrix X = sum a_ij |i><j|;
norms map to Frobenius norms and Schmidt coefficients to singular values.
States in the range of Q correspond to X = A (x) I + I (x) B with traceless
A, B and tr A'A + tr B'B = 1/d, so the half-property becomes the claim
sigma_1^2 + sigma_2^2 <= 1/2 for such X.  That claim is a theorem when X is
normal; this module certifies states through that route and evaluates the
constrained eigenvalue maximum (3d-4)/d^2 with an independent numerical
ascent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng as rngmod
from .projectors import two_copy_projector
from .tensor import ZERO_TOL, maximally_entangled, pair_to_cut_vector, schmidt_coefficients

NORMALITY_TOL = 1e-9        # certified-normal threshold on ||X'X - XX'||_max
NORMALITY_GREY = 1e-6       # between the two: reported unclassified, never certified


def state_to_operator(state, shape_or_cut) -> np.ndarray:
    """sum a_ij |i>|j>  ->  sum a_ij |i><j| across the given cut.

    Accepts either a flat vector with an explicit (d_left, d_right) shape or
    a PureState together with a Cut.
    """
    from .tensor import Cut, PureState, reorder_subsystems

    if isinstance(state, PureState):
        cut: Cut = shape_or_cut
        cut.validate(state.n_subsystems)
        ordered = reorder_subsystems(state, tuple(cut.left) + tuple(cut.right))
        d_left = int(np.prod([state.dims[i] for i in cut.left]))
        return ordered.amplitudes.reshape(d_left, -1)
    return np.asarray(state, dtype=complex).reshape(shape_or_cut)


def operator_to_state(x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=complex).reshape(-1)


@dataclass(frozen=True)
class QSubspaceVector:
    """sqrt(p)|psi1>|psi+> + sqrt(1-p)|psi+>|psi2> with psi1, psi2 _|_ psi+."""

    p: float
    psi1: np.ndarray  # pair vector on (A, B), orthogonal to psi+
    psi2: np.ndarray  # pair vector on (A', B'), orthogonal to psi+

    def assemble_pair_order(self, d: int = 4) -> np.ndarray:
        psi = maximally_entangled(d)
        return (
            math.sqrt(self.p) * np.kron(self.psi1, psi)
            + math.sqrt(1.0 - self.p) * np.kron(psi, self.psi2)
        )

    def assemble_cut_order(self, d: int = 4) -> np.ndarray:
        return pair_to_cut_vector(self.assemble_pair_order(d), d)


@dataclass
class ABPair:
    """Traceless matrices (A, B) with tr A'A + tr B'B = 1/d."""

    A: np.ndarray
    B: np.ndarray

    def x_matrix(self) -> np.ndarray:
        d = self.A.shape[0]
        eye = np.eye(d)
        return np.kron(self.A, eye) + np.kron(eye, self.B)

    def constraint_residuals(self) -> tuple[float, float]:
        d = self.A.shape[0]
        tr_norm = float(
            np.real(np.trace(self.A.conj().T @ self.A) + np.trace(self.B.conj().T @ self.B))
        )
        return (
            max(abs(np.trace(self.A)), abs(np.trace(self.B))),
            abs(tr_norm - 1.0 / d),
        )


def psiq_to_ab(v: QSubspaceVector, d: int = 4) -> ABPair:
    """Image of a Q-range vector under the isomorphism, coefficients absorbed."""
    psi = maximally_entangled(d)
    for name, comp in (("psi1", v.psi1), ("psi2", v.psi2)):
        if abs(np.vdot(psi, comp)) > 1e-10:
            raise ValueError(f"{name} is not orthogonal to the maximally entangled state")
    a_tilde = np.asarray(v.psi1, dtype=complex).reshape(d, d)
    b_tilde = np.asarray(v.psi2, dtype=complex).reshape(d, d)
    return ABPair(
        math.sqrt(v.p / d) * a_tilde,
        math.sqrt((1.0 - v.p) / d) * b_tilde,
    )


def top2_singular_sq_sum(pair: ABPair) -> float:
    """sigma_1^2 + sigma_2^2 of X = A (x) I + I (x) B (dense SVD route)."""
    s = np.linalg.svd(pair.x_matrix(), compute_uv=False)
    return float(s[0] ** 2 + s[1] ** 2)


def top2_from_eigs(a_eigs: np.ndarray, b_eigs: np.ndarray) -> float:
    """Same quantity from eigenvalues when A, B are normal: |a_i + b_j| sums."""
    sums = np.abs(np.add.outer(a_eigs, b_eigs).reshape(-1)) ** 2
    sums.sort()
    return float(sums[-1] + sums[-2])


# ---------------------------------------------------------------------------
# normal-projection certificate
# ---------------------------------------------------------------------------

@dataclass
class NormalProjectionReport:
    classification: str            # normal | unclassified | nonnormal | zero-projection | not-rank-2
    commutator_residual: float
    overlap: float
    certified: bool
    schmidt_rank: int
    tolerance: float = NORMALITY_TOL


def is_normal_projection(phi2_cut: np.ndarray, d: int = 4,
                         rank_tol: float = ZERO_TOL) -> NormalProjectionReport:
    """Certify the half-property of a rank-2 state whose Q-projection is normal.

    Computes Q|phi2>, maps it to X across AA':BB', and tests the commutator
    residual.  Certificates are only issued strictly below NORMALITY_TOL;
    residuals in the grey band report as unclassified.
    """
    q = two_copy_projector(d, order="cut")
    vec = np.asarray(phi2_cut, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    rank = int(np.sum(schmidt_coefficients(vec, (d * d, d * d)) > rank_tol))
    val = float(np.real(np.vdot(vec, q @ vec)))
    w = q @ vec
    nw = np.linalg.norm(w)
    if nw < 1e-12:
        # vanishing projection certifies any state trivially, whatever its rank
        return NormalProjectionReport("zero-projection", 0.0, val, True, rank)
    if rank > 2:
        return NormalProjectionReport("not-rank-2", np.nan, val, False, rank)
    x = state_to_operator(w / nw, (d * d, d * d))
    resid = float(np.abs(x.conj().T @ x - x @ x.conj().T).max())
    if resid < NORMALITY_TOL:
        cls = "normal"
    elif resid < NORMALITY_GREY:
        cls = "unclassified"
    else:
        cls = "nonnormal"
    return NormalProjectionReport(cls, resid, val, cls == "normal", rank)


# ---------------------------------------------------------------------------
# C-matrix pipeline
# ---------------------------------------------------------------------------

@dataclass
class CMatrixData:
    C: np.ndarray
    C_A: np.ndarray
    C_Aprime: np.ndarray
    Y: np.ndarray
    Y_prime: np.ndarray
    reconstruction_residual: float


def c_matrix_pipeline(phi2_cut: np.ndarray, d: int = 4) -> CMatrixData:
    """C with |phi2> = sum C_{ii',jj'} |ii'>|jj'>, its partial traces, and Y, Y'.

    Y = C_A/d - (tr C/d^2) I and Y' likewise are traceless, and Q|phi2>
    reassembles from them exactly:

        Q|phi2> = sqrt(d) (Y (x) I)|I>> (x) |psi+>  +  |psi+> (x) sqrt(d) (Y' (x) I)|I>>

    in pair order, |I>> = sum_k |kk>.  The residual against dense application
    is returned.
    """
    vec = np.asarray(phi2_cut, dtype=complex)
    c = vec.reshape(d * d, d * d)
    c4 = c.reshape(d, d, d, d)                 # (i, i', j, j')
    c_a = np.einsum("ikjk->ij", c4)
    c_ap = np.einsum("kikj->ij", c4)
    tr_c = np.trace(c)
    eye = np.eye(d)
    y = c_a / d - (tr_c / d ** 2) * eye
    y_p = c_ap / d - (tr_c / d ** 2) * eye
    psi = maximally_entangled(d)
    part1 = math.sqrt(d) * y.reshape(-1)       # (Y (x) I)|I>> has amplitudes Y_ik at |ik>
    part2 = math.sqrt(d) * y_p.reshape(-1)
    rebuilt_pair = np.kron(part1, psi) + np.kron(psi, part2)
    rebuilt = pair_to_cut_vector(rebuilt_pair, d)
    q = two_copy_projector(d, order="cut")
    resid = float(np.abs(q @ vec - rebuilt).max())
    return CMatrixData(c, c_a, c_ap, y, y_p, resid)


# ---------------------------------------------------------------------------
# constrained eigenvalue maximum (appendix optimization)
# ---------------------------------------------------------------------------

@dataclass
class AppendixResult:
    d: int
    closed_form: float
    numeric: float
    reduction_numeric: float
    agreement: float

    @property
    def agree_within(self) -> float:
        return max(abs(self.numeric - self.closed_form),
                   abs(self.reduction_numeric - self.closed_form))


def appendix_closed_form(d: int) -> float:
    """Maximum of |a1+b1|^2 + |a1+b2|^2 under the trace constraints: (3d-4)/d^2."""
    if d < 3:
        raise ValueError("d >= 3 required")
    return (3 * d - 4) / d ** 2


def _project_constraints(z: np.ndarray, d: int) -> np.ndarray:
    # zero block means, then rescale to sum |.|^2 = 1/d
    a = z[:, :d] - z[:, :d].mean(axis=1, keepdims=True)
    b = z[:, d:] - z[:, d:].mean(axis=1, keepdims=True)
    z = np.concatenate([a, b], axis=1)
    nrm = np.sqrt((np.abs(z) ** 2).sum(axis=1, keepdims=True))
    nrm[nrm == 0] = 1.0
    return z * (1.0 / math.sqrt(d)) / nrm


def appendix_numeric_max(d: int, n_starts: int = 10_000, iters: int = 400,
                         seed: int = 0) -> float:
    """Projected gradient ascent of |a1+b1|^2 + |a1+b2|^2 on the constraint set.

    All starts run in a vectorized batch with per-batch adaptive steps; the
    reported value is the max over starts.
    """
    if d < 3:
        raise ValueError("d >= 3 required")
    rng = rngmod.stream(seed, rngmod.MATRIX_ISO, d)
    z = rng.standard_normal((n_starts, 2 * d)) + 1j * rng.standard_normal((n_starts, 2 * d))
    z = _project_constraints(z, d)

    def value(z):
        return (np.abs(z[:, 0] + z[:, d]) ** 2 + np.abs(z[:, 0] + z[:, d + 1]) ** 2)

    eta = np.full((n_starts, 1), 0.5)
    cur = value(z)
    for _ in range(iters):
        grad = np.zeros_like(z)
        s1 = z[:, 0] + z[:, d]
        s2 = z[:, 0] + z[:, d + 1]
        grad[:, 0] = s1 + s2
        grad[:, d] = s1
        grad[:, d + 1] = s2
        z_new = _project_constraints(z + eta * grad, d)
        new = value(z_new)
        ok = new >= cur - 1e-15
        z = np.where(ok[:, None], z_new, z)
        cur = np.where(ok, new, cur)
        eta = np.where(ok[:, None], np.minimum(eta * 1.2, 1.0), eta * 0.5)
    return float(cur.max())


def appendix_reduction_max(d: int, grid: int = 200_001) -> float:
    """Analytic reduction route: real phases, equal tail split, b1 = b2, then 1-D.

    f(a1) = 2 (a1 + sqrt(x - y a1^2))^2 with x = (d-2)/(2 d^2), y = (d-2)/(2(d-1));
    the stationary point a1* = sqrt(x / (y^2 + y)) is checked against a grid.
    """
    if d < 3:
        raise ValueError("d >= 3 required")
    x = (d - 2) / (2 * d ** 2)
    y = (d - 2) / (2 * (d - 1))
    a_star = math.sqrt(x / (y * y + y))
    f_star = 2 * (a_star + math.sqrt(x - y * a_star ** 2)) ** 2
    a = np.linspace(0.0, math.sqrt(x / y), grid)
    f_grid = 2 * (a + np.sqrt(np.clip(x - y * a * a, 0.0, None))) ** 2
    return float(max(f_star, f_grid.max()))


def appendix_max(d: int, n_starts: int = 10_000, seed: int = 0,
                 require_agreement: float = 1e-6) -> AppendixResult:
    """Closed form plus two independent numerical routes; they must agree."""
    closed = appendix_closed_form(d)
    numeric = appendix_numeric_max(d, n_starts=n_starts, seed=seed)
    reduction = appendix_reduction_max(d)
    res = AppendixResult(d, closed, numeric, reduction, abs(numeric - reduction))
    if res.agreement > require_agreement:
        raise ArithmeticError(
            f"appendix routes disagree at d={d}: ascent {numeric!r} vs reduction {reduction!r}"
        )
    return res


# ---------------------------------------------------------------------------
# sampling experiment for the normal-case theorem
# ---------------------------------------------------------------------------

def sample_normal_pair_values(n_samples: int, d: int = 4, seed: int = 0,
                              stress_fraction: float = 0.5) -> np.ndarray:
    """sigma_1^2 + sigma_2^2 for random constrained normal pairs, in eigenvalue space.

    A normal pair is determined up to unitaries by its eigenvalue tuples, and
    the singular values of X are |a_i + b_j|, so the experiment samples
    constrained eigenvalue tuples directly.  A ``stress_fraction`` of samples
    is drawn near the analytic maximizer family (a1 large, equal tail; b
    two-level) so the empirical supremum probes tightness; the remainder is
    isotropic Gaussian.  Every sample satisfies the constraints exactly.
    """
    rng = rngmod.stream(seed, rngmod.MATRIX_ISO, 100 + d)
    n_stress = int(n_samples * stress_fraction)
    n_free = n_samples - n_stress

    z_free = rng.standard_normal((n_free, 2 * d)) + 1j * rng.standard_normal((n_free, 2 * d))

    # structured draws: a = (a1, -a1/(d-1), ...), b = (b, b, -b, -b, ...) + noise
    a1 = rng.uniform(0.2, 0.6, size=n_stress)
    base_a = np.zeros((n_stress, d))
    base_a[:, 0] = a1
    base_a[:, 1:] = (-a1 / (d - 1))[:, None]
    base_b = np.zeros((n_stress, d))
    half = d // 2
    bmag = rng.uniform(0.05, 0.25, size=n_stress)
    base_b[:, :half] = bmag[:, None]
    base_b[:, half:] = -bmag[:, None] * (half / (d - half))
    noise = 0.02 * (rng.standard_normal((n_stress, 2 * d)) + 1j * rng.standard_normal((n_stress, 2 * d)))
    z_stress = np.concatenate([base_a, base_b], axis=1) + noise

    z = _project_constraints(np.concatenate([z_free, z_stress], axis=0), d)
    sums = np.abs(z[:, :d, None] + z[:, None, d:]) ** 2
    flat = sums.reshape(n_samples, -1)
    flat.sort(axis=1)
    return flat[:, -1] + flat[:, -2]


def random_normal_pair(rng: np.random.Generator, d: int = 4) -> ABPair:
    """A constrained normal (A, B) pair with Haar eigenbases."""
    z = _project_constraints(
        (rng.standard_normal((1, 2 * d)) + 1j * rng.standard_normal((1, 2 * d))), d
    )[0]
    ua = rngmod.haar_unitary(rng, d)
    ub = rngmod.haar_unitary(rng, d)
    a = ua @ np.diag(z[:d]) @ ua.conj().T
    b = ub @ np.diag(z[d:]) @ ub.conj().T
    return ABPair(a, b)


def random_general_pair(rng: np.random.Generator, d: int = 4) -> ABPair:
    """A constrained (A, B) pair with no normality restriction."""
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    a -= np.trace(a) / d * np.eye(d)
    b -= np.trace(b) / d * np.eye(d)
    scale = math.sqrt((1.0 / d) / float(
        np.real(np.trace(a.conj().T @ a) + np.trace(b.conj().T @ b))))
    return ABPair(a * scale, b * scale)


def sample_general_pair_values(n_samples: int, d: int = 4, seed: int = 0) -> np.ndarray:
    """sigma_1^2 + sigma_2^2 for random constrained pairs without normality.

    Any value above 1/2 would be a counterexample candidate for the open
    conjecture; none are expected.
    """
    rng = rngmod.stream(seed, rngmod.MATRIX_ISO, 200 + d)
    out = np.empty(n_samples)
    for i in range(n_samples):
        out[i] = top2_singular_sq_sum(random_general_pair(rng, d))
    return out
