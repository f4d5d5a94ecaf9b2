"""Twirling to the two-parameter family, negativity, and the Schmidt-number route.

Pairwise UU* twirling followed by random pair permutation projects any
two-pair density matrix onto

    sigma(p, s) = p/2 (P_ort (x) P+ + P+ (x) P_ort) + s P+ (x) P+
                  + (1 - p - s) P_ort (x) P_ort,       P_ort = (I - P+)/(d^2-1),

with tr(sigma Q) = p.  The twirl is computed by exact weight extraction (the
invariant family is two-parameter; Haar sampling would only add noise).  For
d = 4 the trace norm of sigma^Gamma has the closed form

    ||sigma^G||_1 = (2|1-16s| + |1+8s-4p| + 1 + 24s + 4p)/4,

and the map L(X) = I tr X - X/2 is two-positive, so a negative eigenvalue of
(id (x) L)(sigma) certifies Schmidt number > 2 across AA':BB'.  Analytically

    min eig (id (x) L)(sigma) = 1/16 - max(s, p/30, (1-p-s)/225)/2,

so detection happens iff s > 1/8; twirls of rank-two pure states always have
s <= 1/8 and are never detected.  Scanned along the mid-simplex path
s = (1-p)/2 the witness changes sign exactly at p = 3/4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .projectors import two_copy_projector
from .tensor import (
    maximally_entangled,
    pair_to_cut_operator,
    partial_trace,
    partial_transpose,
    schmidt_coefficients,
    standard_ops,
)


@dataclass(frozen=True)
class IsotropicTwoPairState:
    """Parameters (p, s) of the twirled two-pair family."""

    p: float
    s: float
    d: int = 4

    def __post_init__(self):
        if self.p < -1e-12 or self.s < -1e-12 or self.p + self.s > 1.0 + 1e-12:
            raise ValueError("need p, s >= 0 and p + s <= 1")

    def density(self, order: str = "cut") -> np.ndarray:
        ops = standard_ops(self.d)
        p_plus = ops.proj_max_ent
        p_ort = ops.proj_ortho / (self.d ** 2 - 1)
        m = (
            0.5 * self.p * (np.kron(p_ort, p_plus) + np.kron(p_plus, p_ort))
            + self.s * np.kron(p_plus, p_plus)
            + (1.0 - self.p - self.s) * np.kron(p_ort, p_ort)
        )
        if order == "pair":
            return m
        return pair_to_cut_operator(m, self.d, 2)


def twirl(rho_cut: np.ndarray, d: int = 4) -> IsotropicTwoPairState:
    """Exact twirl of a two-pair density matrix by weight extraction.

    The four invariant blocks P+ (x) P+, P+ (x) O, O (x) P+, O (x) O carry all
    surviving information; pair permutation symmetrizes the two mixed weights.
    """
    rho = np.asarray(rho_cut, dtype=complex)
    side = d ** 4
    if rho.shape != (side, side):
        raise ValueError("two-pair density matrix expected")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > 1e-9:
        raise ValueError(f"trace {tr!r} is not 1")
    eigs = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if eigs.min() < -1e-9:
        raise ValueError(f"matrix has negative eigenvalue {eigs.min():.3e}")
    ops = standard_ops(d)
    pp = pair_to_cut_operator(np.kron(ops.proj_max_ent, ops.proj_max_ent), d, 2)
    po = pair_to_cut_operator(np.kron(ops.proj_max_ent, ops.proj_ortho), d, 2)
    op_ = pair_to_cut_operator(np.kron(ops.proj_ortho, ops.proj_max_ent), d, 2)
    s = float(np.real(np.trace(pp @ rho)))
    p = float(np.real(np.trace(po @ rho) + np.trace(op_ @ rho)))
    return IsotropicTwoPairState(max(p, 0.0), max(s, 0.0), d)


def twirl_pure(phi_cut: np.ndarray, d: int = 4) -> IsotropicTwoPairState:
    """Twirl of |phi><phi| without materializing the density matrix."""
    vec = np.asarray(phi_cut, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    psi = maximally_entangled(d)
    # weight extraction is easiest in pair order (rows pair 1, cols pair 2)
    from .tensor import cut_to_pair_vector

    pv = cut_to_pair_vector(vec, d).reshape(d * d, d * d)
    amp_pp = complex(psi.conj() @ pv @ psi.conj())
    w1 = np.linalg.norm(psi.conj() @ pv) ** 2          # P+ on first pair
    w2 = np.linalg.norm(pv @ psi.conj()) ** 2          # P+ on second pair
    s = abs(amp_pp) ** 2
    p = float(w1 + w2 - 2 * s)
    return IsotropicTwoPairState(max(p, 0.0), max(min(s, 1.0), 0.0), d)


def q_weight(state: IsotropicTwoPairState) -> float:
    """tr(sigma Q); equals p by construction."""
    q = two_copy_projector(state.d, order="cut")
    return float(np.real(np.trace(q @ state.density())))


# ---------------------------------------------------------------------------
# negativity
# ---------------------------------------------------------------------------

def negativity_sigma_closed(state: IsotropicTwoPairState) -> float:
    """||sigma^Gamma||_1 in closed form (d = 4)."""
    if state.d != 4:
        raise ValueError("closed form stated for d = 4")
    p, s = state.p, state.s
    return 0.25 * (2.0 * abs(1.0 - 16.0 * s) + abs(1.0 + 8.0 * s - 4.0 * p)
                   + 1.0 + 24.0 * s + 4.0 * p)


def trace_norm_partial_transpose(m_cut: np.ndarray, d: int = 4) -> float:
    """||M^Gamma||_1 with Gamma transposing the BB' side of the cut."""
    mg = partial_transpose(m_cut, (d * d, d * d), [1])
    return float(np.abs(np.linalg.eigvalsh(mg)).sum())


def negativity_sigma(state: IsotropicTwoPairState, check_dense: bool = False) -> float:
    val = negativity_sigma_closed(state)
    if check_dense:
        dense = trace_norm_partial_transpose(state.density())
        if abs(dense - val) > 1e-10:
            raise ArithmeticError(
                f"negativity closed form {val!r} disagrees with dense {dense!r}"
            )
    return val


def negativity_pure_rank2(a: float, b: float) -> float:
    """||phi2^Gamma||_1 = (a + b)^2 for Schmidt coefficients a, b >= 0."""
    if a < 0 or b < 0 or abs(a * a + b * b - 1.0) > 1e-10:
        raise ValueError("need a, b >= 0 with a^2 + b^2 = 1")
    return (a + b) ** 2


def rank2_state(a: float, b: float, left: np.ndarray, right: np.ndarray,
                left2: np.ndarray, right2: np.ndarray) -> np.ndarray:
    """a|l1>|r1> + b|l2>|r2> as a cut-order two-pair vector."""
    return a * np.kron(left, right) + b * np.kron(left2, right2)


# ---------------------------------------------------------------------------
# monotonicity bound
# ---------------------------------------------------------------------------

@dataclass
class MonotonicityReport:
    p: float
    s: float
    schmidt_sum: float            # (a + b)^2
    pure_negativity: float
    loose_bound: float            # 1/4 - 6 s + 2 (a+b)^2
    sharp_bound: float            # largest p with ||sigma^G||_1 <= (a+b)^2
    max_ent_overlap_bound: float  # (a+b)^2 / 16, upper bound on s
    holds_loose: bool
    holds_sharp: bool


def sharp_negativity_p_bound(s: float, neg_cap: float) -> float:
    """Largest admissible p with ||sigma(p,s)^G||_1 <= neg_cap.

    The closed-form trace norm is nondecreasing in p, so bisection suffices.
    """
    lo, hi = 0.0, 1.0 - s
    if negativity_sigma_closed(IsotropicTwoPairState(lo, s)) > neg_cap + 1e-12:
        return 0.0
    if negativity_sigma_closed(IsotropicTwoPairState(hi, s)) <= neg_cap + 1e-12:
        return hi
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if negativity_sigma_closed(IsotropicTwoPairState(mid, s)) <= neg_cap + 1e-12:
            lo = mid
        else:
            hi = mid
    return lo


def monotonicity_bound(phi2_cut: np.ndarray, d: int = 4) -> MonotonicityReport:
    """LOCC-monotonicity constraints on the twirl of a rank-2 pure state."""
    vec = np.asarray(phi2_cut, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    coeffs = schmidt_coefficients(vec, (d * d, d * d))
    if coeffs[2:].max(initial=0.0) > 1e-9:
        raise ValueError("Schmidt rank exceeds 2 across AA':BB'")
    a, b = float(coeffs[0]), float(coeffs[1])
    neg = (a + b) ** 2
    tw = twirl_pure(vec, d)
    loose = 0.25 - 6.0 * tw.s + 2.0 * neg
    sharp = sharp_negativity_p_bound(tw.s, neg)
    return MonotonicityReport(
        p=tw.p,
        s=tw.s,
        schmidt_sum=neg,
        pure_negativity=neg,
        loose_bound=loose,
        sharp_bound=sharp,
        max_ent_overlap_bound=neg / 16.0,
        holds_loose=tw.p <= loose + 1e-9,
        holds_sharp=tw.p <= sharp + 1e-9,
    )


# ---------------------------------------------------------------------------
# two-positive map witness
# ---------------------------------------------------------------------------

def apply_two_positive_map(m_cut: np.ndarray, d: int = 4) -> np.ndarray:
    """(id (x) L)(M) across AA':BB' with L(X) = I tr X - X/2."""
    side = d * d
    red = partial_trace(m_cut, (side, side), [1])
    return np.kron(red, np.eye(side)) - 0.5 * np.asarray(m_cut, dtype=complex)


def two_positive_witness(state: IsotropicTwoPairState) -> float:
    """Minimum eigenvalue of (id (x) L)(sigma); negative certifies SN > 2."""
    w = apply_two_positive_map(state.density())
    return float(np.linalg.eigvalsh(w)[0])


def two_positive_witness_closed(state: IsotropicTwoPairState) -> float:
    """Analytic value 1/16 - max(s, p/30, (1-p-s)/225)/2 for d = 4."""
    if state.d != 4:
        raise ValueError("closed form stated for d = 4")
    lam = max(state.s, state.p / 30.0, (1.0 - state.p - state.s) / 225.0)
    return 1.0 / 16.0 - 0.5 * lam


def witness_midline_scan(p_values) -> list[dict]:
    """Witness along the mid-simplex path s = (1-p)/2; sign change at p = 3/4."""
    out = []
    for p in p_values:
        st = IsotropicTwoPairState(float(p), (1.0 - float(p)) / 2.0)
        out.append({"p": float(p), "s": st.s, "min_eig": two_positive_witness(st)})
    return out


# ---------------------------------------------------------------------------
# half-property <-> Schmidt-number fact, spot checks
# ---------------------------------------------------------------------------

def halfp_schmidt_fact_check(phi2_cut: np.ndarray, d: int = 4) -> dict:
    """For pure phi2: tr(twirl(phi2) Q) must equal <phi2|Q|phi2> exactly."""
    vec = np.asarray(phi2_cut, dtype=complex)
    vec = vec / np.linalg.norm(vec)
    q = two_copy_projector(d, order="cut")
    direct = float(np.real(np.vdot(vec, q @ vec)))
    tw = twirl_pure(vec, d)
    return {
        "p": tw.p,
        "s": tw.s,
        "direct_overlap": direct,
        "residual": abs(tw.p - direct),
    }
