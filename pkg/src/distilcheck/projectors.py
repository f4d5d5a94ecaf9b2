"""Werner states and the distillability projectors Q_n.

``Q = O (x) P+ + P+ (x) O`` acts on two pairs; the n-copy family obeys

    Q_1 = P+,   Q_{n+1} = Q_n (x) Q_1^perp + Q_n^perp (x) Q_1      (d = 4)

and, equivalently for d = 4, Q_n = (I - (I - (d/2) P+)^(x n)) / 2.
Operators are built in pair order (A1,B1,...,An,Bn); cut-order forms for the
A-side:B-side bipartition come from :func:`distilcheck.tensor.pair_to_cut_operator`.
Dense matrices are only materialized for n <= 2 by default; n = 3 sits behind
``allow_dense`` (a 4096 x 4096 complex matrix is 256 MB).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .tensor import (
    SizeLimitError,
    kron_all,
    maximally_entangled,
    pair_axis_permutation,
    pair_to_cut_operator,
    standard_ops,
)

DENSE_MAX_PAIRS = 2  # dense construction beyond this requires allow_dense=True


@dataclass(frozen=True)
class WernerParams:
    """Symmetric-weight parametrization of the Werner family on C^d (x) C^d."""

    d: int
    p: float  # weight of the normalized symmetric state, in [0, 1]

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d >= 2 required")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @property
    def alpha(self) -> float:
        """Swap-weight alpha in rho ~ I + alpha*V equivalent to this p."""
        d, p = self.d, self.p
        ds = d * (d + 1) / 2
        return (ds - p * d * d) / (p * d - ds)

    @classmethod
    def from_alpha(cls, d: int, alpha: float) -> "WernerParams":
        ds = d * (d + 1) / 2
        p = (1 + alpha) * ds / (d * d + alpha * d)
        return cls(d, p)

    @classmethod
    def boundary(cls, d: int) -> "WernerParams":
        """The last state of the conjectured-bound-entangled region."""
        return cls(d, boundary_weight(d))


def boundary_weight(d: int) -> float:
    """p0 = (d+1)/(4d-2); below it the Werner state is distillable."""
    return (d + 1) / (4 * d - 2)


def werner_density(params: WernerParams) -> np.ndarray:
    """rho_W = p Ps/ds + (1-p) Pa/da; unit trace, PSD on p in [0,1]."""
    ops = standard_ops(params.d)
    ds = params.d * (params.d + 1) / 2
    da = params.d * (params.d - 1) / 2
    return params.p * ops.proj_sym / ds + (1 - params.p) * ops.proj_anti / da


def werner_density_alpha(d: int, alpha: float) -> np.ndarray:
    """Equivalent swap form rho_W = (I + alpha V) / (d^2 + alpha d)."""
    ops = standard_ops(d)
    return (ops.identity + alpha * ops.swap) / (d * d + alpha * d)


@lru_cache(maxsize=None)
def _pair_kernel(d: int) -> np.ndarray:
    """M = I - (d/2) P+ on one pair; for d = 4, M^2 = I."""
    ops = standard_ops(d)
    return np.ascontiguousarray(ops.identity - (d / 2) * ops.proj_max_ent)


def two_copy_projector(d: int = 4, order: str = "pair") -> np.ndarray:
    """Q = O (x) P+ + P+ (x) O for any local dimension d."""
    ops = standard_ops(d)
    q = np.kron(ops.proj_ortho, ops.proj_max_ent) + np.kron(ops.proj_max_ent, ops.proj_ortho)
    if order == "pair":
        return q
    if order == "cut":
        return pair_to_cut_operator(q, d, 2)
    raise ValueError("order must be 'pair' or 'cut'")


def rho_gamma_power(n: int, d: int = 4, normalized: bool = False) -> np.ndarray:
    """(I - (d/2) P+)^(x n), the partial-transpose power of the boundary state.

    With ``normalized=True`` the true density rho_W^{Gamma (x) n} is returned,
    i.e. the same matrix divided by (d^2 + alpha*d)^n at alpha = -1/2.
    """
    if n > DENSE_MAX_PAIRS:
        raise SizeLimitError("dense rho^Gamma power limited to n <= 2")
    m = kron_all([_pair_kernel(d)] * n) if n > 1 else _pair_kernel(d)
    if normalized:
        m = m / (d * d - d / 2) ** n
    return m


class QnOperator:
    """The projector Q_n for d = 4: dense for small n, matrix-free otherwise.

    ``apply_pair``/``apply_cut`` act on amplitude vectors in pair or cut
    order.  The instance is immutable and safe to share between workers.
    """

    def __init__(self, n: int, d: int = 4, construction: str = "direct",
                 allow_dense: bool = False):
        if n < 1:
            raise ValueError("n >= 1 required")
        if d != 4 and n > 2:
            raise ValueError("Q_n beyond two copies is only defined for d = 4")
        self.n = n
        self.d = d
        self.construction = construction
        self._allow_dense = allow_dense
        self._dense_pair = None
        self._pair_dim = d * d
        self._psi = maximally_entangled(d)

    # -- matrix-free application -------------------------------------------

    def apply_pair(self, vec: np.ndarray) -> np.ndarray:
        """Q_n |v> with v in pair order (A1,B1,...,An,Bn)."""
        v = np.asarray(vec, dtype=complex)
        if v.size != self._pair_dim ** self.n:
            raise ValueError("vector length does not match n pairs")
        if self.construction == "recursive":
            out = self._apply_recursive(v, self.n)
        else:
            out = self._apply_direct(v.reshape((self._pair_dim,) * self.n))
        return out.reshape(-1)

    def apply_cut(self, vec: np.ndarray) -> np.ndarray:
        """Q_n |v> with v in cut order (A1..An, B1..Bn)."""
        d, n = self.d, self.n
        perm = pair_axis_permutation(n)
        inv = tuple(np.argsort(perm))
        t = np.asarray(vec, dtype=complex).reshape((d,) * (2 * n))
        pair_vec = t.transpose(inv).reshape(-1)
        out = self.apply_pair(pair_vec)
        return out.reshape((d,) * (2 * n)).transpose(perm).reshape(-1)

    def _apply_direct(self, t: np.ndarray) -> np.ndarray:
        # Q_n v = (v - M^(x n) v) / 2 with M = I - (d/2) P+
        m = _pair_kernel(self.d)
        w = t
        for ax in range(self.n):
            w = np.moveaxis(np.tensordot(m, w, axes=(1, ax)), 0, ax)
        return (t - w) / 2

    def _apply_recursive(self, v: np.ndarray, n: int) -> np.ndarray:
        # Viewing v as a matrix V over (leading pairs) x (last pair),
        # Q_n V = q(V) + (V - 2 q(V)) P+ where q applies Q_{n-1} to rows.
        psi = self._psi
        if n == 1:
            return psi * (psi.conj() @ v)
        dim = self._pair_dim
        mat = v.reshape(dim ** (n - 1), dim)
        q_mat = np.stack(
            [self._apply_recursive(mat[:, j], n - 1) for j in range(dim)], axis=1
        )
        w = (mat - 2 * q_mat) @ psi
        return (q_mat + np.outer(w, psi.conj())).reshape(-1)

    # -- dense forms ---------------------------------------------------------

    def dense(self, order: str = "pair") -> np.ndarray:
        """Materialize Q_n; refuses n > 2 unless constructed with allow_dense."""
        if self.n > DENSE_MAX_PAIRS and not self._allow_dense:
            raise SizeLimitError(
                f"dense Q_{self.n} needs allow_dense=True "
                f"({(self._pair_dim ** self.n)}^2 complex entries)"
            )
        if self.n > 3:
            raise SizeLimitError("dense Q_n supported for n <= 3 only")
        if self._dense_pair is None:
            if self.construction == "recursive":
                self._dense_pair = _dense_recursive(self.n, self.d)
            else:
                self._dense_pair = _dense_direct(self.n, self.d)
        if order == "pair":
            return self._dense_pair
        if order == "cut":
            return pair_to_cut_operator(self._dense_pair, self.d, self.n)
        raise ValueError("order must be 'pair' or 'cut'")

    @property
    def cut_shape(self) -> tuple[int, int]:
        side = self.d ** self.n
        return side, side


def _dense_recursive(n: int, d: int) -> np.ndarray:
    ops = standard_ops(d)
    q = np.array(ops.proj_max_ent)
    eye_pair = ops.identity
    for k in range(1, n):
        eye_k = np.eye((d * d) ** k)
        q = np.kron(q, ops.proj_ortho) + np.kron(eye_k - q, ops.proj_max_ent)
    return q


def _dense_direct(n: int, d: int) -> np.ndarray:
    if d != 4:
        raise ValueError(
            "the closed form (I - M^(x n))/2 is a projector only for d = 4, "
            "where (I - 2 P+)^2 = I"
        )
    m = _pair_kernel(d)
    power = kron_all([m] * n, cap=d ** (2 * n)) if n > 1 else m
    return (np.eye((d * d) ** n) - power) / 2


def build_qn_recursive(n: int, d: int = 4, allow_dense: bool = False) -> QnOperator:
    """Q_n via the recursion Q_{n+1} = Q_n (x) Q1^perp + Q_n^perp (x) Q1."""
    if d != 4 and n > 2:
        raise ValueError("the recursion is specific to d = 4 beyond two copies")
    return QnOperator(n, d, construction="recursive", allow_dense=allow_dense)


def build_qn_direct(n: int, d: int = 4, allow_dense: bool = False) -> QnOperator:
    """Q_n = (I - (I - (d/2) P+)^(x n)) / 2; rejects d != 4."""
    if d != 4:
        raise ValueError(
            "direct n-fold construction requires d = 4: (I - (d/2) P+)^2 = I fails otherwise"
        )
    return QnOperator(n, d, construction="direct", allow_dense=allow_dense)


def q3_four_term_apply(vec_pair: np.ndarray, d: int = 4) -> np.ndarray:
    """Q3 = P.O.O + O.P.O + O.O.P + P.P.P applied in pair order (reference form)."""
    ops = standard_ops(d)
    dim = d * d
    t = np.asarray(vec_pair, dtype=complex).reshape((dim,) * 3)

    def mode_apply(mat, tens, ax):
        return np.moveaxis(np.tensordot(mat, tens, axes=(1, ax)), 0, ax)

    p_ = [None] * 3
    o_ = [None] * 3
    for ax in range(3):
        p_[ax] = mode_apply(ops.proj_max_ent, t, ax)
        o_[ax] = t - p_[ax]
    out = (
        mode_apply(ops.proj_ortho, mode_apply(ops.proj_ortho, p_[0], 1), 2)
        + mode_apply(ops.proj_ortho, mode_apply(ops.proj_max_ent, o_[0], 1), 2)
        + mode_apply(ops.proj_max_ent, mode_apply(ops.proj_ortho, o_[0], 1), 2)
        + mode_apply(ops.proj_max_ent, mode_apply(ops.proj_max_ent, p_[0], 1), 2)
    )
    return out.reshape(-1)


@dataclass(frozen=True)
class QnGammaComponent:
    """One eigenspace of Q_n^Gamma: lambda_i on the weight-i Ps/Pa words."""

    eigenvalue: float
    multiplicity: int
    weight: int
    projector: np.ndarray | None  # dense only when requested / small


def qn_gamma_spectrum(n: int, d: int = 4, include_projectors: bool | None = None):
    """Spectral data of Q_n^Gamma: lambda_i = (1 - 3^i/2^n)/2 for d = 4.

    The eigenprojector of lambda_i is the sum of all n-fold tensor words in
    {Ps, Pa} containing exactly i antisymmetric factors.
    """
    if d != 4:
        raise ValueError("the Gamma spectrum formula holds for d = 4")
    if include_projectors is None:
        include_projectors = n <= DENSE_MAX_PAIRS
    ops = standard_ops(d)
    ds = d * (d + 1) // 2
    da = d * (d - 1) // 2
    comps = []
    for i in range(n + 1):
        lam = 0.5 * (1.0 - 3.0 ** i / 2.0 ** n)
        mult = math.comb(n, i) * ds ** (n - i) * da ** i
        proj = None
        if include_projectors:
            if n > DENSE_MAX_PAIRS + 1:
                raise SizeLimitError("dense eigenprojectors supported for n <= 3")
            proj = np.zeros(((d * d) ** n,) * 2, dtype=complex)
            for word in _weight_words(n, i):
                proj += kron_all(
                    [ops.proj_anti if w else ops.proj_sym for w in word],
                    cap=d ** (2 * n),
                )
        comps.append(QnGammaComponent(lam, mult, i, proj))
    return comps


def _weight_words(n: int, weight: int):
    from itertools import combinations

    for anti_positions in combinations(range(n), weight):
        yield tuple(1 if k in anti_positions else 0 for k in range(n))
