"""Dense complex linear algebra and quantum-state primitives.

Conventions used throughout the package:

* Multi-subsystem vectors and operators are stored in row-major (C) order
  over the listed subsystem dimensions.
* Two-pair states live on subsystems ``(A, A', B, B')`` ("cut order"), so
  the bipartition AA':BB' is a contiguous reshape.  Operators defined per
  pair, e.g. on ``(A, B, A', B')`` ("pair order"), are converted with
  :func:`pair_to_cut_operator` / :func:`pair_axis_permutation`.
* ``|psi*>`` denotes the entrywise complex conjugate in the computational
  basis.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_DIM_CAP = 4096
ZERO_TOL = 1e-9  # numerical-zero threshold for ranks and cdf membership
HERMITICITY_TOL = 1e-10

SCHEMA_STATE = "distilcheck/state-v1"
SCHEMA_MATRIX = "distilcheck/matrix-v1"


class SizeLimitError(ValueError):
    """An operation would exceed the configured dimension cap."""


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.abs(m - dagger(m)).max() < tol)


def is_unitary(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.abs(m @ dagger(m) - np.eye(m.shape[0])).max() < tol)


def is_projector(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return is_hermitian(m, tol) and bool(np.abs(m @ m - m).max() < tol)


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cut:
    """Bipartition of subsystem indices into a left and a right group."""

    left: tuple[int, ...]
    right: tuple[int, ...]

    def validate(self, n_subsystems: int) -> None:
        seen = sorted(self.left + self.right)
        if seen != list(range(n_subsystems)):
            raise ValueError(
                f"cut {self.left}:{self.right} does not partition {n_subsystems} subsystems"
            )


# the half-property cut AA':BB' in canonical storage order (A, A', B, B')
TWO_PAIR_CUT = Cut((0, 1), (2, 3))


@dataclass
class PureState:
    """Complex amplitude vector over an ordered list of subsystem dimensions."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 1 or self.amplitudes.size != math.prod(self.dims):
            raise ValueError("amplitude length must equal the product of dims")
        if self.labels is not None and len(self.labels) != len(self.dims):
            raise ValueError("one label per subsystem required")

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "PureState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return PureState(self.dims, self.amplitudes / n, self.labels)

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)


def two_pair_state(vec: np.ndarray, d: int = 4) -> PureState:
    """Wrap a cut-order amplitude vector on (A, A', B, B')."""
    return PureState((d,) * 4, vec, ("A", "A'", "B", "B'"))


@dataclass
class SchmidtDecomposition:
    """Singular-value form of a pure state across a cut."""

    coefficients: np.ndarray          # nonnegative, descending
    left_vectors: np.ndarray          # columns, orthonormal
    right_vectors: np.ndarray         # columns, orthonormal

    def rank(self, tol: float = ZERO_TOL) -> int:
        return int(np.sum(self.coefficients > tol))


@dataclass(frozen=True)
class StandardOps:
    """The d x d pair operators used everywhere: I, V, P+, Ps, Pa, O."""

    d: int
    identity: np.ndarray        # I on C^d (x) C^d
    swap: np.ndarray            # V|ij> = |ji>
    proj_max_ent: np.ndarray    # P+ = |psi+><psi+|
    proj_sym: np.ndarray        # Ps = (I+V)/2
    proj_anti: np.ndarray       # Pa = (I-V)/2
    proj_ortho: np.ndarray      # O = I - P+


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def tensor_product(a: np.ndarray, b: np.ndarray, cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    """Kronecker product with index convention (i*rows_b + k, j*cols_b + l)."""
    rows = a.shape[0] * b.shape[0]
    cols = (a.shape[1] if a.ndim > 1 else 1) * (b.shape[1] if b.ndim > 1 else 1)
    if max(rows, cols) > cap:
        raise SizeLimitError(f"kron result {rows}x{cols} exceeds cap {cap}")
    return np.kron(a, b)


def kron_all(mats: Iterable[np.ndarray], cap: int = DEFAULT_DIM_CAP) -> np.ndarray:
    out = None
    for m in mats:
        out = m if out is None else tensor_product(out, m, cap=cap)
    if out is None:
        raise ValueError("empty product")
    return out


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> None:
    if m.shape[0] != m.shape[1] or m.shape[0] != math.prod(dims):
        raise ValueError(f"matrix side {m.shape} does not match dims {tuple(dims)}")


def partial_transpose(m: np.ndarray, dims: Sequence[int], systems: Sequence[int]) -> np.ndarray:
    """Transpose the selected tensor factors.  Involutive: applying twice is the identity."""
    _check_dims(m, dims)
    n = len(dims)
    t = m.reshape(tuple(dims) + tuple(dims))
    perm = list(range(2 * n))
    for s in systems:
        perm[s], perm[n + s] = perm[n + s], perm[s]
    return np.ascontiguousarray(t.transpose(perm).reshape(m.shape))


def partial_trace(m: np.ndarray, dims: Sequence[int], traced: Sequence[int]) -> np.ndarray:
    """Trace out the selected subsystems; preserves the total trace."""
    _check_dims(m, dims)
    n = len(dims)
    traced = sorted(set(traced))
    keep = [i for i in range(n) if i not in traced]
    t = m.reshape(tuple(dims) + tuple(dims))
    for offset, s in enumerate(traced):
        ax = s - offset
        t = np.trace(t, axis1=ax, axis2=ax + (n - offset))
    side = math.prod(dims[i] for i in keep) if keep else 1
    return t.reshape(side, side)


def reorder_subsystems(state: PureState, perm: Sequence[int]) -> PureState:
    """Permute subsystems: position ``i`` of the result is subsystem ``perm[i]``."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(state.n_subsystems)):
        raise ValueError(f"{perm} is not a permutation of {state.n_subsystems} subsystems")
    amp = state.as_tensor().transpose(perm).reshape(-1)
    dims = tuple(state.dims[p] for p in perm)
    labels = tuple(state.labels[p] for p in perm) if state.labels else None
    return PureState(dims, amp, labels)


def reorder_vector(vec: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    return np.ascontiguousarray(vec.reshape(tuple(dims)).transpose(tuple(perm)).reshape(-1))


def permute_operator(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Conjugate an operator by the subsystem permutation ``perm``."""
    _check_dims(m, dims)
    n = len(dims)
    perm = tuple(int(p) for p in perm)
    t = m.reshape(tuple(dims) + tuple(dims))
    t = t.transpose(perm + tuple(n + p for p in perm))
    side = math.prod(dims)
    return np.ascontiguousarray(t.reshape(side, side))


def pair_axis_permutation(n_pairs: int) -> tuple[int, ...]:
    """Axis permutation taking pair order (A1,B1,...,An,Bn) to cut order (A1..An,B1..Bn)."""
    return tuple(2 * i for i in range(n_pairs)) + tuple(2 * i + 1 for i in range(n_pairs))


def pair_to_cut_vector(vec: np.ndarray, d: int = 4, n_pairs: int = 2) -> np.ndarray:
    return reorder_vector(vec, (d,) * (2 * n_pairs), pair_axis_permutation(n_pairs))


def cut_to_pair_vector(vec: np.ndarray, d: int = 4, n_pairs: int = 2) -> np.ndarray:
    perm = pair_axis_permutation(n_pairs)
    inverse = np.argsort(perm)
    return reorder_vector(vec, (d,) * (2 * n_pairs), inverse)


def pair_to_cut_operator(m: np.ndarray, d: int = 4, n_pairs: int = 2) -> np.ndarray:
    return permute_operator(m, (d,) * (2 * n_pairs), pair_axis_permutation(n_pairs))


def schmidt(state: PureState, cut: Cut) -> SchmidtDecomposition:
    """Schmidt decomposition across ``cut`` via SVD of the reshaped amplitudes.

    The reordered amplitudes reconstruct as sum_i c_i left[:, i] (x) right[:, i];
    the right vectors are the rows of Vh, not their conjugates.
    """
    cut.validate(state.n_subsystems)
    perm = tuple(cut.left) + tuple(cut.right)
    t = state.as_tensor().transpose(perm)
    d_left = math.prod(state.dims[i] for i in cut.left)
    mat = t.reshape(d_left, -1)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    return SchmidtDecomposition(s, u, vh.T)


def schmidt_coefficients(vec: np.ndarray, shape: tuple[int, int]) -> np.ndarray:
    """Singular values of an already cut-ordered vector reshaped to ``shape``."""
    return np.linalg.svd(vec.reshape(shape), compute_uv=False)


def maximally_entangled(d: int) -> np.ndarray:
    """|psi+> = d^{-1/2} sum_i |ii>."""
    v = np.zeros(d * d, dtype=complex)
    v[:: d + 1] = 1.0
    return v / math.sqrt(d)


def standard_ops(d: int) -> StandardOps:
    """Identity, swap, and the projectors P+, Ps, Pa, O on C^d (x) C^d."""
    if d < 2:
        raise ValueError("d >= 2 required")
    eye = np.eye(d * d, dtype=complex)
    swap = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1.0
    psi = maximally_entangled(d)
    p_plus = np.outer(psi, psi.conj())
    return StandardOps(
        d=d,
        identity=eye,
        swap=swap,
        proj_max_ent=p_plus,
        proj_sym=(eye + swap) / 2,
        proj_anti=(eye - swap) / 2,
        proj_ortho=eye - p_plus,
    )


# ---------------------------------------------------------------------------
# JSON serialization: arrays of [re, im] pairs, exact at double precision
# ---------------------------------------------------------------------------

def _complex_out(values: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in values]


def _complex_in(pairs: list) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=complex)


def state_to_json(state: PureState) -> str:
    doc = {
        "schema": SCHEMA_STATE,
        "dims": list(state.dims),
        "labels": list(state.labels) if state.labels else None,
        "amplitudes": _complex_out(state.amplitudes),
    }
    return json.dumps(doc)


def state_from_json(text: str) -> PureState:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_STATE:
        raise ValueError(f"unexpected schema {doc.get('schema')!r}")
    labels = tuple(doc["labels"]) if doc.get("labels") else None
    return PureState(tuple(doc["dims"]), _complex_in(doc["amplitudes"]), labels)


def matrix_to_json(m: np.ndarray, dims: Sequence[int] | None = None) -> str:
    m = np.asarray(m, dtype=complex)
    doc = {
        "schema": SCHEMA_MATRIX,
        "rows": m.shape[0],
        "cols": m.shape[1],
        "dims": list(dims) if dims is not None else None,
        "entries": [_complex_out(row) for row in m],
    }
    return json.dumps(doc)


def matrix_from_json(text: str) -> np.ndarray:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA_MATRIX:
        raise ValueError(f"unexpected schema {doc.get('schema')!r}")
    m = np.array([_complex_in(row) for row in doc["entries"]], dtype=complex)
    if m.shape != (doc["rows"], doc["cols"]):
        raise ValueError("entry table does not match declared shape")
    return m


def save_state(path, state: PureState) -> None:
    with open(path, "w") as fh:
        fh.write(state_to_json(state))


def load_state(path) -> PureState:
    with open(path) as fh:
        return state_from_json(fh.read())
