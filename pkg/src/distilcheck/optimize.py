"""Seesaw maximization of <phi|P|phi> over Schmidt-rank-k states.

The ascent alternates (a) projecting into the operator's range,
psi <- P|phi> / ||P|phi>||, and (b) truncating psi to its top-k Schmidt
terms across the cut.  Each step is monotone nondecreasing in the
objective, so the per-restart trace of values never decreases.  Restarts
draw from independent RNG streams keyed by (seed, restart index), which
makes serial and parallel execution agree exactly.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import rng as rngmod
from .tensor import HERMITICITY_TOL

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SeesawConfig:
    restarts: int = 50
    seed: int = 0
    max_iter: int = 10_000
    gain_tol: float = 1e-12
    degeneracy_tol: float = 1e-12
    workers: int = 1


@dataclass
class RankKState:
    """Explicit Schmidt form sum_i c_i |a_i>|b_i> across a declared cut."""

    k: int
    coefficients: np.ndarray      # complex, sum |c_i|^2 = 1
    left_vectors: np.ndarray      # (d_left, k), orthonormal columns
    right_vectors: np.ndarray     # (d_right, k), orthonormal columns

    def to_vector(self) -> np.ndarray:
        mat = (self.left_vectors * self.coefficients) @ self.right_vectors.T
        return mat.reshape(-1)

    @classmethod
    def from_vector(cls, vec: np.ndarray, shape: tuple[int, int], k: int) -> "RankKState":
        u, s, vh = np.linalg.svd(vec.reshape(shape), full_matrices=False)
        c = s[:k].astype(complex)
        n = np.linalg.norm(c)
        if n > 0:
            c = c / n
        # amplitude matrix M = U diag(s) Vh means the right Schmidt vectors
        # are the rows of Vh (no conjugation): M[l, r] = sum_i c_i a_i[l] b_i[r]
        return cls(k, c, u[:, :k], vh[:k].T)

    @classmethod
    def random(cls, rng: np.random.Generator, shape: tuple[int, int], k: int) -> "RankKState":
        left = rngmod.haar_orthonormal(rng, shape[0], k)
        right = rngmod.haar_orthonormal(rng, shape[1], k)
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        return cls(k, c / np.linalg.norm(c), left, right)


@dataclass
class OptimizationReport:
    best_value: float
    best_state: RankKState
    restarts: int
    iterations: list[int]
    converged: bool
    seed: int
    best_restart: int
    degenerate_truncations: int = 0
    value_trace: list[float] = field(default_factory=list)

    def summary(self) -> dict:
        return {
            "best_value": self.best_value,
            "restarts": self.restarts,
            "best_restart": self.best_restart,
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed,
            "degenerate_truncations": self.degenerate_truncations,
        }


class _DenseApply:
    """Picklable matvec wrapper so dense operators cross process boundaries."""

    def __init__(self, matrix):
        self.matrix = np.asarray(matrix, dtype=complex)

    def __call__(self, vec):
        return self.matrix @ vec


def as_applier(op) -> tuple:
    """Normalize an operator argument to (apply_fn, (d_left, d_right))."""
    if isinstance(op, np.ndarray):
        side = op.shape[0]
        d = int(round(np.sqrt(side)))
        if d * d != side:
            raise ValueError("square cut expected; pass (apply, shape) explicitly")
        return _DenseApply(op), (d, d)
    if hasattr(op, "apply_cut") and hasattr(op, "cut_shape"):
        return op.apply_cut, op.cut_shape
    raise TypeError("op must be a dense ndarray or expose apply_cut/cut_shape")


def overlap(vec, op, require_real: bool = True) -> float | complex:
    """<phi|Op|phi>; raises if a real value is demanded but the residue is large."""
    if hasattr(vec, "amplitudes"):
        vec = vec.amplitudes
    apply_fn, _ = as_applier(op) if not callable(op) else (op, None)
    val = complex(np.vdot(vec, apply_fn(vec)))
    if require_real:
        scale = max(1.0, abs(val))
        if abs(val.imag) > HERMITICITY_TOL * scale:
            raise ValueError(
                f"imaginary residue {val.imag:.3e}: operator is not Hermitian enough "
                "for a real overlap"
            )
        return val.real
    return val


def _run_restart_range(apply_fn, shape, k, cfg: SeesawConfig, start: int, stop: int):
    # one task per worker: the operator is pickled once per chunk, and each
    # restart keeps its own (seed, index) stream, so chunking cannot change
    # any result
    return [_run_restart(apply_fn, shape, k, cfg, r) for r in range(start, stop)]


def _run_restart(apply_fn, shape, k, cfg: SeesawConfig, restart: int):
    rng = rngmod.stream(cfg.seed, rngmod.OPTIMIZE, restart)
    state = RankKState.random(rng, shape, k)
    vec = state.to_vector()
    prev = -np.inf
    degenerate = 0
    trace = []
    converged = False
    it = 0
    while it < cfg.max_iter:
        it += 1
        w = apply_fn(vec)
        nw = np.linalg.norm(w)
        if nw < 1e-14:
            # range projection vanished; reseed this restart
            state = RankKState.random(rng, shape, k)
            vec = state.to_vector()
            prev = -np.inf
            continue
        u, s, vh = np.linalg.svd((w / nw).reshape(shape), full_matrices=False)
        if k < len(s) and s[k - 1] - s[k] < cfg.degeneracy_tol:
            degenerate += 1  # tie at the truncation edge; keep SVD output order
        c = s[:k] / np.linalg.norm(s[:k])
        vec = ((u[:, :k] * c) @ vh[:k]).reshape(-1)
        val = float(np.real(np.vdot(vec, apply_fn(vec))))
        trace.append(val)
        if val - prev < cfg.gain_tol:
            converged = True
            break
        prev = val
    best = trace[-1] if trace else 0.0
    final = RankKState.from_vector(vec, shape, k)
    return best, final, it, converged, degenerate, trace


def max_overlap_rank_k(op, k: int, config: SeesawConfig | None = None,
                       shape: tuple[int, int] | None = None) -> OptimizationReport:
    """Maximize <phi|P|phi> over rank-k states across the cut, with restarts.

    ``op`` is a dense cut-ordered matrix or an object with ``apply_cut`` and
    ``cut_shape`` (for the matrix-free Q_n).  The reduction over restarts is
    a max, so parallel execution is order-independent.
    """
    cfg = config or SeesawConfig()
    if shape is None:
        apply_fn, shape = as_applier(op)
    else:
        apply_fn = op if callable(op) else _DenseApply(op)
    if k < 1:
        raise ValueError("k >= 1 required")

    if cfg.workers > 1 and cfg.restarts > 1:
        workers = min(cfg.workers, cfg.restarts)
        edges = np.linspace(0, cfg.restarts, workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_restart_range, apply_fn, shape, k, cfg, a, b)
                for a, b in zip(edges[:-1], edges[1:])
            ]
            results = [r for f in futures for r in f.result()]
    else:
        results = [_run_restart(apply_fn, shape, k, cfg, r) for r in range(cfg.restarts)]

    best_idx = 0
    for i in range(1, len(results)):
        if results[i][0] > results[best_idx][0]:
            best_idx = i
    best_val, best_state, _, _, _, best_trace = results[best_idx]
    if any(r[4] for r in results):
        log.debug("degenerate Schmidt truncations encountered in %d restarts",
                  sum(1 for r in results if r[4]))
    return OptimizationReport(
        best_value=best_val,
        best_state=best_state,
        restarts=cfg.restarts,
        iterations=[r[2] for r in results],
        converged=all(r[3] for r in results),
        seed=cfg.seed,
        best_restart=best_idx,
        degenerate_truncations=sum(r[4] for r in results),
        value_trace=best_trace,
    )


def seesaw_value_trace(op, k: int, seed: int = 0, max_iter: int = 400):
    """Single-restart value trace, exposed for monotonicity checks."""
    cfg = SeesawConfig(restarts=1, seed=seed, max_iter=max_iter)
    apply_fn, shape = as_applier(op)
    return _run_restart(apply_fn, shape, k, cfg, 0)[5]


# ---------------------------------------------------------------------------
# structure of maximizers of I (x) P+
# ---------------------------------------------------------------------------

@dataclass
class FormFitReport:
    fidelity: float
    value: float
    value_matches_2_over_d: bool
    x: np.ndarray
    y: np.ndarray
    chi: np.ndarray


def fit_cut_product(vec: np.ndarray, d: int = 4, iters: int = 300, tol: float = 1e-14,
                    n_starts: int = 8, seed: int = 0) -> FormFitReport:
    """Best fidelity of a two-pair state with the form |x>_A |y>_B |chi>_{A'B'}.

    Alternating closed-form updates of (x, y, chi); each update maximizes the
    overlap with the other two factors fixed, so the fidelity is monotone.
    """
    t = np.asarray(vec, dtype=complex).reshape(d, d, d, d)  # axes (A, A', B, B')
    tc = t.conj()
    best = (-1.0, None, None, None)
    for s in range(n_starts):
        rng = rngmod.stream(seed, rngmod.OPTIMIZE, 10_000 + s)
        x = rngmod.haar_unit_vector(rng, d)
        y = rngmod.haar_unit_vector(rng, d)
        chi = rngmod.haar_unit_vector(rng, d * d).reshape(d, d)
        prev = -1.0
        fid = 0.0
        for _ in range(iters):
            # each factor update is argmax of |<phi|x y chi>| with the rest fixed
            w = np.einsum("aibj,b,ij->a", tc, y, chi)
            if np.linalg.norm(w) < 1e-15:
                break
            x = w.conj() / np.linalg.norm(w)
            w = np.einsum("aibj,a,ij->b", tc, x, chi)
            if np.linalg.norm(w) < 1e-15:
                break
            y = w.conj() / np.linalg.norm(w)
            w = np.einsum("aibj,a,b->ij", tc, x, y)
            nw = np.linalg.norm(w)
            if nw < 1e-15:
                break
            chi = w.conj() / nw
            fid = nw ** 2
            if fid - prev < tol:
                break
            prev = fid
        if fid > best[0]:
            best = (fid, x, y, chi.reshape(-1))
    fid, x, y, chi = best
    return FormFitReport(fid, np.nan, False, x, y, chi)


def verify_ip_maximizer_form(report: OptimizationReport, d: int = 4,
                             fit_seed: int = 0) -> FormFitReport:
    """Check a maximizer of I (x) P+ against the |x>_A |y>_B |chi>_{A'B'} form."""
    vec = report.best_state.to_vector()
    fit = fit_cut_product(vec, d=d, seed=fit_seed)
    fit.value = report.best_value
    fit.value_matches_2_over_d = bool(abs(report.best_value - 2.0 / d) < 1e-6)
    return fit
