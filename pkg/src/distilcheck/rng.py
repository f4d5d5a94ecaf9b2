"""Seeded, stream-addressable random number generation.

Every stochastic routine in the package draws from a Philox counter-based
generator keyed by ``(seed, module_id, *path)``.  Streams are independent of
execution order, so serial and parallel runs over restart indices produce
identical results.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1

# module identifiers for stream derivation
OPTIMIZE = 1
MATRIX_ISO = 2
CERTIFICATES = 3
BOUNDS = 4
MEASURES = 5
CLI = 6


def stream(seed: int, *path: int) -> np.random.Generator:
    """Return the generator for stream ``(seed, *path)``.

    ``path`` is typically ``(module_id, restart_index)``; the same tuple
    always yields the same stream regardless of what was drawn elsewhere.
    """
    entropy = [int(seed) & _MASK64] + [int(p) & _MASK64 for p in path]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def haar_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unit vector in C^dim."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def haar_orthonormal(rng: np.random.Generator, dim: int, k: int) -> np.ndarray:
    """k Haar-random orthonormal columns in C^dim."""
    return haar_unitary(rng, dim)[:, :k]
