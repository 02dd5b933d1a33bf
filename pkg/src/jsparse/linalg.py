"""Dense linear-algebra kernels and seeded randomness primitives.

Everything downstream (SMV solvers, MMV algorithms, the bench harness)
builds on the functions here. All operations are pure: matrices are never
mutated, and every random quantity is a deterministic function of an
explicit RngStream.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


def check_matrix(M, name="matrix") -> np.ndarray:
    """Coerce to a 2-D float64 array and reject NaN/Inf entries."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise ValueError(f"{name} must be 2-D with positive shape, got {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    return M


@dataclass(frozen=True)
class RngStream:
    """A named, reproducible stream of randomness.

    Identical (master_seed, stream_id) pairs yield identical sample
    sequences regardless of platform or how many streams are consumed
    concurrently (PCG64 seeded through SeedSequence).
    """

    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence((self.master_seed & _U64, self.stream_id & _U64))
        return np.random.Generator(np.random.PCG64(ss))


_U64 = (1 << 64) - 1


def splitmix64(*values: int) -> int:
    """Mix integer keys into a 64-bit stream id (splitmix64 finalizer chain)."""
    h = 0
    for v in values:
        h = (h + (v & _U64) + 0x9E3779B97F4A7C15) & _U64
        z = h
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
        h = z ^ (z >> 31)
    return h


def derive_stream(master_seed: int, *keys) -> RngStream:
    """Derive a per-task RngStream from a master seed and hashable keys.

    String keys are folded in bytewise so e.g. algorithm names produce
    distinct streams from numeric cell coordinates.
    """
    ints = []
    for k in keys:
        if isinstance(k, str):
            ints.extend(k.encode("utf-8"))
            ints.append(0x5F)  # separator, avoids concatenation collisions
        else:
            ints.append(int(k))
    return RngStream(master_seed, splitmix64(*ints))


def qr_decompose(K) -> tuple[np.ndarray, np.ndarray]:
    """Full QR factorization K = Q R with Q square orthonormal.

    For K of shape (r, k), Q is r x r and R is r x k upper-trapezoidal.
    Rank deficiency is fine; R just gains extra zeros.
    """
    K = check_matrix(K, "K")
    Q, R = np.linalg.qr(K, mode="complete")
    return Q, R


def least_squares_solve(A, B) -> np.ndarray:
    """Minimum-norm least-squares solution Z of A Z = B.

    Warns (but still returns the minimum-norm solution) when A is
    numerically rank deficient.
    """
    A = check_matrix(A, "A")
    B = np.asarray(B, dtype=np.float64)
    squeeze = B.ndim == 1
    if squeeze:
        B = B[:, None]
    if B.shape[0] != A.shape[0]:
        raise ValueError(f"row mismatch: A has {A.shape[0]}, B has {B.shape[0]}")
    Z, _, rank, _ = np.linalg.lstsq(A, B, rcond=None)
    if rank < A.shape[1]:
        warnings.warn(
            f"rank-deficient least squares: rank {rank} < {A.shape[1]} columns",
            stacklevel=2,
        )
    return Z[:, 0] if squeeze else Z


def numerical_rank(M, rel_tol: float = 1e-10) -> int:
    """Number of singular values above rel_tol times the largest one."""
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    M = check_matrix(M, "M")
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def random_gaussian(rows: int, cols: int, rng: RngStream) -> np.ndarray:
    """I.i.d. standard normal matrix, reproducible from rng."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    return rng.generator().standard_normal((rows, cols))


def haar_orthonormal(r: int, gen: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix from an existing generator."""
    G = gen.standard_normal((r, r))
    Q, R = np.linalg.qr(G)
    # Plain QR of a Gaussian is not Haar: fix each column sign by the
    # sign of the corresponding R diagonal.
    d = np.sign(np.diag(R))
    d[d == 0] = 1.0
    return Q * d


def random_orthonormal(r: int, rng: RngStream) -> np.ndarray:
    """Haar-distributed r x r orthogonal matrix, reproducible from rng."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return haar_orthonormal(r, rng.generator())


def vec(M) -> np.ndarray:
    """Stack the columns of M into a single vector."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError("vec expects a matrix")
    return M.reshape(-1, order="F").copy()


def unvec(v, n: int, r: int) -> np.ndarray:
    """Inverse of vec: reshape a length n*r vector into an n x r matrix."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size != n * r:
        raise ValueError(f"expected vector of length {n * r}, got shape {v.shape}")
    return v.reshape((n, r), order="F").copy()


def kron_identity_apply(A, s) -> np.ndarray:
    """Apply the block-diagonal operator (I_r kron A) to s without forming it.

    Equals vec(A @ unvec(s, n, r)) where n = A.shape[1] and r is inferred
    from len(s).
    """
    A = check_matrix(A, "A")
    s = np.asarray(s, dtype=np.float64)
    n = A.shape[1]
    if s.ndim != 1 or s.size % n != 0:
        raise ValueError(f"vector length {s.size} not a multiple of {n}")
    r = s.size // n
    return vec(A @ unvec(s, n, r))
