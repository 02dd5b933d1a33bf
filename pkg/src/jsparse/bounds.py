"""Recoverability bounds, spark/RIP brute-force utilities, and the
success criterion used by the benchmark."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .linalg import check_matrix, numerical_rank
from .smv import TooLargeError


class DegenerateColumnError(Exception):
    """A zero column reached the spark computation (broken generator upstream)."""


@dataclass(frozen=True)
class BoundReport:
    spark_value: int
    spark_assumed: bool
    rank_Y: int
    max_recoverable_k: int


@dataclass(frozen=True)
class SparsityBudget:
    k: int
    r: int
    total_boosted: int
    total_naive: int
    average_boosted: float
    average_naive: float


def spark_bruteforce(A, rel_tol: float = 1e-10) -> int:
    """Smallest number of linearly dependent columns of A, by enumeration.

    Returns n + 1 when every subset up to size min(m+1, n) has full rank.
    Guarded to n <= 20.
    """
    A = check_matrix(A, "A")
    m, n = A.shape
    if n > 20:
        raise TooLargeError(f"spark enumeration guard: n={n} (max 20)")
    if np.any(np.linalg.norm(A, axis=0) == 0.0):
        raise DegenerateColumnError("A contains a zero column")
    for size in range(2, min(m + 1, n) + 1):
        for S in combinations(range(n), size):
            if numerical_rank(A[:, S], rel_tol) < size:
                return size
    return n + 1


def deterministic_bound(spark_value: int, rank_Y: int) -> int:
    """Largest row sparsity with guaranteed unique MMV recovery:
    floor((spark + rank(Y) - 1) / 2)."""
    if spark_value < 2:
        raise ValueError("spark is at least 2 for a matrix without zero columns")
    if rank_Y < 0:
        raise ValueError("rank_Y must be nonnegative")
    return (spark_value + rank_Y - 1) // 2


def bound_report(A, Y, assume_generic: bool | None = None) -> BoundReport:
    """Bundle spark, rank(Y), and the recoverable-sparsity bound.

    For wide matrices beyond the enumeration guard the generic spark m + 1
    is assumed (holds with probability 1 for Gaussian A) and flagged.
    """
    A = check_matrix(A, "A")
    m, n = A.shape
    if assume_generic is None:
        assume_generic = n > 20
    if assume_generic:
        spark, assumed = m + 1, True
    else:
        spark, assumed = spark_bruteforce(A), False
    rank_Y = numerical_rank(Y)
    return BoundReport(spark, assumed, rank_Y, deterministic_bound(spark, rank_Y))


def sparsity_budget(k: int, r: int) -> SparsityBudget:
    """Nonzero budget of the concatenated coefficient matrix vs. plain
    concatenation: r(k - (r-1)/2) when r <= k, else k(k+1)/2; naive is k*r."""
    if k < 1 or r < 1:
        raise ValueError("k and r must be >= 1")
    if r <= k:
        boosted = r * k - r * (r - 1) // 2
    else:
        boosted = k * (k + 1) // 2
    naive = k * r
    return SparsityBudget(k, r, boosted, naive, boosted / r, naive / r)


def rip_constant_bruteforce(A, k: int) -> float:
    """Smallest eps with all k-column submatrix singular values in
    [1-eps, 1+eps]. Requires unit-norm columns; guarded to n <= 16, k <= 4."""
    A = check_matrix(A, "A")
    m, n = A.shape
    if n > 16 or k > 4:
        raise TooLargeError(f"RIP enumeration guard: n={n} (max 16), k={k} (max 4)")
    if k < 1:
        raise ValueError("k must be >= 1")
    norms = np.linalg.norm(A, axis=0)
    if np.any(np.abs(norms - 1.0) > 1e-8):
        raise ValueError("columns of A must be unit-normalized")
    eps = 0.0
    for S in combinations(range(n), k):
        s = np.linalg.svd(A[:, S], compute_uv=False)
        eps = max(eps, s[0] - 1.0, 1.0 - s[-1])
    return max(eps, 0.0)


def success(X, X_hat, rel_tol: float = 1e-5, spectral: bool = False) -> bool:
    """Recovery test ||X - X_hat|| <= rel_tol * ||X|| (Frobenius by default,
    spectral behind the flag). A zero X succeeds iff ||X_hat|| <= rel_tol."""
    X = np.asarray(X, dtype=np.float64)
    X_hat = np.asarray(X_hat, dtype=np.float64)
    if X.shape != X_hat.shape:
        raise ValueError(f"shape mismatch: {X.shape} vs {X_hat.shape}")
    ord_ = 2 if spectral else "fro"
    err = np.linalg.norm(X - X_hat, ord=ord_)
    ref = np.linalg.norm(X, ord=ord_)
    if ref == 0.0:
        return bool(err <= rel_tol)
    return bool(err <= rel_tol * ref)
