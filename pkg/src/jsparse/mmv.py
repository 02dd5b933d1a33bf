"""MMV recovery algorithms: S-OMP, ReMBo, naive concatenation, CoMBo.

All four estimate the shared row support of X in Y = A X and finish with
the same restrict-and-solve step (least squares on the selected columns,
zeros elsewhere). ReMBo and CoMBo take an explicit RngStream so every run
is a pure function of (problem, config, stream).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    RngStream,
    check_matrix,
    haar_orthonormal,
    least_squares_solve,
    vec,
    unvec,
)
from .smv import BpConfig, SmvSolution, basis_pursuit

REMBO_DEFAULT_MAX_ITER = 20
COMBO_DEFAULT_MAX_ITER = 5


@dataclass
class MmvProblem:
    A: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        self.A = check_matrix(self.A, "A")
        self.Y = check_matrix(self.Y, "Y")
        if self.A.shape[0] != self.Y.shape[0]:
            raise ValueError(
                f"A has {self.A.shape[0]} rows but Y has {self.Y.shape[0]}"
            )


@dataclass
class MmvAlgoConfig:
    eps: float = 1e-5
    max_iter: int | None = None  # None -> per-algorithm default (20 ReMBo, 5 CoMBo)
    p_norm: float = 2.0
    k_known: int | None = None
    row_nz_rel_tol: float = 1e-6
    guard_residual: bool = False
    bp: BpConfig = field(default_factory=BpConfig)

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if not 1.0 <= self.p_norm <= 2.0:
            raise ValueError("p_norm must lie in [1, 2]")


@dataclass
class RecoveryResult:
    X_hat: np.ndarray
    support: list[int]
    boosts_used: int
    smv_solves: int
    converged: bool
    runtime_s: float
    support_sizes: list[int] | None = None  # incumbent |support| after each boost


def restrict_and_solve(prob: MmvProblem, support) -> np.ndarray:
    """Least-squares fit on the support rows; every other row exactly zero."""
    support = sorted(int(i) for i in support)
    n, r = prob.A.shape[1], prob.Y.shape[1]
    if len(support) > prob.A.shape[0]:
        raise ValueError("support larger than the number of measurements")
    X = np.zeros((n, r))
    if support:
        X[support] = least_squares_solve(prob.A[:, support], prob.Y)
    return X


def _nonzero_rows(Z: np.ndarray, rel_tol: float) -> np.ndarray:
    norms = np.linalg.norm(Z, axis=1)
    top = norms.max() if norms.size else 0.0
    if top == 0.0:
        return np.zeros(0, dtype=int)
    return np.flatnonzero(norms > rel_tol * top)


def _finish(prob, support, rel_tol):
    """Restricted solve plus re-thresholding of near-zero rows."""
    X = restrict_and_solve(prob, support)
    keep = _nonzero_rows(X, rel_tol)
    support = [int(i) for i in keep]
    X_final = np.zeros_like(X)
    X_final[support] = X[support]
    return X_final, support


def somp(prob: MmvProblem, cfg: MmvAlgoConfig | None = None) -> RecoveryResult:
    """Simultaneous OMP: greedy atom selection on the p-norm of a_i^T R."""
    cfg = cfg or MmvAlgoConfig()
    t0 = time.perf_counter()
    A, Y = prob.A, prob.Y
    m, n = A.shape
    k_stop = min(cfg.k_known, m) if cfg.k_known is not None else m

    ynorm = np.linalg.norm(Y)
    support: list[int] = []
    if ynorm == 0.0:
        return RecoveryResult(np.zeros((n, Y.shape[1])), [], 0, 0, True, time.perf_counter() - t0)

    R = Y
    rnorm = ynorm
    X = np.zeros((n, Y.shape[1]))
    while len(support) < k_stop and rnorm >= cfg.eps * ynorm:
        corr = np.linalg.norm(A.T @ R, ord=cfg.p_norm, axis=1)
        corr[support] = -np.inf
        support.append(int(np.argmax(corr)))
        # Residual from the orthogonal projector onto the selected atoms.
        coef = least_squares_solve(A[:, support], Y)
        R = Y - A[:, support] @ coef
        rnorm = np.linalg.norm(R)
    if support:
        X[support] = coef
    return RecoveryResult(
        X, support, 0, 0, bool(rnorm < cfg.eps * ynorm), time.perf_counter() - t0
    )


def _default_smv(cfg: MmvAlgoConfig):
    def solve(A, y) -> SmvSolution:
        return basis_pursuit(A, y, cfg.bp)

    return solve


def rembo(
    prob: MmvProblem,
    cfg: MmvAlgoConfig,
    rng: RngStream,
    smv=None,
) -> RecoveryResult:
    """Reduce-and-boost: collapse Y with random unit vectors, solve SMV.

    Requires cfg.k_known (the acceptance test counts nonzeros against k).
    If no draw is accepted within max_iter, falls back to the feasible
    attempt with the smallest support, else the smallest residual.
    """
    if cfg.k_known is None:
        raise ValueError("rembo needs k_known for its acceptance test")
    t0 = time.perf_counter()
    smv = smv or _default_smv(cfg)
    A, Y = prob.A, prob.Y
    m, n = A.shape
    r = Y.shape[1]
    max_iter = cfg.max_iter if cfg.max_iter is not None else REMBO_DEFAULT_MAX_ITER

    if np.linalg.norm(Y) == 0.0:
        return RecoveryResult(np.zeros((n, r)), [], 1, 0, True, time.perf_counter() - t0)

    gen = rng.generator()
    accepted = None
    best = None  # (feasible, support size, residual, support)
    solves = 0
    boosts = 0
    for _ in range(max_iter):
        boosts += 1
        w = gen.standard_normal(r)
        w /= np.linalg.norm(w)
        y = Y @ w
        sol = smv(A, y)
        solves += 1
        supp = sol.support
        if len(supp) > m:  # cap so the restricted solve stays overdetermined
            order = np.argsort(-np.abs(sol.x[supp]), kind="stable")[:m]
            supp = sorted(int(supp[i]) for i in order)
        feasible = sol.residual_norm <= cfg.eps
        key = (not feasible, len(supp), sol.residual_norm)
        if best is None or key < best[0]:
            best = (key, supp)
        if feasible and len(supp) <= cfg.k_known:
            accepted = supp
            break

    support = accepted if accepted is not None else best[1]
    X, support = _finish(prob, support, cfg.row_nz_rel_tol)
    return RecoveryResult(
        X, support, boosts, solves, accepted is not None, time.perf_counter() - t0
    )


def _concat_solve(A, B, smv, monolithic: bool):
    """Solve (I_r kron A) vec(S) = vec(B) for S, column by column.

    The block operator is block diagonal and the l1 objective separates, so
    the r independent column solves give the exact concatenated solution.
    The monolithic path materializes the block matrix and is kept only so
    tests can confirm the equivalence.
    """
    m, n = A.shape
    r = B.shape[1]
    if monolithic:
        big = np.kron(np.eye(r), A)
        sol = basis_pursuit(big, vec(B))
        return unvec(sol.x, n, r), 1
    S = np.empty((n, r))
    for j in range(r):
        S[:, j] = smv(A, B[:, j]).x
    return S, r


def naive_concat(
    prob: MmvProblem,
    cfg: MmvAlgoConfig | None = None,
    smv=None,
    monolithic: bool = False,
) -> RecoveryResult:
    """Plain concatenation baseline: solve the block SMV on Y directly.

    Support = top-m rows of the solution by l2 norm, re-thresholded after
    the restricted least-squares fit.
    """
    cfg = cfg or MmvAlgoConfig()
    t0 = time.perf_counter()
    smv = smv or _default_smv(cfg)
    A, Y = prob.A, prob.Y
    m, n = A.shape

    if np.linalg.norm(Y) == 0.0:
        return RecoveryResult(np.zeros((n, Y.shape[1])), [], 0, 0, True, time.perf_counter() - t0)

    X_est, solves = _concat_solve(A, Y, smv, monolithic)
    support = _top_rows(X_est, m)
    X, support = _finish(prob, support, cfg.row_nz_rel_tol)
    residual = np.linalg.norm(Y - A @ X)
    converged = bool(residual <= cfg.eps * np.linalg.norm(Y))
    return RecoveryResult(X, support, 0, solves, converged, time.perf_counter() - t0)


def _top_rows(S: np.ndarray, m: int) -> list[int]:
    """Indices of the m largest l2 rows; ties go to the smaller index."""
    norms = np.linalg.norm(S, axis=1)
    order = np.argsort(-norms, kind="stable")[:m]
    return sorted(int(i) for i in order)


def combo(
    prob: MmvProblem,
    cfg: MmvAlgoConfig | None = None,
    rng: RngStream | None = None,
    smv=None,
    monolithic: bool = False,
) -> RecoveryResult:
    """Concatenate-and-boost recovery.

    Each boost draws a Haar orthonormal Q, solves the concatenated SMV on
    Y Q, keeps the m largest rows of the estimate, refines that index set
    through a restricted least-squares fit, and accepts it whenever it is
    no larger than the incumbent. Does not need k.
    """
    cfg = cfg or MmvAlgoConfig()
    rng = rng or RngStream(0)
    t0 = time.perf_counter()
    smv = smv or _default_smv(cfg)
    A, Y = prob.A, prob.Y
    m, n = A.shape
    r = Y.shape[1]
    max_iter = cfg.max_iter if cfg.max_iter is not None else COMBO_DEFAULT_MAX_ITER

    ynorm = np.linalg.norm(Y)
    if ynorm == 0.0:
        return RecoveryResult(np.zeros((n, r)), [], 0, 0, True, time.perf_counter() - t0)

    gen = rng.generator()
    support = list(range(n))
    sizes = []
    best_residual = np.inf
    solves = 0
    boosts = 0
    for _ in range(max_iter):
        boosts += 1
        Q = haar_orthonormal(r, gen)
        S_est, used = _concat_solve(A, Y @ Q, smv, monolithic)
        solves += used
        candidate = _top_rows(S_est, m)
        # Refine: rows that actually carry energy in the restricted fit.
        Z = least_squares_solve(A[:, candidate], Y)
        keep = _nonzero_rows(Z, cfg.row_nz_rel_tol)
        candidate = [candidate[i] for i in keep]
        # Empty refinement on nonzero Y is degenerate: keep the incumbent.
        if candidate and len(candidate) <= len(support):
            accept = True
            if cfg.guard_residual:
                resid = np.linalg.norm(Y - A[:, candidate] @ least_squares_solve(A[:, candidate], Y))
                accept = resid <= best_residual + cfg.eps * ynorm
                if accept:
                    best_residual = min(best_residual, resid)
            if accept:
                support = candidate
        sizes.append(len(support))

    if len(support) > m:  # no boost produced a usable candidate
        Z, *_ = np.linalg.lstsq(A, Y, rcond=None)
        support = _top_rows(Z, m)
    X, support = _finish(prob, support, cfg.row_nz_rel_tol)
    residual = np.linalg.norm(Y - A @ X)
    return RecoveryResult(
        X, support, boosts, solves, bool(residual <= cfg.eps * ynorm),
        time.perf_counter() - t0, sizes,
    )
