"""Single-measurement-vector engines.

basis_pursuit solves the equality-constrained l1 problem
    min ||x||_1  s.t.  A x = y
as the LP  min sum(u) s.t. -u <= x <= u, A x = y  with a primal-dual
interior-point method. omp is the classic greedy pursuit. l0_bruteforce
enumerates supports and exists only as a test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .linalg import check_matrix, least_squares_solve


class InfeasibleError(Exception):
    """y is detectably outside the range of A."""


class TooLargeError(Exception):
    """Brute-force enumeration guard exceeded."""


class NotFoundError(Exception):
    """No support within the size budget fits the measurements."""


@dataclass
class BpConfig:
    duality_gap_tol: float = 1e-8
    max_interior_iterations: int = 50
    nz_rel_tol: float = 1e-4

    def __post_init__(self):
        if self.duality_gap_tol <= 0 or self.max_interior_iterations <= 0 or self.nz_rel_tol <= 0:
            raise ValueError("BpConfig fields must be positive")


@dataclass
class SmvSolution:
    x: np.ndarray
    support: list[int]
    converged: bool
    iterations: int
    residual_norm: float
    dual: np.ndarray | None = field(default=None, repr=False)


def _support_of(x: np.ndarray, nz_rel_tol: float) -> list[int]:
    xmax = np.max(np.abs(x)) if x.size else 0.0
    if xmax == 0.0:
        return []
    return [int(i) for i in np.flatnonzero(np.abs(x) > nz_rel_tol * xmax)]


def basis_pursuit(A, y, cfg: BpConfig | None = None) -> SmvSolution:
    """Equality-constrained l1 minimization via primal-dual interior point.

    Returns converged=True iff the surrogate duality gap fell below
    cfg.duality_gap_tol within the iteration cap. Raises InfeasibleError
    when y is not (numerically) in the range of A.
    """
    cfg = cfg or BpConfig()
    A = check_matrix(A, "A")
    y = np.asarray(y, dtype=np.float64).ravel()
    m, n = A.shape
    if y.size != m:
        raise ValueError(f"y has length {y.size}, expected {m}")

    ynorm = float(np.linalg.norm(y))
    if ynorm == 0.0:
        return SmvSolution(np.zeros(n), [], True, 0, 0.0, np.zeros(m))

    # Feasible starting point: minimum-norm solution of A x = y.
    x, *_ = np.linalg.lstsq(A, y, rcond=None)
    if np.linalg.norm(A @ x - y) > 1e-8 * max(1.0, ynorm):
        raise InfeasibleError("y is outside the numerical range of A")

    xmax = np.max(np.abs(x))
    u = 0.95 * np.abs(x) + 0.10 * xmax
    f1 = x - u
    f2 = -x - u
    lam1 = -1.0 / f1
    lam2 = -1.0 / f2
    v = -A @ (lam1 - lam2)
    atv = A.T @ v
    mu = 10.0
    n_ineq = 2 * n
    gap = -(f1 @ lam1 + f2 @ lam2)

    def res_norm(f1, f2, lam1, lam2, atv, x, tau):
        rd = np.concatenate([lam1 - lam2 + atv, 1.0 - lam1 - lam2])
        rc = np.concatenate([-lam1 * f1, -lam2 * f2]) - 1.0 / tau
        rp = A @ x - y
        return float(np.sqrt(rd @ rd + rc @ rc + rp @ rp))

    converged = gap < cfg.duality_gap_tol
    iters = 0
    while not converged and iters < cfg.max_interior_iterations:
        iters += 1
        tau = mu * n_ineq / gap
        rp = A @ x - y

        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            sig1 = -lam1 / f1 - lam2 / f2
            sig2 = lam1 / f1 - lam2 / f2
            sigx = sig1 - sig2**2 / sig1
            w1 = -(1.0 / tau) * (-1.0 / f1 + 1.0 / f2) - atv
            w2 = -1.0 - (1.0 / tau) * (1.0 / f1 + 1.0 / f2)
            w3 = -rp

            H = (A / sigx) @ A.T
            H[np.diag_indices_from(H)] += 1e-12  # survives near-singular late iterations
            rhs = A @ ((w1 - w2 * sig2 / sig1) / sigx) - w3
        if not (np.all(np.isfinite(H)) and np.all(np.isfinite(rhs))):
            break  # slacks collapsed to the boundary; polish below
        try:
            L = np.linalg.cholesky(H)
            dv = np.linalg.solve(L.T, np.linalg.solve(L, rhs))
        except np.linalg.LinAlgError:
            break  # converged stays False
        dx = (w1 - w2 * sig2 / sig1 - A.T @ dv) / sigx
        du = (w2 - sig2 * dx) / sig1
        dlam1 = (lam1 / f1) * (-dx + du) - lam1 - (1.0 / tau) / f1
        dlam2 = (lam2 / f2) * (dx + du) - lam2 - (1.0 / tau) / f2

        # Largest step keeping lam > 0 and f < 0.
        s = 1.0
        neg = dlam1 < 0
        if np.any(neg):
            s = min(s, np.min(-lam1[neg] / dlam1[neg]))
        neg = dlam2 < 0
        if np.any(neg):
            s = min(s, np.min(-lam2[neg] / dlam2[neg]))
        df1 = dx - du
        pos = df1 > 0
        if np.any(pos):
            s = min(s, np.min(-f1[pos] / df1[pos]))
        df2 = -dx - du
        pos = df2 > 0
        if np.any(pos):
            s = min(s, np.min(-f2[pos] / df2[pos]))
        s *= 0.99

        # Backtrack on the full residual norm.
        rnorm0 = res_norm(f1, f2, lam1, lam2, atv, x, tau)
        for _ in range(32):
            xn = x + s * dx
            un = u + s * du
            l1n = lam1 + s * dlam1
            l2n = lam2 + s * dlam2
            f1n = xn - un
            f2n = -xn - un
            atvn = atv + s * (A.T @ dv)
            if res_norm(f1n, f2n, l1n, l2n, atvn, xn, tau) <= (1 - 0.01 * s) * rnorm0:
                break
            s *= 0.5
        else:
            break  # line search stalled

        x, u, lam1, lam2, f1, f2 = xn, un, l1n, l2n, f1n, f2n
        v = v + s * dv
        atv = atvn
        gap = -(f1 @ lam1 + f2 @ lam2)
        if gap < cfg.duality_gap_tol:
            converged = True

    # Polish: refit on the detected support and build an exact dual from the
    # sign pattern. The interior-point iterates bottom out near gap ~1e-7 in
    # double precision; when the polished pair certifies optimality (weak
    # duality) to duality_gap_tol, that is a stronger statement than the
    # surrogate gap ever makes.
    nu = -v / max(1.0, np.max(np.abs(atv)))
    x, nu, converged = _polish(A, y, x, nu, converged, cfg)

    residual = float(np.linalg.norm(y - A @ x))
    return SmvSolution(x, _support_of(x, cfg.nz_rel_tol), converged, iters, residual, nu)


def _polish(A, y, x, nu, converged, cfg):
    """Refit x on its support, rebuild the dual, re-certify convergence."""
    m, n = A.shape
    xmax = np.max(np.abs(x))
    if xmax == 0.0:
        return x, nu, converged
    S = np.flatnonzero(np.abs(x) > 1e-6 * xmax)
    if S.size > m:  # an LP vertex has at most m nonzeros
        S = np.sort(S[np.argsort(-np.abs(x[S]), kind="stable")[:m]])
    coef, *_ = np.linalg.lstsq(A[:, S], y, rcond=None)
    xp = np.zeros(n)
    xp[S] = coef
    feasible = np.linalg.norm(A @ xp - y) <= 1e-9 * max(1.0, np.linalg.norm(y))
    if feasible and np.abs(xp).sum() <= np.abs(x).sum() + 1e-12:
        x = xp
        S = np.flatnonzero(np.abs(x) > 1e-12 * np.max(np.abs(x)))
    nup, *_ = np.linalg.lstsq(A[:, S].T, np.sign(x[S]), rcond=None)
    nup = nup / max(1.0, np.max(np.abs(A.T @ nup)))
    if nup @ y > nu @ y:
        nu = nup
    gap = np.abs(x).sum() - nu @ y
    if gap <= cfg.duality_gap_tol * max(1.0, np.abs(x).sum()):
        converged = True
    return x, nu, converged


def omp(A, y, k_max: int, eps: float = 1e-6, nz_rel_tol: float = 1e-4) -> SmvSolution:
    """Orthogonal matching pursuit with at most k_max atoms.

    Stops early once the residual drops below eps * ||y||_2. Coefficients
    come from least squares on the selected atoms; support is reported in
    selection order.
    """
    A = check_matrix(A, "A")
    y = np.asarray(y, dtype=np.float64).ravel()
    m, n = A.shape
    if y.size != m:
        raise ValueError(f"y has length {y.size}, expected {m}")
    if k_max > m:
        raise ValueError("k_max must not exceed the number of measurements")

    ynorm = float(np.linalg.norm(y))
    x = np.zeros(n)
    if ynorm == 0.0:
        return SmvSolution(x, [], True, 0, 0.0)

    support: list[int] = []
    residual = y.copy()
    rnorm = ynorm
    for _ in range(k_max):
        if rnorm < eps * ynorm:
            break
        corr = np.abs(A.T @ residual)
        corr[support] = -np.inf
        support.append(int(np.argmax(corr)))
        coef = least_squares_solve(A[:, support], y)
        residual = y - A[:, support] @ coef
        rnorm = float(np.linalg.norm(residual))
    x = np.zeros(n)
    if support:
        x[support] = coef
    return SmvSolution(x, support, rnorm < eps * ynorm, len(support), rnorm)


def l0_bruteforce(A, y, k_max: int, fit_tol: float = 1e-8) -> SmvSolution:
    """Minimal-support exact solver by exhaustive enumeration (test oracle).

    Searches support sizes in increasing order and returns the first
    (lexicographically smallest) support whose least-squares fit achieves
    ||y - A_S x_S|| <= fit_tol * ||y||. Guarded to tiny problems.
    """
    A = check_matrix(A, "A")
    y = np.asarray(y, dtype=np.float64).ravel()
    m, n = A.shape
    if y.size != m:
        raise ValueError(f"y has length {y.size}, expected {m}")
    if n > 20 or k_max > 5:
        raise TooLargeError(f"enumeration guard: n={n} (max 20), k_max={k_max} (max 5)")

    ynorm = float(np.linalg.norm(y))
    if ynorm == 0.0:
        return SmvSolution(np.zeros(n), [], True, 0, 0.0)

    for size in range(1, k_max + 1):
        for S in combinations(range(n), size):
            cols = A[:, S]
            coef, *_ = np.linalg.lstsq(cols, y, rcond=None)
            r = float(np.linalg.norm(y - cols @ coef))
            if r <= fit_tol * ynorm:
                x = np.zeros(n)
                x[list(S)] = coef
                return SmvSolution(x, list(S), True, size, r)
    raise NotFoundError(f"no support of size <= {k_max} fits y within {fit_tol}")
