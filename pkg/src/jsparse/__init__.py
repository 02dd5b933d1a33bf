"""Joint-sparse recovery for multiple measurement vector problems.

Implements the concatenate-and-boost recovery algorithm alongside S-OMP,
ReMBo, and plain concatenation baselines, an interior-point basis pursuit
engine, deterministic recoverability bounds, and a seeded Monte-Carlo
phase-transition benchmark.
"""

from .bench import MmvInstance, SweepConfig, aggregate, gen_instance, run_sweep
from .bounds import (
    BoundReport,
    SparsityBudget,
    deterministic_bound,
    rip_constant_bruteforce,
    spark_bruteforce,
    sparsity_budget,
    success,
)
from .linalg import (
    RngStream,
    derive_stream,
    kron_identity_apply,
    least_squares_solve,
    numerical_rank,
    qr_decompose,
    random_gaussian,
    random_orthonormal,
    unvec,
    vec,
)
from .mmv import (
    MmvAlgoConfig,
    MmvProblem,
    RecoveryResult,
    combo,
    naive_concat,
    rembo,
    restrict_and_solve,
    somp,
)
from .smv import BpConfig, SmvSolution, basis_pursuit, l0_bruteforce, omp

__all__ = [
    "BoundReport",
    "BpConfig",
    "MmvAlgoConfig",
    "MmvInstance",
    "MmvProblem",
    "RecoveryResult",
    "RngStream",
    "SmvSolution",
    "SparsityBudget",
    "SweepConfig",
    "aggregate",
    "basis_pursuit",
    "combo",
    "derive_stream",
    "deterministic_bound",
    "gen_instance",
    "kron_identity_apply",
    "l0_bruteforce",
    "least_squares_solve",
    "naive_concat",
    "numerical_rank",
    "omp",
    "qr_decompose",
    "random_gaussian",
    "random_orthonormal",
    "rembo",
    "restrict_and_solve",
    "rip_constant_bruteforce",
    "run_sweep",
    "somp",
    "spark_bruteforce",
    "sparsity_budget",
    "success",
    "unvec",
    "vec",
]

__version__ = "0.1.0"
