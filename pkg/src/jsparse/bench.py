"""Monte-Carlo phase-transition benchmark: instance generation, sweeps over
(algorithm, r, k), aggregation into phase curves, and CSV/JSON persistence.

Every trial derives its own RngStream from the master seed and the cell
coordinates, so results are identical regardless of worker count, and all
algorithms see the same instance within a cell (paired comparison).
"""

from __future__ import annotations

import csv
import json
import logging
import multiprocessing
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import deterministic_bound, success
from .linalg import RngStream, check_matrix, derive_stream
from .mmv import (
    MmvAlgoConfig,
    MmvProblem,
    RecoveryResult,
    combo,
    naive_concat,
    rembo,
    somp,
)

log = logging.getLogger(__name__)

ALGORITHMS = ("somp", "rembo", "naivecat", "combo")

RECORD_FIELDS = ("algorithm", "m", "n", "r", "k", "trial", "success", "runtime_ms", "boosts_used")
CURVE_FIELDS = ("algorithm", "m", "n", "r", "k", "trials", "successes", "rate", "bound_k")


class CsvFormatError(Exception):
    """A CSV file did not match the expected schema."""


@dataclass
class MmvInstance:
    A: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    k: int
    support: list[int]
    seed: int  # stream id the instance was drawn from

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def r(self) -> int:
        return self.Y.shape[1]

    def to_json(self) -> str:
        doc = {
            "m": self.m,
            "n": self.n,
            "r": self.r,
            "k": self.k,
            "seed": self.seed,
            "support": self.support,
            "A": self.A.tolist(),
            "X": self.X.tolist(),
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "MmvInstance":
        doc = json.loads(text)
        A = check_matrix(doc["A"], "A")
        X = np.asarray(doc["X"], dtype=np.float64)
        if A.shape != (doc["m"], doc["n"]) or X.shape != (doc["n"], doc["r"]):
            raise ValueError("instance dimensions inconsistent with payload")
        return cls(A, X, A @ X, int(doc["k"]), [int(i) for i in doc["support"]], int(doc["seed"]))


def gen_instance(m: int, n: int, k: int, r: int, rng: RngStream) -> MmvInstance:
    """Random problem: unit-norm Gaussian columns, k-row-sparse Gaussian X."""
    if m < 1 or n < 1 or r < 1 or k < 0 or k > min(m, n):
        raise ValueError(f"invalid dimensions m={m} n={n} k={k} r={r}")
    gen = rng.generator()
    A = gen.standard_normal((m, n))
    A /= np.linalg.norm(A, axis=0)
    support = np.sort(gen.choice(n, size=k, replace=False)) if k else np.zeros(0, dtype=int)
    X = np.zeros((n, r))
    if k:
        X[support] = gen.standard_normal((k, r))
    return MmvInstance(A, X, A @ X, k, [int(i) for i in support], rng.stream_id)


@dataclass(frozen=True)
class TrialRecord:
    algorithm: str
    m: int
    n: int
    r: int
    k: int
    trial: int
    success: bool
    runtime_ms: float
    boosts_used: int


@dataclass(frozen=True)
class CurvePoint:
    k: int
    trials: int
    successes: int
    rate: float
    bound_k: int


@dataclass(frozen=True)
class PhaseCurve:
    algorithm: str
    m: int
    n: int
    r: int
    points: tuple[CurvePoint, ...]


@dataclass
class SweepConfig:
    m: int = 20
    n: int = 30
    r_list: tuple[int, ...] = (1, 2, 8, 16)
    k_range: tuple[int, int] = (1, 20)
    trials: int = 100
    algorithms: tuple[str, ...] = ALGORITHMS
    master_seed: int = 0
    worker_count: int = 1
    timings: bool = False  # wall times in records break byte-level determinism
    algo_configs: dict = field(default_factory=dict)  # name -> MmvAlgoConfig

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.k_range[0] < 0 or self.k_range[1] > self.m:
            raise ValueError("k_range must lie within [0, m]")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")


def run_algorithm(name: str, prob: MmvProblem, cfg: MmvAlgoConfig, rng: RngStream) -> RecoveryResult:
    if name == "somp":
        return somp(prob, cfg)
    if name == "rembo":
        return rembo(prob, cfg, rng)
    if name == "naivecat":
        return naive_concat(prob, cfg)
    if name == "combo":
        return combo(prob, cfg, rng)
    raise ValueError(f"unknown algorithm {name!r}")


def _trial_config(cfg: SweepConfig, algo: str, k: int) -> MmvAlgoConfig:
    base = cfg.algo_configs.get(algo, MmvAlgoConfig())
    if algo in ("somp", "rembo"):
        base = replace(base, k_known=k)
    return base


def _run_cell(cfg: SweepConfig, algo: str, r: int, k: int, trial: int) -> TrialRecord:
    inst = gen_instance(cfg.m, cfg.n, k, r, derive_stream(cfg.master_seed, "instance", r, k, trial))
    algo_rng = derive_stream(cfg.master_seed, "algo", algo, r, k, trial)
    prob = MmvProblem(inst.A, inst.Y)
    t0 = time.perf_counter()
    try:
        result = run_algorithm(algo, prob, _trial_config(cfg, algo, k), algo_rng)
        ok = success(inst.X, result.X_hat)
        boosts = result.boosts_used
    except Exception:
        log.warning("trial failed: %s r=%d k=%d trial=%d", algo, r, k, trial, exc_info=True)
        ok, boosts = False, 0
    runtime_ms = (time.perf_counter() - t0) * 1000.0 if cfg.timings else 0.0
    return TrialRecord(algo, cfg.m, cfg.n, r, k, trial, ok, runtime_ms, boosts)


def _run_cell_args(args):
    return _run_cell(*args)


def run_sweep(cfg: SweepConfig) -> list[TrialRecord]:
    """Run every (algorithm, r, k, trial) cell; output sorted and scheduling
    independent."""
    k_lo, k_hi = cfg.k_range
    cells = [
        (cfg, algo, r, k, trial)
        for algo in cfg.algorithms
        for r in cfg.r_list
        for k in range(k_lo, k_hi + 1)
        for trial in range(cfg.trials)
    ]
    if cfg.worker_count > 1:
        with multiprocessing.Pool(cfg.worker_count) as pool:
            records = pool.map(_run_cell_args, cells, chunksize=16)
    else:
        records = [_run_cell(*c) for c in cells]
    records.sort(key=lambda t: (t.algorithm, t.r, t.k, t.trial))
    return records


def aggregate(records) -> list[PhaseCurve]:
    """Group records into per-(algorithm, r) phase curves with the
    deterministic bound (generic spark m+1, rank min(k, r)) attached."""
    groups: dict[tuple, dict[int, list[TrialRecord]]] = {}
    for rec in records:
        groups.setdefault((rec.algorithm, rec.m, rec.n, rec.r), {}).setdefault(rec.k, []).append(rec)
    curves = []
    for (algo, m, n, r), by_k in sorted(groups.items()):
        points = []
        for k in sorted(by_k):
            cell = by_k[k]
            wins = sum(rec.success for rec in cell)
            bound = deterministic_bound(m + 1, min(k, r))
            points.append(CurvePoint(k, len(cell), wins, wins / len(cell), bound))
        curves.append(PhaseCurve(algo, m, n, r, tuple(points)))
    return curves


def _format_float(x: float) -> str:
    return repr(float(x))


def write_records_csv(records, path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(RECORD_FIELDS)
            for t in records:
                w.writerow(
                    [t.algorithm, t.m, t.n, t.r, t.k, t.trial, int(t.success),
                     _format_float(t.runtime_ms), t.boosts_used]
                )
    except OSError as exc:
        raise OSError(f"cannot write records to {path}: {exc}") from exc


def read_records_csv(path) -> list[TrialRecord]:
    records = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != list(RECORD_FIELDS):
                raise CsvFormatError(f"{path}:1: bad header {header}")
            for lineno, row in enumerate(reader, start=2):
                try:
                    records.append(
                        TrialRecord(
                            row[0], int(row[1]), int(row[2]), int(row[3]), int(row[4]),
                            int(row[5]), bool(int(row[6])), float(row[7]), int(row[8]),
                        )
                    )
                except (IndexError, ValueError) as exc:
                    raise CsvFormatError(f"{path}:{lineno}: malformed row {row!r}") from exc
    except OSError as exc:
        raise OSError(f"cannot read records from {path}: {exc}") from exc
    return records


def write_curves_csv(curves, path) -> None:
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CURVE_FIELDS)
            for c in curves:
                for p in c.points:
                    w.writerow(
                        [c.algorithm, c.m, c.n, c.r, p.k, p.trials, p.successes,
                         _format_float(p.rate), p.bound_k]
                    )
    except OSError as exc:
        raise OSError(f"cannot write curves to {path}: {exc}") from exc


def read_curves_csv(path) -> list[PhaseCurve]:
    rows = []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header != list(CURVE_FIELDS):
                raise CsvFormatError(f"{path}:1: bad header {header}")
            for lineno, row in enumerate(reader, start=2):
                try:
                    rows.append(
                        (row[0], int(row[1]), int(row[2]), int(row[3]),
                         CurvePoint(int(row[4]), int(row[5]), int(row[6]), float(row[7]), int(row[8])))
                    )
                except (IndexError, ValueError) as exc:
                    raise CsvFormatError(f"{path}:{lineno}: malformed row {row!r}") from exc
    except OSError as exc:
        raise OSError(f"cannot read curves from {path}: {exc}") from exc
    groups: dict[tuple, list[CurvePoint]] = {}
    for algo, m, n, r, point in rows:
        groups.setdefault((algo, m, n, r), []).append(point)
    return [
        PhaseCurve(algo, m, n, r, tuple(sorted(pts, key=lambda p: p.k)))
        for (algo, m, n, r), pts in sorted(groups.items())
    ]
