"""Seeded Monte-Carlo symbol-error-rate estimation over SNR sweeps.

Every (SNR point, trial) pair gets its own RNG substream keyed on
(seed, snr_index, trial_index), so estimates are byte-identical no matter
how trials are chunked across workers, and sweeps run with different
solvers on the same config see identical channels, messages, and noise
(paired curves).

Per trial: a Rayleigh channel H with unit-variance complex-normal entries,
uniform messages, and unit-variance complex-normal noise z. The solver's
interleaved real vector x (entries in {-1, 0, 1}) is mapped back to complex
antennas and each user k observes

    y_k = sqrt(rho) * (H x)_k + z_k,

where rho = snr_linear / (2 Nt) under the default "total" normalization: a
fully active ternary vector then radiates total power snr_linear, and
switched-off antennas genuinely save power rather than being renormalized
away. PSK decision regions are scale-invariant cones, so decoding needs no
gain control.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

import numpy as np

from .geometry import build_constellation, build_feasibility_matrix, decode_all
from .precoders import (
    ComplexityReport,
    IhtConfig,
    MultiplyCounter,
    complexity_formulas,
    ensure_search_tractable,
    exhaustive_search,
    qzf_precode,
    two_stage_precode,
)
from .reallift import unlift_vector

__all__ = [
    "SimConfig",
    "SweepPoint",
    "SerCurve",
    "TrialResult",
    "SOLVERS",
    "register_solver",
    "available_solvers",
    "trial_rng",
    "draw_channel",
    "draw_noise",
    "run_trial",
    "run_sweep",
    "compare_sweeps",
    "check_solver_config",
]

_POWER_NORMS = ("total", "active")


@dataclass(frozen=True)
class SimConfig:
    """Full description of one SER sweep (sufficient to reproduce it bit for bit)."""

    nt: int = 128
    k: int = 16
    m: int = 4
    snr_db: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0)
    trials: int = 1000
    seed: int = 0
    solver: str = "two-stage"
    delta: float = 3.0
    tmax: int = 12
    power_norm: str = "total"
    search_cap: int = 16

    def __post_init__(self) -> None:
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        if self.nt < 1:
            raise ValueError(f"nt must be >= 1, got {self.nt}")
        if not 1 <= self.k <= self.nt:
            raise ValueError(f"need 1 <= k <= nt, got k={self.k}, nt={self.nt}")
        if self.m < 2:
            raise ValueError(f"constellation order must be >= 2, got {self.m}")
        if len(self.snr_db) == 0:
            raise ValueError("snr_db must contain at least one point")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed}")
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if self.tmax < 1:
            raise ValueError(f"tmax must be >= 1, got {self.tmax}")
        if self.power_norm not in _POWER_NORMS:
            raise ValueError(f"power_norm must be one of {_POWER_NORMS}, got {self.power_norm!r}")


class TrialResult(NamedTuple):
    errors: np.ndarray  # bool, one flag per user symbol
    report: ComplexityReport


@dataclass(frozen=True)
class SweepPoint:
    """Aggregated statistics of one SNR point."""

    snr_db: float
    symbol_errors: int
    symbols_sent: int
    mean_tstar: float | None
    mean_chi: float | None

    @property
    def ser(self) -> float:
        return self.symbol_errors / self.symbols_sent


@dataclass(frozen=True)
class SerCurve:
    """One solver's SER estimates over a sweep, plus instrumented cost."""

    solver: str
    points: tuple[SweepPoint, ...]
    mean_multiplies: float | None = None


# ---------------------------------------------------------------------------
# solver registry
# ---------------------------------------------------------------------------

SolverAdapter = Callable[[np.ndarray, np.ndarray, SimConfig], "tuple[np.ndarray, ComplexityReport]"]

SOLVERS: dict[str, SolverAdapter] = {}


def register_solver(name: str, fn: SolverAdapter) -> None:
    """Add a solver adapter (H, messages, cfg) -> (x, report) under `name`."""
    SOLVERS[name] = fn


def available_solvers() -> tuple[str, ...]:
    return tuple(sorted(SOLVERS))


def _solve_two_stage(H, msgs, cfg: SimConfig):
    return two_stage_precode(H, msgs, cfg.m, IhtConfig(delta=cfg.delta, tmax=cfg.tmax))


def _solve_qzf(H, msgs, cfg: SimConfig):
    return qzf_precode(H, msgs, cfg.m), ComplexityReport(solver="qzf", multiplies=None, formula=None)


def _make_exhaustive_adapter(alphabet: str) -> SolverAdapter:
    def solve(H, msgs, cfg: SimConfig):
        fm = build_feasibility_matrix(H, msgs, cfg.m)
        counter = MultiplyCounter()
        x, _ = exhaustive_search(fm, alphabet, cap=cfg.search_cap, counter=counter)
        chi = complexity_formulas(fm.nt, fm.k, 0)
        formula = chi.binary_exhaustive if alphabet == "binary" else chi.ternary_exhaustive
        return x, ComplexityReport(
            solver=f"exhaustive-{alphabet}", multiplies=counter.count, formula=formula
        )

    return solve


register_solver("two-stage", _solve_two_stage)
register_solver("qzf", _solve_qzf)
register_solver("exhaustive-binary", _make_exhaustive_adapter("binary"))
register_solver("exhaustive-ternary", _make_exhaustive_adapter("ternary"))


def check_solver_config(cfg: SimConfig) -> None:
    """Raise early for configs a sweep would refuse on the first trial.

    Unknown solver names raise ValueError; exhaustive solvers above the
    search cap raise SolverRefusal with the enumeration cost.
    """
    if cfg.solver not in SOLVERS:
        raise ValueError(f"unknown solver {cfg.solver!r}; available: {', '.join(available_solvers())}")
    if cfg.solver == "exhaustive-binary":
        ensure_search_tractable(cfg.nt, cfg.k, "binary", cap=cfg.search_cap)
    elif cfg.solver == "exhaustive-ternary":
        ensure_search_tractable(cfg.nt, cfg.k, "ternary", cap=cfg.search_cap)


# ---------------------------------------------------------------------------
# randomness
# ---------------------------------------------------------------------------


def trial_rng(seed: int, snr_index: int, trial_index: int) -> np.random.Generator:
    """Independent substream for one (SNR point, trial) pair."""
    return np.random.default_rng([int(seed), int(snr_index), int(trial_index)])


def draw_channel(k: int, nt: int, rng: np.random.Generator) -> np.ndarray:
    """K x Nt Rayleigh channel: entries complex normal, unit variance."""
    return math.sqrt(0.5) * (rng.standard_normal((k, nt)) + 1j * rng.standard_normal((k, nt)))


def draw_noise(k: int, rng: np.random.Generator) -> np.ndarray:
    """Length-K complex normal noise, unit variance."""
    return math.sqrt(0.5) * (rng.standard_normal(k) + 1j * rng.standard_normal(k))


# ---------------------------------------------------------------------------
# trials and sweeps
# ---------------------------------------------------------------------------


def run_trial(cfg: SimConfig, snr_db: float, rng: np.random.Generator) -> TrialResult:
    """One channel draw, solve, transmit, decode; returns per-user error flags.

    snr_db may be -inf (pure noise) or +inf (noiseless transmission). The
    channel, messages, and noise are drawn before the solver runs, so
    different solvers fed the same substream see identical realizations.
    """
    if cfg.solver not in SOLVERS:
        raise ValueError(f"unknown solver {cfg.solver!r}; available: {', '.join(available_solvers())}")
    H = draw_channel(cfg.k, cfg.nt, rng)
    msgs = rng.integers(0, cfg.m, size=cfg.k)
    z = draw_noise(cfg.k, rng)

    x, report = SOLVERS[cfg.solver](H, msgs, cfg)
    r = H @ unlift_vector(x)

    snr_linear = 10.0 ** (float(snr_db) / 10.0)
    if math.isinf(snr_linear):
        y = r
    else:
        if cfg.power_norm == "active":
            denom = max(int(np.count_nonzero(x)), 1)
        else:
            denom = 2 * cfg.nt
        y = math.sqrt(snr_linear / denom) * r + z

    detected = decode_all(y, build_constellation(cfg.m))
    return TrialResult(errors=detected != msgs, report=report)


@dataclass(frozen=True)
class _ChunkSums:
    snr_index: int
    trials: int
    errors: int
    tstar_sum: int | None
    chi_sum: int | None
    mult_sum: int | None

    @staticmethod
    def merge(a: "_ChunkSums", b: "_ChunkSums") -> "_ChunkSums":
        def add(x, y):
            return None if x is None or y is None else x + y

        return _ChunkSums(
            snr_index=a.snr_index,
            trials=a.trials + b.trials,
            errors=a.errors + b.errors,
            tstar_sum=add(a.tstar_sum, b.tstar_sum),
            chi_sum=add(a.chi_sum, b.chi_sum),
            mult_sum=add(a.mult_sum, b.mult_sum),
        )


def _run_chunk(cfg: SimConfig, snr_index: int, lo: int, hi: int) -> _ChunkSums:
    snr_db = cfg.snr_db[snr_index]
    errors = 0
    tstar_sum: int | None = 0
    chi_sum: int | None = 0
    mult_sum: int | None = 0
    for t in range(lo, hi):
        res = run_trial(cfg, snr_db, trial_rng(cfg.seed, snr_index, t))
        errors += int(res.errors.sum())
        rep = res.report
        tstar_sum = None if rep.tstar is None or tstar_sum is None else tstar_sum + rep.tstar
        chi_sum = None if rep.formula is None or chi_sum is None else chi_sum + rep.formula
        mult_sum = None if rep.multiplies is None or mult_sum is None else mult_sum + rep.multiplies
    return _ChunkSums(snr_index, hi - lo, errors, tstar_sum, chi_sum, mult_sum)


def _run_chunk_star(args) -> _ChunkSums:
    return _run_chunk(*args)


def run_sweep(cfg: SimConfig, workers: int = 1) -> SerCurve:
    """Estimate SER at every SNR point of the config.

    Integer error counts and cost sums are accumulated per point and divided
    once at the end, so results do not depend on `workers` or chunking.
    """
    check_solver_config(cfg)
    workers = max(int(workers), 1)
    chunk = max(1, math.ceil(cfg.trials / max(workers, 1) / 2)) if workers > 1 else cfg.trials
    tasks = [
        (cfg, i, lo, min(lo + chunk, cfg.trials))
        for i in range(len(cfg.snr_db))
        for lo in range(0, cfg.trials, chunk)
    ]
    if workers == 1:
        sums = [_run_chunk_star(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            sums = list(pool.map(_run_chunk_star, tasks))

    merged: dict[int, _ChunkSums] = {}
    for s in sums:
        merged[s.snr_index] = s if s.snr_index not in merged else _ChunkSums.merge(merged[s.snr_index], s)

    points = []
    mult_total: int | None = 0
    for i, snr in enumerate(cfg.snr_db):
        s = merged[i]
        symbols = s.trials * cfg.k
        points.append(
            SweepPoint(
                snr_db=snr,
                symbol_errors=s.errors,
                symbols_sent=symbols,
                mean_tstar=None if s.tstar_sum is None else s.tstar_sum / s.trials,
                mean_chi=None if s.chi_sum is None else s.chi_sum / s.trials,
            )
        )
        mult_total = None if s.mult_sum is None or mult_total is None else mult_total + s.mult_sum
    mean_mult = None if mult_total is None else mult_total / (cfg.trials * len(cfg.snr_db))
    return SerCurve(solver=cfg.solver, points=tuple(points), mean_multiplies=mean_mult)


def compare_sweeps(cfg: SimConfig, solvers, workers: int = 1) -> list[SerCurve]:
    """Run one sweep per solver on identical realizations (paired curves)."""
    return [run_sweep(replace(cfg, solver=s), workers=workers) for s in solvers]
