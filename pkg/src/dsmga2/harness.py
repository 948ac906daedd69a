"""Adaptive population-size sweeping, batches of instances and CSV output."""

from __future__ import annotations

import csv
import io
import math
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import engine
from .engine import EngineConfig
from .problems import ProblemInstance

Runner = Callable[[ProblemInstance, EngineConfig], "engine.RunResult"]

CSV_COLUMNS = ("kind", "problem", "ell", "instance", "pop_size", "hits",
               "mean_nfe", "success_rate", "seed")


@dataclass(frozen=True)
class SweepConfig:
    hits: int = 10
    init_pop: int = 10
    init_step: int = 30
    range_frac: float = 0.05
    max_nfe: int | None = None       # per run
    master_seed: int = 0
    max_pop: int = 4096              # give up expanding past this size
    patience: int = 1                # non-improving sizes tolerated while expanding

    def __post_init__(self):
        if self.hits < 1:
            raise ValueError("hits must be >= 1")
        if self.init_step < 1:
            raise ValueError("init_step must be >= 1")
        if not 0 < self.range_frac < 1:
            raise ValueError("range_frac must lie in (0, 1)")
        if self.init_pop < 2:
            raise ValueError("init_pop must be >= 2")


@dataclass
class SizeStats:
    size: int
    nfes: list[int]
    success: bool

    @property
    def mean_nfe(self) -> float:
        return float(np.mean(self.nfes)) if self.success else math.inf

    @property
    def runs(self) -> int:
        return len(self.nfes)


@dataclass
class SweepResult:
    problem: str
    ell: int
    instance: str
    hits: int
    master_seed: int
    best_size: int | None
    best_mean_nfe: float
    trace: dict[int, SizeStats] = field(default_factory=dict)
    verification: list[engine.RunResult] | None = None

    @property
    def failed(self) -> bool:
        return self.best_size is None

    @property
    def total_runs(self) -> int:
        return sum(s.runs for s in self.trace.values())

    @property
    def total_nfe(self) -> int:
        return sum(sum(s.nfes) for s in self.trace.values())

    def verification_stats(self) -> dict[str, float]:
        if not self.verification:
            return {}
        nfe = np.array([r.nfe for r in self.verification], dtype=float)
        return {"mean": float(nfe.mean()), "median": float(np.median(nfe)),
                "min": float(nfe.min()), "max": float(nfe.max()),
                "success_rate": float(np.mean([r.success for r in self.verification]))}


def problem_key(problem: ProblemInstance) -> str:
    return f"{problem.name}/{problem.size}/{problem.instance_id}"


def run_seed(master: int, problem_id: str, size: int, run_index: int) -> int:
    """Stable per-run seed; independent of Python's hash randomization."""
    ss = np.random.SeedSequence([master, zlib.crc32(problem_id.encode()), size, run_index])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("DSMIX_THREADS", "1")))
    except ValueError:
        return 1


def _run_size(problem, size, scfg, template, runner, salt=0) -> SizeStats:
    """Up to ``hits`` runs at one size; the first failure ends the size."""
    key = problem_key(problem)
    cfgs = [replace(template, population_size=size, max_nfe=scfg.max_nfe,
                    seed=run_seed(scfg.master_seed + salt, key, size, i))
            for i in range(scfg.hits)]
    threads = _threads()
    nfes = []
    if threads > 1 and runner is engine.run:
        with ProcessPoolExecutor(threads) as pool:
            results = list(pool.map(runner, [problem] * len(cfgs), cfgs))
    else:
        results = (runner(problem, c) for c in cfgs)
    for res in results:
        nfes.append(res.nfe)
        if not res.success:
            return SizeStats(size, nfes, False)
    return SizeStats(size, nfes, True)


def sweep(problem: ProblemInstance, scfg: SweepConfig, template: EngineConfig,
          runner: Runner = engine.run) -> SweepResult:
    """Find the population size with the lowest mean NFE over ``hits``
    consecutive successes.

    Sizes are first swept upward from ``init_pop`` by ``init_step`` until the
    mean NFE stops improving. The range is then narrowed to one old step
    either side of the best size (never below ``init_pop``) and re-swept with
    half the step, until that half-width is within ``range_frac`` of the best
    size (or the step is 1).
    """
    if problem.optimum is None:
        raise ValueError("sweeping needs a problem with a known optimum")
    trace: dict[int, SizeStats] = {}

    def measure(size: int) -> float:
        if size not in trace:
            trace[size] = _run_size(problem, size, scfg, template, runner)
        return trace[size].mean_nfe

    def best() -> int | None:
        ok = [s for s in trace.values() if s.success]
        return min(ok, key=lambda s: (s.mean_nfe, s.size)).size if ok else None

    step = scfg.init_step
    size = scfg.init_pop
    worse = 0
    while size <= scfg.max_pop:
        before = best()
        nfe = measure(size)
        if before is not None:
            worse = 0 if nfe < trace[before].mean_nfe else worse + 1
            if worse > scfg.patience:
                break
        size += step

    b = best()
    while b is not None and step > 1 and step > scfg.range_frac * b:
        lo, hi = max(scfg.init_pop, b - step), b + step
        step = max(1, step // 2)
        for s in range(lo, hi + 1, step):
            measure(s)
        measure(hi)
        b = best()

    return SweepResult(problem.name, problem.size, problem.instance_id, scfg.hits,
                       scfg.master_seed, b, trace[b].mean_nfe if b is not None else math.inf,
                       dict(sorted(trace.items())))


def run_batch(problems: Sequence[ProblemInstance], scfg: SweepConfig,
              template: EngineConfig, repeats: int,
              runner: Runner = engine.run) -> list[SweepResult]:
    """Sweep each instance, then do ``repeats`` fresh runs at the best size."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    results = []
    for problem in problems:
        res = sweep(problem, scfg, template, runner)
        if not res.failed:
            key = problem_key(problem) + "/verify"
            res.verification = [
                runner(problem, replace(template, population_size=res.best_size,
                                        max_nfe=scfg.max_nfe,
                                        seed=run_seed(scfg.master_seed, key, res.best_size, i)))
                for i in range(repeats)]
        results.append(res)
    return results


def _num(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return str(int(x)) if float(x).is_integer() else f"{x:.6f}"


def emit_csv(results: Sequence[SweepResult]) -> str:
    """One ``trace`` row per size tried, a ``best`` row per instance, and a
    ``verify`` row when verification runs exist."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in sorted(results, key=lambda r: (r.problem, r.ell, r.instance)):
        head = (r.problem, r.ell, r.instance)
        for size, st in sorted(r.trace.items()):
            wins = st.runs if st.success else st.runs - 1
            w.writerow(("trace", *head, size, r.hits, _num(st.mean_nfe),
                        _num(wins / st.runs), r.master_seed))
        w.writerow(("best", *head, "" if r.failed else r.best_size, r.hits,
                    _num(r.best_mean_nfe), "0" if r.failed else "1", r.master_seed))
        if r.verification:
            v = r.verification_stats()
            w.writerow(("verify", *head, r.best_size, len(r.verification),
                        _num(v["mean"]), _num(v["success_rate"]), r.master_seed))
    return buf.getvalue()
