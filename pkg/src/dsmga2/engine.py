"""The generational DSMGA-II loop."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import (BudgetExhausted, NfeCounter, OptimumReached, Population,
                   evaluate_population, local_search, make_rng,
                   tournament_selection)
from .linkage import DSM, update_matrix
from .mixing import back_mixing, restricted_mixing
from .problems import ProblemInstance


@dataclass(frozen=True)
class EngineConfig:
    population_size: int
    selection_pressure: int = 2
    rounds: int | None = None         # mixing rounds per generation; None -> max(1, round(ell/50))
    dsm_interval: int = 1             # generations between DSM rebuilds
    max_nfe: int | None = None
    max_generations: int | None = None
    stall_generations: int | None = 20  # stop after this many generations with no member replaced
    seed: int = 0
    check_invariants: bool = False

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.selection_pressure < 2:
            raise ValueError("selection_pressure must be >= 2")
        if self.rounds is not None and self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.dsm_interval < 1:
            raise ValueError("dsm_interval must be >= 1")
        if self.stall_generations is not None and self.stall_generations < 1:
            raise ValueError("stall_generations must be >= 1")
        if self.max_nfe is not None and self.max_nfe < 0:
            raise ValueError("max_nfe must be non-negative")

    def rounds_for(self, ell: int) -> int:
        return self.rounds if self.rounds is not None else max(1, round(ell / 50))


@dataclass
class RunResult:
    success: bool
    nfe: int
    best_fitness: float
    best_bits: np.ndarray
    generations: int
    history: list[float] = field(default_factory=list)   # population best after each generation
    stats: dict[str, int] = field(default_factory=dict)
    reason: str = ""


class InvariantViolation(AssertionError):
    pass


def run(problem: ProblemInstance, cfg: EngineConfig,
        callback: Callable[[int, Population, DSM], None] | None = None) -> RunResult:
    """Run DSMGA-II until the optimum appears or the run is given up.

    A run is given up when the NFE budget or generation cap is reached, when
    the population collapses to a single genotype (nothing can change after
    that), or after ``stall_generations`` generations in which no member was
    replaced. ``callback(generation, pop, dsm)`` fires after each generation.
    """
    if problem.optimum is None and cfg.max_nfe is None and cfg.max_generations is None:
        raise ValueError("termination undefined: problem optimum unknown and no budget")
    if cfg.max_nfe == 0:
        raise ValueError("max_nfe must be positive")

    rng = make_rng(cfg.seed)
    counter = NfeCounter(problem.optimum, cfg.max_nfe)
    ell, n = problem.size, cfg.population_size
    rounds = cfg.rounds_for(ell)
    stats = dict.fromkeys(("rm_calls", "rm_accepts", "rm_trials", "bm_calls",
                           "bm_evaluations", "bm_improved", "bm_side_walks"), 0)
    history: list[float] = []
    generation = 0
    pop = None
    reason = "converged"

    try:
        pop = Population(rng.integers(0, 2, size=(n, ell), dtype=np.uint8))
        evaluate_population(pop, problem, counter)
        local_search(pop, problem, counter, rng)
        dsm = None
        stalled = 0
        while cfg.max_generations is None or generation < cfg.max_generations:
            if pop.converged():
                break
            if cfg.stall_generations is not None and stalled >= cfg.stall_generations:
                reason = "stalled"
                break
            changes = stats["rm_accepts"] + stats["bm_improved"] + stats["bm_side_walks"]
            if generation % cfg.dsm_interval == 0:
                selected = tournament_selection(pop, cfg.selection_pressure, rng)
                dsm = update_matrix(selected)
            for _ in range(rounds):
                for i in rng.permutation(n):
                    _mix_one(pop, int(i), dsm, problem, counter, rng, stats, cfg.check_invariants)
            generation += 1
            new_changes = stats["rm_accepts"] + stats["bm_improved"] + stats["bm_side_walks"]
            stalled = 0 if new_changes > changes else stalled + 1
            history.append(float(pop.fitness.max()))
            if cfg.check_invariants:
                _check(len(history) < 2 or history[-1] >= history[-2], "best fitness decreased")
                _check(pop.index_consistent(), "uniqueness index out of sync")
            if callback is not None:
                callback(generation, pop, dsm)
        else:
            reason = "max_generations"
    except OptimumReached as hit:
        return RunResult(True, counter.count, hit.fitness, hit.bits, generation,
                         history, stats, "optimum")
    except BudgetExhausted:
        reason = "budget"

    if pop is None or np.isnan(pop.fitness).all():
        return RunResult(False, counter.count, -np.inf, np.zeros(ell, np.uint8),
                         generation, history, stats, reason)
    fit = np.where(np.isnan(pop.fitness), -np.inf, pop.fitness)
    best = int(np.argmax(fit))
    return RunResult(False, counter.count, float(fit[best]), pop.bits[best].copy(),
                     generation, history, stats, reason)


def _mix_one(pop, i, dsm, problem, counter, rng, stats, check):
    before = pop.distinct() if check else None
    stats["rm_calls"] += 1
    out = restricted_mixing(pop, i, dsm, problem, counter, rng)
    stats["rm_trials"] += out.trials
    if not out.accepted:
        return
    stats["rm_accepts"] += 1
    if check:
        _check(pop.bits[i].tobytes() not in before, "restricted mixing accepted a duplicate")
    old_fit = pop.fitness.copy() if check else None
    res = back_mixing(pop, pop.bits[i].copy(), out.mask, problem, counter)
    stats["bm_calls"] += 1
    stats["bm_evaluations"] += res.evaluations
    stats["bm_improved"] += len(res.improved)
    stats["bm_side_walks"] += len(res.side_walks)
    if check:
        _check(not (res.side_walks and res.improved), "side walks applied after an improvement")
        _check(bool((pop.fitness >= old_fit).all()), "back mixing lowered a member's fitness")
        _check(all(pop.fitness[j] > old_fit[j] for j in res.improved), "non-strict improvement")
        _check(all(pop.fitness[j] == old_fit[j] for j in res.side_walks), "side walk changed fitness")


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise InvariantViolation(msg)
