"""Restricted mixing and back mixing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import NfeCounter, Population, RandomSource
from .linkage import DSM, iter_ils
from .problems import ProblemInstance


@dataclass
class MixingOutcome:
    mask: np.ndarray | None = None   # accepted mask, as indices
    improved: bool = False           # accepted trial was strictly better
    trials: int = 0

    @property
    def accepted(self) -> bool:
        return self.mask is not None


@dataclass
class BackMixingResult:
    evaluations: int = 0
    improved: list[int] = field(default_factory=list)
    side_walks: list[int] = field(default_factory=list)


def supplied_masks(pop: Population, receiver: np.ndarray, dsm: DSM, start: int):
    """Yield the linkage-set masks whose complement of ``receiver`` occurs in
    some member, stopping at the first one that does not.

    Masks come out as insertion-order index arrays of growing size.
    """
    receiver = np.asarray(receiver, dtype=np.uint8)
    supply = np.ones(len(pop), dtype=bool)
    order = []
    for v in iter_ils(dsm, start):
        supply &= pop.bits[:, v] != receiver[v]
        if not supply.any():
            return
        order.append(v)
        yield np.array(order)


def restricted_mixing(pop: Population, index: int, dsm: DSM, problem: ProblemInstance,
                      counter: NfeCounter, rng: RandomSource) -> MixingOutcome:
    """Flip the receiver ``pop[index]`` under successively larger masks.

    The first trial that is no worse and not already in the population
    replaces the receiver. Masks are grown lazily, which is equivalent to
    building the whole list first since growth never looks at trial results.
    """
    receiver = pop.bits[index].copy()
    f_receiver = pop.fitness[index]
    start = int(rng.integers(pop.ell))
    out = MixingOutcome()
    for mask in supplied_masks(pop, receiver, dsm, start):
        trial = receiver.copy()
        trial[mask] ^= 1
        f = counter.evaluate(problem, trial)
        out.trials += 1
        if f >= f_receiver and trial not in pop:
            pop.replace(index, trial, f)
            out.mask = mask
            out.improved = f > f_receiver
            break
    return out


def back_mixing(pop: Population, donor: np.ndarray, mask: np.ndarray,
                problem: ProblemInstance, counter: NfeCounter) -> BackMixingResult:
    """Copy the donor's pattern under ``mask`` into every member, in place.

    Strict improvements are kept as they are found. Equal-fitness trials are
    held back and applied only if no member improved. Members that already
    carry the donor pattern are skipped without evaluation.
    """
    mask = np.asarray(mask)
    if mask.size == 0:
        raise ValueError("mask must be non-empty")
    pattern = np.asarray(donor, dtype=np.uint8)[mask]
    result = BackMixingResult()
    pending = []
    differs = (pop.bits[:, mask] != pattern).any(axis=1)
    for j in np.flatnonzero(differs):
        trial = pop.bits[j].copy()
        trial[mask] = pattern
        f = counter.evaluate(problem, trial)
        result.evaluations += 1
        if f > pop.fitness[j]:
            pop.replace(j, trial, f)
            result.improved.append(int(j))
        elif f == pop.fitness[j]:
            pending.append((int(j), trial, f))
    if not result.improved:
        for j, trial, f in pending:
            pop.replace(j, trial, f)
            result.side_walks.append(j)
    return result
