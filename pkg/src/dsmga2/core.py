"""Population machinery: chromosomes, the evaluation counter, selection and
the initialization-time hill climber."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .problems import ProblemInstance

RandomSource = np.random.Generator


def make_rng(seed: int) -> RandomSource:
    return np.random.default_rng(seed)


class Terminate(Exception):
    """Raised from inside an evaluation to unwind a run."""


class OptimumReached(Terminate):
    def __init__(self, bits: np.ndarray, fitness: float):
        super().__init__(fitness)
        self.bits = bits
        self.fitness = fitness


class BudgetExhausted(Terminate):
    pass


class NfeCounter:
    """Counts fitness evaluations.

    When ``target`` is set, the evaluation that reaches it raises
    :class:`OptimumReached`; when ``budget`` is set, the evaluation that
    brings the count up to it raises :class:`BudgetExhausted`. The optimum
    check happens first, so a hit on the last budgeted call is a success.
    """

    def __init__(self, target: float | None = None, budget: int | None = None,
                 tol: float = 1e-9):
        self.count = 0
        self.target = target
        self.budget = budget
        self.tol = tol

    def evaluate(self, problem: ProblemInstance, bits: np.ndarray) -> float:
        f = problem.evaluate(bits)
        self.count += 1
        if self.target is not None and f >= self.target - self.tol:
            raise OptimumReached(bits.copy(), f)
        if self.budget is not None and self.count >= self.budget:
            raise BudgetExhausted(self.count)
        return f


@dataclass
class Chromosome:
    bits: np.ndarray
    fitness: float | None = None

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None

    def flip(self, indices) -> None:
        self.bits[indices] ^= 1
        self.fitness = None

    def key(self) -> bytes:
        return self.bits.tobytes()


class Population:
    """Fixed-size population stored as an ``(n, ell)`` uint8 matrix.

    Keeps a content-keyed multiset of members so that ``bits in pop`` is a
    lookup by bit pattern rather than by position.
    """

    def __init__(self, bits: np.ndarray, fitness: np.ndarray | None = None):
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise ValueError("population bits must be a 2-D array")
        self.bits = np.ascontiguousarray(bits)
        if fitness is None:
            fitness = np.full(len(bits), np.nan)
        self.fitness = np.asarray(fitness, dtype=np.float64).copy()
        self._index = Counter(row.tobytes() for row in self.bits)

    @classmethod
    def from_chromosomes(cls, members: list[Chromosome]) -> Population:
        bits = np.array([c.bits for c in members], dtype=np.uint8)
        fit = [np.nan if c.fitness is None else c.fitness for c in members]
        return cls(bits, np.array(fit))

    @property
    def ell(self) -> int:
        return self.bits.shape[1]

    def __len__(self) -> int:
        return self.bits.shape[0]

    def __getitem__(self, i: int) -> Chromosome:
        f = self.fitness[i]
        return Chromosome(self.bits[i].copy(), None if np.isnan(f) else float(f))

    def __contains__(self, bits) -> bool:
        return np.asarray(bits, dtype=np.uint8).tobytes() in self._index

    def distinct(self) -> set[bytes]:
        return set(self._index)

    def all_evaluated(self) -> bool:
        return not np.isnan(self.fitness).any()

    def set_fitness(self, i: int, fitness: float) -> None:
        self.fitness[i] = fitness

    def replace(self, i: int, bits: np.ndarray, fitness: float) -> None:
        old = self.bits[i].tobytes()
        self._index[old] -= 1
        if not self._index[old]:
            del self._index[old]
        self.bits[i] = bits
        self.fitness[i] = fitness
        self._index[self.bits[i].tobytes()] += 1

    def converged(self) -> bool:
        return bool((self.bits == self.bits[0]).all())

    def index_consistent(self) -> bool:
        return self._index == Counter(row.tobytes() for row in self.bits)

    def best(self) -> int:
        return int(np.argmax(self.fitness))


def evaluate_population(pop: Population, problem: ProblemInstance,
                        counter: NfeCounter) -> None:
    for i in range(len(pop)):
        if np.isnan(pop.fitness[i]):
            pop.set_fitness(i, counter.evaluate(problem, pop.bits[i]))


def tournament_selection(pop: Population, pressure: int,
                         rng: RandomSource) -> Population:
    """|P| independent tournaments drawn with replacement.

    Ties go to the first-drawn candidate. The result feeds model building only.
    """
    n = len(pop)
    if n == 0:
        raise ValueError("cannot select from an empty population")
    if pressure < 2:
        raise ValueError(f"selection pressure must be >= 2, got {pressure}")
    if not pop.all_evaluated():
        raise ValueError("all members must be evaluated before selection")
    draws = rng.integers(0, n, size=(n, pressure))
    winners = draws[np.arange(n), np.argmax(pop.fitness[draws], axis=1)]
    return Population(pop.bits[winners], pop.fitness[winners])


def local_search(pop: Population, problem: ProblemInstance,
                 counter: NfeCounter, rng: RandomSource) -> Population:
    """First-improvement bit-flip hill climbing, in place.

    Each pass visits the positions in a fresh random order and keeps a flip
    only on strict improvement. A member is done after a pass with no change.
    """
    ell = pop.ell
    for i in range(len(pop)):
        x = pop.bits[i].copy()
        fx = pop.fitness[i]
        changed = False
        while True:
            improved = False
            for j in rng.permutation(ell):
                x[j] ^= 1
                f = counter.evaluate(problem, x)
                if f > fx:
                    fx = f
                    improved = changed = True
                else:
                    x[j] ^= 1
            if not improved:
                break
        if changed:
            pop.replace(i, x, fx)
    return pop
