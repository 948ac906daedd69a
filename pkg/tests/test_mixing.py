import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dsmga2.core import NfeCounter, Population, evaluate_population, make_rng
from dsmga2.linkage import DSM, update_matrix
from dsmga2.mixing import back_mixing, restricted_mixing, supplied_masks
from dsmga2.problems import ProblemInstance, concatenated_trap, folded_trap


def rows(*strings):
    return np.array([[int(c) for c in s] for s in strings], dtype=np.uint8)


def chain_dsm(ell):
    """Growth from vertex 0 visits 0, 1, 2, ... in order."""
    mi = np.zeros((ell, ell))
    for i in range(ell - 1):
        mi[i, i + 1] = mi[i + 1, i] = 1.0
    return DSM(mi, 0)


class FixedStart:
    def __init__(self, start):
        self.start = start

    def integers(self, *args, **kwargs):
        return self.start


class CountingProblem:
    def __init__(self, problem):
        self.inner = problem
        self.calls = 0

    def __getattr__(self, name):
        return getattr(self.inner, name)

    def evaluate(self, x):
        self.calls += 1
        return self.inner.evaluate(x)


def evaluated(bits, problem):
    pop = Population(bits)
    evaluate_population(pop, problem, NfeCounter())
    return pop


FIG2 = rows("01000", "11101", "00110", "10110", "11011")


def test_example_population_mask_eligibility():
    pop = Population(FIG2)
    masks = [sorted(m + 1) for m in supplied_masks(pop, pop.bits[3], chain_dsm(5), 0)]
    assert masks == [[1], [1, 2], [1, 2, 3], [1, 2, 3, 4]]


def test_example_population_trials_stop_at_fourth_mask():
    flat = ProblemInstance("flat", 5, lambda x: 0.0)
    pop = evaluated(FIG2.copy(), flat)
    # make every trial look worse than the receiver so all eligible masks are tried
    pop.set_fitness(3, 1.0)
    counter = NfeCounter()
    out = restricted_mixing(pop, 3, chain_dsm(5), flat, counter, FixedStart(0))
    assert out.trials == 4 and counter.count == 4
    assert not out.accepted
    assert np.array_equal(pop.bits, FIG2)


def test_converged_population_gives_no_trials():
    problem = concatenated_trap(10)
    pop = evaluated(np.zeros((4, 10), np.uint8), problem)
    counter = NfeCounter()
    out = restricted_mixing(pop, 0, update_matrix(pop), problem, counter, make_rng(0))
    assert out.trials == 0 and counter.count == 0 and not out.accepted


def test_trap_block_flip_is_accepted():
    problem = concatenated_trap(10)
    pop = evaluated(rows("0000011111", "1111100000", "1111101010"), problem)
    assert pop.fitness[0] == pytest.approx(1.8)
    out = restricted_mixing(pop, 0, chain_dsm(10), problem, NfeCounter(), FixedStart(0))
    assert out.accepted and out.improved
    assert sorted(out.mask) == [0, 1, 2, 3, 4]
    assert out.trials == 5
    assert pop.bits[0].all() and pop.fitness[0] == 2.0


def test_duplicate_trial_is_rejected():
    problem = concatenated_trap(5)
    pop = evaluated(rows("00000", "11111"), problem)
    out = restricted_mixing(pop, 0, chain_dsm(5), problem, NfeCounter(), FixedStart(0))
    # only the full flip is no worse, and it already exists in the population
    assert not out.accepted and out.trials == 5


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_restricted_mixing_invariants(seed):
    rng = np.random.default_rng(seed)
    problem = concatenated_trap(15)
    pop = evaluated(rng.integers(0, 2, (8, 15)).astype(np.uint8), problem)
    dsm = update_matrix(pop)
    idx = int(rng.integers(8))
    before_bits, before_f = pop.bits.copy(), pop.fitness[idx]
    seen = pop.distinct()
    out = restricted_mixing(pop, idx, dsm, problem, NfeCounter(), make_rng(seed))
    assert pop.fitness[idx] >= before_f
    assert pop.index_consistent()
    if out.accepted:
        assert pop.bits[idx].tobytes() not in seen
        changed = np.flatnonzero(pop.bits[idx] != before_bits[idx])
        assert sorted(changed) == sorted(out.mask)
        assert out.improved == (pop.fitness[idx] > before_f)
    else:
        assert np.array_equal(pop.bits, before_bits)


def test_back_mixing_skips_members_carrying_pattern():
    problem = CountingProblem(concatenated_trap(10))
    pop = evaluated(rows("1111100000", "1111101010", "1111111111"), problem)
    problem.calls = 0
    res = back_mixing(pop, pop.bits[2].copy(), np.arange(5), problem, NfeCounter())
    assert res.evaluations == 0 and problem.calls == 0
    assert not res.improved and not res.side_walks


def test_back_mixing_strict_improvement_discards_ties():
    problem = concatenated_trap(10)
    pop = evaluated(rows("1111100000", "0000011111", "1110011111", "1111111111"), problem)
    donor = pop.bits[0].copy()
    counter = NfeCounter()
    res = back_mixing(pop, donor, np.arange(5), problem, counter)
    # member 1: 00000 -> 11111 is 0.8 -> 1.0; member 2: 11100 (0.2) -> 1.0; member 0/3 skipped
    assert res.improved == [1, 2] and res.side_walks == []
    assert res.evaluations == counter.count == 2
    assert pop.bits[1].all()


def test_back_mixing_tie_discarded_when_other_improves():
    problem = folded_trap(12)
    pop = evaluated(rows("000000000000", "111111000000", "100000000000"), problem)
    donor = rows("111111000000")[0]
    res = back_mixing(pop, donor, np.arange(6), problem, NfeCounter())
    # member 0 ties (1 -> 1), member 2 improves (0 -> 1)
    assert res.improved == [2] and res.side_walks == []
    assert not pop.bits[0].any()


def test_back_mixing_plateau_accepts_all_ties():
    problem = folded_trap(12)
    pop = evaluated(rows("000000000000", "000000111111", "111111111111"), problem)
    donor = pop.bits[2].copy()
    res = back_mixing(pop, donor, np.arange(6), problem, NfeCounter())
    assert res.improved == [] and res.side_walks == [0, 1]
    assert pop.bits[:, :6].all()
    assert pop.index_consistent()


def test_back_mixing_rejects_empty_mask():
    flat = ProblemInstance("flat", 2, lambda x: 0.0)
    pop = evaluated(rows("00"), flat)
    with pytest.raises(ValueError):
        back_mixing(pop, pop.bits[0], np.array([], int), flat, NfeCounter())


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_back_mixing_invariants(seed):
    rng = np.random.default_rng(seed)
    problem = folded_trap(12)
    pop = evaluated(rng.integers(0, 2, (10, 12)).astype(np.uint8), problem)
    donor = rng.integers(0, 2, 12).astype(np.uint8)
    mask = rng.choice(12, size=int(rng.integers(1, 13)), replace=False)
    before = pop.fitness.copy()
    min_before = before.min()
    counter = NfeCounter()
    res = back_mixing(pop, donor, mask, problem, counter)
    assert counter.count == res.evaluations <= len(pop)
    assert (pop.fitness >= before).all()
    assert pop.fitness.min() >= min_before
    assert all(pop.fitness[j] > before[j] for j in res.improved)
    assert all(pop.fitness[j] == before[j] for j in res.side_walks)
    assert not (res.improved and res.side_walks)
    assert pop.index_consistent()
