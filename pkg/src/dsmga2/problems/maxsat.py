"""MAX-SAT over DIMACS CNF formulas; fitness is the satisfied-clause count."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from importlib import resources
from pathlib import Path

import numpy as np

from .base import ParseError, ProblemInstance, check_length


@dataclass(frozen=True, eq=False)
class CnfInstance:
    n_vars: int
    clauses: tuple[tuple[int, ...], ...]  # DIMACS literals: +v / -v, 1-based
    _var: np.ndarray = field(init=False, repr=False)
    _neg: np.ndarray = field(init=False, repr=False)
    _starts: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        lits = [lit for clause in self.clauses for lit in clause]
        if any(not clause for clause in self.clauses):
            raise ValueError("empty clause")
        if any(not 1 <= abs(lit) <= self.n_vars for lit in lits):
            raise ValueError("literal index out of range")
        lits = np.array(lits, dtype=np.int64)
        object.__setattr__(self, "_var", np.abs(lits) - 1)
        object.__setattr__(self, "_neg", (lits < 0).astype(np.uint8))
        sizes = [len(c) for c in self.clauses]
        object.__setattr__(self, "_starts", np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def __eq__(self, other):
        if not isinstance(other, CnfInstance):
            return NotImplemented
        return self.n_vars == other.n_vars and self.clauses == other.clauses


def parse_dimacs(text: str) -> CnfInstance:
    """Parse DIMACS CNF. Clauses may span lines; a lone ``%`` ends the
    formula (SATLIB's trailer)."""
    header = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    lineno = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks or toks[0].startswith("c"):
            continue
        if toks[0] == "%":
            break
        if toks[0] == "p":
            if header is not None:
                raise ParseError(lineno, "duplicate problem line")
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError(lineno, f"invalid problem line {line.strip()!r}")
            try:
                header = (int(toks[2]), int(toks[3]))
            except ValueError:
                raise ParseError(lineno, "non-integer counts in problem line") from None
            continue
        if header is None:
            raise ParseError(lineno, "clause before 'p cnf' header")
        for tok in toks:
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(lineno, f"bad literal {tok!r}") from None
            if lit == 0:
                if not current:
                    raise ParseError(lineno, "empty clause")
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > header[0]:
                raise ParseError(lineno, f"variable {abs(lit)} exceeds declared {header[0]}")
            else:
                current.append(lit)
    if header is None:
        raise ParseError(max(lineno, 1), "missing 'p cnf' header")
    if current:
        raise ParseError(lineno, "unterminated clause")
    if len(clauses) != header[1]:
        raise ParseError(lineno, f"declared {header[1]} clauses, found {len(clauses)}")
    return CnfInstance(header[0], tuple(clauses))


def dumps_dimacs(inst: CnfInstance) -> str:
    lines = [f"p cnf {inst.n_vars} {inst.m}"]
    lines += [" ".join(map(str, c)) + " 0" for c in inst.clauses]
    return "\n".join(lines) + "\n"


def load_dimacs(path: str | Path) -> CnfInstance:
    return parse_dimacs(Path(path).read_text())


def eval_maxsat(x: np.ndarray, inst: CnfInstance) -> float:
    x = check_length(x, inst.n_vars)
    lit_true = x[inst._var] ^ inst._neg
    return float(np.logical_or.reduceat(lit_true, inst._starts).sum())


def maxsat_problem(inst: CnfInstance, instance_id: str = "") -> ProblemInstance:
    # satisfiable instances only, so every clause can hold at once
    return ProblemInstance("maxsat", inst.n_vars, partial(eval_maxsat, inst=inst),
                           float(inst.m), instance_id)


def maxsat_bruteforce(inst: CnfInstance) -> tuple[int, np.ndarray]:
    """Best satisfied-clause count by enumeration; up to ~24 variables."""
    n = inst.n_vars
    if n > 24:
        raise ValueError(f"{n} variables is too many for exhaustive search")
    best, best_x = -1, None
    chunk = 1 << min(n, 16)
    for lo in range(0, 2 ** n, chunk):
        codes = np.arange(lo, min(lo + chunk, 2 ** n))
        states = ((codes[:, None] >> np.arange(n)[None, :]) & 1).astype(np.uint8)
        lit_true = states[:, inst._var] ^ inst._neg
        sat = np.logical_or.reduceat(lit_true, inst._starts, axis=1).sum(axis=1)
        i = int(np.argmax(sat))
        if sat[i] > best:
            best, best_x = int(sat[i]), states[i]
    return best, best_x


def generate_uniform_3sat(n_vars: int, n_clauses: int, seed: int,
                          satisfiable: bool = True) -> CnfInstance:
    """Uniform random 3-SAT: three distinct variables per clause, random
    signs. With ``satisfiable`` the draw is repeated until brute force finds
    a model, which limits it to small ``n_vars``."""
    rng = np.random.default_rng(seed)
    while True:
        clauses = []
        for _ in range(n_clauses):
            vs = rng.choice(n_vars, size=3, replace=False) + 1
            signs = rng.choice(np.array([-1, 1]), size=3)
            clauses.append(tuple(int(v) for v in vs * signs))
        inst = CnfInstance(n_vars, tuple(clauses))
        if not satisfiable or maxsat_bruteforce(inst)[0] == n_clauses:
            return inst


def bundled_instance(name: str = "uf20-91-r01") -> CnfInstance:
    text = resources.files("dsmga2.data").joinpath(f"{name}.cnf").read_text()
    return parse_dimacs(text)
