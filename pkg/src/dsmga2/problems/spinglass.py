"""+-J Ising spin glass on a square grid.

Bit ``b`` maps to spin ``2b - 1``. Fitness is the negated energy, so the
ground state is the fitness maximum.

File format::

    spin <side>
    ground <energy>        # optional
    <i> <j> <J>            # one line per coupled pair, 0-based, J in {+1, -1}
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial
from pathlib import Path

import numpy as np

from .base import ParseError, ProblemInstance, check_length


@dataclass(frozen=True, eq=False)
class SpinGlassInstance:
    side: int
    edges: np.ndarray      # (E, 2) spin indices, i < j
    couplings: np.ndarray  # (E,) values in {+1, -1}
    ground_energy: float | None = None

    @property
    def n_spins(self) -> int:
        return self.side * self.side

    def coupling_map(self) -> dict[tuple[int, int], int]:
        return {(int(i), int(j)): int(c) for (i, j), c in zip(self.edges, self.couplings)}

    def __eq__(self, other):
        if not isinstance(other, SpinGlassInstance):
            return NotImplemented
        return (self.side == other.side and self.ground_energy == other.ground_energy
                and self.coupling_map() == other.coupling_map())


def grid_edges(side: int, periodic: bool = False) -> list[tuple[int, int]]:
    """Nearest-neighbour pairs (i < j), right and down."""
    edges = set()
    for r in range(side):
        for c in range(side):
            i = r * side + c
            for rr, cc in ((r, c + 1), (r + 1, c)):
                if periodic:
                    rr, cc = rr % side, cc % side
                elif rr >= side or cc >= side:
                    continue
                j = rr * side + cc
                if i != j:
                    edges.add((min(i, j), max(i, j)))
    return sorted(edges)


def generate_spinglass(side: int, seed: int, with_ground: bool = True) -> SpinGlassInstance:
    """Free-boundary grid with uniform random +-1 couplings."""
    rng = np.random.default_rng(seed)
    edges = np.array(grid_edges(side), dtype=np.int64).reshape(-1, 2)
    couplings = rng.choice(np.array([-1, 1]), size=len(edges))
    inst = SpinGlassInstance(side, edges, couplings)
    if with_ground and side <= 10:
        inst = SpinGlassInstance(side, edges, couplings, ground_state_dp(inst)[0])
    return inst


def eval_spinglass(x: np.ndarray, inst: SpinGlassInstance) -> float:
    x = check_length(x, inst.n_spins)
    s = 2 * x.astype(np.int64) - 1
    return float((s[inst.edges[:, 0]] * s[inst.edges[:, 1]] * inst.couplings).sum())


def energy(x: np.ndarray, inst: SpinGlassInstance) -> float:
    return -eval_spinglass(x, inst)


def spinglass_problem(inst: SpinGlassInstance, instance_id: str = "") -> ProblemInstance:
    optimum = None if inst.ground_energy is None else -inst.ground_energy
    return ProblemInstance("spin", inst.n_spins, partial(eval_spinglass, inst=inst),
                           optimum, instance_id)


def ground_state_bruteforce(inst: SpinGlassInstance) -> tuple[float, np.ndarray]:
    """Exhaustive minimum energy; practical up to ~24 spins."""
    n = inst.n_spins
    if n > 24:
        raise ValueError(f"{n} spins is too many for exhaustive search")
    states = ((np.arange(2 ** n)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int8)
    spins = 2 * states - 1
    fit = (spins[:, inst.edges[:, 0]] * spins[:, inst.edges[:, 1]] * inst.couplings).sum(axis=1)
    best = int(np.argmax(fit))
    return -float(fit[best]), states[best].astype(np.uint8)


def ground_state_dp(inst: SpinGlassInstance) -> tuple[float, np.ndarray]:
    """Exact minimum energy by row-by-row transfer over 2**side row states.

    Handles any edge set confined to vertical neighbours between consecutive
    rows plus arbitrary pairs within a row; periodic vertical wrap is not
    supported.
    """
    n = inst.side
    rows = np.arange(2 ** n)
    row_spins = 2 * ((rows[:, None] >> np.arange(n)[None, :]) & 1) - 1  # (2^n, n)

    intra = [np.zeros(2 ** n) for _ in range(n)]
    inter = [np.zeros((2 ** n, 2 ** n)) for _ in range(n - 1)]
    for (i, j), c in zip(inst.edges, inst.couplings):
        ri, ci = divmod(int(i), n)
        rj, cj = divmod(int(j), n)
        if ri == rj:
            intra[ri] += c * row_spins[:, ci] * row_spins[:, cj]
        elif rj == ri + 1:
            inter[ri] += c * np.outer(row_spins[:, ci], row_spins[:, cj])
        else:
            raise ValueError("row transfer needs edges within or between adjacent rows")

    value = intra[0].copy()
    back = []
    for r in range(1, n):
        total = value[:, None] + inter[r - 1]
        arg = total.argmax(axis=0)
        back.append(arg)
        value = total[arg, rows] + intra[r]
    state = int(np.argmax(value))
    fit = float(value[state])
    chosen = [state]
    for arg in reversed(back):
        state = int(arg[state])
        chosen.append(state)
    chosen.reverse()
    x = np.concatenate([(row_spins[c] + 1) // 2 for c in chosen]).astype(np.uint8)
    return -fit, x


def dumps_spinglass(inst: SpinGlassInstance) -> str:
    lines = [f"spin {inst.side}"]
    if inst.ground_energy is not None:
        g = inst.ground_energy
        lines.append(f"ground {int(g) if float(g).is_integer() else g}")
    lines += [f"{i} {j} {c:+d}" for (i, j), c in zip(inst.edges, inst.couplings)]
    return "\n".join(lines) + "\n"


def loads_spinglass(text: str) -> SpinGlassInstance:
    side = None
    ground = None
    seen: dict[tuple[int, int], int] = {}
    allowed: set[tuple[int, int]] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks or toks[0].startswith("#"):
            continue
        if side is None:
            if toks[0] != "spin" or len(toks) != 2 or not toks[1].isdigit() or int(toks[1]) < 2:
                raise ParseError(lineno, "expected header 'spin <side>' with side >= 2")
            side = int(toks[1])
            allowed = set(grid_edges(side)) | set(grid_edges(side, periodic=True))
            continue
        if toks[0] == "ground":
            if len(toks) != 2 or ground is not None or seen:
                raise ParseError(lineno, "misplaced or malformed 'ground' line")
            try:
                ground = float(toks[1])
            except ValueError:
                raise ParseError(lineno, f"bad ground energy {toks[1]!r}") from None
            continue
        if len(toks) != 3:
            raise ParseError(lineno, "expected 'i j J'")
        try:
            i, j, c = (int(t) for t in toks)
        except ValueError:
            raise ParseError(lineno, "non-integer field") from None
        if c not in (1, -1):
            raise ParseError(lineno, f"coupling must be +1 or -1, got {c}")
        key = (min(i, j), max(i, j))
        if key not in allowed:
            raise ParseError(lineno, f"spins {i} and {j} are not grid neighbours")
        if key in seen:
            raise ParseError(lineno, f"duplicate edge {key}")
        seen[key] = c
    if side is None:
        raise ParseError(1, "missing 'spin <side>' header")
    missing = set(grid_edges(side)) - set(seen)
    if missing:
        raise ParseError(lineno, f"{len(missing)} grid edges missing, e.g. {min(missing)}")
    edges = np.array(list(seen), dtype=np.int64).reshape(-1, 2)
    return SpinGlassInstance(side, edges, np.array(list(seen.values()), dtype=np.int64), ground)


def load_spinglass(path: str | Path) -> SpinGlassInstance:
    return loads_spinglass(Path(path).read_text())


def save_spinglass(inst: SpinGlassInstance, path: str | Path) -> None:
    Path(path).write_text(dumps_spinglass(inst))

