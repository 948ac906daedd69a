"""NK landscapes with step-shifted (k+1)-bit subfunctions.

Subfunction ``i`` reads bits ``i*s .. i*s+k`` (0-based), most significant
bit first, as an index into its lookup table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from .base import ParseError, ProblemInstance, check_length


@dataclass(frozen=True, eq=False)
class NkInstance:
    ell: int
    k: int
    s: int
    tables: np.ndarray
    seed: int = 0
    _windows: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        _check_params(self.ell, self.k, self.s)
        tables = np.asarray(self.tables, dtype=np.float64)
        if tables.shape != (self.n_sub, 2 ** (self.k + 1)):
            raise ValueError(f"tables have shape {tables.shape}, expected "
                             f"{(self.n_sub, 2 ** (self.k + 1))}")
        if tables.min() < 0 or tables.max() > 1:
            raise ValueError("table entries must lie in [0, 1]")
        object.__setattr__(self, "tables", tables)
        starts = np.arange(self.n_sub) * self.s
        object.__setattr__(self, "_windows", starts[:, None] + np.arange(self.k + 1)[None, :])

    @property
    def n_sub(self) -> int:
        return (self.ell - self.k - 1) // self.s + 1

    @property
    def weights(self) -> np.ndarray:
        return 1 << np.arange(self.k, -1, -1)

    def __eq__(self, other):
        if not isinstance(other, NkInstance):
            return NotImplemented
        return ((self.ell, self.k, self.s, self.seed) == (other.ell, other.k, other.s, other.seed)
                and np.array_equal(self.tables, other.tables))


def _check_params(ell: int, k: int, s: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 1 <= s <= k + 1:
        raise ValueError(f"step must satisfy 1 <= s <= k+1, got s={s}, k={k}")
    if ell < k + 1 or (ell - k - 1) % s:
        raise ValueError(f"(ell - k - 1) must be a non-negative multiple of s "
                         f"(ell={ell}, k={k}, s={s})")


def generate_nk(ell: int, k: int, s: int, seed: int) -> NkInstance:
    _check_params(ell, k, s)
    rng = np.random.default_rng(seed)
    n_sub = (ell - k - 1) // s + 1
    return NkInstance(ell, k, s, rng.random((n_sub, 2 ** (k + 1))), seed)


def eval_nk(x: np.ndarray, inst: NkInstance) -> float:
    x = check_length(x, inst.ell)
    codes = x[inst._windows].astype(np.int64) @ inst.weights
    return float(inst.tables[np.arange(inst.n_sub), codes].sum())


def nk_exact_optimum(inst: NkInstance) -> tuple[float, np.ndarray]:
    """Global maximum by dynamic programming along the subfunction chain.

    Consecutive windows share their last/first ``k+1-s`` bits; the DP state
    is that shared pattern.
    """
    k1 = inst.k + 1
    shift = inst.s
    overlap = k1 - shift
    prefix = np.arange(2 ** k1) >> shift  # first `overlap` bits of a window
    suffixes = np.arange(1 << overlap)

    value = inst.tables[0].copy()
    back = []
    for i in range(1, inst.n_sub):
        # rows: leading `shift` bits, columns: trailing `overlap` bits
        grid = value.reshape(1 << shift, 1 << overlap)
        hi = grid.argmax(axis=0)
        best_prev = grid[hi, suffixes]
        back.append(((hi << overlap) | suffixes)[prefix])
        value = inst.tables[i] + best_prev[prefix]

    code = int(np.argmax(value))
    best = float(value[code])
    window_codes = [code]
    for arg in reversed(back):
        code = int(arg[code])
        window_codes.append(code)
    window_codes.reverse()

    x = np.zeros(inst.ell, dtype=np.uint8)
    for i, c in enumerate(window_codes):
        x[i * shift:i * shift + k1] = (c >> np.arange(inst.k, -1, -1)) & 1
    return best, x


def nk_problem(inst: NkInstance, instance_id: str = "", optimum: float | None = None) -> ProblemInstance:
    if optimum is None:
        optimum = nk_exact_optimum(inst)[0]
    return ProblemInstance(f"nk-s{inst.s}", inst.ell, partial(eval_nk, inst=inst),
                           optimum, instance_id or f"seed{inst.seed}")


def dumps_nk(inst: NkInstance) -> str:
    lines = [f"nk {inst.ell} {inst.k} {inst.s} {inst.seed}"]
    lines += [" ".join(repr(float(v)) for v in row) for row in inst.tables]
    return "\n".join(lines) + "\n"


def loads_nk(text: str) -> NkInstance:
    lines = [(n, ln.split()) for n, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines or lines[0][1][0] != "nk" or len(lines[0][1]) != 5:
        raise ParseError(lines[0][0] if lines else 1, "expected header 'nk <ell> <k> <s> <seed>'")
    try:
        ell, k, s, seed = (int(v) for v in lines[0][1][1:])
    except ValueError:
        raise ParseError(lines[0][0], "non-integer header field") from None
    try:
        _check_params(ell, k, s)
    except ValueError as e:
        raise ParseError(lines[0][0], str(e)) from None
    n_sub = (ell - k - 1) // s + 1
    width = 2 ** (k + 1)
    rows = []
    for lineno, toks in lines[1:]:
        if len(toks) != width:
            raise ParseError(lineno, f"expected {width} table values, got {len(toks)}")
        try:
            row = [float(t) for t in toks]
        except ValueError:
            raise ParseError(lineno, "non-numeric table value") from None
        if min(row) < 0 or max(row) > 1:
            raise ParseError(lineno, "table values must lie in [0, 1]")
        rows.append(row)
    if len(rows) != n_sub:
        raise ParseError(lines[-1][0], f"expected {n_sub} subfunction rows, got {len(rows)}")
    return NkInstance(ell, k, s, np.array(rows), seed)


def load_nk(path: str | Path) -> NkInstance:
    return loads_nk(Path(path).read_text())


def save_nk(inst: NkInstance, path: str | Path) -> None:
    Path(path).write_text(dumps_nk(inst))
