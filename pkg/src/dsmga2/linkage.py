"""Pairwise mutual-information DSM and greedy incremental linkage sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .core import Population


@dataclass(frozen=True)
class DSM:
    mi: np.ndarray
    source_size: int

    @property
    def ell(self) -> int:
        return self.mi.shape[0]

    def to_csv(self) -> str:
        return "\n".join(",".join(f"{v:.6g}" for v in row) for row in self.mi) + "\n"


def update_matrix(selected: Population | np.ndarray) -> DSM:
    """Mutual information (base 2) between every pair of bit columns.

    Works from the four joint counts of each pair. Each term is
    ``(n_xy/n) * log2(n_xy * n / (n_x * n_y))`` with integer-valued products,
    so empirically independent columns give exactly zero.
    """
    bits = selected.bits if isinstance(selected, Population) else np.asarray(selected)
    if bits.ndim != 2 or bits.shape[0] == 0:
        raise ValueError("cannot build a DSM from an empty population")
    n = bits.shape[0]
    x = bits.astype(np.float64)
    ones = x.sum(axis=0)
    zeros = n - ones
    n11 = x.T @ x
    n10 = ones[:, None] - n11
    n01 = ones[None, :] - n11
    n00 = n - ones[:, None] - ones[None, :] + n11

    mi = np.zeros_like(n11)
    for joint, ci, cj in ((n00, zeros, zeros), (n01, zeros, ones),
                          (n10, ones, zeros), (n11, ones, ones)):
        denom = ci[:, None] * cj[None, :]
        ok = joint > 0
        term = np.zeros_like(joint)
        term[ok] = joint[ok] / n * np.log2(joint[ok] * n / denom[ok])
        mi += term
    np.fill_diagonal(mi, 0.0)
    mi = np.maximum(mi, 0.0)
    mi = (mi + mi.T) / 2
    return DSM(mi, n)


def next_vertex(dsm: DSM, current: Sequence[int]) -> int:
    """Vertex outside ``current`` with the largest mean MI to it; ties go to
    the lowest index."""
    current = np.asarray(current, dtype=np.int64)
    if len(current) == 0 or len(np.unique(current)) >= dsm.ell:
        raise ValueError("current set must be non-empty and not cover every vertex")
    score = dsm.mi[:, current].sum(axis=1) / len(current)
    score[current] = -np.inf
    return int(np.argmax(score))


def iter_ils(dsm: DSM, start: int) -> Iterator[int]:
    """Yield vertices in greedy insertion order, starting with ``start``.

    The k-th mask of the linkage set is the first k yielded vertices.
    """
    ell = dsm.ell
    if not 0 <= start < ell:
        raise ValueError(f"start vertex {start} outside [0, {ell})")
    total = dsm.mi[start].copy()
    taken = np.zeros(ell, dtype=bool)
    taken[start] = True
    yield start
    for size in range(1, ell):
        score = np.where(taken, -np.inf, total / size)
        v = int(np.argmax(score))
        yield v
        taken[v] = True
        total += dsm.mi[v]


@dataclass(frozen=True)
class MaskSequence:
    """Strictly nested masks stored as an insertion order; mask ``i`` is
    ``order[:i + 1]``."""

    order: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.order)

    def __getitem__(self, i: int) -> frozenset[int]:
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return frozenset(self.order[:i + 1])

    @property
    def masks(self) -> list[frozenset[int]]:
        return [self[i] for i in range(len(self))]


def grow_ils(dsm: DSM, start: int,
             predicate: Callable[[frozenset[int]], bool] = lambda mask: True) -> MaskSequence:
    """Grow masks from ``start`` while ``predicate`` holds for the newest one.

    If the singleton ``{start}`` already fails, the sequence is empty.
    """
    order: list[int] = []
    for v in iter_ils(dsm, start):
        if not predicate(frozenset(order + [v])):
            break
        order.append(v)
    return MaskSequence(tuple(order))
