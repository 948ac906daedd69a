"""Deceptive trap families. Block values are summed as integer numerators
and divided once, so equal block multisets give bit-identical fitness."""

from __future__ import annotations

from dataclasses import dataclass
from functools import partial

import numpy as np

from .base import ProblemInstance, check_length

# numerators over 5 for the bipolar 6-bit block, indexed by unitation
_FOLDED_NUM = np.array([5, 0, 2, 4, 2, 0, 5])


@dataclass(frozen=True)
class TrapConfig:
    m: int
    k: int

    def __post_init__(self):
        if self.m < 1 or self.k < 2:
            raise ValueError(f"invalid trap config m={self.m}, k={self.k}")


def trap_block(u: int, k: int) -> float:
    return 1.0 if u == k else (k - 1 - u) / k


def _trap_sum(u: np.ndarray, k: int) -> float:
    num = np.where(u == k, k, k - 1 - u)
    return int(num.sum()) / k


def eval_trap(x: np.ndarray, cfg: TrapConfig) -> float:
    x = check_length(x, cfg.m * cfg.k)
    return _trap_sum(x.reshape(cfg.m, cfg.k).sum(axis=1), cfg.k)


def cyclic_blocks(cfg: TrapConfig) -> np.ndarray:
    """Index matrix of the wrapped, (k-1)-strided blocks."""
    ell = cfg.m * (cfg.k - 1)
    starts = np.arange(cfg.m) * (cfg.k - 1)
    return (starts[:, None] + np.arange(cfg.k)[None, :]) % ell


def eval_cyclic_trap(x: np.ndarray, cfg: TrapConfig, blocks: np.ndarray | None = None) -> float:
    x = check_length(x, cfg.m * (cfg.k - 1))
    if blocks is None:
        blocks = cyclic_blocks(cfg)
    return _trap_sum(x[blocks].sum(axis=1), cfg.k)


def eval_folded_trap(x: np.ndarray, cfg: TrapConfig) -> float:
    if cfg.k != 6:
        raise ValueError("folded trap is defined for k=6 only")
    x = check_length(x, cfg.m * 6)
    return int(_FOLDED_NUM[x.reshape(cfg.m, 6).sum(axis=1)].sum()) / 5


def concatenated_trap(ell: int, k: int = 5) -> ProblemInstance:
    if ell % k:
        raise ValueError(f"ell={ell} is not a multiple of k={k}")
    cfg = TrapConfig(ell // k, k)
    return ProblemInstance(f"trap-k{k}", ell, partial(eval_trap, cfg=cfg), float(cfg.m))


def cyclic_trap(ell: int, k: int = 5) -> ProblemInstance:
    if ell % (k - 1):
        raise ValueError(f"ell={ell} is not a multiple of k-1={k - 1}")
    cfg = TrapConfig(ell // (k - 1), k)
    fn = partial(eval_cyclic_trap, cfg=cfg, blocks=cyclic_blocks(cfg))
    return ProblemInstance(f"ctrap-k{k}", ell, fn, float(cfg.m))


def folded_trap(ell: int) -> ProblemInstance:
    if ell % 6:
        raise ValueError(f"ell={ell} is not a multiple of 6")
    cfg = TrapConfig(ell // 6, 6)
    return ProblemInstance("ftrap-k6", ell, partial(eval_folded_trap, cfg=cfg), float(cfg.m))
