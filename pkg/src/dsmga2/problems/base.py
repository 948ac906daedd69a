from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


class ParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass(frozen=True)
class ProblemInstance:
    """A maximization problem over bit vectors of length ``size``."""

    name: str
    size: int
    evaluate: Callable[[np.ndarray], float]
    optimum: float | None = None
    instance_id: str = ""


def check_length(x: np.ndarray, n: int) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (n,):
        raise ValueError(f"expected a bit vector of length {n}, got shape {x.shape}")
    return x
