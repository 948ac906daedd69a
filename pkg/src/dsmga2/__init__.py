"""DSMGA-II: pairwise-linkage DSM, incremental linkage sets and
restricted/back mixing, with benchmark problems and a sweeping harness."""

from .core import Chromosome, NfeCounter, Population, make_rng
from .engine import EngineConfig, RunResult, run
from .harness import SweepConfig, SweepResult, emit_csv, run_batch, sweep
from .linkage import DSM, MaskSequence, grow_ils, next_vertex, update_matrix
from .mixing import back_mixing, restricted_mixing

__all__ = [
    "DSM", "Chromosome", "EngineConfig", "MaskSequence", "NfeCounter",
    "Population", "RunResult", "SweepConfig", "SweepResult", "back_mixing",
    "emit_csv", "grow_ils", "make_rng", "next_vertex", "restricted_mixing",
    "run", "run_batch", "sweep", "update_matrix",
]

__version__ = "0.1.0"
