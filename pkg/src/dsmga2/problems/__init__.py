"""Benchmark problem families, instance I/O and exact-optimum oracles."""

from .base import ParseError, ProblemInstance
from .maxsat import (CnfInstance, bundled_instance, dumps_dimacs, eval_maxsat,
                     generate_uniform_3sat, load_dimacs, maxsat_bruteforce,
                     maxsat_problem, parse_dimacs)
from .nk import (NkInstance, dumps_nk, eval_nk, generate_nk, load_nk, loads_nk,
                 nk_exact_optimum, nk_problem, save_nk)
from .spinglass import (SpinGlassInstance, dumps_spinglass, eval_spinglass,
                        generate_spinglass, ground_state_bruteforce,
                        ground_state_dp, load_spinglass, loads_spinglass,
                        save_spinglass, spinglass_problem)
from .traps import (TrapConfig, concatenated_trap, cyclic_trap, eval_cyclic_trap,
                    eval_folded_trap, eval_trap, folded_trap, trap_block)

parse_spinglass = loads_spinglass

__all__ = [
    "CnfInstance", "NkInstance", "ParseError", "ProblemInstance",
    "SpinGlassInstance", "TrapConfig", "bundled_instance", "concatenated_trap",
    "cyclic_trap", "dumps_dimacs", "dumps_nk", "dumps_spinglass",
    "eval_cyclic_trap", "eval_folded_trap", "eval_maxsat", "eval_nk",
    "eval_spinglass", "eval_trap", "folded_trap", "generate_nk",
    "generate_spinglass", "generate_uniform_3sat", "ground_state_bruteforce",
    "ground_state_dp", "load_dimacs", "load_nk", "load_spinglass", "loads_nk",
    "loads_spinglass", "maxsat_bruteforce", "maxsat_problem", "nk_exact_optimum",
    "nk_problem", "parse_dimacs", "parse_spinglass", "save_nk", "save_spinglass",
    "spinglass_problem", "trap_block",
]
