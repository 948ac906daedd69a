"""Population-size sweeps for the three deceptive families at desk scale.

    python scripts/table1.py --out runs/table1.csv [--hits 10] [--seed 0]
"""

import argparse
import sys
from pathlib import Path

from dsmga2.engine import EngineConfig
from dsmga2.harness import SweepConfig, emit_csv, run_batch
from dsmga2.problems import concatenated_trap, cyclic_trap, folded_trap

TARGETS = {"trap": (concatenated_trap, 400), "ctrap": (cyclic_trap, 400),
           "ftrap": (folded_trap, 240)}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", choices=sorted(TARGETS), action="append")
    ap.add_argument("--hits", type=int, choices=(1, 10), default=10)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, required=True)
    args = ap.parse_args(argv)

    names = args.only or sorted(TARGETS)
    problems = [TARGETS[n][0](TARGETS[n][1]) for n in names]
    scfg = SweepConfig(hits=args.hits, init_step=30 if args.hits > 1 else 1,
                       master_seed=args.seed)
    results = run_batch(problems, scfg, EngineConfig(2), args.repeats)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(emit_csv(results))
    for r in results:
        print(f"{r.problem} l={r.ell}: best size {r.best_size}, mean NFE {r.best_mean_nfe:.0f}",
              file=sys.stderr)


if __name__ == "__main__":
    main()
