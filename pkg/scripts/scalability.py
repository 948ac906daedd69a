"""Sweep-minimal NFE against problem size, with a log-log slope fit.

    python scripts/scalability.py --problem trap --ell 50 100 200 400 --out runs/scale.csv
"""

import argparse
from pathlib import Path

import numpy as np

from dsmga2.engine import EngineConfig
from dsmga2.harness import SweepConfig, emit_csv, sweep
from dsmga2.problems import concatenated_trap, cyclic_trap, folded_trap

FACTORIES = {"trap": concatenated_trap, "ctrap": cyclic_trap, "ftrap": folded_trap}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--problem", choices=sorted(FACTORIES), default="trap")
    ap.add_argument("--ell", type=int, nargs="+", required=True)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=Path, required=True)
    args = ap.parse_args(argv)

    results = []
    for ell in args.ell:
        res = sweep(FACTORIES[args.problem](ell), SweepConfig(master_seed=args.seed),
                    EngineConfig(2))
        results.append(res)
        print(f"l={ell}: size {res.best_size}, mean NFE {res.best_mean_nfe:.0f}", flush=True)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(emit_csv(results))

    nfe = np.array([r.best_mean_nfe for r in results])
    if len(results) > 1 and np.isfinite(nfe).all():
        slope = np.polyfit(np.log(args.ell), np.log(nfe), 1)[0]
        print(f"log-log slope {slope:.3f}")


if __name__ == "__main__":
    main()
