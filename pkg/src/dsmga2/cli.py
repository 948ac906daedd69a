"""Command-line entry point: solve, sweep, gen-nk, gen-spin, oracle."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import problems as P
from .engine import EngineConfig, run
from .harness import SweepConfig, emit_csv, run_batch

PROBLEMS = ("trap", "ctrap", "ftrap", "nk", "spin", "maxsat")


def build_problem(args) -> P.ProblemInstance:
    name = args.problem
    if name == "trap":
        return P.concatenated_trap(args.ell, args.k or 5)
    if name == "ctrap":
        return P.cyclic_trap(args.ell, args.k or 5)
    if name == "ftrap":
        return P.folded_trap(args.ell)
    if name == "nk":
        if args.instance:
            return P.nk_problem(P.load_nk(args.instance), Path(args.instance).stem)
        return P.nk_problem(P.generate_nk(args.ell, args.k or 4, args.s or 1, args.seed))
    if name == "spin":
        if not args.instance:
            raise ValueError("--instance is required for spin")
        inst = P.load_spinglass(args.instance)
        if inst.ground_energy is None and inst.side <= 10:
            inst = P.SpinGlassInstance(inst.side, inst.edges, inst.couplings,
                                       P.ground_state_dp(inst)[0])
        return P.spinglass_problem(inst, Path(args.instance).stem)
    if name == "maxsat":
        if args.instance:
            return P.maxsat_problem(P.load_dimacs(args.instance), Path(args.instance).stem)
        return P.maxsat_problem(P.bundled_instance(), "uf20-91-r01")
    raise ValueError(f"unknown problem {name!r}")


def _add_problem_args(p, need_seed=True):
    p.add_argument("--problem", choices=PROBLEMS, required=True)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--k", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--instance")
    if need_seed:
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-nfe", type=int)
    p.add_argument("--rounds", type=int, help="mixing rounds per generation (default ell/50)")


def cmd_solve(args) -> int:
    problem = build_problem(args)
    cfg = EngineConfig(args.pop, rounds=args.rounds, max_nfe=args.max_nfe, seed=args.seed)
    res = run(problem, cfg)
    print(f"problem={problem.name} ell={problem.size} pop={args.pop} seed={args.seed}")
    print(f"success={res.success} nfe={res.nfe} generations={res.generations} "
          f"best={res.best_fitness:g} optimum={problem.optimum} reason={res.reason}")
    print("best_bits=" + "".join(map(str, res.best_bits)))
    return 0


def cmd_sweep(args) -> int:
    problem = build_problem(args)
    init_step = args.init_step if args.init_step is not None else (1 if args.hits == 1 else 30)
    scfg = SweepConfig(hits=args.hits, init_pop=args.init_pop, init_step=init_step,
                       range_frac=args.range_frac, max_nfe=args.max_nfe,
                       master_seed=args.seed)
    results = run_batch([problem], scfg, EngineConfig(2, rounds=args.rounds), args.repeats)
    text = emit_csv(results)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    res = results[0]
    if res.failed:
        print("sweep failed: no population size reached the required hits", file=sys.stderr)
        return 2
    print(f"best population {res.best_size}, mean NFE {res.best_mean_nfe:.1f} "
          f"({res.total_runs} runs)", file=sys.stderr)
    return 0


def cmd_gen_nk(args) -> int:
    P.save_nk(P.generate_nk(args.ell, args.k, args.s, args.seed), args.out)
    return 0


def cmd_gen_spin(args) -> int:
    P.save_spinglass(P.generate_spinglass(args.side, args.seed), args.out)
    return 0


def cmd_oracle(args) -> int:
    if args.problem == "nk":
        value, x = P.nk_exact_optimum(P.load_nk(args.instance))
        print(f"optimum {value!r}")
    elif args.problem == "spin":
        inst = P.load_spinglass(args.instance)
        if inst.n_spins <= 20:
            energy, x = P.ground_state_bruteforce(inst)
        else:
            energy, x = P.ground_state_dp(inst)
        print(f"ground_energy {energy:g}")
        print(f"optimum {-energy:g}")
    else:
        inst = P.load_dimacs(args.instance)
        if inst.n_vars > 24:
            print(f"optimum {inst.m} (clause count; satisfiability assumed)")
            return 0
        value, x = P.maxsat_bruteforce(inst)
        print(f"optimum {value} of {inst.m} clauses")
    print("bits " + "".join(map(str, np.asarray(x))))
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dsmga2")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="one optimizer run")
    _add_problem_args(p)
    p.add_argument("--pop", type=int, required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="adaptive population-size sweep")
    _add_problem_args(p)
    p.add_argument("--hits", type=int, choices=(1, 10), default=10)
    p.add_argument("--init-pop", type=int, default=10)
    p.add_argument("--init-step", type=int)
    p.add_argument("--range-frac", type=float, default=0.05)
    p.add_argument("--repeats", type=int, default=10, help="verification runs at the best size")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen-nk", help="write a random NK instance")
    for a in ("--ell", "--k", "--s", "--seed"):
        p.add_argument(a, type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_nk)

    p = sub.add_parser("gen-spin", help="write a random +-J spin-glass instance")
    p.add_argument("--side", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_spin)

    p = sub.add_parser("oracle", help="exact optimum of an instance file")
    p.add_argument("--problem", choices=("nk", "spin", "maxsat"), required=True)
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
