import math
from pathlib import Path

import numpy as np
import pytest

from dsmga2.cli import main
from dsmga2.engine import EngineConfig, RunResult
from dsmga2.harness import (CSV_COLUMNS, SweepConfig, SweepResult, emit_csv, run_batch,
                            run_seed, sweep)
from dsmga2.problems import (ProblemInstance, concatenated_trap, generate_nk,
                             nk_exact_optimum, nk_problem)

GOLDEN = Path(__file__).parent / "golden" / "mini_batch.csv"
TEMPLATE = EngineConfig(2)
TOY = ProblemInstance("toy", 10, lambda x: 0.0, optimum=0.0)


def stub(nfe_of_size, fail_below=0):
    def runner(problem, cfg):
        ok = cfg.population_size >= fail_below
        return RunResult(ok, int(nfe_of_size(cfg.population_size)), 0.0,
                         np.zeros(problem.size, np.uint8), 0)
    return runner


def test_nfe_equal_to_size_gives_initial_size():
    res = sweep(TOY, SweepConfig(), TEMPLATE, stub(lambda n: n))
    assert res.best_size == 10 and res.best_mean_nfe == 10


@pytest.mark.parametrize("minimum", [70, 73, 131])
def test_v_shaped_curve_converges_to_minimum(minimum):
    res = sweep(TOY, SweepConfig(), TEMPLATE, stub(lambda n: 1000 + 10 * abs(n - minimum)))
    assert abs(res.best_size - minimum) <= 0.05 * minimum


def test_failed_sizes_are_infinite_and_abort():
    calls = []

    def runner(problem, cfg):
        calls.append(cfg.population_size)
        return stub(lambda n: n, fail_below=45)(problem, cfg)

    res = sweep(TOY, SweepConfig(hits=10), TEMPLATE, runner)
    assert res.trace[10].mean_nfe == math.inf and res.trace[10].runs == 1
    assert calls.count(10) == 1
    assert res.best_size >= 45
    assert all(s.runs == 10 for s in res.trace.values() if s.success)
    assert res.total_runs == len(calls)


def test_all_failed_sweep_is_a_result():
    res = sweep(TOY, SweepConfig(max_pop=200), TEMPLATE, stub(lambda n: n, fail_below=10**6))
    assert res.failed and res.best_mean_nfe == math.inf
    assert max(res.trace) <= 200


def test_sweep_needs_optimum():
    with pytest.raises(ValueError):
        sweep(ProblemInstance("x", 3, lambda x: 0.0), SweepConfig(), TEMPLATE)


@pytest.mark.parametrize("kwargs", [dict(hits=0), dict(init_step=0), dict(range_frac=1.0),
                                    dict(range_frac=0.0)])
def test_sweep_config_validation(kwargs):
    with pytest.raises(ValueError):
        SweepConfig(**kwargs)


def test_run_seed_is_stable_and_distinct():
    assert run_seed(0, "a/1/", 10, 0) == run_seed(0, "a/1/", 10, 0)
    seeds = {run_seed(0, "a/1/", n, i) for n in (10, 11) for i in range(5)}
    assert len(seeds) == 10


class CountingProblem:
    def __init__(self, problem):
        self.inner = problem
        self.calls = 0

    def __getattr__(self, name):
        return getattr(self.inner, name)

    def evaluate(self, x):
        self.calls += 1
        return self.inner.evaluate(x)


def test_sweep_total_nfe_matches_instrumented_count():
    problem = CountingProblem(concatenated_trap(10))
    res = sweep(problem, SweepConfig(hits=3, init_pop=4, init_step=8), TEMPLATE)
    assert not res.failed
    assert res.total_nfe == problem.calls


def nk_batch():
    out = []
    for seed in range(3):
        inst = generate_nk(20, 4, 1, seed)
        out.append(nk_problem(inst, f"nk{seed}", nk_exact_optimum(inst)[0]))
    return out


def test_run_batch_structure():
    results = run_batch(nk_batch(), SweepConfig(hits=2, init_pop=6, init_step=10), TEMPLATE, 10)
    assert len(results) == 3
    for r in results:
        assert len(r.verification) == 10
        stats = r.verification_stats()
        assert stats["min"] <= stats["median"] <= stats["max"]
        assert 0 <= stats["success_rate"] <= 1


def test_single_repeat_collapses_statistics():
    r = run_batch([concatenated_trap(10)], SweepConfig(hits=2, init_pop=4, init_step=8),
                  TEMPLATE, 1)[0]
    v = r.verification_stats()
    assert v["mean"] == v["median"] == v["min"] == v["max"] == r.verification[0].nfe


def test_run_batch_rejects_zero_repeats():
    with pytest.raises(ValueError):
        run_batch([TOY], SweepConfig(), TEMPLATE, 0)


def test_csv_empty_is_header_only():
    assert emit_csv([]) == ",".join(CSV_COLUMNS) + "\n"


def test_csv_single_result_rows():
    res = sweep(TOY, SweepConfig(), TEMPLATE, stub(lambda n: n))
    lines = emit_csv([res]).splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + len(res.trace) + 1
    assert lines[-1] == "best,toy,10,,10,10,10,1,0"


def test_csv_marks_failures_as_inf():
    res = SweepResult("p", 5, "i", 10, 0, None, math.inf)
    assert emit_csv([res]).splitlines()[1] == "best,p,5,i,,10,inf,0,0"


def mini_batch_csv():
    scfg = SweepConfig(hits=2, init_pop=4, init_step=8, master_seed=7)
    return emit_csv(run_batch([concatenated_trap(10), nk_batch()[0]], scfg, TEMPLATE, 3))


def test_csv_is_deterministic_and_matches_golden():
    text = mini_batch_csv()
    assert text == mini_batch_csv()
    assert text == GOLDEN.read_text()


# command line

def test_cli_solve(capsys):
    assert main(["solve", "--problem", "trap", "--ell", "20", "--pop", "60", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "success=True" in out and "best_bits=" in out


def test_cli_gen_and_oracle_nk(tmp_path, capsys):
    path = tmp_path / "nk.txt"
    assert main(["gen-nk", "--ell", "12", "--k", "4", "--s", "1", "--seed", "3",
                 "--out", str(path)]) == 0
    assert main(["oracle", "--problem", "nk", "--instance", str(path)]) == 0
    out = capsys.readouterr().out
    value = float(out.split()[1])
    assert value == pytest.approx(nk_exact_optimum(generate_nk(12, 4, 1, 3))[0])


def test_cli_gen_and_oracle_spin(tmp_path, capsys):
    path = tmp_path / "sg.txt"
    assert main(["gen-spin", "--side", "3", "--seed", "2", "--out", str(path)]) == 0
    assert main(["oracle", "--problem", "spin", "--instance", str(path)]) == 0
    assert "ground_energy" in capsys.readouterr().out
    assert main(["solve", "--problem", "spin", "--instance", str(path), "--pop", "20"]) == 0


def test_cli_oracle_maxsat(tmp_path, capsys):
    path = tmp_path / "f.cnf"
    path.write_text("p cnf 2 2\n1 2 0\n-1 0\n")
    assert main(["oracle", "--problem", "maxsat", "--instance", str(path)]) == 0
    assert "optimum 2 of 2" in capsys.readouterr().out


def test_cli_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "r.csv"
    code = main(["sweep", "--problem", "maxsat", "--hits", "1", "--repeats", "2",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert any(l.startswith("best,") for l in lines)


def test_cli_sweep_all_failed_exit_code(tmp_path):
    code = main(["sweep", "--problem", "trap", "--ell", "50", "--max-nfe", "5",
                 "--hits", "1", "--init-step", "30", "--out", str(tmp_path / "r.csv")])
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["solve", "--problem", "trap"],                                         # missing --pop
    ["solve", "--problem", "trap", "--ell", "21", "--pop", "10"],           # bad length
    ["oracle", "--problem", "nk", "--instance", "/nonexistent/file"],
    ["bogus"]])
def test_cli_usage_errors(argv):
    assert main(argv) == 1


def test_trap50_swept_size_passes_fresh_verification():
    res = run_batch([concatenated_trap(50)], SweepConfig(), TEMPLATE, 10)[0]
    assert not res.failed
    assert sum(r.success for r in res.verification) == 10
