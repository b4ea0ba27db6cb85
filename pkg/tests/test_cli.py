import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eftt import benchfns, cli
from eftt.cli import (
    RunConfig,
    RunRecord,
    aggregate,
    genz_wins,
    main,
    records_from_csv,
    records_from_json,
    records_to_csv,
    records_to_json,
    run_benchmark,
    run_comparison,
    run_genz_sweep,
    run_one,
    run_sin_integration,
)


def strip_time(records):
    return [{**r.__dict__, "wall_time": None} for r in records]


def test_config_defaults():
    cfg = RunConfig("alpine")
    assert cfg.tol == 1e-10 and cfg.mc_samples == 10000 and cfg.samples is None
    assert cfg.degree_mode == "adaptive" and cfg.baseline_degree() == 100
    assert RunConfig("alpine", basis="legendre").baseline_degree() == 50
    with pytest.raises(ValueError):
        RunConfig("alpine", tol=0)
    with pytest.raises(ValueError):
        RunConfig("alpine", basis="fourier")


def test_constant_function():
    rec = run_benchmark(RunConfig("constant", d=4, fixed_degree=8, mc_samples=500))[0]
    # exact up to the round-off of the coefficient transform
    assert rec.error <= 1e-15 and rec.max_R == 1 and rec.max_r == 1


def test_exponential_record():
    rec = run_benchmark(RunConfig("exponential", fixed_degree=100))[0]
    assert rec.ok and rec.max_R == 1 and rec.max_r == 1 and rec.error <= 1e-10
    assert rec.degrees == [100] * 7 and rec.dof_count == 714


def test_alpine_record():
    rec = run_benchmark(RunConfig("alpine", fixed_degree=100))[0]
    assert 2e-3 <= rec.error <= 2e-2 and rec.max_R == 2 and rec.max_r == 2


def test_eval_count_matches_model():
    tf = benchfns.get("michalewicz")
    cfg = RunConfig("michalewicz", fixed_degree=40, mc_samples=200)
    models = []
    rec = run_one("eftt", tf, cfg, 3, models)
    assert rec.eval_count == models[0].n_evals


def test_build_failure_is_recorded():
    tf = benchfns.TestFunction("broken", 2, -1.0, 1.0, lambda X: 1.0 / 0.0 * X[:, 0])
    with np.errstate(all="ignore"):
        rec = run_one("eftt", tf, RunConfig("broken", fixed_degree=4, mc_samples=10), 0)
    assert not rec.ok and rec.status.startswith("failed") and rec.error is None


def test_repeats_aggregate():
    recs = run_benchmark(RunConfig("michalewicz", fixed_degree=30, repeats=3, mc_samples=500))
    runs, mean = recs[:3], recs[3]
    assert [r.seed for r in runs] == [0, 1, 2] and mean.kind == "mean" and mean.n_runs == 3
    errs = [r.error for r in runs]
    assert mean.error == pytest.approx(math.exp(np.mean(np.log(errs))), rel=1e-12)
    assert mean.eval_count == pytest.approx(np.mean([r.eval_count for r in runs]))
    assert mean.sigma_evals == pytest.approx(np.std([r.eval_count for r in runs]))


def test_aggregate_skips_failures():
    good = RunRecord("run", "x", "eftt", 2, 0, "cheb", 1e-10, "adaptive", error=1e-4, eval_count=10, dof_count=5, max_R=1, max_r=1)
    bad = RunRecord("run", "x", "eftt", 2, 1, "cheb", 1e-10, "adaptive", status="failed: boom")
    agg = aggregate([good, bad])
    assert agg.n_runs == 1 and agg.error == pytest.approx(1e-4) and "failed" in agg.status


def test_comparison_exponential_dofs():
    e, t, red = run_comparison(RunConfig("exponential", fixed_degree=100, mc_samples=1000))
    assert e[0].max_R == t[0].max_R == 1
    assert 0.8 <= e[0].dof_count / t[0].dof_count <= 1.3
    assert red["dof_count"] == pytest.approx(1 - e[0].dof_count / t[0].dof_count)


def test_comparison_separable_synthetic():
    tf = benchfns.TestFunction("sep", 3, -1.0, 1.0, lambda X: np.exp(X[:, 0]) * np.cos(X[:, 1]) * (2 + X[:, 2]))
    cfg = RunConfig("sep", fixed_degree=20, mc_samples=2000)
    e, t = run_one("eftt", tf, cfg, 0), run_one("direct", tf, cfg, 0)
    assert e.error <= 1e-10 and t.error <= 1e-10


def test_genz_continuous_small():
    recs = run_genz_sweep([20], repeats=2, families=["continuous"], mc_samples=500)
    assert all(r.max_r == 1 for r in recs if r.kind == "run" and r.method == "eftt")


@pytest.mark.parametrize("family", ["oscillatory", "corner-peak"])
def test_genz_one_dimensional(family):
    recs = run_genz_sweep([1], repeats=2, families=[family], direct_degree=271, mc_samples=2000)
    assert all(r.error <= 1e-10 for r in recs if r.kind == "run")


def test_genz_large_dims_need_flag():
    with pytest.raises(ValueError):
        run_genz_sweep([200], repeats=1)


def test_genz_wins_counts_pairs():
    mk = lambda m, seed, n: RunRecord("run", "genz-oscillatory", m, 20, seed, "cheb", 1e-10, "x", eval_count=n)  # noqa: E731
    recs = [mk("eftt", 0, 5), mk("direct", 0, 9), mk("eftt", 1, 9), mk("direct", 1, 5)]
    assert genz_wins(recs, "oscillatory", 20) == (1, 2)


def test_sin_integration():
    recs = run_sin_integration([1, 2, 10], mc_samples=1000)
    by = {(r.d, r.method): r for r in recs}
    assert by[(1, "eftt")].integral_error <= 1e-12
    assert by[(2, "eftt")].integral_error <= 1e-10
    assert by[(10, "eftt")].integral_error <= 1e-8 and by[(10, "eftt")].max_R == 2


def test_determinism():
    cfg = RunConfig("alpine", fixed_degree=50, mc_samples=500)
    assert strip_time(run_benchmark(cfg)) == strip_time(run_benchmark(cfg))


def record_strategy():
    fl = st.one_of(st.none(), st.floats(allow_nan=False, allow_infinity=True))
    text = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=20)
    return st.builds(
        RunRecord,
        kind=st.sampled_from(["run", "mean"]),
        fn=st.sampled_from(["alpine", "genz-oscillatory", "sin-sum"]),
        method=st.sampled_from(["eftt", "direct"]),
        d=st.integers(1, 500),
        seed=st.integers(0, 2**40),
        basis=st.sampled_from(["cheb", "legendre"]),
        tol=st.floats(1e-16, 1.0),
        degree_mode=st.sampled_from(["adaptive", "fixed(100)"]),
        error=fl,
        eval_count=st.one_of(st.none(), st.integers(0, 10**9), st.floats(0, 1e9)),
        dof_count=st.one_of(st.none(), st.integers(0, 10**9)),
        max_R=st.one_of(st.none(), st.integers(1, 64)),
        max_r=st.one_of(st.none(), st.integers(1, 64)),
        degrees=st.lists(st.integers(1, 300), max_size=8),
        wall_time=fl,
        status=st.sampled_from(["ok", "failed: ValueError: x, y"]),
        warnings=st.lists(text, max_size=3),
        integral_error=fl,
        n_runs=st.integers(0, 100),
    )


@given(st.lists(record_strategy(), max_size=5))
def test_csv_round_trip(records):
    back = records_from_csv(records_to_csv(records))
    assert back == records


@given(st.lists(record_strategy(), max_size=5))
def test_json_round_trip(records):
    assert records_from_json(records_to_json(records)) == records


def test_csv_schema_checked():
    with pytest.raises(ValueError):
        records_from_csv("kind,fn\nrun,x\n")


def test_cli_approx_and_model_file(tmp_path, capsys):
    path = tmp_path / "m.eftt"
    code = main(["approx", "--fn", "exponential", "--fixed-degree", "100", "--check",
                 "--model-file", str(path), "--mc-samples", "1000"])
    out = capsys.readouterr().out
    assert code == 0
    rec = records_from_csv(out)[0]
    assert rec.max_R == 1
    assert main(["eval", "--model-file", str(path), "--points", "0,0,0,0,0,0,0"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(-1.0, abs=1e-12)
    assert main(["eval", "--model-file", str(path), "--fn", "exponential", "--points", "0,0,0,0,0,0,0"]) == 0
    capsys.readouterr()
    assert main(["integrate", "--model-file", str(path)]) == 0
    value = float(capsys.readouterr().out)
    X = np.random.default_rng(0).uniform(-1, 1, (200000, 7))
    assert value == pytest.approx(2**7 * benchfns.get("exponential")(X).mean(), rel=1e-2)


def test_cli_band_violation_exit_code(monkeypatch, capsys):
    monkeypatch.setitem(cli.BANDS, "exponential", ((0.0, 1e-30), 1, 1))
    code = main(["approx", "--fn", "exponential", "--fixed-degree", "100", "--check", "--mc-samples", "500"])
    assert code == cli.EXIT_BAND
    assert "band violation" in capsys.readouterr().err


def test_cli_build_failure_exit_code(capsys):
    assert main(["approx", "--fn", "no-such-function"]) == cli.EXIT_BUILD_FAILED


def test_cli_json_compare(capsys):
    code = main(["compare", "--fn", "exponential", "--fixed-degree", "100", "--out", "json", "--mc-samples", "500", "--check"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0 and doc["schema"] == cli.SCHEMA
    assert {r["method"] for r in doc["records"]} == {"eftt", "direct"}
    assert "exponential" in doc["reductions"]


def test_cli_sin_integrate(capsys):
    assert main(["sin-integrate", "--dims", "1,2", "--check", "--mc-samples", "200"]) == 0
    assert len(records_from_csv(capsys.readouterr().out)) == 4


def test_cli_repeat_limit(capsys):
    assert main(["approx", "--fn", "alpine", "--repeats", "100"]) == cli.EXIT_BUILD_FAILED
    assert "--large" in capsys.readouterr().err
