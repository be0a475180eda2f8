import json

import pytest

from hurwitz.cli import RunConfig, UsageError, main, read_config
from hurwitz.oracle import hurwitz_poly
from hurwitz.wring import GraphSeries, WPolynomial


def run(capsys, *argv, env=None):
    code = main(list(argv), env=env or {})
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_div_exit_zero(capsys):
    code, out, _ = run(capsys, "verify-div", "--n", "3", "--g", "1")
    assert code == 0
    assert "equal" in out


def test_verify_spiders_from_file(capsys, tmp_path):
    f = tmp_path / "theta.g"
    f.write_text("# triple edge\n1-2;1-2;1-2\n")
    code, out, _ = run(capsys, "verify-spiders", "--graph", str(f))
    assert code == 0
    assert "1/2 × 4 = 2" in out


def test_verify_spiders_json(capsys):
    code, out, _ = run(capsys, "verify-spiders", "--graph", "1-1;1-1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data == {"graph": "1-1;1-1", "emb": 6, "one_faced": 2, "decoration_sum": "1/3",
                    "decorations": 4, "check": True}


def test_budget_refusal(capsys):
    code, _, err = run(capsys, "hurwitz-poly", "--n", "9", "--g", "3")
    assert code == 2
    assert str(36 ** 14) in err


def test_usage_errors(capsys):
    assert run(capsys, "no-such-command")[0] == 64
    assert run(capsys, "hurwitz-poly", "--n", "x")[0] == 64
    assert run(capsys, "hurwitz-poly", "--g", "1")[0] == 64
    assert run(capsys, "verify-div", "--n", "3", "--g", "1", "--budget", "0")[0] == 64
    assert run(capsys)[0] == 64


def test_hurwitz_poly_json_round_trip(capsys):
    code, out, _ = run(capsys, "hurwitz-poly", "--n", "3", "--g", "1", "--format", "json")
    assert code == 0
    assert WPolynomial.from_json(out) == hurwitz_poly(3, 1)


def test_lambda_flag(capsys):
    code, out, _ = run(capsys, "hurwitz-number", "--lambda", "1,1", "--g", "0")
    assert code == 0 and out.strip().endswith("1/2")


def test_rgn_graphs_json(capsys):
    code, out, _ = run(capsys, "rgn", "--g", "1", "--n", "3", "--kind", "r", "--graphs", "--format", "json")
    S = GraphSeries.from_json(out)
    assert {str(G): str(c) for G, c in S.items()} == {"1-2;1-2": "1/3", "1-3;2-3": "1/12"}


def test_tree_poly_and_closed(capsys):
    code, out, _ = run(capsys, "tree-poly", "--n", "3", "--method", "pruefer")
    assert code == 0 and "T_3" in out
    code, out, _ = run(capsys, "hurwitz-closed", "--n", "3", "--g", "1", "--check")
    assert code == 0 and "= 9" in out


def test_embeddings_and_decorations(capsys):
    code, out, _ = run(capsys, "embeddings", "--graph", "1-2;1-2;1-2", "--format", "json")
    assert json.loads(out)["one_faced"] == 2
    code, out, _ = run(capsys, "decorations", "--graph", "1-2;1-2;1-2", "--format", "json")
    assert json.loads(out)["decoration_sum"] == "1/2"
    assert len(json.loads(out)["decorations"]) == 6


def test_exhaustive_spiders(capsys):
    code, out, _ = run(capsys, "verify-spiders", "--exhaustive", "--max-edges", "4")
    assert code == 0 and "17/17" in out


def test_cutjoin_exit_codes(capsys):
    code, out, _ = run(capsys, "verify-cutjoin", "--n-max", "3", "--m-max", "4", "--report", "json")
    assert code == 0 and json.loads(out)["check"] is True
    code, out, _ = run(capsys, "verify-cutjoin", "--n-max", "2", "--m-max", "4", "--normalization", "aut")
    assert code == 1 and "FAILS" in out


def test_sumsign_deterministic(capsys):
    a = run(capsys, "sumsign", "--n", "3", "--g", "1", "--samples", "5", "--seed", "3", "--format", "json")
    b = run(capsys, "sumsign", "--n", "3", "--g", "1", "--samples", "5", "--seed", "3", "--format", "json",
            "--threads", "2")
    assert a[0] == b[0] == 0
    assert json.loads(a[1])["max_rel_error"] < 1e-8


def test_positivity_scan(capsys):
    code, out, _ = run(capsys, "positivity-scan", "--g-max", "2", "--n-max", "4", "--strict")
    assert code == 0 and "all positive" in out


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("[run]\nbudget = 500  # comment\nthreads = 3\nseed = 9\n")
    c = RunConfig.resolve({}, env={}, config_path=str(cfg))
    assert (c.budget, c.threads, c.seed) == (500, 3, 9)
    c = RunConfig.resolve({}, env={"HF_BUDGET": "700", "HF_CONFIG": str(cfg)})
    assert (c.budget, c.threads) == (700, 3)
    c = RunConfig.resolve({"budget": 900}, env={"HF_BUDGET": "700"}, config_path=str(cfg))
    assert c.budget == 900
    assert RunConfig.resolve({}, env={}) == RunConfig()


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("budget\n")
    with pytest.raises(UsageError):
        read_config(bad)
    with pytest.raises(UsageError):
        RunConfig.resolve({}, env={"HF_THREADS": "many"})


def test_env_budget_applies(capsys):
    code, _, err = run(capsys, "hurwitz-poly", "--n", "3", "--g", "1", env={"HF_BUDGET": "10"})
    assert code == 2 and "81" in err
