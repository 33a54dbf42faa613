import json
from pathlib import Path

import pytest

from yangcenter.cli import main
from yangcenter.context import ConfigError
from yangcenter.report import SCHEMA, RunConfig, dumps, load_json, run_suite

GOLDEN = Path(__file__).parent / "golden"

EMITS = [
    ("fseries_o3_M8.json", ["fseries", "--N", "3", "--forder", "8", "--emit", "fseries"]),
    ("symmetrizer_o3_m1.json", ["brauer", "--N", "3", "--m", "1", "--emit", "symmetrizer"]),
    ("symmetrizer_o3_m2.json", ["brauer", "--N", "3", "--m", "2", "--emit", "symmetrizer"]),
    ("symmetrizer_sp4_m2.json", ["brauer", "--algebra", "sp", "--N", "4", "--m", "2",
                                 "--emit", "symmetrizer"]),
    ("segal_sugawara_o3_m2.json", ["classical", "--N", "3", "--m", "2", "--emit", "segal-sugawara"]),
    ("phi_o3_m2.json", ["classical", "--N", "3", "--m", "2", "--hord", "3", "--deg", "3",
                        "--emit", "Phi"]),
]


@pytest.mark.parametrize("name,argv", EMITS, ids=[e[0] for e in EMITS])
def test_emit_matches_golden(name, argv, tmp_path):
    out = tmp_path / name
    assert main(argv + ["--out", str(out)]) == 0
    assert out.read_bytes() == (GOLDEN / name).read_bytes()


def test_golden_phi_equals_golden_segal_sugawara():
    phi = load_json(GOLDEN / "phi_o3_m2.json")["series"]["coefficients"][0]["terms"]
    ss = load_json(GOLDEN / "segal_sugawara_o3_m2.json")["phi"][2]
    assert [(t["word"], t["coef"]) for t in phi] == [(t["word"], t["coef"]) for t in ss]


def test_report_shape_and_determinism():
    cfg = RunConfig.from_dict({"suites": ["fseries", "brauer"]})
    a, code = run_suite(cfg)
    b, _ = run_suite(cfg)
    assert code == 0
    assert dumps(a) == dumps(b)
    assert a["schema"] == SCHEMA
    assert a["summary"]["failed"] == 0
    assert all(r["claim"] for r in a["checks"])


def test_parallel_run_matches_serial():
    cfg = RunConfig.from_dict({"suites": ["rmatrix", "fseries"]})
    assert dumps(run_suite(cfg, jobs=2)[0]) == dumps(run_suite(cfg)[0])


def test_config_round_trip(tmp_path):
    cfg = RunConfig.from_dict({"kind": "sp", "N": 4, "level": "3/2", "K": 3, "suites": "center,phi"})
    assert cfg.suites == ["center", "phi"]
    again = RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg


@pytest.mark.parametrize("bad", [{"kind": "sp", "N": 5}, {"level": "abc"}, {"suites": ["nope"]},
                                 {"colour": 1}, {"N": 1}])
def test_bad_config(bad):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(bad)


def test_exit_code_pass(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["center", "--N", "3", "--out", str(out)]) == 0
    assert load_json(out)["status"] == "pass"
    assert "pass" in capsys.readouterr().err


def test_exit_code_fail(capsys):
    # the off-critical sweep finds nothing at K = 2, so its check fails
    assert main(["suite", "--suite", "center-negative", "--N", "3", "--m", "1"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["status"] == "fail"
    assert all(r["witness"] for r in rep["checks"] if r["status"] != "pass")


def test_exit_code_bad_config(capsys):
    assert main(["center", "--algebra", "sp", "--N", "5"]) == 2
    assert "config error" in capsys.readouterr().err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"N": 3, "K": 3, "D": 3, "U": 1, "m": [1]}))
    assert main(["suite", "--config", str(cfg), "--suite", "center-negative"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["config"]["K"] == 3
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert main(["suite", "--config", str(bad)]) == 2


def test_unknown_subcommand():
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_non_gating_probe(capsys):
    code = main(["suite", "--suite", "commutativity", "--N", "3"])
    rep = json.loads(capsys.readouterr().out)
    assert rep["checks"][0]["gating"] is False
    assert code == 0
