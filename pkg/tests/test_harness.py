"""Harness plumbing: registry coverage, determinism, config, CLI exit codes."""

import json

import jsonschema
import numpy as np
import pytest

from finslercalc.cli import main
from finslercalc.config import (ConfigError, RunConfig, SUITE_NAMES,
                                default_config, load_config)
from finslercalc.report import JSON_SCHEMA, to_json, to_text
from finslercalc.suites import REGISTRY, run_suite

FAST = RunConfig(samples=10, poincare_forms=2)


def test_registry_covers_every_suite_once():
    assert set(REGISTRY) == set(SUITE_NAMES)
    seen = set()
    for suite, entries in REGISTRY.items():
        for identity, anchor, tol in entries:
            assert identity not in seen, f"duplicate identity {identity}"
            seen.add(identity)
            assert anchor and tol > 0


@pytest.mark.parametrize("suite", SUITE_NAMES)
def test_every_registry_entry_gets_a_row(suite):
    cfg = RunConfig(samples=4, poincare_forms=2, dims=(2, 3))
    rep = run_suite(cfg, suite)
    assert {r.identity for r in rep.results} == {
        name for name, _, _ in REGISTRY[suite]}
    for r in rep.results:
        assert r.samples >= 1


def test_determinism_byte_identical():
    cfg = RunConfig(samples=8, poincare_forms=2, dims=(2, 3))
    a = to_json(run_suite(cfg, "frame"))
    b = to_json(run_suite(cfg, "frame"))
    assert a == b


def test_seed_changes_residuals():
    cfg_a = RunConfig(samples=8, seed=1)
    cfg_b = RunConfig(samples=8, seed=2)
    ra = run_suite(cfg_a, "euler")
    rb = run_suite(cfg_b, "euler")
    resid_a = [r.max_residual for r in ra.results]
    resid_b = [r.max_residual for r in rb.results]
    assert resid_a != resid_b


def test_json_schema_round_trip():
    rep = run_suite(FAST, "brackets")
    doc = json.loads(to_json(rep))
    jsonschema.validate(doc, JSON_SCHEMA)
    assert doc["seed"] == FAST.seed
    assert doc["passed"] is True
    text = to_text(rep)
    assert "PASS" in text and "anchor=Eq (1.17)" in text


def test_rows_sorted_by_anchor():
    rep = run_suite(FAST, "euler")
    doc = json.loads(to_json(rep))
    keys = [(r["suite"], r["anchor"], r["identity"]) for r in doc["results"]]
    assert keys == sorted(keys)


def test_tolerance_override_forces_failure():
    cfg = RunConfig(samples=8,
                    tolerance_overrides={"F2-equals-ygy": 1e-30})
    rep = run_suite(cfg, "euler")
    assert not rep.passed
    row = next(r for r in rep.results if r.identity == "F2-equals-ygy")
    assert not row.passed and row.tolerance == 1e-30


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite(FAST, "nosuch")


def test_config_validation():
    with pytest.raises(ConfigError):
        RunConfig(dims=(1,))
    with pytest.raises(ConfigError):
        RunConfig(metrics=("nosuch",))
    with pytest.raises(ConfigError):
        RunConfig(samples=0)


def test_config_file_round_trip(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text(
        "dims: [2]\nmetrics: [euclidean]\nsamples: 5\nseed: 7\n"
        "tolerance_overrides:\n  F2-equals-ygy: 1.0e-3\n")
    cfg = load_config(str(path))
    assert cfg.dims == (2,) and cfg.samples == 5 and cfg.seed == 7
    assert cfg.tolerance_overrides == {"F2-equals-ygy": 1e-3}
    bad = tmp_path / "bad.yaml"
    bad.write_text("nonsense_key: 1\n")
    with pytest.raises(ConfigError):
        load_config(str(bad))


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "rep.json"
    code = main(["check", "euler", "--samples", "5", "--n", "2",
                 "--format", "json", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, JSON_SCHEMA)

    # forced failure -> exit 1 (config override through a file)
    cfgfile = tmp_path / "cfg.yaml"
    cfgfile.write_text("samples: 5\ndims: [2]\n"
                       "tolerance_overrides:\n  F2-equals-ygy: 1.0e-30\n")
    assert main(["check", "euler", "--config", str(cfgfile)]) == 1

    # usage/config errors -> exit 2
    assert main(["check", "euler", "--config", str(tmp_path / "absent.yaml")]) == 2
    assert main(["check", "nosuch"]) == 2
    assert main(["eval", "--x", "1,0", "--y", "not-a-number"]) == 2
    capsys.readouterr()


def test_cli_eval_and_primitive(capsys):
    assert main(["eval", "--metric", "euclidean", "--x", "0,0",
                 "--y", "3,4"]) == 0
    out = capsys.readouterr().out
    assert "0.12" in out and "0.16" in out
    assert main(["primitive", "--metric", "euclidean", "--n", "3",
                 "--seed", "3", "--demo"]) == 0
    out = capsys.readouterr().out
    assert "two-path discrepancy" in out


def test_default_config_values():
    cfg = default_config()
    assert cfg.dims == (2, 3, 4) and cfg.samples == 200 and cfg.seed == 42
    assert cfg.poincare_forms == 20
    assert len(cfg.metrics) == 4
