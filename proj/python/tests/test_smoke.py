import json
import math
import os
import pathlib

import numpy as np
import pytest

import rescomp

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCENARIOS = pathlib.Path(os.environ.get("RESCOMP_SCENARIO_DIR", ROOT / "scenarios"))
SCHEMA = pathlib.Path(os.environ.get("RESCOMP_SCHEMA", ROOT / "schemas" / "scenario.schema.json"))

PLUS = np.full((2, 2), 0.5)
INCOHERENT = {"kind": "incoherent", "dim": 2}


def test_version_and_builtins():
    assert rescomp.version()
    names = rescomp.builtin_scenarios()
    assert names == sorted(names)
    assert "coherence_plus" in names


def test_relative_entropy_of_plus():
    r = rescomp.relative_entropy(PLUS, INCOHERENT)
    assert r["value"] == pytest.approx(1.0, abs=1e-12)


def test_dmax_and_hypothesis_floor():
    assert rescomp.dmax(PLUS, INCOHERENT)["value"] == pytest.approx(1.0, abs=1e-5)
    zero = np.diag([1.0, 0.0])
    r = rescomp.hypothesis_testing(zero, INCOHERENT, 0.25)
    assert r["value"] == pytest.approx(-math.log2(0.75), abs=1e-5)


def test_plus_y_against_incoherent_is_infinite():
    plus_y = 0.5 * np.array([[1, -1j], [1j, 1]])
    assert rescomp.hypothesis_testing(plus_y, INCOHERENT, 0.5)["value"] == "inf"


def test_run_builtin_scenario():
    report = rescomp.run_scenario("coherence_plus")
    assert report["status"] == "passed"
    assert report["results"]["relative_entropy"]["value"] == pytest.approx(1.0)


def test_seed_override_is_recorded():
    report = rescomp.run_scenario("werner_entanglement", seed=5)
    assert report["seed"] == 5


def test_schema_errors_raise():
    bad = rescomp.builtin_scenario("coherence_plus")
    del bad["seed"]
    with pytest.raises(rescomp.SchemaError):
        rescomp.validate(bad)
    with pytest.raises(ValueError):
        rescomp.run_scenario(bad)


@pytest.mark.parametrize("path", sorted(SCENARIOS.glob("*.json")), ids=lambda p: p.stem)
def test_scenario_files_match_schema(path):
    jsonschema = pytest.importorskip("jsonschema")
    doc = json.loads(path.read_text())
    jsonschema.validate(doc, json.loads(SCHEMA.read_text()))
    rescomp.validate(doc)
    assert doc == rescomp.builtin_scenario(path.stem)
