import json
import math
import os
import pathlib
import subprocess

import jsonschema
import pytest
from referencing import Registry, Resource

import maxent

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMAS = pathlib.Path(os.environ.get("MAXENT_SCHEMA_DIR", ROOT / "docs" / "schemas"))
BINARY = {"alphabet": ["a", "b"], "q": [0.5, 0.5], "r": [[1, -1]], "s": [1, 0]}


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resources.append((path.name, Resource.from_contents(doc)))
    return Registry().with_resources(resources)


REGISTRY = _registry()


def check(doc, name):
    schema = json.loads((SCHEMAS / f"{name}.schema.json").read_text())
    jsonschema.Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def series(table, output):
    for entry in table["outputs"]:
        if entry["index"] == output:
            return {tuple(t["index"]): t["value"] for t in entry["series"]}
    raise KeyError(output)


def test_problem_fixture_matches_schema():
    check(BINARY, "problem")


def test_normalize():
    doc = maxent.normalize({"alphabet": ["x", "y", "z"], "q": [0.25, 0.25, 0.5], "r": [[0, 1, 2]]})
    check(doc, "normalization")
    q = doc["problem"]["q"]
    r = doc["problem"]["r"][0]
    assert math.isclose(sum(q), 1.0)
    assert abs(sum(a * b for a, b in zip(q, r))) < 1e-12
    assert math.isclose(sum(a * b * b for a, b in zip(q, r)), 1.0)


def test_expand_binary_closed_form():
    table = maxent.expand(BINARY, order=5)
    check(table, "table")
    lam = series(table, 1)
    assert lam[(1,)] == pytest.approx(-1.0)
    assert lam[(3,)] == pytest.approx(-1.0 / 3)
    assert lam[(5,)] == pytest.approx(-1.0 / 5)
    assert series(table, 0)[(2,)] == pytest.approx(0.5)


def test_evaluate_and_solve_agree_near_zero():
    table = maxent.expand(BINARY, order=8)
    values = maxent.evaluate(table, [0.1])
    check(values, "evaluation")
    exact = maxent.solve(BINARY, [0.1])
    check(exact, "solution")
    lam1 = next(v["value"] for v in values["values"] if v["output"] == 1)
    assert lam1 == pytest.approx(exact["lambda"][0], abs=1e-9)
    assert exact["lambda"][0] == pytest.approx(-math.atanh(0.1), abs=1e-12)
    assert exact["sigma"] == pytest.approx(0.55)


def test_trees_report():
    report = maxent.trees(BINARY, output=1, index=[3])
    check(report, "report")
    assert len(report["trees"]) == 3
    assert report["total"] == pytest.approx(-1.0 / 3)
    assert report["total"] == pytest.approx(report["table_value"])


def test_verify_slope():
    report = maxent.verify(BINARY, order=6, samples=5, threads=2)
    check(report, "verification")
    assert report["failures"] == []
    assert report["slope"] >= 6.5


def test_errors_map_to_python_exceptions():
    with pytest.raises(maxent.NumericalError):
        maxent.solve(BINARY, [1.5])
    with pytest.raises(ValueError):
        maxent.normalize({"alphabet": ["a"], "q": [0], "r": []})
    with pytest.raises(maxent.DataError):
        maxent.solve(BINARY, [0.1, 0.2])


@pytest.mark.skipif("MAXENT_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_output_matches_bindings(tmp_path):
    path = tmp_path / "binary.json"
    path.write_text(json.dumps(BINARY))
    out = subprocess.run([os.environ["MAXENT_CLI"], "expand", "-d", "4", str(path)],
                         check=True, capture_output=True, text=True).stdout
    assert json.loads(out) == maxent.expand(BINARY, order=4)
    done = subprocess.run([os.environ["MAXENT_CLI"], "solve", "--rho", "1.5", str(path)], capture_output=True, text=True)
    assert done.returncode == 3
