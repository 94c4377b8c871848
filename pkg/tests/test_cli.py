import copy
import io
import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

import bunchain
from bunchain.cli import main, render, run_document
from bunchain.errors import UnknownKind
from bunchain.schemas import KINDS, emit_schema, schema_for

EXAMPLES = Path(bunchain.__file__).parent / "examples"

EXPECTED_EXIT = {
    "bundle_family.json": 0,
    "chain_family.json": 0,
    "fibre_chain.json": 0,
    "finset_category.json": 0,
    "jet_curve_probe.json": 0,
    "jet_descriptor.json": 0,
    "jet_worked_example.json": 0,
    "jet_prolong.json": 0,
    "ladder_identity.json": 0,
    "ladder_perturbed.json": 1,
    "short_exact.json": 0,
    "z180_chain.json": 0,
    "zero_map_sequence.json": 1,
}


def load(name):
    return json.loads((EXAMPLES / name).read_text())


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_every_example_is_listed():
    assert sorted(p.name for p in EXAMPLES.glob("*.json")) == sorted(EXPECTED_EXIT)


@pytest.mark.parametrize("name", sorted(EXPECTED_EXIT))
def test_example_exit_codes(capsys, name):
    code, out, _ = run_cli(capsys, "--input", str(EXAMPLES / name))
    assert code == EXPECTED_EXIT[name]
    report = json.loads(out)
    assert (report["overall"] == "pass") == (code == 0)


@pytest.mark.parametrize("name", sorted(EXPECTED_EXIT))
def test_examples_validate_against_emitted_schema(name):
    doc = load(name)
    jsonschema.Draft202012Validator(json.loads(emit_schema(doc["kind"]))).validate(doc)


def test_jet_worked_example_report(capsys):
    _, out, _ = run_cli(capsys, "--input", str(EXAMPLES / "jet_worked_example.json"))
    assert json.loads(out)["data"]["jet"]["values"] == ["2", "4", "1", "4", "2", "0"]


def test_z180_report(capsys):
    code, out, _ = run_cli(capsys, "--input", str(EXAMPLES / "z180_chain.json"))
    report = json.loads(out)
    assert code == 0
    assert report["data"]["group_orders"] == [1, 4, 20, 180]
    names = {c["name"] for c in report["checks"]}
    assert {"link[0]", "link[1]", "link[2]", "principal[0]", "principal[3]"} <= names


def test_perturbed_ladder_witness(capsys):
    code, out, _ = run_cli(capsys, "--input", str(EXAMPLES / "ladder_perturbed.json"), "--quiet")
    failed = [c for c in json.loads(out)["checks"] if c["verdict"] == "fail"]
    assert code == 1
    assert [c["name"] for c in failed] == ["square[3]"]
    assert failed[0]["witness"]["element"] == [1]


def test_quiet_hides_passing_checks(capsys):
    _, loud, _ = run_cli(capsys, "--input", str(EXAMPLES / "short_exact.json"))
    _, quiet, _ = run_cli(capsys, "--input", str(EXAMPLES / "short_exact.json"), "--quiet")
    verdicts = {c["verdict"] for c in json.loads(quiet)["checks"]}
    assert "pass" not in verdicts
    assert len(json.loads(loud)["checks"]) > len(json.loads(quiet)["checks"])


# --- determinism ----------------------------------------------------------------------


@pytest.mark.parametrize("name", ["jet_curve_probe.json", "ladder_perturbed.json", "z180_chain.json"])
def test_same_seed_same_bytes(capsys, name):
    path = str(EXAMPLES / name)
    first = run_cli(capsys, "--input", path, "--seed", "5")
    second = run_cli(capsys, "--input", path, "--seed", "5")
    assert first == second


def test_seed_flag_overrides_document():
    doc = load("jet_curve_probe.json")
    assert run_document(doc).data["seed"] == doc["seed"]
    assert run_document(doc, seed=99).data["seed"] == 99


def test_render_is_sorted_json():
    text = render(run_document(load("short_exact.json")))
    assert text == json.dumps(json.loads(text), sort_keys=True, ensure_ascii=False)


# --- malformed input ----------------------------------------------------------------------


def malformed(capsys, doc, tmp_path):
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    code, out, err = run_cli(capsys, "--input", str(path))
    assert code == 2
    payload = json.loads(out)
    assert payload["overall"] == "malformed"
    assert payload["path"] in err
    return payload


def test_unknown_kind(capsys, tmp_path):
    assert malformed(capsys, {"kind": "nope", "payload": {}}, tmp_path)["path"] == "$.kind"


def test_schema_violation_names_path(capsys, tmp_path):
    doc = load("short_exact.json")
    doc["payload"]["maps"][0]["matrix"] = "oops"
    assert malformed(capsys, doc, tmp_path)["path"] == "$.payload.maps[0].matrix"


def test_semantic_error_names_path(capsys, tmp_path):
    doc = load("short_exact.json")
    doc["payload"]["maps"][1]["matrix"] = [[1]]  # Z/2 -> Z/4 by 1 is ill-defined
    assert malformed(capsys, doc, tmp_path)["path"] == "$.payload.maps[1]"


def test_partial_projection_path(capsys, tmp_path):
    doc = load("bundle_family.json")
    bundle = doc["payload"]["bundles"][0]
    bundle["projection"] = {"x": "y"}
    assert malformed(capsys, doc, tmp_path)["path"].startswith("$.payload.bundles[0]")


def test_bad_polynomial_path(capsys, tmp_path):
    doc = load("jet_worked_example.json")
    doc["payload"]["section"] = "x^^2"
    assert malformed(capsys, doc, tmp_path)["path"] == "$.payload.section"


def test_missing_conditional_field(capsys, tmp_path):
    doc = load("jet_worked_example.json")
    del doc["payload"]["point"]
    malformed(capsys, doc, tmp_path)


def test_broken_link_path(capsys, tmp_path):
    doc = copy.deepcopy(load("z180_chain.json"))
    doc["payload"]["links"][0]["base_map"] = {"rule": "constant", "value": "0"}
    code, out, _ = run_cli(capsys, "--input", _write(tmp_path, doc))
    report = json.loads(out)
    assert code == 1
    assert [c["name"] for c in report["checks"] if c["verdict"] == "fail"] == ["link[0]"]


def _write(tmp_path, doc):
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_invalid_json(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, out, _ = run_cli(capsys, "--input", str(path))
    assert code == 2 and json.loads(out)["path"] == "$"


def test_missing_file(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "--input", str(tmp_path / "absent.json"))
    assert code == 2


def test_no_arguments(capsys):
    code, _, err = run_cli(capsys)
    assert code == 2 and "--input" in err


def test_stdin(monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO((EXAMPLES / "jet_worked_example.json").read_text()))
    code, out, _ = run_cli(capsys, "--input", "-")
    assert code == 0 and json.loads(out)["data"]["jet"]["values"][0] == "2"


# --- schemas --------------------------------------------------------------------------------


@pytest.mark.parametrize("kind", KINDS)
def test_schema_is_stable_and_valid(kind):
    text = emit_schema(kind)
    assert text == emit_schema(kind)
    jsonschema.Draft202012Validator.check_schema(json.loads(text))


def test_schema_flag(capsys):
    code, out, _ = run_cli(capsys, "--schema", "sequence")
    assert code == 0 and json.loads(out)["properties"]["kind"]["const"] == "sequence"
    code, _, err = run_cli(capsys, "--schema", "nope")
    assert code == 2 and "nope" in err
    with pytest.raises(UnknownKind):
        schema_for("nope")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bunchain", "--input", str(EXAMPLES / "z180_chain.json")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["overall"] == "pass"


SAMPLER_SCRIPT = """
import random
from bunchain.sampling import random_nested_family
for s in range(30):
    print([sorted(map(str, b.total)) + sorted(map(str, b.base)) for b in random_nested_family(random.Random(s))])
"""


def test_sampling_independent_of_hash_seed():
    outputs = set()
    for hash_seed in ("1", "2", "3"):
        proc = subprocess.run([sys.executable, "-c", SAMPLER_SCRIPT], capture_output=True, text=True, check=True,
                              env={**os.environ, "PYTHONHASHSEED": hash_seed})
        outputs.add(proc.stdout)
    assert len(outputs) == 1
