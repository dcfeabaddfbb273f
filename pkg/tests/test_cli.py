import io
import json
import os

import numpy as np
import pytest
from numpy.testing import assert_allclose

from framecast.main import run
from framecast.schemas.common import ExitCodes
from framecast.schemas.documents import Document, operator_document, system_document, vector_document
from framecast.services.frames import FrameSystem

E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])


def invoke(*argv, stdin=None):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=stdout, stderr=stderr, stdin=stdin)
    return code, stdout.getvalue(), stderr.getvalue()


def payload(text):
    return json.loads(text.splitlines()[0])["payload"]


def error_code(stderr):
    return json.loads(stderr.splitlines()[-1])["error"]["code"]


def complex_matrix(rows):
    return np.array([[complex(re, im) for re, im in row] for row in rows])


@pytest.fixture
def inputs(write_document):
    return {
        "onb": write_document("onb", system_document(FrameSystem.from_vectors([E1, E2]))),
        "redundant": write_document("redundant", system_document(FrameSystem.from_vectors([E1, E1, E2]))),
        "line": write_document("line", system_document(FrameSystem.from_vectors([E1, 2 * E1]))),
        "contraction": write_document("contraction", operator_document(np.diag([0.5, 1.0 / 3.0]))),
        "unitary": write_document("unitary", operator_document(np.diag([1.0, -1.0]))),
        "hermitian": write_document("hermitian", operator_document(np.diag([2.0, 3.0]))),
        "jordan": write_document("jordan", operator_document([[0.5, 1.0], [0.0, 0.5]])),
        "ones": write_document("ones", vector_document(np.ones(2))),
        "e1": write_document("e1", vector_document(E1)),
    }


# ==========================================
# ANALYZE
# ==========================================

def test_analyze_orthonormal_basis(inputs):
    code, out, _ = invoke("analyze", inputs["onb"])
    assert code == ExitCodes.OK
    report = payload(out)
    assert report["status"] == "frame"
    assert report["bounds"]["lower_bound"] == pytest.approx(1.0)
    assert report["bounds"]["upper_bound"] == pytest.approx(1.0)


def test_analyze_redundant_system(inputs):
    code, out, _ = invoke("analyze", inputs["redundant"])
    assert code == ExitCodes.OK
    report = payload(out)
    assert report["bounds"]["upper_bound"] == pytest.approx(2.0)
    assert_allclose(report["frame_sequence"]["restricted_spectrum"], [1.0, 2.0], atol=1e-12)


def test_analyze_frame_sequence_only(inputs):
    code, out, _ = invoke("analyze", inputs["line"])
    assert code == ExitCodes.FRAME_SEQUENCE_ONLY
    report = payload(out)
    assert report["status"] == "frame_sequence_only"
    assert_allclose(complex_matrix([report["orthogonal_witness"]])[0], [0, 1], atol=1e-12)


def test_analyze_empty_system(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text(json.dumps({"kind": "system", "payload": {"dim": 2, "vectors": []}}))
    code, _, err = invoke("analyze", str(path))
    assert code == ExitCodes.DEGENERATE
    assert error_code(err) == "DEGENERATE_SYSTEM"


def test_analyze_dimension_mismatch(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "system", "payload": {"dim": 2, "vectors": [[[1, 0]]]}}))
    code, _, err = invoke("analyze", str(path))
    assert code == ExitCodes.DIMENSION_MISMATCH


@pytest.mark.parametrize("text", ["{not json", '{"kind": "matrix", "payload": {}}', "[1, 2]"])
def test_malformed_input(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    code, out, err = invoke("analyze", str(path))
    assert code == ExitCodes.MALFORMED_INPUT
    assert out == ""
    assert error_code(err) == "MALFORMED_INPUT"
    assert "Traceback" not in err


def test_wrong_document_kind(inputs):
    code, _, err = invoke("analyze", inputs["ones"])
    assert code == ExitCodes.MALFORMED_INPUT


def test_missing_file():
    code, _, err = invoke("analyze", "/nonexistent/system.json")
    assert code == ExitCodes.MALFORMED_INPUT


def test_reads_stdin(inputs):
    with open(inputs["onb"], encoding="utf-8") as handle:
        code, out, _ = invoke("analyze", "-", stdin=io.StringIO(handle.read()))
    assert code == ExitCodes.OK
    assert payload(out)["status"] == "frame"


def test_usage_errors_exit_one():
    assert invoke()[0] == ExitCodes.MALFORMED_INPUT
    assert invoke("frobnicate")[0] == ExitCodes.MALFORMED_INPUT


# ==========================================
# ITERATE / RECOVER / REPRESENT
# ==========================================

def test_iterate_steps(inputs):
    code, out, _ = invoke("iterate", "--op", inputs["contraction"], "--vec", inputs["ones"], "--steps", "3")
    assert code == ExitCodes.OK
    document = json.loads(out)
    assert document["kind"] == "system"
    assert len(document["payload"]["vectors"]) == 3
    assert set(document["meta"]["inputs"]) == {"operator", "vector"}


def test_iterate_infinite(inputs):
    code, out, _ = invoke("iterate", "--op", inputs["contraction"], "--vec", inputs["ones"], "--infinite")
    assert code == ExitCodes.OK
    report = payload(out)
    assert report["bounds"]["lower_bound"] == pytest.approx(0.02466, rel=1e-3)
    assert report["bounds"]["upper_bound"] == pytest.approx(2.43368, rel=1e-5)
    assert_allclose(complex_matrix(report["S"]).real, [[4 / 3, 6 / 5], [6 / 5, 9 / 8]], atol=1e-12)
    assert set(report["tail_bounds"]) == {"10", "100", "400"}


def test_iterate_infinite_unitary(inputs):
    code, _, err = invoke("iterate", "--op", inputs["unitary"], "--vec", inputs["ones"], "--infinite")
    assert code == ExitCodes.SPECTRAL_RADIUS
    assert error_code(err) == "SPECTRAL_RADIUS"


def test_iterate_needs_one_mode(inputs):
    code, _, _ = invoke("iterate", "--op", inputs["contraction"], "--vec", inputs["ones"])
    assert code == ExitCodes.MALFORMED_INPUT


def test_iterate_dimension_mismatch(inputs, write_document):
    vec = write_document("long", vector_document(np.ones(3)))
    code, _, _ = invoke("iterate", "--op", inputs["contraction"], "--vec", vec, "--steps", "2")
    assert code == ExitCodes.DIMENSION_MISMATCH


def test_recover_swap(write_document):
    path = write_document("swap", system_document(FrameSystem.from_vectors([E1, E2, E1])))
    code, out, _ = invoke("recover", path)
    assert code == ExitCodes.OK
    report = payload(out)
    assert report["consistent"]
    assert_allclose(complex_matrix(report["T_hat"]), [[0, 1], [1, 0]], atol=1e-12)


def test_represent(inputs):
    code, out, _ = invoke("represent", "--op", inputs["contraction"], "--vec", inputs["ones"])
    assert code == ExitCodes.OK
    report = payload(out)
    assert report["is_frame"]
    assert len(report["stein_identity"]) == 11


def test_classify(inputs):
    code, out, _ = invoke("classify", "--op", inputs["contraction"], "--vec", inputs["e1"])
    assert code == ExitCodes.OK
    report = payload(out)
    assert not report["generator"]["member"]
    assert report["generator"]["reason"] == "not cyclic"
    assert report["operator"]["member"]


# ==========================================
# DIAGONALIZE / PERTURB / CONJECTURE
# ==========================================

def test_diagonalize(inputs):
    code, out, _ = invoke("diagonalize", "--op", inputs["hermitian"], "--vec", inputs["ones"], "--poly", "1,1")
    assert code == ExitCodes.OK
    report = payload(out)
    assert_allclose(report["nodes"], [2.0, 3.0])
    assert_allclose(report["transform_values"], [[3.0, 0.0], [4.0, 0.0]], atol=1e-12)


def test_diagonalize_non_cyclic(inputs):
    code, _, err = invoke("diagonalize", "--op", inputs["hermitian"], "--vec", inputs["e1"])
    assert code == ExitCodes.NOT_CYCLIC
    assert error_code(err) == "NOT_CYCLIC"


def test_perturb_sandwich(inputs, write_document):
    scaled = write_document("scaled", system_document(FrameSystem.from_vectors([1.1 * E1, E2])))
    code, out, _ = invoke("perturb", inputs["onb"], scaled)
    assert code == ExitCodes.OK
    sandwich = payload(out)["sandwich"]
    assert_allclose(sandwich["predicted_bounds"], [0.81, 1.21], rtol=1e-12)
    assert sandwich["sandwich_ok"]


def test_perturb_inadmissible(inputs, write_document):
    swapped = write_document("swapped", system_document(FrameSystem.from_vectors([E2, E1])))
    code, _, err = invoke("perturb", inputs["onb"], swapped)
    assert code == ExitCodes.ADMISSIBILITY


def test_perturb_lambda_check_runs_when_fit_inadmissible(inputs, write_document):
    negated = write_document("negated", system_document(FrameSystem.from_vectors([-E1, -E2])))
    code, out, err = invoke("perturb", inputs["onb"], negated, "--l1", "0.4", "--l2", "0.4", "--trials", "50")
    assert code == ExitCodes.OK, err
    report = payload(out)
    assert report["sandwich"] is None
    assert "not below 1" in report["sandwich_rejected"]
    check = report["operator_representation"]
    assert check["hypothesis_holds"] is False
    assert check["max_violation_ratio"] > 0
    assert check["representation"] is None


def test_perturb_operator_representation(inputs, write_document):
    scaled = write_document("scaled", system_document(FrameSystem.from_vectors([1.01 * E1, 1.01 * E2])))
    code, out, _ = invoke("perturb", inputs["onb"], scaled, "--l1", "0.5", "--l2", "0.5",
                          "--trials", "100", "--seed", "4")
    assert code == ExitCodes.OK
    document = json.loads(out)
    assert document["meta"]["seed"] == 4
    assert document["payload"]["operator_representation"]["hypothesis_holds"]


def test_conjecture_jordan(inputs):
    code, out, _ = invoke("conjecture", "--op", inputs["jordan"], "--trials", "5")
    assert code == ExitCodes.OK
    blocks = payload(out)["blocks"]
    assert len(blocks) == 1
    assert blocks[0]["certified"]
    assert_allclose(complex_matrix([blocks[0]["generator"]])[0], [0, 1], atol=1e-12)


# ==========================================
# GENERATE
# ==========================================

def test_generate_harmonic():
    code, out, _ = invoke("generate", "harmonic", "--dim", "2", "--size", "4")
    assert code == ExitCodes.OK
    operator, vector = (Document.model_validate(json.loads(line)) for line in out.splitlines())
    assert_allclose(np.diag(complex_matrix(operator.payload["matrix"])), [1, 1j], atol=1e-15)
    assert vector.payload["entries"] == [[1.0, 0.0], [1.0, 0.0]]


def test_generate_jordan():
    code, out, _ = invoke("generate", "jordan", "--lam", "0.5", "--size", "2")
    assert code == ExitCodes.OK
    matrix = complex_matrix(json.loads(out.splitlines()[0])["payload"]["matrix"])
    assert_allclose(matrix, [[0.5, 1.0], [0.0, 0.5]])


def test_generate_nilpotent_contraction():
    code, out, _ = invoke("generate", "contraction", "--dim", "3", "--rho", "0")
    assert code == ExitCodes.OK
    matrix = complex_matrix(json.loads(out.splitlines()[0])["payload"]["matrix"])
    assert_allclose(np.linalg.matrix_power(matrix, 3), 0, atol=1e-12)


@pytest.mark.parametrize("argv", [
    ["generate", "contraction", "--dim", "3", "--rho", "1.5"],
    ["generate", "harmonic", "--dim", "4", "--size", "2"],
    ["generate", "jordan", "--size", "2"],
])
def test_generate_parameter_errors(argv):
    assert invoke(*argv)[0] == ExitCodes.MALFORMED_INPUT


def test_generate_to_directory(tmp_path):
    out_dir = tmp_path / "example"
    code, out, _ = invoke("generate", "jordan", "--lam", "0.5", "--size", "2", "--out", str(out_dir))
    assert code == ExitCodes.OK
    assert out == ""
    assert sorted(os.listdir(out_dir)) == ["operator.json", "vector.json"]


# ==========================================
# DETERMINISM AND CONFIGURATION
# ==========================================

@pytest.mark.parametrize("command", [
    ["analyze", "onb"],
    ["iterate", "--op", "contraction", "--vec", "ones", "--infinite"],
    ["perturb", "onb", "onb", "--l1", "0.5", "--l2", "0.5", "--trials", "50"],
    ["conjecture", "--op", "jordan", "--trials", "5"],
])
def test_reports_are_byte_identical(inputs, command):
    argv = [inputs.get(token, token) for token in command]
    first = invoke(*argv)
    second = invoke(*argv)
    assert first[0] == ExitCodes.OK
    assert first[1] == second[1]


def test_tolerances_echoed_and_overridable(inputs, monkeypatch):
    monkeypatch.setenv("FRAMECAST_TOL_IDENTITY", "1e-6")
    code, out, _ = invoke("analyze", inputs["onb"])
    assert json.loads(out)["meta"]["tolerances"]["tol_identity"] == 1e-6
    code, out, _ = invoke("analyze", inputs["onb"], "--tol-identity", "1e-7")
    assert json.loads(out)["meta"]["tolerances"]["tol_identity"] == 1e-7


def test_bad_environment_variable(inputs, monkeypatch):
    monkeypatch.setenv("FRAMECAST_TOL_IDENTITY", "tiny")
    code, _, err = invoke("analyze", inputs["onb"])
    assert code == ExitCodes.MALFORMED_INPUT
    assert error_code(err) == "CONFIGURATION"


def test_input_digests_embedded(inputs):
    _, out, _ = invoke("analyze", inputs["onb"])
    digests = json.loads(out)["meta"]["inputs"]
    assert list(digests) == ["system"]
    assert len(digests["system"]) == 64


# ==========================================
# GOLDEN SUITE
# ==========================================

def test_golden_record_then_check(tmp_path):
    directory = str(tmp_path / "golden")
    code, out, err = invoke("golden", "--record", directory)
    assert code == ExitCodes.OK, err
    with open(os.path.join(directory, "manifest.json"), encoding="utf-8") as handle:
        manifest = json.load(handle)
    assert len(manifest["documents"]) >= 10

    code, out, _ = invoke("golden", "--check", directory)
    assert code == ExitCodes.OK
    assert payload(out)["mismatched"] == []

    manifest["documents"]["analyze_onb"] = "0" * 64
    with open(os.path.join(directory, "manifest.json"), "w", encoding="utf-8") as handle:
        json.dump(manifest, handle)
    code, _, err = invoke("golden", "--check", directory)
    assert code == ExitCodes.GOLDEN_MISMATCH
    assert error_code(err) == "GOLDEN_MISMATCH"


GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "golden")


@pytest.fixture
def clean_environment(monkeypatch):
    for variable in ("FRAMECAST_TOL_IDENTITY", "FRAMECAST_RANK_TOL", "FRAMECAST_RADIUS_MARGIN",
                     "FRAMECAST_NODE_MERGE_TOL"):
        monkeypatch.delenv(variable, raising=False)


def test_golden_matches_stored_manifest(clean_environment):
    code, out, err = invoke("golden", "--check", GOLDEN_DIR)
    assert code == ExitCodes.OK, err
    report = payload(out)
    assert {"generate_harmonic", "generate_jordan"} <= set(report["matched"])
    assert report["mismatched"] == []
    assert report["missing"] == []


def test_golden_outputs_match_stored_documents(clean_environment, tmp_path):
    directory = str(tmp_path / "golden")
    code, _, err = invoke("golden", "--record", directory)
    assert code == ExitCodes.OK, err
    for name in ("generate_harmonic", "generate_jordan"):
        with open(os.path.join(directory, f"{name}.json"), "rb") as recorded, \
                open(os.path.join(GOLDEN_DIR, f"{name}.json"), "rb") as stored:
            assert recorded.read() == stored.read()


def test_golden_stored_case_without_output(clean_environment, tmp_path):
    with open(os.path.join(GOLDEN_DIR, "manifest.json"), encoding="utf-8") as handle:
        manifest = json.load(handle)
    manifest["documents"]["retired_case"] = "0" * 64
    with open(tmp_path / "manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle)
    code, _, err = invoke("golden", "--check", str(tmp_path))
    assert code == ExitCodes.GOLDEN_MISMATCH
    assert json.loads(err.splitlines()[-1])["error"]["details"]["missing"] == ["retired_case"]
