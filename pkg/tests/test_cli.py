import json

import numpy as np
import pytest
from typer.testing import CliRunner

from relaxcheck.cli.app import app
from relaxcheck.errors import ExitCode

from conftest import example_path

runner = CliRunner()


def invoke(*args, **kwargs):
    return runner.invoke(app, ["--quiet", *args], **kwargs)


def parse(result):
    text = result.stdout
    return json.loads(text[text.index("{") :])


def write_generator(tmp_path, data, name="generator.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def matrix(values):
    arr = np.asarray(values, dtype=float)
    return {"rows": arr.shape[0], "cols": arr.shape[1], "re": arr.tolist()}


def test_build_dephasing():
    result = invoke("build", example_path("dephasing_d2.json"))
    assert result.exit_code == 0, result.output
    data = parse(result)
    assert data["manifest"]["command"] == "build"
    assert data["result"]["trace_C"] == pytest.approx(1.0)
    assert data["result"]["C"]["re"][2][2] == pytest.approx(1.0)


def test_build_lindblad_list_matches_family(tmp_path):
    from_ops = parse(invoke("build", example_path("amplitude_damping_d2.json")))
    family = write_generator(tmp_path, {"d": 2, "family": "amplitude_damping"})
    from_family = parse(invoke("build", family))
    np.testing.assert_allclose(
        from_ops["result"]["C"]["re"], from_family["result"]["C"]["re"], atol=1e-15
    )
    np.testing.assert_allclose(
        from_ops["result"]["C"]["im"], from_family["result"]["C"]["im"], atol=1e-15
    )


@pytest.mark.parametrize(
    "data, code",
    [
        (
            {"d": 2, "C": matrix(np.diag([0, 0, -0.1]))},
            ExitCode.NOT_COMPLETELY_POSITIVE,
        ),
        (
            {"d": 2, "H": matrix([[0, 1], [0, 0]]), "C": matrix(np.zeros((3, 3)))},
            ExitCode.NOT_HERMITIAN,
        ),
        ({"C": matrix(np.zeros((3, 3)))}, ExitCode.INPUT_ERROR),
        ({"d": 2, "C": matrix(np.zeros((2, 2)))}, ExitCode.INPUT_ERROR),
    ],
)
def test_build_exit_codes(tmp_path, data, code):
    result = invoke("build", write_generator(tmp_path, data))
    assert result.exit_code == code


def test_invariant_failures_outside_build_are_input_errors(tmp_path):
    path = write_generator(tmp_path, {"d": 2, "C": matrix(np.diag([0, 0, -0.1]))})
    assert invoke("check", path).exit_code == ExitCode.INPUT_ERROR


def test_missing_file_is_an_input_error(tmp_path):
    result = invoke("build", str(tmp_path / "missing.json"))
    assert result.exit_code == ExitCode.INPUT_ERROR


def test_unknown_tolerance_key():
    result = invoke("build", example_path("dephasing_d2.json"), "--tolerance", "nope=1")
    assert result.exit_code == ExitCode.INPUT_ERROR


def test_tolerance_config_file():
    result = invoke(
        "check",
        example_path("dephasing_d2.json"),
        "--config",
        example_path("tolerances.yaml"),
        "--tolerance",
        "pair=1e-7",
    )
    assert result.exit_code == 0
    tolerances = parse(result)["manifest"]["config"]["tolerances"]
    assert tolerances["witness"] == 1e-6
    assert tolerances["pair"] == 1e-7


def test_check_dephasing():
    result = invoke("check", example_path("dephasing_d2.json"))
    assert result.exit_code == 0
    data = parse(result)["result"]
    assert data["main_bound"]["passed"]
    assert data["main_bound"]["tightness_ratio"] == pytest.approx(np.sqrt(2) / 2)
    assert data["qubit_triangle"]["passed"]


def test_check_csv():
    result = invoke("check", example_path("depolarizing_d2.json"), "--output", "csv")
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0].startswith("# manifest: ")
    manifest = json.loads(lines[0].removeprefix("# manifest: "))
    assert manifest["command"] == "check"
    assert "witness" in manifest["config"]["tolerances"]
    assert lines[1] == "mode_index,rate,main_margin,half_sum_margin"
    assert len(lines) == 5


def test_spectrum_csv_on_stdout_has_manifest_and_no_negative_zero():
    result = invoke("spectrum", example_path("dephasing_d2.json"), "--output", "csv")
    assert result.exit_code == 0
    header, columns, *rows = result.stdout.strip().splitlines()
    assert json.loads(header.removeprefix("# manifest: "))["command"] == "spectrum"
    assert columns == "mode_index,rate,time,frequency"
    assert len(rows) == 3
    assert "-0.0" not in result.stdout


@pytest.mark.parametrize(
    "args, code, verdict",
    [
        (["--d", "2", "--times", "1,2,2"], 0, "CONSISTENT"),
        (["--d", "2", "--times", "0.1,2,2"], 1, "INCONSISTENT"),
        (["--d", "3", "--times", "1,1,1,1,1,1,1,1"], 0, "CONSISTENT"),
        (["--d", "2", "--times", "inf,inf,inf"], 0, "INDETERMINATE"),
        (["--d", "2", "--rates", "10,0.5,0.5"], 1, "INCONSISTENT"),
        (["--input", example_path("witness_inconsistent.json")], 1, "INCONSISTENT"),
    ],
)
def test_witness(args, code, verdict):
    result = invoke("witness", *args)
    assert result.exit_code == code
    assert parse(result)["result"]["verdict"] == verdict


def test_witness_tolerance_absorbs_noise():
    strict = invoke("witness", "--d", "2", "--times", "1.02,2,2")
    loose = invoke("witness", "--d", "2", "--times", "1.02,2,2", "--witness-tolerance", "0.05")
    assert strict.exit_code == 0
    assert parse(strict)["result"]["reports"]["qubit_triangle"]["details"]["lt_margin"] > 0
    assert loose.exit_code == 0
    inconsistent = invoke("witness", "--d", "2", "--times", "0.9,2,2")
    tolerated = invoke("witness", "--d", "2", "--times", "0.9,2,2", "--witness-tolerance", "0.1")
    assert inconsistent.exit_code == 1
    assert tolerated.exit_code == 0


def test_witness_projection():
    result = invoke("witness", "--d", "2", "--rates", "10,1,1", "--project")
    data = parse(result)["result"]
    projected = np.array(data["nearest_consistent_rates"])
    assert projected.sum() >= np.sqrt(2) * projected.max() - 1e-9


@pytest.mark.parametrize(
    "args",
    [
        ["--times", "1,2,2"],
        ["--d", "2"],
        ["--d", "2", "--times", "1,2"],
        ["--d", "2", "--times", "0,1,1"],
        ["--d", "2", "--times", "1,1,1", "--rates", "1,1,1"],
    ],
)
def test_witness_input_errors(args):
    assert invoke("witness", *args).exit_code == ExitCode.INPUT_ERROR


def test_sample_is_reproducible(tmp_path):
    outputs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        result = invoke(
            "sample",
            "--d", "2",
            "--n", "20",
            "--seed", "5",
            "--special", "dephasing",
            "--out-file", str(out),
            env={"SOURCE_DATE_EPOCH": "0"},
        )
        assert result.exit_code == 0, result.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]
    data = json.loads(outputs[0])
    assert data["manifest"]["timestamp"] == "1970-01-01T00:00:00Z"
    assert data["manifest"]["rng"]["name"] == "numpy.random.Philox"
    assert data["result"]["count"] == 21
    assert data["result"]["violation_count"] == 0
    assert data["result"]["max_ratio"] == pytest.approx(np.sqrt(2) / 2)


def test_sample_with_search(tmp_path):
    csv_path = tmp_path / "samples.csv"
    result = invoke(
        "sample", "--d", "2", "--n", "5", "--search-iterations", "20", "--csv-out", str(csv_path)
    )
    assert result.exit_code == 0
    data = parse(result)["result"]
    assert data["search"]["iterations"] == 20
    assert len(csv_path.read_text().splitlines()) == 6


def test_sample_rejects_bad_rank():
    assert invoke("sample", "--d", "2", "--n", "1", "--rank", "9").exit_code == ExitCode.INPUT_ERROR


def test_evolve_expectation():
    result = invoke(
        "evolve",
        example_path("dephasing_d2.json"),
        "--state", example_path("plus_state.json"),
        "--observable", example_path("sigma_x.json"),
        "--t-max", "2",
        "--n-points", "3",
    )
    assert result.exit_code == 0
    data = parse(result)["result"]
    np.testing.assert_allclose(data["expectation"]["values"], np.exp(-np.arange(3)), atol=1e-12)
    assert data["physicality"]["passed"]
    assert len(data["trajectory"]["states"]) == 3


def test_evolve_csv_with_manifest_sidecar(tmp_path):
    out = tmp_path / "traj.csv"
    result = invoke(
        "evolve",
        example_path("depolarizing_d2.json"),
        "--entry", "0,0",
        "--n-points", "4",
        "--output", "csv",
        "--out-file", str(out),
    )
    assert result.exit_code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("t,rho_00_re,rho_00_im,")
    assert len(lines) == 5
    manifest = json.loads((tmp_path / "traj.csv.manifest.json").read_text())
    assert manifest["command"] == "evolve"


def test_evolve_rejects_invalid_state(tmp_path):
    state = tmp_path / "state.json"
    state.write_text(json.dumps(matrix(np.eye(2))))
    result = invoke("evolve", example_path("dephasing_d2.json"), "--state", str(state))
    assert result.exit_code == ExitCode.INPUT_ERROR


def test_spectrum_stationary_state():
    result = invoke("spectrum", example_path("depolarizing_d2.json"))
    assert result.exit_code == 0
    data = parse(result)["result"]
    np.testing.assert_allclose(data["stationary_state"]["re"], np.eye(2) / 2, atol=1e-12)
    np.testing.assert_allclose(data["rates"], [1, 1, 1])


def test_spectrum_infinite_times_are_strings():
    data = parse(invoke("spectrum", example_path("dephasing_d2.json")))["result"]
    assert data["times"][2] == "inf"


def test_spectrum_of_ensemble_reference():
    result = invoke("spectrum", example_path("random_d3_seed7.json"))
    assert result.exit_code == 0
    data = parse(result)["result"]
    assert len(data["rates"]) == 8
    assert data["structure"]["conjugate_pairing_ok"]


def test_proofcheck():
    result = invoke("proofcheck", example_path("random_d3_seed7.json"), "--bw-pairs", "200")
    assert result.exit_code == 0
    data = parse(result)["result"]
    assert data["passed"]
    assert data["commutator_sampling"]["max_ratio"] <= 1 + 1e-12
