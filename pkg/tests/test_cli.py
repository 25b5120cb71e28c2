"""CLI: schemas, exit codes, determinism, formats."""

import json
import math

import pytest

from regsing.cli import EXIT_NUMERICAL, EXIT_OK, EXIT_SCHEMA, main


def _entry(re, im=0.0):
    return {"re": re, "im": im}


def kernel_doc():
    # nu = 1/2 regular-branch rows with f'(1) = f(1): determinant 2/3
    return {
        "R": 1.0,
        "lambdas": [0.0],
        "q0": 0,
        "A": [[_entry(0.0)]],
        "B": [[_entry(1.0)]],
        "regular_bc": {"type": "robin", "alpha": -1.0},
    }


def bessel_doc():
    # nu = 0 regular-branch rows with f'(1) = f(1)/2: F = mu J_1(mu)
    return {
        "R": 1.0,
        "lambdas": [-0.25],
        "q0": 1,
        "A": [[_entry(0.0)]],
        "B": [[_entry(1.0)]],
        "regular_bc": {"type": "robin", "alpha": -0.5},
    }


def circle_doc():
    return {
        "m": 2,
        "ccl_spectra": {"0": [[0.0, 1], [1.0, 2], [4.0, 2]], "1": [[0.0, 1], [4.5, 1]]},
        "harmonic_dims": {"0": 1, "1": 1},
    }


@pytest.fixture()
def write_doc(tmp_path):
    def _write(doc, name="spec.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc), encoding="utf-8")
        return str(path)

    return _write


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestDet:
    def test_kernel_case(self, write_doc, capsys):
        code, out, _ = run_cli(capsys, "det", write_doc(kernel_doc()))
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["command"] == "det"
        assert payload["report"]["method"] == "regularized"
        assert payload["report"]["k0"] == 1
        assert abs(payload["report"]["value"] - 2.0 / 3.0) < 1e-9

    def test_envelope_fields(self, write_doc, capsys):
        code, out, _ = run_cli(capsys, "det", write_doc(kernel_doc()))
        payload = json.loads(out)
        assert payload["tool"] == "regsing"
        assert len(payload["input_sha256"]) == 64
        assert payload["deterministic"] is True
        assert payload["version"]

    def test_byte_identical_reruns(self, write_doc, capsys):
        path = write_doc(bessel_doc())
        _, out1, _ = run_cli(capsys, "det", path)
        _, out2, _ = run_cli(capsys, "det", path)
        assert out1 == out2


class TestSpectrum:
    def test_csv_first_root(self, write_doc, capsys, j1_zeros_oracle):
        code, out, _ = run_cli(
            capsys, "spectrum", write_doc(bessel_doc()), "--mu-max", "10", "--format", "csv"
        )
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[1] == "index,axis,root,eigenvalue"
        first = lines[2].split(",")
        assert first[1] == "real"
        assert abs(float(first[2]) - j1_zeros_oracle[0]) < 1e-8

    def test_json_report(self, write_doc, capsys):
        code, out, _ = run_cli(capsys, "spectrum", write_doc(kernel_doc()), "--mu-max", "8")
        assert code == EXIT_OK
        rep = json.loads(out)["report"]
        assert rep["certified"] is True
        assert abs(rep["positive"][0] - 4.4934094579) < 1e-6


class TestValidateAndSchema:
    def test_rank_violation_exits_2(self, write_doc, capsys):
        doc = bessel_doc()
        doc["B"] = [[_entry(0.0)]]
        code, out, _ = run_cli(capsys, "validate", write_doc(doc))
        assert code == EXIT_SCHEMA
        rep = json.loads(out)["report"]
        assert rep["ok"] is False
        assert rep["violations"][0]["name"] == "rank"

    def test_valid_document_exits_0(self, write_doc, capsys):
        code, out, _ = run_cli(capsys, "validate", write_doc(bessel_doc()))
        assert code == EXIT_OK
        assert json.loads(out)["report"]["ok"] is True

    def test_missing_key_is_schema_error(self, write_doc, capsys):
        doc = kernel_doc()
        del doc["lambdas"]
        code, _, err = run_cli(capsys, "det", write_doc(doc))
        assert code == EXIT_SCHEMA
        assert "lambdas" in err

    def test_bad_matrix_entry_is_schema_error(self, write_doc, capsys):
        doc = kernel_doc()
        doc["A"] = [[1.0]]
        code, _, _ = run_cli(capsys, "det", write_doc(doc))
        assert code == EXIT_SCHEMA

    def test_unreadable_json(self, tmp_path, capsys):
        path = tmp_path / "junk.json"
        path.write_text("{", encoding="utf-8")
        code, _, _ = run_cli(capsys, "det", str(path))
        assert code == EXIT_SCHEMA

    def test_numerical_failure_exits_3(self, write_doc, capsys):
        # finite-t style pre-check failure: zeta at s <= 1/2
        code, _, err = run_cli(capsys, "zeta", write_doc(bessel_doc()), "--s", "0.4")
        assert code == EXIT_NUMERICAL


class TestCone:
    def test_circle_degrees(self, write_doc, capsys):
        code, out, _ = run_cli(capsys, "cone", write_doc(circle_doc(), "cone.json"))
        assert code == EXIT_OK
        degrees = json.loads(out)["report"]["degrees"]
        assert abs(degrees["0"]["value"] - math.sqrt(2 * math.pi)) < 1e-12
        assert abs(degrees["1"]["value"] - math.pi**2 / 4.0) < 1e-12
        assert abs(degrees["2"]["value"] - math.sqrt(math.pi / 2.0)) < 1e-12

    def test_single_degree(self, write_doc, capsys):
        code, out, _ = run_cli(
            capsys, "cone", write_doc(circle_doc(), "cone.json"), "--degree", "1"
        )
        assert code == EXIT_OK
        degrees = json.loads(out)["report"]["degrees"]
        assert list(degrees) == ["1"]

    def test_incomplete_spectrum_is_numerical(self, write_doc, capsys):
        doc = circle_doc()
        doc["ccl_spectra"]["0"] = [[0.0, 1], [1.0, 2]]
        code, _, err = run_cli(capsys, "cone", write_doc(doc, "cone.json"))
        assert code == EXIT_NUMERICAL
        assert "complete" in err


class TestOtherCommands:
    def test_eval_f(self, write_doc, capsys):
        code, out, _ = run_cli(capsys, "eval-f", write_doc(kernel_doc()), "--mu", "3.141592653589793")
        assert code == EXIT_OK
        rep = json.loads(out)["report"]
        assert abs(rep["value"]["re"] - 1.0) < 1e-12

    def test_f_at_zero(self, write_doc, capsys):
        code, out, _ = run_cli(capsys, "f-at-zero", write_doc(bessel_doc()))
        assert code == EXIT_OK
        assert abs(json.loads(out)["report"]["f_zero"]) < 1e-12

    def test_eval_f_complex_argument(self, write_doc, capsys):
        # F(ix) = x sinh(x) for the nu=1/2 singular-branch fixture
        doc = {
            "R": 1.0,
            "lambdas": [0.0],
            "q0": 0,
            "A": [[_entry(1.0)]],
            "B": [[_entry(0.0)]],
            "regular_bc": {"type": "robin", "alpha": 0.0},
        }
        code, out, _ = run_cli(capsys, "eval-f", write_doc(doc), "--mu", "2j")
        assert code == EXIT_OK
        rep = json.loads(out)["report"]
        assert abs(rep["value"]["re"] - 2.0 * math.sinh(2.0)) < 1e-10

    def test_zeta(self, write_doc, capsys):
        code, out, _ = run_cli(
            capsys, "zeta", write_doc(bessel_doc()), "--s", "2", "--mu-max", "60"
        )
        assert code == EXIT_OK
        rep = json.loads(out)["report"]
        assert abs(rep["direct"] - rep["contour"]) < 1e-4 * abs(rep["contour"])

    def test_verify_asymptotics(self, write_doc, capsys):
        code, out, _ = run_cli(capsys, "verify-asymptotics", write_doc(bessel_doc()))
        assert code == EXIT_OK
        rep = json.loads(out)["report"]
        assert rep["strictly_decreasing"] is True
        assert len(rep["points"]) == 3

    def test_verify_contour(self, write_doc, capsys):
        code, out, _ = run_cli(
            capsys,
            "verify-contour",
            write_doc(bessel_doc()),
            "--s",
            "2",
            "--a-list",
            "8.2,14.4832",
        )
        assert code == EXIT_OK
        rep = json.loads(out)["report"]
        assert rep["strictly_decreasing"] is True

    def test_17_digit_serialization(self, write_doc, capsys):
        _, out, _ = run_cli(capsys, "f-at-zero", write_doc(kernel_doc()))
        # value 0 for this fixture; check a float field from det instead
        _, out, _ = run_cli(capsys, "det", write_doc(kernel_doc()))
        assert "0.66666666666" in out
