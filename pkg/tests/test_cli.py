import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
import scipy.io

from nonneg.cli import main
from nonneg.eigen import SymmetricMatrix
from nonneg.io import read_matrix_file, write_matrix_market

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(*argv):
    return main(list(argv))


def test_analyze_identity_fixture(capsys):
    assert run_cli("analyze", str(FIXTURES / "identity_3.mtx")) == 0
    out = capsys.readouterr().out
    assert "distinct eigenvalues: 1" in out
    assert "HAS_NONNEG" in out


def test_analyze_structured_output_fields(tmp_path, capsys):
    report_path = tmp_path / "id.json"
    assert run_cli(
        "analyze", str(FIXTURES / "identity_3.mtx"), "--format", "json",
        "--report", str(report_path),
    ) == 0
    report = json.loads(capsys.readouterr().out)
    assert report == json.loads(report_path.read_text())
    assert report["kind"] == "analysis"
    assert report["backend"] == "approx"
    assert report["distinct_eigenvalues"] == 1
    assert report["theorem_applicable"] and report["theorem_satisfied"]
    assert set(report["tolerances"]) == {"rank_tol", "cluster_tol", "feas_tol", "verify_tol"}
    (entry,) = report["eigenspaces"]
    assert entry["verdict"] == "HAS_NONNEG" and entry["multiplicity"] == 3


def test_analyze_counterexample_fixture(capsys):
    assert run_cli("analyze", str(FIXTURES / "counterexample_3.mtx")) == 0
    out = capsys.readouterr().out
    assert "nonnegative eigenvector: none exists" in out
    assert out.count("NO_NONNEG") == 3


def test_analyze_rejects_asymmetric_input(capsys):
    assert run_cli("analyze", str(FIXTURES / "asymmetric.mtx")) == 1
    err = capsys.readouterr().err
    assert err.startswith("error[E_PARSE]")
    assert "not symmetric" in err


def test_analyze_rejects_exact_backend(capsys):
    assert run_cli("analyze", str(FIXTURES / "identity_3.mtx"), "--backend", "exact") == 1
    assert "error[E_USAGE]" in capsys.readouterr().err


def test_analyze_structured_text_matrix(capsys):
    assert run_cli("analyze", str(FIXTURES / "exchange.txt")) == 0
    out = capsys.readouterr().out
    assert "distinct eigenvalues: 2" in out


def test_subspace_x_axis_both_sides(capsys):
    assert run_cli("subspace", str(FIXTURES / "xaxis.basis")) == 0
    assert "BOTH_SIDES" in capsys.readouterr().out


def test_subspace_mixed_sign_line(tmp_path, capsys):
    basis = tmp_path / "line.basis"
    basis.write_text("ambient_dim 2\nvector 1 -1\n")
    assert run_cli("subspace", str(basis), "--format", "json") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["classification"] == "ONLY_COMPLEMENT"
    assert report["v"]["verdict"] == "NO_NONNEG"
    assert [float(e) for e in report["v"]["vector"]] == [1.0, 1.0]


def test_subspace_empty_basis(tmp_path, capsys):
    basis = tmp_path / "zero.basis"
    basis.write_text("ambient_dim 3\n")
    assert run_cli("subspace", str(basis), "--format", "json") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["classification"] == "ONLY_COMPLEMENT"
    assert report["v_perp"]["verdict"] == "HAS_NONNEG"


def test_subspace_rational_literals_select_exact_backend(capsys):
    assert run_cli("subspace", str(FIXTURES / "counterexample_vw.basis"), "--format", "json") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["backend"] == "exact"
    assert report["classification"] == "ONLY_V"
    assert all(isinstance(entry, str) for entry in report["v"]["vector"])


def test_subspace_float_backend_override(capsys):
    assert run_cli(
        "subspace", str(FIXTURES / "counterexample_vw.basis"), "--backend", "float", "--format", "json"
    ) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["backend"] == "approx"
    assert report["classification"] == "ONLY_V"


def test_counterexample_writes_matrix_and_sidecar(tmp_path, capsys):
    out_path = tmp_path / "ce.mtx"
    assert run_cli(
        "counterexample", "--dim", "4", "--eigenvalues", "1,2,3", "--out", str(out_path)
    ) == 0
    capsys.readouterr()
    sidecar = tmp_path / "ce.mtx.report.json"
    assert sidecar.exists()
    report = json.loads(sidecar.read_text())
    assert report["distinct_eigenvalues"] == 3
    assert not report["theorem_applicable"]
    assert all(e["verdict"] == "NO_NONNEG" for e in report["eigenspaces"])
    # round-trips through analyze and verify
    assert run_cli("analyze", str(out_path)) == 0
    assert run_cli("verify", str(sidecar), str(out_path)) == 0


def test_counterexample_dimension_guard(capsys):
    assert run_cli("counterexample", "--dim", "2", "--eigenvalues", "1,2,3", "--out", "x.mtx") == 1
    err = capsys.readouterr().err
    assert "error[E_USAGE]" in err and "n >= 3" in err


def test_verify_analysis_round_trip(tmp_path, capsys):
    report_path = tmp_path / "ce3.json"
    assert run_cli(
        "analyze", str(FIXTURES / "counterexample_3.mtx"), "--report", str(report_path)
    ) == 0
    assert run_cli("verify", str(report_path), str(FIXTURES / "counterexample_3.mtx")) == 0


def test_verify_subspace_round_trip(tmp_path, capsys):
    report_path = tmp_path / "vw.json"
    assert run_cli(
        "subspace", str(FIXTURES / "counterexample_vw.basis"), "--report", str(report_path)
    ) == 0
    assert run_cli("verify", str(report_path), str(FIXTURES / "counterexample_vw.basis")) == 0


def test_verify_rejects_tampered_witness(tmp_path, capsys):
    report_path = tmp_path / "vw.json"
    run_cli("subspace", str(FIXTURES / "counterexample_vw.basis"), "--report", str(report_path))
    capsys.readouterr()
    report = json.loads(report_path.read_text())
    report["v"]["vector"] = ["1", "0", "0"]  # not a member of span{v, w}
    report_path.write_text(json.dumps(report))
    assert run_cli("verify", str(report_path), str(FIXTURES / "counterexample_vw.basis")) == 3
    assert "error[E_VERIFY]" in capsys.readouterr().err


def test_verify_rejects_negated_certificate(tmp_path, capsys):
    report_path = tmp_path / "line.json"
    basis = tmp_path / "line.basis"
    basis.write_text("ambient_dim 2\nvector 1 -1\n")
    run_cli("subspace", str(basis), "--report", str(report_path))
    capsys.readouterr()
    report = json.loads(report_path.read_text())
    report["v"]["vector"] = [-float(e) for e in report["v"]["vector"]]
    report_path.write_text(json.dumps(report))
    assert run_cli("verify", str(report_path), str(basis)) == 3


def test_verify_rejects_mismatched_input(tmp_path, capsys):
    report_path = tmp_path / "id.json"
    run_cli("analyze", str(FIXTURES / "identity_3.mtx"), "--report", str(report_path))
    capsys.readouterr()
    assert run_cli("verify", str(report_path), str(FIXTURES / "counterexample_3.mtx")) == 1
    assert "digest" in capsys.readouterr().err


def test_structured_output_is_byte_deterministic(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    run_cli("analyze", str(FIXTURES / "counterexample_3.mtx"), "--report", str(first))
    run_cli("analyze", str(FIXTURES / "counterexample_3.mtx"), "--report", str(second))
    assert first.read_bytes() == second.read_bytes()

    run_cli("subspace", str(FIXTURES / "counterexample_vw.basis"), "--report", str(first))
    run_cli("subspace", str(FIXTURES / "counterexample_vw.basis"), "--report", str(second))
    assert first.read_bytes() == second.read_bytes()


def test_matrix_market_writer_against_scipy(tmp_path):
    rng = np.random.default_rng(8)
    for _ in range(20):
        n = int(rng.integers(1, 7))
        G = rng.uniform(-3, 3, (n, n))
        M = SymmetricMatrix.from_rows((G + G.T) / 2)
        path = tmp_path / "m.mtx"
        write_matrix_market(path, M)
        oracle = np.asarray(scipy.io.mmread(str(path)))
        np.testing.assert_array_equal(oracle, M.entries)
        ours = read_matrix_file(path)
        np.testing.assert_array_equal(ours.entries, M.entries)


def test_matrix_market_general_format_reads(tmp_path):
    # column-major general array file, checked against scipy's reader
    path = tmp_path / "g.mtx"
    path.write_text(
        "%%MatrixMarket matrix array real general\n% comment line\n2 2\n1.0\n2.0\n2.0\n5.0\n"
    )
    ours = read_matrix_file(path)
    oracle = np.asarray(scipy.io.mmread(str(path)))
    np.testing.assert_array_equal(ours.entries, oracle)


def test_matrix_market_malformed_inputs(tmp_path, capsys):
    cases = [
        "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1.0\n",
        "%%MatrixMarket matrix array complex general\n2 2\n1\n0\n0\n1\n",
        "%%MatrixMarket matrix array real symmetric\n2 3\n1\n",
        "%%MatrixMarket matrix array real symmetric\n2 2\n1.0\n",
    ]
    for text in cases:
        path = tmp_path / "bad.mtx"
        path.write_text(text)
        assert run_cli("analyze", str(path)) == 1
        assert "error[E_PARSE]" in capsys.readouterr().err


def test_missing_file_is_a_parse_error(capsys):
    assert run_cli("analyze", "no-such-file.mtx") == 1
    assert "error[E_PARSE]" in capsys.readouterr().err


def test_seed_env_var_is_accepted(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("NONNEG_SEED", "7")
    out_path = tmp_path / "ce.mtx"
    assert run_cli(
        "counterexample", "--dim", "3", "--eigenvalues", "1,2,3", "--out", str(out_path)
    ) == 0


def test_nonpositive_tolerance_rejected(capsys):
    assert run_cli("analyze", str(FIXTURES / "identity_3.mtx"), "--feas-tol", "-1") == 1
    assert "must be positive" in capsys.readouterr().err


def test_cluster_tolerance_flag_merges_near_degenerate_eigenvalues(tmp_path, capsys):
    matrix = tmp_path / "near.txt"
    matrix.write_text("dim 3\nrow 1 0 0\nrow 0 1.0000001 0\nrow 0 0 5\n")
    assert run_cli("analyze", str(matrix)) == 0
    assert "distinct eigenvalues: 3" in capsys.readouterr().out
    assert run_cli("analyze", str(matrix), "--cluster-tol", "1e-5") == 0
    assert "distinct eigenvalues: 2" in capsys.readouterr().out


def test_merging_truly_distinct_eigenvalues_is_a_numerical_failure(capsys):
    # a huge cluster tolerance fuses the -1 and +1 eigenspaces of the exchange
    # matrix into a fake eigenspace; the eigen-residual guard must refuse it
    assert run_cli("analyze", str(FIXTURES / "exchange.txt"), "--cluster-tol", "10") == 2
    assert "error[E_NUMERIC]" in capsys.readouterr().err


def test_numerical_failure_maps_to_exit_2(monkeypatch, capsys):
    from nonneg.errors import NumericalFailure

    def broken(*args, **kwargs):
        raise NumericalFailure("synthetic breakdown")

    monkeypatch.setattr("nonneg.cli.analyze", broken)
    assert run_cli("analyze", str(FIXTURES / "identity_3.mtx")) == 2
    assert "error[E_NUMERIC]" in capsys.readouterr().err


def test_unwritable_output_path(tmp_path, capsys):
    out = tmp_path / "missing-dir" / "ce.mtx"
    assert run_cli("counterexample", "--dim", "3", "--eigenvalues", "1,2,3", "--out", str(out)) == 1
    assert "error[E_USAGE]" in capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nonneg.cli", "analyze", str(FIXTURES / "identity_3.mtx")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "distinct eigenvalues: 1" in proc.stdout
