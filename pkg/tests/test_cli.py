import json
import math

import pytest

from beamforge.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    output = capsys.readouterr().out
    return code, output


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    assert code == 0, out
    return json.loads(out)


COMMON = ("--spectrum", "scaled", "--varrho", "1", "--k", "3", "--beta", "-15.5")


def test_sets_command(capsys):
    doc = run_json(capsys, "sets", *COMMON)
    assert doc["sets"]["E"] == [1, 2, 3]
    assert doc["sets"]["E3"] == [1, 2, 3]
    assert doc["Bstar"] == [
        {"pair": [1, 2], "kind": "B1*"},
        {"pair": [1, 3], "kind": "B2*"},
        {"pair": [2, 3], "kind": "B2*"},
    ]
    doc = run_json(capsys, "sets", "--spectrum", "scaled", "--k", "2", "--beta", "-10")
    assert doc["B1"] == [[1, 2]]
    doc = run_json(
        capsys, "sets", "--spectrum", "scaled", "--k", "72", "--beta", "-30", "--nmax", "8"
    )
    assert doc["T"] == [[3, 4, 5]]


def test_enumerate_counts_and_verification(capsys):
    doc = run_json(capsys, "enumerate", *COMMON)
    assert doc["counts"] == {"unimodal": 24, "ee_families": 0, "general_bimodal": 24}
    assert doc["verification"]["passed"] is True
    assert doc["verification"]["max_relative_residual"] < 1e-10


def test_enumerate_pair_restriction_matches_printed_values(capsys):
    doc = run_json(capsys, "enumerate", *COMMON, "--pairs", "1,2")
    assert doc["counts"]["general_bimodal"] == 8
    mags = sorted({abs(m["modes"][0]["alpha"]) for m in doc["general_bimodal"]})
    assert mags[0] == pytest.approx(0.51763, abs=1e-5)
    assert mags[1] == pytest.approx(1.93185, abs=1e-5)


def test_enumerate_no_compression(capsys):
    doc = run_json(capsys, "enumerate", "--spectrum", "scaled", "--beta", "0")
    assert doc["counts"] == {"unimodal": 0, "ee_families": 0, "general_bimodal": 0}
    assert any("E empty" in note for note in doc["notes"])


def test_enumerate_family_with_samples(capsys):
    doc = run_json(
        capsys, "enumerate", "--spectrum", "scaled", "--k", "2", "--beta", "-10",
        "--samples", "5",
    )
    fams = doc["ee_families"]
    assert len(fams) == 1
    assert fams[0]["kind"] == "B1"
    assert fams[0]["quadric"] == {"coeffs": [1.0, 4.0], "constant": -5.0}
    assert len(fams[0]["samples"]) == 5
    assert doc["verification"]["passed"] is True


def test_enumerate_verification_failure_exit_code(capsys):
    code, _ = run_cli(capsys, "enumerate", *COMMON, "--tol-res", "1e-30")
    assert code == 3


def test_deterministic_output(capsys):
    _, out1 = run_cli(capsys, "enumerate", *COMMON, "--samples", "3")
    _, out2 = run_cli(capsys, "enumerate", *COMMON, "--samples", "3")
    assert out1 == out2


def test_unimodal_json(capsys):
    doc = run_json(capsys, "unimodal", *COMMON)
    assert doc["count"] == 24


def test_unimodal_csv_branch_table(capsys, tmp_path):
    out = tmp_path / "branches.csv"
    code, _ = run_cli(
        capsys, "unimodal", "--spectrum", "scaled", "--k", "3", "--csv",
        "--mode", "1", "--grid", "0:20:41", "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header[0] == "minus_beta"
    rows = [line.split(",") for line in lines[1:]]
    by_mb = {float(r[0]): r for r in rows}
    # branch 1 appears at -beta = 1, branch 2 at mu_1 = 7, branches 3/4 at nu_1 = 10
    assert by_mb[0.5][1] == ""
    assert by_mb[1.0][1] != ""
    assert by_mb[6.5][3] == "" and by_mb[7.0][3] != ""
    assert by_mb[9.5][5] == "" and by_mb[10.0][5] != "" and by_mb[10.0][7] != ""


def test_unimodal_csv_empty_grid(capsys):
    code, out = run_cli(
        capsys, "unimodal", "--spectrum", "scaled", "--csv", "--grid", "0:20:0"
    )
    assert code == 0
    assert out.strip().splitlines()[0].startswith("minus_beta,")
    assert len(out.strip().splitlines()) == 1


def test_single_models(capsys):
    doc = run_json(capsys, "single", "--model", "foundation", *COMMON)
    amps = [e["amplitude"] for e in doc["result"]["unimodal"] if e["n"] == 1]
    assert max(amps) == pytest.approx(math.sqrt(11.5), abs=1e-12)
    doc = run_json(capsys, "single", "--model", "plain", *COMMON)
    assert len(doc["result"]["unimodal"]) == 6


def test_sweep_csv(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _ = run_cli(
        capsys, "sweep", "--spectrum", "scaled", "--k", "3", "--grid", "0:12:13",
        "--track", "1", "--out", str(out),
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("beta,branch_id")
    rows = [line.split(",") for line in lines[1:]]
    minus_betas = sorted({-float(r[0]) for r in rows})
    # boundary values lam_1 = 1, mu_1 = 7, nu_1 = 10 are grid points here;
    # branch rows appear exactly from their thresholds on
    assert 1.0 in minus_betas and 7.0 in minus_betas and 10.0 in minus_betas
    a2_first = min(-float(r[0]) for r in rows if r[1].startswith("n1:alpha2"))
    a3_first = min(-float(r[0]) for r in rows if r[1].startswith("n1:alpha3"))
    assert a2_first == 7.0
    assert a3_first == 10.0
    betas = [float(r[0]) for r in rows]
    assert betas == sorted(betas)


def test_sweep_inserts_noninteger_boundaries(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _ = run_cli(
        capsys, "sweep", "--spectrum", "scaled", "--k", "2", "--grid", "0:12:4",
        "--track", "1", "--out", str(out),
    )
    assert code == 0
    rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
    minus_betas = {-float(r[0]) for r in rows}
    # mu_1 = 5 and nu_1 = 7 are not on the 4-point grid but must be present
    assert 5.0 in minus_betas and 7.0 in minus_betas


def test_convert_command(capsys):
    doc = run_json(
        capsys, "convert", "--ell", "1", "--h", "0.1", "--E", "1", "--nu", "0",
        "--D", "-0.05", "--kappa", "0.05", "--area", "1",
    )
    assert doc["params"]["beta"] == pytest.approx(-60.0)
    assert doc["params"]["varrho"] == pytest.approx(600.0)
    assert doc["params"]["k"] == pytest.approx(600.0)
    assert doc["diagnostics"]["tau0"] is None


def test_convert_validation_exit_code(capsys):
    code, _ = run_cli(
        capsys, "convert", "--ell", "1", "--h", "2", "--E", "1", "--nu", "0",
        "--D", "0", "--kappa", "1", "--area", "1",
    )
    assert code == 2


def test_bad_spectrum_token_exit_code(capsys):
    code, _ = run_cli(capsys, "sets", "--spectrum", "nope")
    assert code == 2


def test_oracle_command(capsys):
    doc = run_json(
        capsys, "oracle", "--spectrum", "scaled", "--k", "3", "--beta", "-5",
        "--modes", "1", "--starts", "150",
    )
    assert doc["oracle"]["found_count"] == 3  # trivial and two in-phase states
    assert doc["matching"]["unmatched_count"] == 0
    assert doc["matching"]["missed_closed_count"] == 0
