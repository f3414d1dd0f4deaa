import json

import pytest

from spaceform_rigidity.cli import EXIT_FAIL, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main


def test_verify_fields_pass_and_fail(capsys):
    assert main(["verify-fields", "--samples", "100"]) == EXIT_OK
    assert main(["verify-fields", "--samples", "100", "--tol", "1e-16"]) == EXIT_FAIL


def test_usage_errors(capsys, tmp_path):
    assert main(["verify-fields", "--case", "7"]) == EXIT_USAGE
    assert main(["verify-auxfn", "--ctilde", ""]) == EXIT_USAGE
    assert main(["run-example", "--b", "0.6"]) == EXIT_USAGE
    assert main(["solve", "--b", "0.2"]) == EXIT_USAGE
    with pytest.raises(SystemExit):
        main(["no-such-command"])


def test_auxfn_prints_the_constant(capsys):
    assert main(["verify-auxfn", "--case", "3", "--ctilde", "0.75", "--samples", "100"]) == EXIT_OK
    assert "c0 = 0.333333" in capsys.readouterr().out


def test_run_example(capsys, tmp_path):
    out = tmp_path / "ex.jsonl"
    assert main(["run-example", "--b", "0.1", "--samples", "100", "--out", str(out)]) == EXIT_OK
    names = [json.loads(line)["name"] for line in out.read_text().splitlines()]
    assert "example.angle" in names


def test_check_identity_level_and_ctilde(capsys):
    assert main(["check-identity", "--b", "0.2", "--quad", "3"]) == EXIT_OK
    assert main(["check-identity", "--b", "0.2", "--quad", "0"]) == EXIT_FAIL
    assert main(["check-identity", "--b", "0.2", "--quad", "2", "--ctilde", "0"]) == EXIT_FAIL
    assert "warning" in capsys.readouterr().err
    assert main(["check-identity", "--b", "0.2", "--quad", "2", "--a=-1,0,5"]) == EXIT_OK


def test_solve_writes_outputs(capsys, tmp_path):
    assert main(["solve", "--b", "0.1", "--levels", "3", "--out", str(tmp_path)]) == EXIT_OK
    for name in ("mesh_level3.txt", "convergence.csv", "solution.csv", "report.jsonl"):
        assert (tmp_path / name).exists()
    assert len((tmp_path / "convergence.csv").read_text().splitlines()) == 4


def test_solve_reports_loss_of_coercivity(capsys, tmp_path):
    code = main(
        ["solve", "--case", "4", "--R", "1.5707963267948966", "--center", "0,-0.2", "--radius", "1.15",
         "--levels", "2", "--out", str(tmp_path)]
    )
    assert code == EXIT_NUMERICAL
    assert "lambda_1" in capsys.readouterr().err


def test_config_file_and_command_line_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[DEFAULT]\nsamples = 50\n[verify-fields]\ntol = 1e-16\n")
    assert main(["verify-fields", "--config", str(cfg)]) == EXIT_FAIL
    assert main(["verify-fields", "--config", str(cfg), "--tol", "1e-6"]) == EXIT_OK
    bad = tmp_path / "bad.ini"
    bad.write_text("[DEFAULT]\nbogus = 1\n")
    assert main(["verify-fields", "--config", str(bad)]) == EXIT_USAGE
    assert main(["verify-fields", "--config", str(tmp_path / "missing.ini")]) == EXIT_USAGE
