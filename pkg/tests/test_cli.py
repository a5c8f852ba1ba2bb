"""End-to-end runs of the command-line interface through cli.run."""

import json

import pytest

from ionsynth.circuit import Circuit, Rz, deserialize, serialize
from ionsynth.cli import run


def test_compile_writes_file_and_reports(tmp_path, capsys):
    path = tmp_path / "single.circ"
    rc = run(["compile", "--op", "single", "--orbitals", "0,2", "--theta", "0.3",
              "-o", str(path)])
    assert rc == 0
    assert f"wrote {path}" in capsys.readouterr().out
    c = deserialize(path.read_text())
    assert c.n_qubits == 3
    assert c.metadata["cli_op"] == "single"
    assert c.metadata["orbitals"] == "0,2"
    assert float(c.metadata["theta"]) == 0.3


def test_compile_without_output_prints_serialized_circuit(capsys):
    rc = run(["compile", "--op", "rotation", "--string", "ZZ", "--theta", "0.5"])
    assert rc == 0
    text = capsys.readouterr().out
    assert text.startswith("ionsynth-circuit v1")
    assert deserialize(text).n_qubits == 2


def test_compile_rejects_decreasing_orbitals(capsys):
    rc = run(["compile", "--op", "single", "--orbitals", "2,1", "--theta", "0.3"])
    assert rc == 2
    err = capsys.readouterr().err
    assert "--orbitals" in err and "2,1" in err and "increasing" in err


def test_compile_missing_operand_is_usage_error(capsys):
    assert run(["compile", "--op", "rotation", "--theta", "0.1"]) == 2
    assert "--string" in capsys.readouterr().err
    assert run(["compile", "--op", "controlled", "--orbitals", "0,2",
                "--theta", "0.1"]) == 2
    assert "--control" in capsys.readouterr().err


def test_unknown_subcommand_and_bare_invocation_are_usage_errors(capsys):
    assert run(["frobnicate"]) == 2
    assert run([]) == 2
    capsys.readouterr()


ROUND_TRIPS = [
    ["compile", "--op", "rotation", "--string", "XZY", "--theta", "0.7"],
    ["compile", "--op", "single", "--orbitals", "1,4", "--theta", "-0.42",
     "--axis", "yy"],
    ["compile", "--op", "single", "--orbitals", "0,3", "--theta", "0.2",
     "--symmetrized"],
    ["compile", "--op", "double", "--orbitals", "0,1,2,3",
     "--angles", "0.3,-0.2,0.11"],
    ["compile", "--op", "double", "--orbitals", "0,2,3,5", "--theta", "0.4"],
    ["compile", "--op", "double", "--orbitals", "0,1,2,4", "--theta", "0.25",
     "--symmetrized"],
    ["compile", "--op", "coupled", "--orbitals", "1,2,4,5", "--theta", "0.31"],
    ["compile", "--op", "controlled", "--orbitals", "0,2", "--control", "3",
     "--theta", "0.5"],
    ["compile", "--op", "controlled", "--orbitals", "0,2", "--control", "1",
     "--theta", "0.5", "--variant", "b"],
    ["compile", "--op", "controlled", "--orbitals", "1,3", "--control", "2",
     "--theta", "0.2", "--symmetrized"],
    ["compile", "--op", "higher", "--sub", "0,1", "--sup", "2,4",
     "--theta", "0.15"],
    ["compile", "--op", "higher", "--sub", "3", "--sup", "1", "--theta", "0.3",
     "--symmetrized"],
    ["compile", "--op", "mixed", "--orbitals", "0,1,3,4", "--theta", "0.6"],
]


@pytest.mark.parametrize("argv", ROUND_TRIPS, ids=lambda a: "-".join(a[2:4]))
def test_compile_verify_round_trip(argv, tmp_path, capsys):
    path = tmp_path / "rt.circ"
    assert run(argv + ["-o", str(path)]) == 0
    assert run(["verify", "--circuit", str(path), "--tol", "1e-9"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_fails_under_impossible_tolerance(tmp_path, capsys):
    path = tmp_path / "s.circ"
    run(["compile", "--op", "single", "--orbitals", "0,1", "--theta", "0.4",
         "-o", str(path)])
    capsys.readouterr()
    rc = run(["verify", "--circuit", str(path), "--tol", "1e-20"])
    assert rc == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "1e-20" in out


def test_verify_structured_output(tmp_path, capsys):
    path = tmp_path / "s.circ"
    run(["compile", "--op", "single", "--orbitals", "0,1", "--theta", "0.4",
         "-o", str(path)])
    capsys.readouterr()
    assert run(["verify", "--circuit", str(path), "--format", "structured"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True
    assert report["distance"] < 1e-12


def test_verify_without_metadata_is_input_error(tmp_path, capsys):
    path = tmp_path / "raw.circ"
    path.write_text(serialize(Circuit(1, (Rz(0, 0.3),), {})))
    rc = run(["verify", "--circuit", str(path)])
    assert rc == 3
    assert "cli_op" in capsys.readouterr().err


def test_malformed_circuit_file_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.circ"
    path.write_text("ionsynth-circuit v1\nqubits 2\nbanana 0 1\n")
    rc = run(["verify", "--circuit", str(path)])
    assert rc == 3
    assert "line 3" in capsys.readouterr().err


def test_missing_circuit_file_is_input_error(tmp_path, capsys):
    rc = run(["count", "--circuit", str(tmp_path / "nope.circ")])
    assert rc == 3
    capsys.readouterr()


def test_count_text_and_structured(tmp_path, capsys):
    path = tmp_path / "s.circ"
    run(["compile", "--op", "single", "--orbitals", "0,1", "--theta", "0.2",
         "-o", str(path)])
    capsys.readouterr()
    assert run(["count", "--circuit", str(path)]) == 0
    assert "ms_total: 2" in capsys.readouterr().out
    assert run(["count", "--circuit", str(path), "--format", "structured"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ms_total"] == 2
    assert report["ms_forward"] == 1 and report["ms_backward"] == 1


def test_cost_structured_scales_with_tau(tmp_path, capsys):
    path = tmp_path / "s.circ"
    run(["compile", "--op", "single", "--orbitals", "0,1", "--theta", "0.2",
         "-o", str(path)])
    capsys.readouterr()
    assert run(["cost", "--circuit", str(path), "--format", "structured"]) == 0
    base = json.loads(capsys.readouterr().out)
    assert run(["cost", "--circuit", str(path), "--tau", "2.0",
                "--format", "structured"]) == 0
    doubled = json.loads(capsys.readouterr().out)
    assert doubled["total_ms_time"] == pytest.approx(2 * base["total_ms_time"])
    assert doubled["sequential_depth"] == base["sequential_depth"]


def test_uccsd_command_counts_and_writes(tmp_path, capsys):
    path = tmp_path / "layer.circ"
    rc = run(["uccsd", "--modes", "4", "--occupied", "0,1", "--virtual", "2,3",
              "--parameters", "0.1,0.2,0.3", "-o", str(path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "2 singles, 1 doubles" in out
    assert "MS: 8" in out
    assert deserialize(path.read_text()).n_qubits == 4


def test_uccsd_rejects_overlapping_spaces(capsys):
    rc = run(["uccsd", "--modes", "4", "--occupied", "0,1", "--virtual", "1,2",
              "--parameters", "0.1,0.2"])
    assert rc == 2
    capsys.readouterr()


def test_trotter_builtin_parallelized_count(capsys):
    assert run(["trotter", "--dt", "0.1", "--format", "structured"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["modes"] == 6
    assert report["orbital_class"] == "real"
    assert report["counts"]["ms_total"] == 26


def test_trotter_rejects_malformed_integrals(tmp_path, capsys):
    path = tmp_path / "bad.ints"
    path.write_text("modes 4\nreality real\nwat 1 2\n")
    rc = run(["trotter", "--dt", "0.1", "--integrals", str(path)])
    assert rc == 3
    err = capsys.readouterr().err
    assert str(path) in err


def test_demo_uccsd_report_line(capsys):
    assert run(["demo", "h3plus", "--uccsd"]) == 0
    out = capsys.readouterr().out
    assert "MS: 24 (baseline 80, factor 3.3)" in out
    assert "PASS" in out


def test_demo_trotter_report_line(capsys):
    assert run(["demo", "h3plus", "--trotter", "--dt", "0.1"]) == 0
    out = capsys.readouterr().out
    assert "MS: 26 (string-by-string 56, naive 176)" in out
    assert "PASS" in out


def test_demo_structured_embeds_oracle(capsys):
    assert run(["demo", "h3plus", "--uccsd", "--trotter",
                "--format", "structured"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["uccsd"]["ms"] == 24
    assert report["trotter"]["naive"] == 176
    assert report["uccsd"]["oracle"]["passed"] is True
    assert report["trotter"]["oracle"]["passed"] is True


def test_demo_requires_a_mode_flag(capsys):
    assert run(["demo", "h3plus"]) == 2
    assert "--uccsd" in capsys.readouterr().err


def test_env_var_supplies_default_tolerance(tmp_path, capsys, monkeypatch):
    path = tmp_path / "s.circ"
    run(["compile", "--op", "single", "--orbitals", "0,1", "--theta", "0.4",
         "-o", str(path)])
    capsys.readouterr()
    monkeypatch.setenv("IONSYNTH_TOL", "1e-20")
    assert run(["verify", "--circuit", str(path)]) == 1
    capsys.readouterr()
    monkeypatch.setenv("IONSYNTH_TOL", "not-a-number")
    rc = run(["verify", "--circuit", str(path)])
    assert rc == 2
    assert "IONSYNTH_TOL" in capsys.readouterr().err
