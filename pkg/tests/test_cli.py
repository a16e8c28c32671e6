import json

import pytest

from chargedbose import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_i0_report(capsys):
    code, rep = run(capsys, "i0", "--json", "--no-timing")
    assert code == 0
    assert rep["schema"] == 1 and rep["task"] == "i0" and rep["pass"] is True
    assert rep["wall_time"] == 0.0 and rep["seed"] == 7
    assert set(rep) == {"schema", "task", "params", "results", "tolerances", "pass", "seed", "wall_time"}
    assert rep["results"]["max_pairwise_diff"] < 1e-8


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["fock-check", "--cutoff", "20", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["results"]["min_eigenvalue"] > 0


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as e:
        cli.main(["no-such-task"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["fs-check", "--s", "a,b"])
    assert e.value.code == 2


def test_domain_error_reported_as_failure(capsys):
    code, rep = run(capsys, "bumps", "--t", "0.7")
    assert code == 1 and rep["pass"] is False
    assert rep["results"]["error"].startswith("InvalidT")


def test_seeded_output_reproducible(capsys):
    args = ["matloc", "--trials", "5", "--n", "60", "--seed", "3", "--no-timing"]
    cli.main(args)
    first = capsys.readouterr().out
    cli.main(args)
    assert capsys.readouterr().out == first


def test_lattice_dump(tmp_path, capsys):
    dump = tmp_path / "f.csv"
    code, rep = run(capsys, "lattice-check", "--ensemble", "5", "--dump", str(dump))
    assert code == 0 and rep["results"]["pair_convention"] == "ordered"
    assert dump.read_text().splitlines()[0] == "sx,sy,sz,value"


def test_bumps_dump(tmp_path, capsys):
    dump = tmp_path / "b.csv"
    code, rep = run(capsys, "bumps", "--t", "0.2", "--dump", str(dump))
    assert code == 0
    assert dump.read_text().startswith("x,theta,Theta,h")


def test_bogolubov_small(capsys):
    code, rep = run(capsys, "bogolubov", "--check-random", "3", "--cutoff", "48")
    assert code == 0 and len(rep["results"]["draws"]) == 3
