import json
import os

import pytest

from stathorizon import cli


def files(d):
    return {n: open(os.path.join(d, n), "rb").read() for n in sorted(os.listdir(d))}


def test_verify_writes_report(tmp_path, capsys):
    code = cli.main(["verify", "mu-invariance", "--replicas", "20", "--seed", "3", "--out", str(tmp_path)])
    assert code == 0
    doc = json.loads((tmp_path / "mu-invariance_report.json").read_text())
    assert doc[0]["suite"] == "mu-invariance" and doc[0]["pass"] is True
    assert "1/1 pass" in capsys.readouterr().out


def test_usage_errors_exit_2(tmp_path):
    assert cli.main(["verify", "no-such-suite", "--out", str(tmp_path)]) == 2
    assert cli.main(["frobnicate"]) == 2
    assert cli.main(["verify", "mu-invariance", "--replicas", "0", "--out", str(tmp_path)]) == 2


def test_config_file_and_flag_override(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text("suite = queue-dp-equivalence  # comment\nseed = 5\nreplicas = 3\n")
    out = tmp_path / "o"
    assert cli.main(["verify", "--config", str(conf), "--replicas", "2", "--out", str(out)]) == 0
    doc = json.loads((out / "queue-dp-equivalence_report.json").read_text())
    assert doc[0]["replicas"] == 2 and doc[0]["seed"] == 5


@pytest.mark.parametrize("suite", ["queue-dp-equivalence", "horizon-trace", "deterministic"])
def test_rerun_and_parallelism_byte_identical(tmp_path, suite):
    outs = []
    for k, par in enumerate((1, 1, 2)):
        d = tmp_path / str(k)
        cli.main(["verify", suite, "--replicas", "12", "--seed", "9", "--parallelism", str(par), "--out", str(d)])
        outs.append(files(d))
    assert outs[0] == outs[1] == outs[2]


def test_sample_commands(tmp_path):
    assert cli.main(["sample-lpp", "--width", "5", "--height", "4", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "geodesic.csv").read_text().splitlines()
    assert lines[0] == "row,col" and lines[1] == "0,0" and lines[-1] == "3,4"
    assert cli.main(["sample-horizon", "--directions", "0,1", "--grid=-1,1,0.25", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "line2.csv").read_text().startswith("x,value\n")
    h = json.loads((tmp_path / "horizon.json").read_text())
    assert h["grid"] == {"min": -1.0, "max": 1.0, "step": 0.25} and len(h["lines"]) == 2
    assert cli.main(["busemann", "--rho", "0.5", "--length", "4", "--out", str(tmp_path)]) == 0


def test_report_command(tmp_path, capsys):
    cli.main(["verify", "queue-dp-equivalence", "--replicas", "2", "--out", str(tmp_path)])
    capsys.readouterr()
    assert cli.main(["report", str(tmp_path / "queue-dp-equivalence_report.json")]) == 0
    assert "pass" in capsys.readouterr().out
