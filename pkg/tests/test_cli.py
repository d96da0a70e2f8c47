import json

import pytest

from yanglee.cli import run


def test_xxz_poly_table(tmp_path, capsys):
    out = tmp_path / "poly.csv"
    assert run(["xxz-poly", "--L", "4", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "exponent,coefficient"
    assert lines[1:] == ["0,2", "3,2", "4,1"]


def test_stdout_default(capsys):
    assert run(["ssh-chi", "--u", "1", "--v", "1", "--w", "1",
                "--beta", "100"]) == 0
    captured = capsys.readouterr().out.splitlines()
    assert captured[0] == "u,v,w,beta,chi,formula,ratio"
    fields = captured[1].split(",")
    assert fields[4] == "16"
    assert abs(float(fields[5]) - 15.9154943092) < 1e-9
    assert abs(float(fields[6]) - 1.00530964915) < 1e-9


def test_csv_determinism(tmp_path):
    args = ["xxz-zeros", "--L", "2", "--beta", "50", "--re-min", "0.95",
            "--re-max", "1.05", "--im-min", "0.0", "--im-max", "0.1",
            "--grid-n", "25"]
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(args + ["--out", str(out1)]) == 0
    assert run(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_threads_do_not_change_output(tmp_path):
    base = ["xxz-zeros", "--L", "4", "--beta", "60", "--grid-n", "30",
            "--im-max", "0.15"]
    out1, out2 = tmp_path / "t1.csv", tmp_path / "t4.csv"
    assert run(base + ["--threads", "1", "--out", str(out1)]) == 0
    assert run(base + ["--threads", "4", "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_manifest_contents(tmp_path):
    out = tmp_path / "gap.csv"
    manifest = tmp_path / "gap.json"
    code = run(["xxz-gap", "--L-list", "6", "--out", str(out),
                "--manifest", str(manifest), "--seed", "3"])
    assert code == 0
    data = json.loads(manifest.read_text())
    assert data["command"] == "xxz-gap"
    assert data["seed"] == 3
    assert data["outputs"] == [str(out)]
    assert data["wall_time"] >= 0.0
    assert "numpy" in data["versions"]
    for path in data["outputs"]:
        assert out.read_text()  # listed outputs exist and are non-empty
    assert data["parameters"]["L_list"] == "6"


def test_json_format(capsys):
    assert run(["xxz-poly", "--L", "3", "--format", "json"]) == 0
    records = json.loads(capsys.readouterr().out)
    assert records == [{"exponent": "0", "coefficient": "2"},
                       {"exponent": "2", "coefficient": "2"}]


def test_usage_errors_exit_one(capsys):
    assert run(["no-such-command"]) == 1
    assert run(["xxz-poly"]) == 1  # missing required --L
    assert run(["xxz-poly", "--L", "4", "--bogus-flag"]) == 1


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert run([]) == 1


def test_numerical_failure_exits_two(capsys):
    # T = 0 correlators are undefined in the PT-broken phase
    code = run(["ssh-corr", "--u", "1", "--v", "1", "--w", "1",
                "--x-max", "3"])
    assert code == 2
    assert "numerical failure" in capsys.readouterr().err


def test_ssh_ee_subsystem_parsing(tmp_path):
    out = tmp_path / "ee.csv"
    assert run(["ssh-ee", "--u", "0", "--v", "1", "--w", "2", "--cells", "60",
                "--subsystems", "4,6,8", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "l_a,re_s,im_s"
    assert len(lines) == 4


def test_bethe_csv(capsys):
    assert run(["xxz-bethe", "--L", "4", "--M", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "j,re_zeta,im_zeta"
    ims = sorted(float(line.split(",")[2]) for line in out[1:])
    assert ims[0] == pytest.approx(-1.0 / 3.0 ** 0.5, abs=1e-9)
    assert ims[1] == pytest.approx(+1.0 / 3.0 ** 0.5, abs=1e-9)
