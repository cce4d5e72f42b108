import csv
import io
import json
import math
import os

import pytest

from gtaylor import gtCatalogue, tools
from gtaylor.cli import main
from gtaylor.gtProblem import dumpProblem

PRECISE = ["--rtol", "1e-12", "--atol", "1e-14"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    table = list(csv.reader(io.StringIO(text)))
    return table[0], table[1:]


@pytest.fixture
def harmonicFile(tmp_path):
    path = tmp_path / "harmonic.json"
    path.write_text(dumpProblem(gtCatalogue.get("harmonic")))
    return str(path)


def test_kernel_by_name(capsys):
    code, out, _ = run(capsys, "kernel", "--name", "harmonic", "--grid", "1", "--sgrid", "0", *PRECISE)
    header, body = rows(out)
    assert code == 0
    assert header == ["x", "s", "K"]
    assert body[0][:2] == ["1", "0"]
    assert float(body[0][2]) == pytest.approx(math.sin(1.0), abs=1e-9)


def test_kernel_from_file(capsys, harmonicFile):
    code, out, _ = run(capsys, "kernel", "--problem", harmonicFile, "--grid", "1", "--sgrid", "0", *PRECISE)
    assert code == 0
    assert float(rows(out)[1][0][2]) == pytest.approx(math.sin(1.0), abs=1e-9)


def test_kernel_diagonal(capsys):
    code, out, _ = run(capsys, "kernel", "--name", "quartic", "--grid=-1:1:3")
    _, body = rows(out)
    assert code == 0
    assert len(body) == 9
    assert [r[2] for r in body if r[0] == r[1]] == ["0", "0", "0"]


def test_kernel_to_file(capsys, tmp_path):
    target = tmp_path / "kernel.csv"
    code, out, _ = run(capsys, "kernel", "--name", "harmonic", "--grid", "0:1:2", "--out", str(target))
    assert code == 0
    assert out == ""
    text = target.read_text()
    assert text.startswith("x,s,K\n")
    assert "\r" not in text
    assert os.listdir(tmp_path) == ["kernel.csv"]


def test_fundamental_base_point(capsys):
    code, out, _ = run(capsys, "fundamental", "--name", "harmonic", "--grid", "0")
    header, body = rows(out)
    assert code == 0
    assert header == ["x", "y1", "y2"]
    assert body == [["0", "1", "0"]]


def test_expand(capsys):
    code, out, _ = run(capsys, "expand", "--name", "harmonic", "--grid", "0:1:3", "--test", "exp")
    header, body = rows(out)
    assert code == 0
    assert header == ["x", "initial_part", "remainder", "total", "reference", "discrepancy"]
    assert float(body[-1][3]) == pytest.approx(math.e, abs=1e-8)
    assert all(float(r[5]) <= 1e-8 for r in body)


def test_expand_unknown_test_function(capsys):
    code, out, err = run(capsys, "expand", "--name", "harmonic", "--test", "tanh")
    assert code == 2
    assert out == ""
    assert "tanh" in err


@pytest.mark.parametrize("direct", [False, True])
def test_solve(capsys, direct):
    argv = ["solve", "--name", "harmonic", "--grid", "pi/2"] + (["--direct"] if direct else [])
    code, out, _ = run(capsys, *argv)
    header, body = rows(out)
    assert code == 0
    assert header == ["x", "Y"]
    assert float(body[0][1]) == pytest.approx(1.0, abs=1e-8)


def test_base_point_override(capsys):
    code, out, _ = run(capsys, "solve", "--name", "harmonic", "--x0", "1/2", "--grid", "0.5:1.5:2")
    _, body = rows(out)
    assert code == 0
    assert body[0] == ["0.5", "0"]
    assert float(body[1][1]) == pytest.approx(1.0 - math.cos(1.0), abs=1e-8)


def test_volterra(capsys):
    code, out, _ = run(capsys, "volterra", "--name", "cosh_ide", "--steps", "200")
    header, body = rows(out)
    assert code == 0
    assert header == ["x", "y_volterra", "y_direct", "diff"]
    assert len(body) == 201
    assert max(float(r[3]) for r in body) <= 1e-4
    assert float(body[-1][1]) == pytest.approx(math.cosh(1.0), abs=1e-5)


def test_volterra_needs_memory_kernel(capsys):
    code, _, err = run(capsys, "volterra", "--name", "harmonic")
    assert code == 2
    assert "memory_kernel" in err


@pytest.mark.parametrize("name", gtCatalogue.names())
def test_verify_catalogue(capsys, name):
    code, out, _ = run(capsys, "verify", name)
    lines = out.splitlines()
    assert code == 0, out
    assert lines[0] == "verify {} (seed {})".format(name, tools.SEED)
    assert lines[-1].endswith("passed")
    assert not any(line.startswith("FAIL") for line in lines)


def test_verify_single_suite(capsys, harmonicFile):
    code, out, _ = run(capsys, "verify", harmonicFile, "--suite", "adjoint_sign")
    assert code == 0
    assert out.splitlines()[-1] == "1/1 passed"


def test_verify_file_without_test_function(capsys, tmp_path):
    path = tmp_path / "bare.json"
    path.write_text('{"order": 2, "interval": [-3, 3], "coefficients": [0, 1]}')
    code, out, _ = run(capsys, "verify", str(path))
    lines = out.splitlines()
    assert code == 0, out
    passed, total = lines[-1].split()[0].split("/")
    assert passed == total
    assert not any(line.startswith("FAIL") for line in lines)


def test_missing_problem_file(capsys, tmp_path):
    path = str(tmp_path / "foo")
    code, out, err = run(capsys, "kernel", "--problem", path)
    assert code == 2
    assert out == ""
    assert path in err
    assert "--name" not in err


def test_malformed_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "order": 2,\n  "interval": [0, 1],\n  "coefficients": [0]\n}\n')
    code, out, err = run(capsys, "kernel", "--problem", str(path))
    assert code == 2
    assert out == ""
    assert "bad.json:" in err


def test_unknown_name(capsys):
    code, out, err = run(capsys, "kernel", "--name", "nope")
    assert code == 2
    assert out == ""
    assert "harmonic" in err


def test_missing_source(capsys):
    code, _, _ = run(capsys, "kernel")
    assert code == 2


def test_grid_outside_domain(capsys):
    code, _, err = run(capsys, "kernel", "--name", "harmonic", "--grid", "9")
    assert code == 2
    assert "outside" in err


def test_numerical_failure(capsys, tmp_path):
    doc = json.loads(dumpProblem(gtCatalogue.get("harmonic")))
    doc["forcing"] = {"fn": "exp", "arg": [1000, 0]}
    path = tmp_path / "overflow.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "solve", "--problem", str(path), "--grid", "1")
    assert code == 3
    assert out == ""
    assert "numerical failure" in err


def test_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "examples", "--out", str(tmp_path / "problems"))
    assert code == 0
    names = [line.split()[0] for line in out.splitlines()]
    assert names == gtCatalogue.names()
    written = sorted(os.listdir(tmp_path / "problems"))
    assert written == sorted(n + ".json" for n in names)


def test_write_csv(tmp_path):
    path = tmp_path / "t.csv"
    tools.writeCsv(str(path), ["x", "y"], [(1.0, 0.1), (2, "a"), (math.sin(1.0), -0.0)])
    assert path.read_text() == "x,y\n1,0.1\n2,a\n0.8414709848078965,-0\n"
