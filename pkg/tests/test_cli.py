import json
import subprocess
import sys

import pytest

from sixlength import __version__
from sixlength.cli import dispatch
from sixlength.graph import read_graph_csv, walk_lengths


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def data_lines(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_exact_example(capsys):
    code, out, _ = run(capsys, "exact", "--degrees", "generator:two_zero", "--n", "200",
                       "--vertex", "1", "--kmax", "60", "--seed", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == f"# tool: sixlength {__version__}"
    assert lines[1] == "# subcommand: exact" and lines[2] == "# seed: 1"
    flags = json.loads(lines[3].split(": ", 1)[1])
    assert flags["kmax"] == 60 and flags["seed"] == 1
    rows = data_lines(out)
    assert rows[0] == "k,surv" and len(rows) == 62
    k, s = rows[2].split(",")
    assert k == "1" and float(s) == pytest.approx(0.99, abs=1e-14)


def test_seed_is_echoed_when_missing(capsys):
    _, out, _ = run(capsys, "exact", "--degrees", "generator:permutation", "--n", "5")
    seed = int(out.splitlines()[2].split(": ")[1])
    assert seed >= 0


def test_sample_walk_round_trip(tmp_path, capsys):
    path = tmp_path / "g.csv"
    code, _, _ = run(capsys, "sample", "--degrees", "generator:two_zero", "--n", "30",
                     "--seed", "4", "--out", str(path))
    assert code == 0
    assert path.read_text().startswith("# tool: sixlength")
    g = read_graph_csv(path)
    assert sum(g.in_degrees() == 2) == 15
    for v in (1, 7, 30):
        code, out, _ = run(capsys, "walk", "--graph", str(path), "--vertex", str(v))
        six, tail, cycle = map(int, data_lines(out)[1].split(",")[1:])
        w = walk_lengths(g, v - 1)
        assert (six, tail, cycle) == (w.six, w.tail, w.cycle)


def test_check_from_file(tmp_path, capsys):
    path = tmp_path / "d.txt"
    path.write_text("1\n2\n0\n0\n2\n")
    code, out, _ = run(capsys, "check", "--degrees", f"file:{path}")
    assert code == 0
    body = data_lines(out)
    assert body[0].startswith("condition,")
    assert any(line.startswith("sigma2,4/5") for line in body)


def test_json_is_line_delimited(capsys):
    code, out, _ = run(capsys, "joint", "--degrees", "generator:two_zero", "--n", "4",
                       "--backend", "rational", "--format", "json", "--seed", "0")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert records[0]["header"]["subcommand"] == "joint"
    assert records[1] == {"six": 1, "tail": 0, "prob": "1/2"}


def test_reduce_extend_pipeline(tmp_path, capsys):
    red, labels, ext = tmp_path / "r.csv", tmp_path / "l.csv", tmp_path / "e.csv"
    code, out, err = run(capsys, "reduce", "--degrees", "generator:binary_mix:twos=2", "--n", "64",
                         "--vertex", "max-degree", "--seed", "3", "--labels-out", str(labels))
    assert code == 0 and "n_hat 6" in err
    rows = [line.split(",") for line in data_lines(out)[1:]]
    assert len(rows) == 6
    red.write_text("".join(f"{r[0]},{r[2]}\n" for r in rows))
    code, out, _ = run(capsys, "extend", "--graph", str(red), "--labels", str(labels), "--n", "64",
                       "--seed", "3", "--out", str(ext))
    assert code == 0
    g = read_graph_csv(ext)
    assert sorted(g.in_degrees().tolist()) == [0, 0] + [1] * 60 + [2, 2]


def test_urn_couple_experiment(capsys, tmp_path):
    code, out, err = run(capsys, "urn", "--steps", "100", "--red", "3", "--blue", "5",
                         "--trials", "10", "--seed", "1")
    assert code == 0 and "expected 40.5" in err and len(data_lines(out)) == 11
    code, out, _ = run(capsys, "couple", "--degrees", "generator:binary_mix:twos=2", "--n", "64",
                       "--vertex", "max-degree", "--trials", "5", "--seed", "1")
    assert code == 0 and len(data_lines(out)) == 6
    samples = tmp_path / "s.txt"
    code, out, err = run(capsys, "experiment", "--degrees", "generator:two_zero", "--n", "1000",
                         "--trials", "500", "--seed", "7", "--workers", "2",
                         "--samples-out", str(samples))
    assert code == 0 and "running" in err
    stats = dict(line.split(",", 1) for line in data_lines(out)[1:])
    assert stats["trials"] == "500" and "ks_rayleigh" in stats
    assert len(data_lines(samples.read_text())) == 500


def test_approx(capsys):
    code, out, _ = run(capsys, "approx", "--degrees", "generator:two_zero", "--n", "100",
                       "--kmax", "5", "--seed", "0")
    assert code == 0 and data_lines(out)[0].startswith("k,exact,rayleigh,refined,product")


def test_errors(capsys):
    code, _, err = run(capsys, "exact", "--degrees", "file:/does/not/exist")
    assert code == 1 and json.loads(err)["error"] == "FileNotFoundError"
    code, _, err = run(capsys, "exact", "--degrees", "generator:two_zero", "--n", "5")
    assert code == 1 and json.loads(err)["error"] == "InfeasibleParams"
    code, _, err = run(capsys, "exact", "--degrees", "generator:two_zero", "--n", "4",
                       "--vertex", "9")
    assert code == 1
    code, _, _ = run(capsys, "nonsense")
    assert code == 2
    code, _, _ = run(capsys, "exact", "--backend", "decimal")
    assert code == 2


def test_entry_point_module():
    proc = subprocess.run([sys.executable, "-m", "sixlength.cli", "--version"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and __version__ in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "sixlength.cli", "exact", "--help"],
                          capture_output=True, text=True)
    assert "Columns: k,surv" in proc.stdout
