import csv
import io
import json
import subprocess
import sys

from mdsrepair.cli import run
from mdsrepair.code import deserialize, serialize
from mdsrepair.constructions import build_two_parity_code


def _run(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_prints_the_number(capsys):
    code, out, _ = _run(capsys, ["bound", "--n", "6", "--r", "2", "--ell", "2", "--q", "3"])
    assert code == 0
    assert out.strip() == "6"


def test_bound_rejects_bad_parameters(capsys):
    code, _, err = _run(capsys, ["bound", "--n", "1", "--r", "2", "--ell", "2", "--q", "3"])
    assert code == 1
    assert "error" in err


def test_usage_error_is_exit_1(capsys):
    code, _, err = _run(capsys, ["bound", "--n", "6"])
    assert code == 1
    code, _, _ = _run(capsys, ["no-such-command"])
    assert code == 1


def test_construct_writes_a_loadable_code(capsys, tmp_path):
    path = tmp_path / "code.json"
    code, _, _ = _run(
        capsys, ["construct", "desarguesian", "--q", "3", "--n", "8", "--out", str(path)]
    )
    assert code == 0
    stored = deserialize(path.read_text())
    assert (stored.n, stored.k, stored.ell) == (8, 6, 2)


def test_construct_stdout_round_trips(capsys):
    code, out, _ = _run(capsys, ["construct", "exceptional", "--case", "q3n6"])
    assert code == 0
    stored = deserialize(out)
    assert stored.n == 6 and stored.field.q == 3


def test_verify_mds_pass_and_fail(capsys, tmp_path):
    good = tmp_path / "good.json"
    _run(capsys, ["construct", "desarguesian", "--q", "3", "--n", "8", "--out", str(good)])
    code, out, _ = _run(capsys, ["verify", "mds", "--code", str(good)])
    assert code == 0
    assert "ok" in out

    # corrupt one block together with its column points so the file still
    # parses but the code is no longer MDS
    payload = json.loads(good.read_text())
    payload["blocks"][1] = payload["blocks"][0]
    payload["column_points"][1] = payload["column_points"][0]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(payload))
    code, out, _ = _run(capsys, ["verify", "mds", "--code", str(bad)])
    assert code == 2
    assert "FAIL" in out and "(0, 1)" in out


def test_verify_unreadable_file_is_exit_1(capsys, tmp_path):
    missing = tmp_path / "nope.json"
    code, _, err = _run(capsys, ["verify", "mds", "--code", str(missing)])
    assert code == 1
    assert "error" in err
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{]")
    code, _, err = _run(capsys, ["verify", "mds", "--code", str(garbled)])
    assert code == 1


def test_repair_analyze_table(capsys, tmp_path):
    path = tmp_path / "code.json"
    _run(capsys, ["construct", "exceptional", "--case", "q3n6", "--out", str(path)])
    code, out, _ = _run(
        capsys, ["repair", "analyze", "--code", str(path), "--budget", "1000"]
    )
    assert code == 0
    assert "bound 6" in out
    assert out.count("attains") >= 1 or "6" in out


def test_repair_analyze_csv(capsys, tmp_path):
    path = tmp_path / "code.json"
    _run(capsys, ["construct", "desarguesian", "--q", "3", "--n", "8", "--out", str(path)])
    code, out, _ = _run(
        capsys,
        ["repair", "analyze", "--code", str(path), "--budget", "1000", "--format", "csv"],
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 8
    assert all(row["beta"] == "10" for row in rows)
    assert all(row["gamma"] == "10" for row in rows)


def test_repair_analyze_structured(capsys, tmp_path):
    path = tmp_path / "code.json"
    _run(capsys, ["construct", "desarguesian", "--q", "4", "--n", "10", "--out", str(path)])
    code, out, _ = _run(
        capsys,
        [
            "repair",
            "analyze",
            "--code",
            str(path),
            "--budget",
            "1000",
            "--format",
            "structured",
        ],
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["bound"] == 13
    assert doc["exhaustive"] is True
    assert doc["beta_max"] == 13 and doc["gamma_max"] == 13
    assert len(doc["nodes"]) == 10
    assert all(nd["beta"] == 13 for nd in doc["nodes"])


def test_geometry_commands(capsys):
    code, out, _ = _run(capsys, ["geometry", "spread-check", "--q", "3"])
    assert code == 0 and "10 members" in out and "ok" in out
    code, out, _ = _run(capsys, ["geometry", "regulus", "--q", "3", "--members", "0", "1", "2"])
    assert code == 0 and "4 lines" in out and "4 lines inside the spread" in out
    code, out, _ = _run(capsys, ["geometry", "regular", "--q", "2"])
    assert code == 0 and "exhaustive" in out and "ok" in out
    code, _, err = _run(capsys, ["geometry", "regulus", "--q", "3", "--members", "0", "0", "1"])
    assert code == 1


def test_check_lemma_c1(capsys, tmp_path):
    fam = tmp_path / "family.txt"
    fam.write_text("inf 0 1 2\ninf 1 4 7\n0 2 4 7\n")
    code, out, _ = _run(capsys, ["check", "lemma-c1", "--family", str(fam)])
    assert code == 0
    assert "t = 4" in out and "ok" in out
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2 3\n1 2 4\n1 2 5\n")
    code, out, _ = _run(capsys, ["check", "lemma-c1", "--family", str(bad)])
    assert code == 2
    assert "violated" in out


def test_check_strictness_small(capsys):
    code, out, _ = _run(
        capsys, ["check", "strictness", "--q", "2", "--r", "3", "--trials", "3"]
    )
    assert code == 0
    assert "0 equality cases" in out and "ok" in out


def test_check_converse_q3(capsys):
    code, out, _ = _run(capsys, ["check", "converse", "--q", "3"])
    assert code == 0
    assert "180 with an attaining node" in out
    assert "0 fully attaining" in out
    assert "attainment needs n >= 6" in out


def test_simulate_repair(capsys, tmp_path):
    path = tmp_path / "code.json"
    _run(capsys, ["construct", "desarguesian", "--q", "3", "--n", "8", "--out", str(path)])
    code, out, _ = _run(
        capsys,
        [
            "simulate",
            "repair",
            "--code",
            str(path),
            "--node",
            "3",
            "--trials",
            "4",
            "--budget",
            "1000",
        ],
    )
    assert code == 0
    assert "4/4 trials recovered node 3 exactly ok" in out
    code, _, err = _run(
        capsys,
        ["simulate", "repair", "--code", str(path), "--node", "99", "--budget", "1000"],
    )
    assert code == 1


def test_stdin_pipe_between_subcommands():
    construct = subprocess.run(
        [sys.executable, "-m", "mdsrepair.cli", "construct", "exceptional", "--case", "q4n9"],
        capture_output=True,
        text=True,
    )
    assert construct.returncode == 0
    analyze = subprocess.run(
        [sys.executable, "-m", "mdsrepair.cli", "repair", "analyze", "--budget", "1000"],
        input=construct.stdout,
        capture_output=True,
        text=True,
    )
    assert analyze.returncode == 0
    assert "bound 11" in analyze.stdout


def test_structured_output_round_trips_to_file(capsys, tmp_path):
    code, wits, _ = build_two_parity_code(3, 2, 9)
    path = tmp_path / "nine.json"
    path.write_text(serialize(code))
    rc, out, _ = _run(
        capsys,
        ["repair", "analyze", "--code", str(path), "--budget", "1000", "--format", "structured"],
    )
    assert rc == 0
    doc = json.loads(out)
    assert doc["n"] == 9
    assert [nd["beta"] for nd in doc["nodes"]] == [12] * 9
