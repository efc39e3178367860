import csv
import io
import json

import pytest

from escgen.bench import BENCH_HEADER
from escgen.cli import main

GEO = '{"kind": "geometric", "params": {"p": 0.5}}'
HALF = '{"kind": "explicit", "params": {"weights": [0.5, 0.5]}}'
EVEN = '{"kind": "explicit", "params": {"weights": [0, 1]}}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_un_csv(capsys):
    code, out, _ = run(capsys, "un", "--spec", HALF, "--n", "3")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["u_m"]) for r in rows] == [1.0, 0.5, 0.75, 0.625]
    assert "u_m_closed" not in rows[0]


def test_un_geometric_with_closed_column(capsys):
    code, out, _ = run(capsys, "un", "--spec", GEO, "--n", "10")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 11
    assert all(abs(float(r["u_m"]) - 0.5) <= 1e-12 for r in rows[1:])
    assert all(float(r["u_m_closed"]) == 0.5 for r in rows[1:])


def test_un_json_writes_null_for_unreachable(capsys):
    code, out, _ = run(capsys, "un", "--spec", EVEN, "--n", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["u"] == [1.0, 0.0, 1.0, 0.0]
    assert data["log_u"][1] is None


def test_kdist(capsys):
    code, out, _ = run(capsys, "kdist", "--spec", HALF, "--n", "3")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [round(float(r["prob"]), 12) for r in rows] == [0.0, 0.8, 0.2]
    code, out, _ = run(capsys, "kdist", "--spec", GEO, "--n", "4", "--format", "json")
    data = json.loads(out)
    assert data["probs_closed"] == pytest.approx([0.125, 0.375, 0.375, 0.125])
    assert data["probs"] == pytest.approx(data["probs_closed"], abs=1e-12)


def test_sample_json_lines(capsys):
    code, out, _ = run(capsys, "sample", "--spec", HALF, "--n", "5", "--samples", "4", "--seed", "3")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 4
    for line in lines:
        part = json.loads(line)
        assert sum(part["sizes"]) == 5 and len(part["labels"]) == 5
        assert max(part["labels"]) == len(part["sizes"])


@pytest.mark.parametrize("method", ["fast", "naive"])
def test_sample_is_reproducible(capsys, tmp_path, method):
    paths = [tmp_path / f"{i}.json" for i in range(2)]
    for p in paths:
        assert main(["sample", "--spec", HALF, "--n", "9", "--samples", "20", "--seed", "42",
                     "--method", method, "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert main(["sample", "--spec", HALF, "--n", "9", "--samples", "20", "--seed", "43",
                 "--method", method, "--out", str(paths[1])]) == 0
    assert paths[0].read_bytes() != paths[1].read_bytes()


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ESC_SEED", "77")
    _, from_env, _ = run(capsys, "sample", "--spec", HALF, "--n", "12", "--samples", "5")
    _, explicit, _ = run(capsys, "sample", "--spec", HALF, "--n", "12", "--samples", "5", "--seed", "77")
    assert from_env == explicit


def test_sample_csv_writes_sizes(capsys):
    code, out, _ = run(capsys, "sample", "--spec", GEO, "--n", "6", "--samples", "3", "--format", "csv")
    assert code == 0
    assert all(sum(map(int, line.split(","))) == 6 for line in out.splitlines())


def test_spec_from_file(capsys, tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(HALF)
    code, out, _ = run(capsys, "un", "--spec", str(path), "--n", "2")
    assert code == 0 and out.splitlines()[-1].startswith("2,0.75")


@pytest.mark.parametrize("method", ["fast", "naive"])
def test_unreachable_exit_code(capsys, method):
    code, out, err = run(capsys, "sample", "--spec", EVEN, "--n", "3", "--method", method)
    assert code == 3 and out == "" and "3" in err


def test_exhausted_exit_code(capsys):
    # odd n with mostly size-2 clusters: a single attempt almost always overshoots
    spec = '{"kind": "explicit", "params": {"weights": [0.01, 0.99]}}'
    code, _, err = run(capsys, "sample", "--spec", spec, "--n", "41", "--method", "naive",
                       "--max-attempts", "1", "--seed", "2")
    assert code == 5 and "1" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["un", "--spec", GEO, "--n", "-1"],
        ["sample", "--spec", GEO, "--n", "5", "--samples", "0"],
        ["un", "--spec", '{"kind": "geometric", "params": {"p": 2}}', "--n", "3"],
        ["un", "--spec", "not json", "--n", "3"],
        ["un", "--spec", '{"kind": "zipf", "params": {"alpha": 1}}', "--n", "3"],
        ["sample", "--spec", GEO, "--n", "5", "--seed", "-4"],
        ["frobnicate"],
    ],
)
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_bench_csv(capsys):
    code, out, _ = run(capsys, "bench", "--spec", GEO, "--n", "20", "--samples", "3", "--trials", "2")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert tuple(rows[0]) == BENCH_HEADER
    assert [(r[0], r[5]) for r in rows[1:]] == [("naive", "0"), ("fast", "0"), ("naive", "1"), ("fast", "1")]
    assert all(float(r[6]) > 0 for r in rows[1:])
    assert rows[1][7] != "" and rows[2][7] == ""


def test_bench_json_single_method(capsys):
    code, out, _ = run(capsys, "bench", "--spec", GEO, "--n", "20", "--trials", "3", "--method", "fast",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and [d["trial"] for d in data] == [0, 1, 2]
    assert {d["method"] for d in data} == {"fast"}


def test_bench_records_exhausted_trials(capsys):
    spec = '{"kind": "explicit", "params": {"weights": [0.01, 0.99]}}'
    code, out, _ = run(capsys, "bench", "--spec", spec, "--n", "41", "--trials", "1", "--method", "naive",
                       "--max-attempts", "1", "--format", "json", "--seed", "2")
    data = json.loads(out)
    assert code == 0
    assert data[0]["wall_seconds"] is None and data[0]["attempts"] == 1


def test_bench_unreachable(capsys):
    code, _, _ = run(capsys, "bench", "--spec", EVEN, "--n", "5", "--trials", "1")
    assert code == 3


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "8")
    assert code == 0
    assert "FAIL" not in out and out.rstrip().endswith("checks passed")


def test_verify_detects_injected_fault(capsys):
    code, out, _ = run(capsys, "verify", "--max-n", "6", "--inject-fault")
    assert code == 4
    assert "FAIL" in out
