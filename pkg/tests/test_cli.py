"""Command-line surface: exit codes, dispatch, golden corpus."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from auctol import dumps_instance, gen_budget, gen_grid, gen_interval, gen_interval_selection, gen_subtrees, gen_tight, save_instance
from auctol.cli import run

GOLDEN = Path(__file__).parent / "golden"

GOLDEN_SPECS = {
    "interval": lambda s: gen_interval(12, seed=s),
    "interval-selection": lambda s: gen_interval_selection(4, 3, seed=s),
    "subtrees": lambda s: gen_subtrees(8, 12, seed=s),
    "grid": lambda s: gen_grid((3, 3), density_milli=900, seed=s),
    "tight": lambda s: gen_tight(2 + s % 3, 100, seed=s),
    "budget-unweighted": lambda s: gen_budget("interval", "unweighted", {"n": 12}, seed=s),
    "budget-overlapping": lambda s: gen_budget("interval", "overlapping", {"n": 12, "t": 2}, seed=s),
    "budget-weighted": lambda s: gen_budget("subtrees", "weighted", {"tree_size": 7, "n_bids": 12}, seed=s),
}


def test_golden_corpus_matches_generators():
    files = sorted(GOLDEN.glob("*.json"))
    assert len(files) == len(GOLDEN_SPECS) * 3
    for name, gen in GOLDEN_SPECS.items():
        for seed in (1, 2, 3):
            expected = dumps_instance(gen(seed))
            assert (GOLDEN / f"{name}-{seed}.json").read_text() == expected


def test_solve_tight_instance(tmp_path, capsys):
    path = tmp_path / "tight.json"
    save_instance(gen_tight(3, 100, seed=1), path)
    out = tmp_path / "sol.json"
    assert run(["solve", "--input", str(path), "--algo", "opcost", "--output", str(out)]) == 0
    sol = json.loads(out.read_text())
    assert sol["revenue"] == 1000
    assert sol["algorithm"] == "opcost"


def test_solve_exact_cap_refusal(tmp_path, capsys):
    path = tmp_path / "big.json"
    save_instance(gen_interval(35, seed=0), path)
    assert run(["solve", "--input", str(path), "--algo", "exact"]) == 3
    assert "capacity" in capsys.readouterr().err


def test_solve_opcost_lropcost_identical_json(tmp_path):
    path = tmp_path / "inst.json"
    save_instance(gen_interval(20, seed=9), path)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["solve", "--input", str(path), "--algo", "opcost", "--output", str(a)]) == 0
    assert run(["solve", "--input", str(path), "--algo", "lropcost", "--output", str(b)]) == 0
    ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
    assert ja["selected"] == jb["selected"]
    assert ja["revenue"] == jb["revenue"]
    assert ja["certificate"] == jb["certificate"]


def test_solve_validation_error_exit(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"format": "auctol/1"}')
    assert run(["solve", "--input", str(path)]) == 2


def test_order_chordal_embeds_bound(tmp_path):
    path = tmp_path / "inst.json"
    save_instance(gen_interval(15, seed=3), path)
    out = tmp_path / "ordered.json"
    assert run(["order", "--input", str(path), "--method", "chordal", "--output", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["ordering_spec"] == {"method": "chordal", "beta_bound": 1}


def test_order_c4_not_chordal_exit4(tmp_path, capsys):
    c4 = {
        "format": "auctol/1",
        "bids": [
            {"id": "a", "objects": ["x41", "x12"], "price": 1},
            {"id": "b", "objects": ["x12", "x23"], "price": 1},
            {"id": "c", "objects": ["x23", "x34"], "price": 1},
            {"id": "d", "objects": ["x34", "x41"], "price": 1},
        ],
    }
    path = tmp_path / "c4.json"
    path.write_text(json.dumps(c4))
    assert run(["order", "--input", str(path), "--method", "chordal"]) == 4
    err = capsys.readouterr().err
    assert "witness" in err


def test_order_tree_decomposition_bound(tmp_path):
    path = tmp_path / "inst.json"
    save_instance(gen_subtrees(8, 10, seed=2), path)
    out = tmp_path / "ordered.json"
    assert run(["order", "--input", str(path), "--method", "tree-decomposition", "--output", str(out)]) == 0
    obj = json.loads(out.read_text())
    spec = obj["ordering_spec"]
    assert spec["method"] == "tree-decomposition"
    bags = spec["tree_decomposition"]["bags"]
    assert spec["beta_bound"] <= max(len(b) for b in bags.values())


def test_gen_golden_regeneration(tmp_path):
    out = tmp_path / "gen.json"
    assert run(["gen", "--family", "interval", "--n", "12", "--seed", "1", "--output", str(out)]) == 0
    assert out.read_text() == (GOLDEN / "interval-1.json").read_text()


def test_gen_every_family(tmp_path):
    cases = [
        ["gen", "--family", "interval", "--n", "8"],
        ["gen", "--family", "interval-selection", "--groups", "3", "--per-group", "2"],
        ["gen", "--family", "subtrees", "--tree-size", "6", "--n", "8"],
        ["gen", "--family", "grid", "--dims", "3x3"],
        ["gen", "--family", "tight", "--beta", "4", "--epsilon-milli", "50"],
        ["gen", "--family", "budget", "--base-family", "interval", "--kind", "weighted", "--n", "10"],
    ]
    for i, argv in enumerate(cases):
        out = tmp_path / f"g{i}.json"
        assert run(argv + ["--seed", "7", "--output", str(out)]) == 0
        assert out.read_text().startswith("{")


def test_verify_golden_corpus(capsys):
    assert run(["verify", "--input", str(GOLDEN)]) == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert len(lines) == len(GOLDEN_SPECS) * 3
    assert all(r["ok"] for r in lines)
    # chordal families are solved exactly
    for r in lines:
        if r["family"] in ("interval", "subtrees"):
            assert r["observed_ratio"] == "1"


def test_verify_deterministic_output(tmp_path, capsys):
    src = GOLDEN / "interval-1.json"
    assert run(["verify", "--input", str(src)]) == 0
    first = capsys.readouterr().out
    assert run(["verify", "--input", str(src)]) == 0
    assert capsys.readouterr().out == first


def test_verify_corrupted_solution(tmp_path, capsys):
    inst = GOLDEN / "interval-1.json"
    sol = tmp_path / "sol.json"
    assert run(["solve", "--input", str(inst), "--output", str(sol)]) == 0
    obj = json.loads(sol.read_text())
    good = json.loads(json.dumps(obj))
    assert run(["verify", "--input", str(inst), "--solution", str(sol)]) == 0
    # corrupt: claim two conflicting bids
    data = json.loads(inst.read_text())
    all_ids = [b["id"] for b in data["bids"]]
    obj["selected"] = all_ids
    obj["revenue"] = sum(b["price"] for b in data["bids"])
    sol.write_text(json.dumps(obj))
    assert run(["verify", "--input", str(inst), "--solution", str(sol)]) == 5
    assert "violation" in capsys.readouterr().err


def test_bench_smoke(capsys):
    assert run(["bench", "--family", "interval", "--sizes", "4000,4000", "--repeats", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"]
    assert set(report["checks"]) == {"opcost", "lropcost"}


def test_console_script_end_to_end(tmp_path):
    out = tmp_path / "inst.json"
    proc = subprocess.run(
        [sys.executable, "-m", "auctol.cli", "gen", "--family", "tight", "--beta", "2",
         "--epsilon-milli", "100", "--seed", "0", "--output", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run(
        [sys.executable, "-m", "auctol.cli", "solve", "--input", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["revenue"] == 1000
