from __future__ import annotations

import dataclasses

import pytest

import util
from sctsp.bench import read_csv
from sctsp.cli import main
from sctsp.instance import format_explicit, held_karp_optimal


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    """On-disk instances: t4, an n=8 solve target, an n=13 oracle case."""
    root = tmp_path_factory.mktemp("cli_files")
    made = {}
    for inst in (
        util.t4_instance(),
        util.random_explicit(3, 8),
        util.random_explicit(1, 13),
    ):
        path = root / f"{inst.name}.tsp"
        path.write_text(format_explicit(inst))
        made[inst.name] = (str(path), inst)
    return root, made


@pytest.fixture(scope="module")
def solve_target(files):
    _, made = files
    return made["rand8s3"]


def fields(captured: str) -> dict[str, str]:
    return dict(line.split(" ", 1) for line in captured.splitlines())


def test_solve_prints_row_fields(solve_target, capsys):
    path, inst = solve_target
    assert main(["solve", "--instance", path, "--algo", "sec",
                 "--seed", "11"]) == 0
    got = fields(capsys.readouterr().out)
    assert got["instance"] == inst.name
    assert got["n"] == "8"
    assert got["algo"] == "sec"
    assert got["seed"] == "11"
    assert int(got["best_length"]) <= int(got["start_length"])
    assert "pct_dev" not in got
    assert float(got["wall_ms"]) >= 0.0


def test_solve_is_deterministic_modulo_wall(solve_target, capsys):
    path, _ = solve_target
    runs = []
    for _ in range(2):
        assert main(["solve", "--instance", path, "--algo", "isec",
                     "--seed", "4"]) == 0
        got = fields(capsys.readouterr().out)
        got.pop("wall_ms")
        runs.append(got)
    assert runs[0] == runs[1]


def test_solve_with_optima_reports_deviation(solve_target, tmp_path, capsys):
    path, inst = solve_target
    _, opt = held_karp_optimal(inst)
    reg = tmp_path / "optima.csv"
    reg.write_text(f"name,optimum\n{inst.name},{opt}\n")
    assert main(["solve", "--instance", path, "--algo", "fisec",
                 "--seed", "2", "--optima", str(reg)]) == 0
    got = fields(capsys.readouterr().out)
    assert got["optimum"] == str(opt)
    dev = 100.0 * (int(got["best_length"]) - opt) / opt
    assert float(got["pct_dev"]) == pytest.approx(round(dev, 2))


def test_solve_warns_on_unregistered_instance(solve_target, tmp_path, capsys):
    path, _ = solve_target
    reg = tmp_path / "optima.csv"
    reg.write_text("name,optimum\nsomething_else,10\n")
    assert main(["solve", "--instance", path, "--algo", "sec",
                 "--seed", "1", "--optima", str(reg)]) == 0
    captured = capsys.readouterr()
    assert "no registered optimum" in captured.err
    assert "pct_dev" not in fields(captured.out)


def test_solve_csv_matches_stdout(solve_target, tmp_path, capsys):
    path, _ = solve_target
    out = tmp_path / "row.csv"
    assert main(["solve", "--instance", path, "--algo", "sec",
                 "--seed", "7", "--csv", str(out)]) == 0
    got = fields(capsys.readouterr().out)
    rows = read_csv(out)
    assert len(rows) == 1
    assert rows[0].best_length == int(got["best_length"])
    assert rows[0].seed == 7


def test_solve_half_cap_never_beats_full(solve_target, capsys):
    path, _ = solve_target
    lengths = {}
    for cap in ("full", "half"):
        assert main(["solve", "--instance", path, "--algo", "isec",
                     "--seed", "9", "--chain-cap", cap]) == 0
        lengths[cap] = int(fields(capsys.readouterr().out)["best_length"])
    assert lengths["half"] >= lengths["full"]


def test_solve_rejects_unknown_algo(solve_target, capsys):
    path, _ = solve_target
    assert main(["solve", "--instance", path, "--algo", "warp",
                 "--seed", "1"]) == 1
    assert "usage error" in capsys.readouterr().err


def test_solve_requires_seed(solve_target, capsys):
    path, _ = solve_target
    assert main(["solve", "--instance", path, "--algo", "sec"]) == 1
    assert "usage error" in capsys.readouterr().err


def test_solve_missing_file_is_user_error(capsys):
    assert main(["solve", "--instance", "/nonexistent.tsp", "--algo", "sec",
                 "--seed", "1"]) == 1
    assert "error:" in capsys.readouterr().err


def test_no_command_is_usage_error(capsys):
    assert main([]) == 1
    assert "usage error" in capsys.readouterr().err


@pytest.fixture(scope="module")
def bench_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli_bench")
    inst = util.random_explicit(6, 9)
    (root / f"{inst.name}.tsp").write_text(format_explicit(inst))
    _, opt = held_karp_optimal(inst)
    reg = root / "optima.csv"
    reg.write_text(f"name,optimum\n{inst.name},{opt}\n")
    return root, str(reg)


def test_bench_writes_rows_and_summary(bench_dir, tmp_path, capsys):
    root, reg = bench_dir
    out = tmp_path / "rows.csv"
    assert main(["bench", "--instances", str(root), "--repeats", "3",
                 "--seed-base", "9", "--optima", reg,
                 "--out", str(out)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == [
        "instance", "n", "algo", "runs", "min%", "mean%", "cpu_ms", "stq"
    ]
    assert any("isec beats sec on" in line for line in lines)
    assert lines[-1] == f"wrote 9 rows to {out}"
    assert len(read_csv(out)) == 9


def test_bench_is_reproducible_and_worker_independent(
    bench_dir, tmp_path, capsys, monkeypatch
):
    root, reg = bench_dir
    dumps = []
    for idx, workers in enumerate(("1", "2")):
        monkeypatch.setenv("SCTSP_BENCH_WORKERS", workers)
        out = tmp_path / f"rows{idx}.csv"
        assert main(["bench", "--instances", str(root), "--repeats", "2",
                     "--seed-base", "3", "--optima", reg,
                     "--out", str(out)]) == 0
        capsys.readouterr()
        dumps.append(
            [dataclasses.replace(r, wall_ms=0.0) for r in read_csv(out)]
        )
    assert dumps[0] == dumps[1]


def test_bench_rejects_empty_directory(tmp_path, capsys):
    assert main(["bench", "--instances", str(tmp_path),
                 "--out", str(tmp_path / "x.csv")]) == 1
    assert "no .tsp files" in capsys.readouterr().err


def test_bench_rejects_unknown_algo_list(bench_dir, tmp_path, capsys):
    root, _ = bench_dir
    assert main(["bench", "--instances", str(root), "--algos", "sec,warp",
                 "--out", str(tmp_path / "x.csv")]) == 1
    assert "error:" in capsys.readouterr().err


def test_oracle_prints_exact_length(files, capsys):
    _, made = files
    path, _ = made["t4"]
    assert main(["oracle", "--instance", path]) == 0
    assert capsys.readouterr().out.strip() == "6"
    path, inst = made["rand8s3"]
    assert main(["oracle", "--instance", path]) == 0
    _, opt = held_karp_optimal(inst)
    assert capsys.readouterr().out.strip() == str(opt)


def test_oracle_refuses_large_instances(files, capsys):
    _, made = files
    path, _ = made["rand13s1"]
    assert main(["oracle", "--instance", path]) == 1
    assert "n <= 12" in capsys.readouterr().err


def test_onetree_unconstrained_bound(files, capsys):
    _, made = files
    path, _ = made["t4"]
    assert main(["onetree", "--instance", path]) == 0
    got = fields(capsys.readouterr().out)
    assert got["f"] == "5"
    assert got["g"] == "0"
    assert got["h"] == "5"
    edges = got["edges"].split()
    assert len(edges) == 4
    assert edges == sorted(edges)


def test_onetree_bound_never_exceeds_oracle(files, capsys):
    _, made = files
    path, inst = made["rand8s3"]
    assert main(["onetree", "--instance", path]) == 0
    f_value = int(fields(capsys.readouterr().out)["f"])
    _, opt = held_karp_optimal(inst)
    assert f_value <= opt


def test_onetree_include_moves_weight_into_g(files, capsys):
    _, made = files
    path, inst = made["t4"]
    assert main(["onetree", "--instance", path, "--include", "2,3"]) == 0
    got = fields(capsys.readouterr().out)
    assert int(got["g"]) == int(inst.weights[2, 3])
    assert int(got["f"]) == int(got["g"]) + int(got["h"])
    assert "2,3" in got["edges"].split()


def test_onetree_infeasible_constraints(files, capsys):
    _, made = files
    path, _ = made["t4"]
    assert main(["onetree", "--instance", path,
                 "--include", "1,2;1,3;1,4"]) == 1
    assert "infeasible" in capsys.readouterr().err


def test_onetree_contradictory_sets(files, capsys):
    _, made = files
    path, _ = made["t4"]
    assert main(["onetree", "--instance", path, "--include", "2,3",
                 "--exclude", "3,2"]) == 1
    assert "error:" in capsys.readouterr().err


def test_onetree_rejects_malformed_edges(files, capsys):
    _, made = files
    path, _ = made["t4"]
    assert main(["onetree", "--instance", path, "--include", "1-4"]) == 1
    assert "error:" in capsys.readouterr().err
    assert main(["onetree", "--instance", path, "--include", "1,99"]) == 1
    assert "error:" in capsys.readouterr().err
