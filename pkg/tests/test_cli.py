"""Command-line behavior: argument handling, exit codes, emitted files."""

import pytest

from fairfedcs.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_RUNTIME,
    OUT_ROOT_ENV,
    main,
    parse_seed_list,
)

SMALL_TOML = """\
scenario = 1
policy = "fairfedcs"
seed = 0
n_clients = 10
m = 2
n_classes = 5
feature_dim = 8
samples_per_client = 100
max_rounds = 3
patience = 3
"""


def run_cli(argv):
    """Normalize return-style and SystemExit-style exits to one code."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


@pytest.fixture()
def config_path(tmp_path):
    path = tmp_path / "exp.toml"
    path.write_text(SMALL_TOML)
    return path


class TestParseSeedList:
    def test_single_values_and_ranges(self):
        assert parse_seed_list("0-4,7") == [0, 1, 2, 3, 4, 7]
        assert parse_seed_list("3") == [3]
        assert parse_seed_list("1, 2 ,5") == [1, 2, 5]

    def test_garbage_raises(self):
        with pytest.raises(ValueError):
            parse_seed_list("a-b")


class TestRunCommand:
    def test_writes_artifacts_and_prints_summary(self, config_path, tmp_path, capsys):
        out = tmp_path / "out"
        code = run_cli(["run", "--config", str(config_path), "--out", str(out)])
        assert code == EXIT_OK
        for name in ("trace.csv", "rounds.csv", "summary.json"):
            assert (out / name).is_file()
        stdout = capsys.readouterr().out
        assert "policy=fairfedcs seed=0" in stdout
        assert "jfi=" in stdout
        assert str(out / "summary.json") in stdout

    def test_out_root_env_var_sets_default_directory(
        self, config_path, tmp_path, monkeypatch, capsys
    ):
        root = tmp_path / "root"
        monkeypatch.setenv(OUT_ROOT_ENV, str(root))
        code = run_cli(["run", "--config", str(config_path)])
        assert code == EXIT_OK
        assert (root / "run_fairfedcs_seed0" / "summary.json").is_file()

    def test_missing_config_file_exits_2(self, tmp_path, capsys):
        code = run_cli(["run", "--config", str(tmp_path / "none.toml")])
        assert code == EXIT_CONFIG
        assert "not found" in capsys.readouterr().err

    def test_bad_config_value_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.toml"
        path.write_text('scenario = 1\npolicy = "nope"\nseed = 0\n')
        code = run_cli(["run", "--config", str(path), "--out", str(tmp_path / "o")])
        assert code == EXIT_CONFIG
        assert "policy" in capsys.readouterr().err

    def test_unwritable_out_dir_exits_3(self, config_path, tmp_path, capsys):
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        code = run_cli(
            ["run", "--config", str(config_path), "--out", str(blocker / "sub")]
        )
        assert code == EXIT_RUNTIME
        assert "error" in capsys.readouterr().err

    def test_unreachable_server_exits_3(self, config_path, tmp_path, capsys):
        code = run_cli(
            [
                "run",
                "--config",
                str(config_path),
                "--out",
                str(tmp_path / "o"),
                "--server",
                "http://127.0.0.1:1",
            ]
        )
        assert code == EXIT_RUNTIME


class TestSweepCommand:
    def test_sweep_writes_grid(self, config_path, tmp_path, capsys):
        out = tmp_path / "sweep"
        code = run_cli(
            [
                "sweep",
                "--config",
                str(config_path),
                "--policies",
                "fairfedcs,random",
                "--seeds",
                "0-1",
                "--out",
                str(out),
            ]
        )
        assert code == EXIT_OK
        assert (out / "sweep.csv").is_file()
        assert (out / "random" / "seed_1" / "summary.json").is_file()
        assert "completed 4 runs" in capsys.readouterr().out

    def test_unknown_policy_exits_2(self, config_path, tmp_path, capsys):
        code = run_cli(
            [
                "sweep",
                "--config",
                str(config_path),
                "--policies",
                "mystery",
                "--seeds",
                "0",
                "--out",
                str(tmp_path / "s"),
            ]
        )
        assert code == EXIT_CONFIG
        assert "mystery" in capsys.readouterr().err

    def test_unparseable_seeds_exit_2(self, config_path, tmp_path, capsys):
        code = run_cli(
            [
                "sweep",
                "--config",
                str(config_path),
                "--policies",
                "random",
                "--seeds",
                "x",
                "--out",
                str(tmp_path / "s"),
            ]
        )
        assert code == EXIT_CONFIG


class TestReportCommand:
    def test_report_from_sweep(self, config_path, tmp_path, capsys):
        sweep_out = tmp_path / "sweep"
        run_cli(
            [
                "sweep",
                "--config",
                str(config_path),
                "--policies",
                "fairfedcs",
                "--seeds",
                "0",
                "--out",
                str(sweep_out),
            ]
        )
        capsys.readouterr()
        report_out = tmp_path / "report"
        code = run_cli(["report", "--sweep", str(sweep_out), "--out", str(report_out)])
        assert code == EXIT_OK
        assert (report_out / "table.txt").is_file()
        assert "table.txt" in capsys.readouterr().out

    def test_missing_sweep_exits_2(self, tmp_path, capsys):
        code = run_cli(
            ["report", "--sweep", str(tmp_path / "none"), "--out", str(tmp_path / "r")]
        )
        assert code == EXIT_CONFIG
