import csv
import subprocess
import sys

from arena.cli import main
from arena.registry import AgentSpecError, parse_spec, split_agent_list

import pytest

RUN = ["run", "--agents", "chargingboul,conceder:e=2,hardliner", "--scenario",
       "gen:seed=3,issues=3,values=3", "--sessions", "3", "--deadline", "100"]


def test_run_writes_reports_and_figures(tmp_path, capsys):
    assert main(RUN + ["--out", str(tmp_path)]) == 0
    for name in ("outcomes.csv", "standings.csv", "pairings.csv", "standings.png", "session_utilities.png"):
        assert (tmp_path / name).stat().st_size > 0
    rows = list(csv.DictReader(open(tmp_path / "outcomes.csv")))
    assert len(rows) == 9
    assert "chargingboul" in capsys.readouterr().out


def test_run_is_reproducible(tmp_path):
    main(RUN + ["--out", str(tmp_path / "a"), "--no-plots"])
    main(RUN + ["--out", str(tmp_path / "b"), "--no-plots"])
    assert (tmp_path / "a/outcomes.csv").read_bytes() == (tmp_path / "b/outcomes.csv").read_bytes()
    assert not (tmp_path / "a/standings.png").exists()


def test_stats_lists_records(tmp_path, capsys):
    main(RUN + ["--out", str(tmp_path), "--no-plots"])
    capsys.readouterr()
    assert main(["stats", str(tmp_path / "memory")]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].split("\t") == ["store", "opponent_id", "ubi", "aui", "sessions_observed"]
    ids = {line.split("\t")[1] for line in lines[1:]}
    assert ids == {"conceder:e=2", "hardliner"}
    assert all(line.split("\t")[4] == "3" for line in lines[1:])


def test_traces(tmp_path, capsys):
    assert main(["traces", "--out", str(tmp_path)]) == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert {"bidding_strategy.csv", "bidding_strategy.png", "opponent_strategy.csv", "opponent_strategy.png"} <= names


@pytest.mark.parametrize(
    "argv",
    [
        ["run", "--agents", "nobody,hardliner", "--out", "x"],
        ["run", "--agents", "hardliner", "--out", "x"],
        ["run", "--agents", "hardliner,random", "--scenario", "gen:seed=x", "--out", "x"],
        ["run", "--agents", "chargingboul:m=2,random", "--out", "x"],
        ["stats", "/nonexistent/dir"],
    ],
)
def test_errors_exit_one(argv, tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 1
    assert "arena: error" in capsys.readouterr().err


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "arena.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "run" in proc.stdout


class TestSpecs:
    def test_split_keeps_parameters_with_agent(self):
        assert split_agent_list("chargingboul,boulware:e=0.02,floor=0.4,random") == [
            "chargingboul", "boulware:e=0.02,floor=0.4", "random",
        ]

    def test_parse(self):
        assert parse_spec("Conceder:e=3") == ("conceder", {"e": 3.0})

    @pytest.mark.parametrize("spec", ["hardliner:e=1", "boulware:e", "boulware:e=abc", "zzz"])
    def test_bad(self, spec):
        with pytest.raises(AgentSpecError):
            parse_spec(spec)
