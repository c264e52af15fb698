import pytest

from streamcvi.cli import main
from streamcvi.stream_io import read_events, read_trace


SCENARIO_INI = """\
[tiny-skmeans]
dataset = s3
algorithm = skmeans
k = 4
seed = 0

[tiny-oec]
dataset = s2
algorithm = oec
lambda = 0.9

[needs-input]
input = {input_path}
features = 0,1
algorithm = skmeans
k = 2
"""


@pytest.fixture
def scenario_file(tmp_path):
    f = tmp_path / "scenarios.ini"
    f.write_text(SCENARIO_INI.format(input_path=tmp_path / "in.csv"))
    return f


class TestGenerate:
    def test_writes_samples_and_events(self, tmp_path, capsys):
        out = tmp_path / "s3.csv"
        assert main(["generate", "s3", "--out", str(out), "--seed", "0"]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 2000
        assert len(lines[0].split(",")) == 3  # x, y, label
        events = read_events(out.with_suffix(".csv.events"))
        assert [e.n for e in events] == list(range(201, 1802, 200))
        assert "2000 samples" in capsys.readouterr().out

    def test_same_seed_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["generate", "s1", "--out", str(a), "--seed", "5"])
        main(["generate", "s1", "--out", str(b), "--seed", "5"])
        assert a.read_bytes() == b.read_bytes()

    def test_different_seed_differs(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["generate", "s2", "--out", str(a), "--seed", "1"])
        main(["generate", "s2", "--out", str(b), "--seed", "2"])
        assert a.read_bytes() != b.read_bytes()


class TestRun:
    def test_scenario_smoke(self, tmp_path, scenario_file, capsys):
        code = main([
            "run", "tiny-skmeans",
            "--scenario-file", str(scenario_file),
            "--out", str(tmp_path / "res"),
        ])
        assert code == 0
        trace = read_trace(tmp_path / "res" / "tiny-skmeans.trace.csv")
        assert len(trace) == 1996  # 2000 minus k=4 warm-up points
        assert all(r.k == 4 for r in trace)
        events = read_events(tmp_path / "res" / "tiny-skmeans.events.log")
        assert sum(e.kind == "ground_truth_change" for e in events) == 9
        assert "final k=4" in capsys.readouterr().out

    def test_unknown_scenario_lists_known(self, scenario_file):
        with pytest.raises(SystemExit, match="tiny-skmeans"):
            main(["run", "nope", "--scenario-file", str(scenario_file)])

    def test_missing_scenario_file_names_path(self, tmp_path):
        missing = tmp_path / "gone.ini"
        with pytest.raises(SystemExit, match="gone.ini"):
            main(["run", "x", "--scenario-file", str(missing)])

    def test_missing_input_csv_is_soft_error(self, tmp_path, scenario_file, capsys):
        code = main([
            "run", "needs-input",
            "--scenario-file", str(scenario_file),
            "--out", str(tmp_path / "res"),
        ])
        assert code == 1
        assert "needs-input" in capsys.readouterr().err

    def test_cli_overrides_take_precedence(self, tmp_path, scenario_file):
        main([
            "run", "tiny-skmeans",
            "--scenario-file", str(scenario_file),
            "--out", str(tmp_path / "res"),
            "--k", "2", "--indices", "xb",
        ])
        trace = read_trace(tmp_path / "res" / "tiny-skmeans.trace.csv")
        assert all(r.k == 2 for r in trace)
        assert all(r.values["xb_lambda"] is None for r in trace)  # column empty


class TestVerify:
    def test_small_run_passes(self, capsys):
        assert main(["verify", "--trials", "3", "--seed", "0"]) == 0
        assert "PASS" in capsys.readouterr().out
