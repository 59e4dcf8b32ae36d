import json

import pytest
from click.testing import CliRunner

from twlga import cli


@pytest.fixture
def runner():
    return CliRunner()


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def compare_config(tmp_path, **overrides):
    payload = {
        "instances": {"generate": {"count": 1, "tasks": 4, "nodes": 2,
                                   "heterogeneity": 3.0, "seed": 2}},
        "seeds": [0, 1],
        "ga": {"population": 8, "generations": 6},
    }
    payload.update(overrides)
    return write_json(tmp_path / "compare.json", payload)


class TestCompare:
    def test_writes_artifacts(self, runner, tmp_path):
        cfg = compare_config(tmp_path)
        out = tmp_path / "out"
        result = runner.invoke(cli.main, ["compare", "--config", cfg,
                                          "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert (out / "report.csv").exists()
        assert (out / "summary.json").exists()
        assert (out / "timings.json").exists()

    def test_byte_identical_reruns(self, runner, tmp_path):
        cfg = compare_config(tmp_path)
        for name in ("a", "b"):
            result = runner.invoke(cli.main, ["compare", "--config", cfg,
                                              "--out", str(tmp_path / name)])
            assert result.exit_code == 0, result.output
        assert (tmp_path / "a/report.csv").read_bytes() \
            == (tmp_path / "b/report.csv").read_bytes()
        assert (tmp_path / "a/summary.json").read_bytes() \
            == (tmp_path / "b/summary.json").read_bytes()

    def test_seed_flag_overrides_config(self, runner, tmp_path):
        cfg = compare_config(tmp_path)
        out = tmp_path / "out"
        result = runner.invoke(cli.main, ["compare", "--config", cfg,
                                          "--seed", "7,8", "--out", str(out)])
        assert result.exit_code == 0, result.output
        summary = json.loads((out / "summary.json").read_text())
        assert summary["seeds"] == [7, 8]

    def test_bad_seed_flag(self, runner, tmp_path):
        cfg = compare_config(tmp_path)
        result = runner.invoke(cli.main, ["compare", "--config", cfg,
                                          "--seed", "1,x"])
        assert result.exit_code != 0
        assert "comma-separated integers" in result.output

    def test_invalid_config_fails_with_message(self, runner, tmp_path):
        cfg = write_json(tmp_path / "bad.json", {"seeds": [0]})
        result = runner.invoke(cli.main, ["compare", "--config", cfg,
                                          "--out", str(tmp_path / "out")])
        assert result.exit_code != 0
        assert "invalid config" in result.output

    def test_missing_config_file(self, runner, tmp_path):
        result = runner.invoke(cli.main, ["compare", "--config",
                                          str(tmp_path / "nope.json")])
        assert result.exit_code != 0


class TestScaling:
    def test_runs_from_observations(self, runner, tmp_path):
        cfg = write_json(tmp_path / "s.json", {"observations": [
            {"size_mb": s, "nodes": k, "seconds": 1.0 + 2.0 * k + 0.5 * s / k}
            for s in (10, 20) for k in (1, 2, 3)]})
        out = tmp_path / "out"
        result = runner.invoke(cli.main, ["scaling", "--config", cfg,
                                          "--out", str(out)])
        assert result.exit_code == 0, result.output
        lines = (out / "scaling.csv").read_text().splitlines()
        assert lines[0] == "size_mb,nodes,makespan_s"
        assert len(lines) == 7

    def test_wrong_mode_rejected(self, runner, tmp_path):
        cfg = write_json(tmp_path / "s.json", {
            "mode": "compare",
            "model": {"compute_rate": 1.0},
            "sizes_mb": [1.0], "node_counts": [1]})
        result = runner.invoke(cli.main, ["scaling", "--config", cfg])
        assert result.exit_code != 0
        assert "invalid config" in result.output


class TestPipeline:
    def setup_traces(self, tmp_path):
        traces = tmp_path / "traces"
        traces.mkdir()
        (traces / "t1.txt").write_text("2020 06 01 00 00 154584\n")
        (traces / "t2.txt").write_text("2021 01 01 00 00 154574\n")
        return traces

    def config(self, tmp_path, **extra):
        payload = {"calibration": {"lambda0": 154574, "slope": 10,
                                   "t0": 25.0}}
        payload.update(extra)
        return write_json(tmp_path / "p.json", payload)

    def test_merges_and_extracts(self, runner, tmp_path):
        traces = self.setup_traces(tmp_path)
        cfg = self.config(tmp_path, input_dir=str(traces))
        out = tmp_path / "out"
        result = runner.invoke(cli.main, ["pipeline", "--config", cfg,
                                          "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert (out / "merged/2020.txt").read_text() \
            == "2020 06 01 00 00 154584\n"
        assert (out / "merged/2021.txt").exists()
        assert (out / "extracted.csv").read_text().splitlines()[0] \
            == "year,month,hour,minute,temp_c"

    def test_input_dir_flag_overrides(self, runner, tmp_path):
        traces = self.setup_traces(tmp_path)
        cfg = self.config(tmp_path, input_dir=str(tmp_path / "missing"))
        out = tmp_path / "out"
        result = runner.invoke(cli.main, ["pipeline", "--config", cfg,
                                          "--input-dir", str(traces),
                                          "--out", str(out)])
        assert result.exit_code == 0, result.output

    def test_no_input_dir_errors(self, runner, tmp_path):
        cfg = self.config(tmp_path)
        result = runner.invoke(cli.main, ["pipeline", "--config", cfg])
        assert result.exit_code != 0
        assert "input directory" in result.output

    def test_parse_error_propagates(self, runner, tmp_path):
        traces = tmp_path / "traces"
        traces.mkdir()
        (traces / "bad.txt").write_text("2020 99 01 00 00 1\n")
        cfg = self.config(tmp_path, input_dir=str(traces))
        result = runner.invoke(cli.main, ["pipeline", "--config", cfg,
                                          "--out", str(tmp_path / "out")])
        assert result.exit_code != 0
        assert "month" in result.output


class TestGenInstance:
    def test_flags_only(self, runner, tmp_path):
        out = tmp_path / "inst"
        result = runner.invoke(cli.main, [
            "gen-instance", "--tasks", "4", "--nodes", "2", "--seed", "3",
            "--out", str(out)])
        assert result.exit_code == 0, result.output
        doc = json.loads((out / "instance.json").read_text())
        assert doc["tasks"]["count"] == 4
        assert len(doc["etc"]) == 4

    def test_count_names_files(self, runner, tmp_path):
        out = tmp_path / "inst"
        result = runner.invoke(cli.main, [
            "gen-instance", "--tasks", "2", "--nodes", "2", "--count", "3",
            "--out", str(out)])
        assert result.exit_code == 0, result.output
        names = sorted(p.name for p in out.iterdir())
        assert names == ["instance_000.json", "instance_001.json",
                         "instance_002.json"]

    def test_config_plus_flag_override(self, runner, tmp_path):
        cfg = write_json(tmp_path / "g.json",
                         {"tasks": 3, "nodes": 2, "seed": 1})
        out = tmp_path / "inst"
        result = runner.invoke(cli.main, [
            "gen-instance", "--config", cfg, "--tasks", "5",
            "--out", str(out)])
        assert result.exit_code == 0, result.output
        doc = json.loads((out / "instance.json").read_text())
        assert doc["tasks"]["count"] == 5

    def test_generated_instance_feeds_compare(self, runner, tmp_path):
        out = tmp_path / "inst"
        result = runner.invoke(cli.main, [
            "gen-instance", "--tasks", "3", "--nodes", "2",
            "--out", str(out)])
        assert result.exit_code == 0, result.output
        doc = json.loads((out / "instance.json").read_text())
        cfg = write_json(tmp_path / "c.json", {
            "instances": {"inline": [doc]},
            "seeds": [0],
            "ga": {"population": 6, "generations": 3}})
        result = runner.invoke(cli.main, ["compare", "--config", cfg,
                                          "--out", str(tmp_path / "out")])
        assert result.exit_code == 0, result.output


class TestMisc:
    def test_version(self, runner):
        result = runner.invoke(cli.main, ["--version"])
        assert result.exit_code == 0
        assert "twlga" in result.output

    def test_help_lists_subcommands(self, runner):
        result = runner.invoke(cli.main, ["--help"])
        for name in ("compare", "scaling", "pipeline", "gen-instance",
                     "single-run", "serve"):
            assert name in result.output
