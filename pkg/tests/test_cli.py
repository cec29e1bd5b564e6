import json
import re
from pathlib import Path

import pytest
import yaml

from prepost.cli import main
from prepost.scenarios import EXPERIMENTS

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def write_config(tmp_path, mapping, name="scenario.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(mapping))
    return path


def strip_wall_time(text: str) -> str:
    return re.sub(r'^.*wall_time_s.*$', "", text, flags=re.MULTILINE)


def run_cli(*argv):
    return main(list(argv))


class TestList:
    def test_lists_all_experiments(self, capsys):
        assert run_cli("list") == 0
        out = capsys.readouterr().out
        assert len(EXPERIMENTS) == 9
        for name in EXPERIMENTS:
            assert name in out

    def test_listing_is_byte_stable(self, capsys):
        run_cli("list")
        first = capsys.readouterr().out
        run_cli("list")
        second = capsys.readouterr().out
        assert first == second

    def test_listing_alphabetical(self, capsys):
        run_cli("list")
        out = capsys.readouterr().out
        heads = [l for l in out.splitlines() if l and not l.startswith(" ")]
        assert heads == sorted(heads)


class TestRunHappyPaths:
    def test_born_emergence_payload(self, tmp_path):
        out = tmp_path / "born.json"
        code = run_cli(
            "run", str(SCENARIO_DIR / "born_emergence.yaml"), "--out", str(out)
        )
        assert code == 0
        record = json.loads(out.read_text())
        p = record["results"][0]["scalars"]["empirical_p"]
        assert 0.485 <= p <= 0.515
        assert record["meta"]["seed"] == 42
        assert record["meta"]["version"]

    def test_hbt_csv_row(self, tmp_path):
        out = tmp_path / "hbt.csv"
        code = run_cli(
            "run", str(SCENARIO_DIR / "hbt.yaml"), "--out", str(out), "--format", "csv"
        )
        assert code == 0
        lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "rate"
        assert float(lines[1]) == 4.0

    def test_three_box_probabilities(self, tmp_path):
        out = tmp_path / "tb.json"
        assert run_cli("run", str(SCENARIO_DIR / "abl_three_box.yaml"), "--out", str(out)) == 0
        record = json.loads(out.read_text())
        rows = record["results"][0]["rows"]
        by_outcome = {r["outcomes"]: r["probability"] for r in rows}
        assert by_outcome["0"] == pytest.approx(1.0, abs=1e-12)
        assert by_outcome["1"] == 0.0

    def test_format_inferred_from_extension(self, tmp_path):
        out = tmp_path / "cpt.json"
        assert run_cli("run", str(SCENARIO_DIR / "cpt.yaml"), "--out", str(out)) == 0
        record = json.loads(out.read_text())
        assert record["results"][0]["scalars"]["asymmetry"] == pytest.approx(2e-3)

    def test_sweep_order_and_threads(self, tmp_path):
        serial = tmp_path / "serial.json"
        threaded = tmp_path / "threaded.json"
        cfg = str(SCENARIO_DIR / "cat_witness.yaml")
        assert run_cli("run", cfg, "--out", str(serial), "--format", "json") == 0
        assert (
            run_cli("run", cfg, "--out", str(threaded), "--format", "json", "--threads", "4")
            == 0
        )
        a = strip_wall_time(serial.read_text())
        b = strip_wall_time(threaded.read_text())
        assert a == b
        record = json.loads(serial.read_text())
        coherences = [r["scalars"]["coherence"] for r in record["results"]]
        assert coherences == pytest.approx([1.0, 0.3, 0.0], abs=1e-12)

    def test_complex_sweep_param_flattens_in_csv(self, tmp_path):
        import csv as csv_mod

        out = tmp_path / "cat.csv"
        code = run_cli(
            "run", str(SCENARIO_DIR / "cat_witness.yaml"), "--out", str(out),
            "--format", "csv",
        )
        assert code == 0
        with open(out) as fh:
            rows = list(csv_mod.reader(l for l in fh if not l.startswith("#")))
        assert rows[0] == ["witness_overlap_re", "witness_overlap_im", "coherence"]
        assert all(len(r) == 3 for r in rows)
        assert float(rows[2][2]) == pytest.approx(0.3, abs=1e-12)

    def test_seed_override_recorded(self, tmp_path):
        out = tmp_path / "born.json"
        code = run_cli(
            "run",
            str(SCENARIO_DIR / "born_emergence.yaml"),
            "--out",
            str(out),
            "--seed-override",
            "7",
        )
        assert code == 0
        record = json.loads(out.read_text())
        assert record["meta"]["seed"] == 7


class TestValidationErrors:
    def test_missing_seed_names_field(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "experiment": "dominance",
                "params": {"h": 10.0, "k": 2},
                "samples": 100,
                "output": {"path": "x.json", "format": "json"},
            },
        )
        assert run_cli("run", str(cfg)) == 2
        assert "'seed'" in capsys.readouterr().err

    def test_unknown_param_rejected(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "experiment": "hbt",
                "params": {
                    "a13": [1, 0], "a14": [1, 0], "a23": [1, 0], "a24": [1, 0],
                    "statistics": "boson", "phase": 0.3,
                },
            },
        )
        assert run_cli("run", str(cfg), "--out", str(tmp_path / "o.json")) == 2
        assert "phase" in capsys.readouterr().err

    def test_unknown_top_level_key_rejected(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {"experiment": "cpt", "params": {"a": [1, 0], "a_prime": [1, 0]}, "shots": 5},
        )
        assert run_cli("run", str(cfg), "--out", str(tmp_path / "o.json")) == 2
        assert "shots" in capsys.readouterr().err

    def test_samples_rejected_where_unused(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "experiment": "cpt",
                "params": {"a": [1, 0], "a_prime": [1, 0]},
                "samples": 10,
            },
        )
        assert run_cli("run", str(cfg), "--out", str(tmp_path / "o.json")) == 2
        assert "samples" in capsys.readouterr().err

    def test_yaml_syntax_error_reports_location(self, tmp_path, capsys):
        path = tmp_path / "broken.yaml"
        path.write_text("experiment: [unclosed\nparams:\n")
        assert run_cli("run", str(path), "--out", str(tmp_path / "o.json")) == 2
        err = capsys.readouterr().err
        assert "line" in err

    def test_missing_output_path(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path, {"experiment": "cpt", "params": {"a": [1, 0], "a_prime": [1, 0]}}
        )
        assert run_cli("run", str(cfg)) == 2
        assert "output" in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert run_cli("run", str(tmp_path / "nope.yaml"), "--out", "o.json") == 2

    def test_sweep_rejected_for_table_experiments(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "experiment": "abl",
                "params": {"preset": "three_box"},
                "sweep": [{"preset": "three_box"}],
            },
        )
        assert run_cli("run", str(cfg), "--out", str(tmp_path / "o.json")) == 2


class TestLibraryErrorExitCodes:
    def test_impossible_postselection_exits_3(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "experiment": "abl",
                "params": {
                    "dim": 2,
                    "n_events": 1,
                    "initial": [[1, 0], [0, 0]],
                    "final": [[0, 0], [1, 0]],
                },
            },
        )
        assert run_cli("run", str(cfg), "--out", str(tmp_path / "o.json")) == 3
        assert "post-selection" in capsys.readouterr().err

    def test_enumeration_cap_exits_4(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path,
            {
                "experiment": "abl",
                "params": {
                    "dim": 2,
                    "n_events": 25,
                    "initial": [[1, 0], [0, 0]],
                    "final": [[1, 0], [0, 0]],
                },
            },
        )
        assert run_cli("run", str(cfg), "--out", str(tmp_path / "o.json")) == 4
        assert "cap" in capsys.readouterr().err


class TestDeterminism:
    @pytest.mark.parametrize(
        "scenario", sorted(p.name for p in SCENARIO_DIR.glob("*.yaml"))
    )
    def test_rerun_is_byte_identical_modulo_wall_time(self, scenario, tmp_path):
        first = tmp_path / "first.out"
        second = tmp_path / "second.out"
        cfg = str(SCENARIO_DIR / scenario)
        assert run_cli("run", cfg, "--out", str(first)) == 0
        assert run_cli("run", cfg, "--out", str(second)) == 0
        assert strip_wall_time(first.read_text()) == strip_wall_time(second.read_text())
