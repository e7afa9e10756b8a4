"""
Tests for the dlangevin command line.
"""

import json

import pytest

from dlangevin.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, build_parser, main
from dlangevin.loader import load_params
from dlangevin.model import list_presets


class TestParser:
    """Argument parsing."""

    def test_subcommand_required(self):
        """No subcommand is a usage error."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_seed_range(self):
        """Seeds must fit in 64 bits."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["run", "--config", "c.json", "--seed", "-1"])

    def test_threads_positive(self):
        """Thread counts are positive."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["run", "--config", "c.json", "--threads", "0"])


class TestPresetCommands:
    """preset and gen-params."""

    def test_list(self, capsys):
        """--list prints every preset with its family."""
        assert main(["preset", "--list"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert [line.split("\t")[0] for line in lines] == list_presets()

    def test_document(self, capsys):
        """A preset prints as a config document."""
        assert main(["preset", "potts-c4", "--seed", "5"]) == EXIT_OK
        document = json.loads(capsys.readouterr().out)
        assert document["model"]["preset"] == "potts-c4"
        assert document["seed"] == 5

    def test_unknown_preset(self):
        """Unknown names are configuration errors."""
        assert main(["preset", "ising-medium"]) == EXIT_CONFIG

    def test_gen_params(self, tmp_path, capsys):
        """gen-params writes a loadable parameter file."""
        out = tmp_path / "rbm.json"
        assert main(["gen-params", "rbm-c4", "--seed", "7", "--out", str(out)]) == EXIT_OK
        params = load_params(out)
        assert params.n_categories == 4
        assert str(out) in capsys.readouterr().out


class TestRunCommand:
    """run and tune."""

    def test_missing_config(self, tmp_path):
        """A missing file exits with the configuration code."""
        assert main(["run", "--config", str(tmp_path / "none.json")]) == EXIT_CONFIG

    def test_invalid_config(self, tmp_path, smoke_config):
        """An invalid document exits with the configuration code."""
        smoke_config["chains"] = 0
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(smoke_config), encoding="utf-8")
        assert main(["run", "--config", str(path)]) == EXIT_CONFIG

    def test_run(self, tmp_path, smoke_config, capsys):
        """A tiny config runs and reports its files."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps(smoke_config), encoding="utf-8")
        out = tmp_path / "results"
        code = main(["-q", "run", "--config", str(path), "--out", str(out), "--threads", "1"])
        assert code == EXIT_OK
        assert (out / "results.csv").exists()
        assert "csv:" in capsys.readouterr().out

    def test_tune(self, tmp_path, smoke_config, capsys):
        """tune prints one entry per sampler."""
        smoke_config["tuning"] = {"adaptation_steps": 100}
        path = tmp_path / "config.json"
        path.write_text(json.dumps(smoke_config), encoding="utf-8")
        code = main(["-q", "tune", "--config", str(path), "--threads", "1"])
        document = json.loads(capsys.readouterr().out)
        assert [entry["label"] for entry in document] == ["dlmc-sqrt", "rwm", "gwg-barker"]
        assert document[2]["status"] == "skipped"
        assert code in (EXIT_OK, EXIT_FAILED)


class TestValidateCommand:
    """validate."""

    def test_single_check(self, tmp_path, capsys):
        """A passing check exits 0 and can be written to a file."""
        out = tmp_path / "report.json"
        code = main(
            ["-q", "validate", "--check", "check_lb_identity", "--out", str(out), "--threads", "1"]
        )
        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out)["passed"] is True
        assert json.loads(out.read_text(encoding="utf-8"))["checks"][0]["name"] == "lb_identity"

    def test_mutation_fails(self, capsys):
        """The negative control exits 1."""
        code = main(
            [
                "-q", "validate", "--mutation", "interpolated_row",
                "--check", "check_c2_exactness", "--threads", "1",
            ]
        )
        assert code == EXIT_FAILED
        assert json.loads(capsys.readouterr().out)["passed"] is False
