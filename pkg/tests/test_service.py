"""
Tests for the experiment runner and the validation suite.
"""

import json

import pytest

from dlangevin.generator import RESULTS_FILE, SUMMARY_FILE
from dlangevin.loader import save_params
from dlangevin.model import ModelFamily, SamplerKind, TuningStatus, generate_params
from dlangevin.service import (
    THREADS_ENV,
    ConfigurationError,
    ExperimentService,
    ValidationFailedError,
    ValidationReport,
    ValidationService,
    resolve_threads,
)


@pytest.fixture
def service():
    return ExperimentService(threads=1)


class TestResolveThreads:
    """Worker count resolution."""

    def test_explicit(self, monkeypatch):
        """An explicit value wins over the environment."""
        monkeypatch.setenv(THREADS_ENV, "7")
        assert resolve_threads(3) == 3

    def test_environment(self, monkeypatch):
        """The environment variable is read when no value is given."""
        monkeypatch.setenv(THREADS_ENV, "5")
        assert resolve_threads() == 5

    def test_invalid_environment(self, monkeypatch):
        """Non-integers are configuration errors."""
        monkeypatch.setenv(THREADS_ENV, "many")
        with pytest.raises(ConfigurationError):
            resolve_threads()

    def test_zero(self):
        """At least one worker."""
        with pytest.raises(ConfigurationError):
            resolve_threads(0)


class TestRunExperiment:
    """End-to-end runs on a tiny model."""

    def test_rows_and_files(self, service, smoke_config, tmp_path):
        """One row per (sampler, chain) in canonical order and both files written."""
        config = service.load_config(smoke_config)
        result = service.run_experiment(config, output_dir=str(tmp_path / "out"))
        assert [(r.sampler, r.chain_id) for r in result.rows] == [
            ("dlmc", 0), ("dlmc", 1), ("rwm", 0), ("rwm", 1), ("gwg", 0), ("gwg", 1),
        ]
        assert all(r.tv_to_exact is not None for r in result.rows)
        assert all(r.ess_per_second is None for r in result.rows)
        assert all(r.model == "bernoulli-high" for r in result.rows)
        assert result.rows[0].energy_evals == 90 * 4
        assert (tmp_path / "out" / RESULTS_FILE).exists()
        summary = json.loads((tmp_path / "out" / SUMMARY_FILE).read_text(encoding="utf-8"))
        assert [s["label"] for s in summary["samplers"]] == ["dlmc-sqrt", "rwm", "gwg-barker"]
        assert summary["seed"] == 42

    def test_deterministic(self, service, smoke_config, tmp_path):
        """Two runs with the same seed write identical CSVs."""
        config = service.load_config(smoke_config)
        service.run_experiment(config, output_dir=str(tmp_path / "a"))
        service.run_experiment(config, output_dir=str(tmp_path / "b"))
        a = (tmp_path / "a" / RESULTS_FILE).read_bytes()
        b = (tmp_path / "b" / RESULTS_FILE).read_bytes()
        assert a == b

    def test_worker_count_does_not_matter(self, smoke_config):
        """A process pool gives the same rows as the serial path."""
        serial = ExperimentService(threads=1)
        pooled = ExperimentService(threads=2)
        config = serial.load_config(smoke_config)
        a = serial.run_experiment(config, write=False).rows
        b = pooled.run_experiment(config, write=False).rows
        assert [r.csv_cells() for r in a] == [r.csv_cells() for r in b]

    def test_seed_changes_results(self, service, smoke_config):
        """Another seed gives other chains."""
        config = service.load_config(smoke_config)
        other = service.with_overrides(config, seed=43)
        a = service.run_experiment(config, write=False).rows
        b = service.run_experiment(other, write=False).rows
        assert [r.ess for r in a] != [r.ess for r in b]

    def test_tuning(self, service, smoke_config):
        """Tuned values replace the configured ones; gwg is skipped."""
        smoke_config["tuning"] = {"enabled": True, "adaptation_steps": 200}
        config = service.load_config(smoke_config)
        result = service.run_experiment(config, write=False)
        statuses = [report.status for report in result.tuning]
        assert statuses[2] is TuningStatus.SKIPPED
        assert result.samplers[0].step == result.tuning[0].value
        assert result.rows[0].tuned_value == result.tuning[0].value

    def test_params_file(self, service, smoke_config, tmp_path):
        """Models can come from a parameter file."""
        params = generate_params(ModelFamily.BERNOULLI, {"n_sites": 3, "n_categories": 2}, 1)
        path = save_params(params, tmp_path / "p.json")
        smoke_config["model"] = {"family": "bernoulli", "params_file": str(path)}
        result = service.run_experiment(service.load_config(smoke_config), write=False)
        assert result.rows[0].model == "bernoulli"

    def test_params_file_family_mismatch(self, service, smoke_config, tmp_path):
        """The file's family must match the config."""
        params = generate_params(ModelFamily.BERNOULLI, {"n_sites": 3, "n_categories": 2}, 1)
        path = save_params(params, tmp_path / "p.json")
        smoke_config["model"] = {"family": "rbm", "params_file": str(path)}
        with pytest.raises(ConfigurationError):
            service.run_experiment(service.load_config(smoke_config), write=False)


class TestConfiguration:
    """Config errors surface as ConfigurationError."""

    def test_invalid_document(self, service, smoke_config):
        """Loader violations are wrapped."""
        smoke_config["steps"] = 0
        with pytest.raises(ConfigurationError):
            service.load_config(smoke_config)

    def test_missing_file(self, service, tmp_path):
        """A missing config file is a configuration error."""
        with pytest.raises(ConfigurationError):
            service.load_config(tmp_path / "missing.json")

    def test_bad_override(self, service, smoke_config):
        """A seed outside the range is rejected on override."""
        config = service.load_config(smoke_config)
        with pytest.raises(ConfigurationError):
            service.with_overrides(config, seed=-1)

    def test_output_override(self, service, smoke_config):
        """The output directory can be replaced."""
        config = service.with_overrides(service.load_config(smoke_config), output_dir="elsewhere")
        assert config.output.path == "elsewhere"

    def test_invalid_shape_override(self, service, smoke_config):
        """Overrides that break generation are configuration errors."""
        smoke_config["model"]["overrides"] = {"n_sites": 0}
        with pytest.raises(ConfigurationError):
            service.run_experiment(service.load_config(smoke_config), write=False)

    def test_block_too_large(self, service, smoke_config):
        """Block kernels beyond the enumeration cap are refused before running."""
        smoke_config["model"]["overrides"] = {"n_sites": 40, "n_categories": 8}
        smoke_config["samplers"] = [{"kind": "block_gibbs", "block_size": 6}]
        with pytest.raises(ConfigurationError):
            service.run_experiment(service.load_config(smoke_config), write=False)


class TestValidationService:
    """The oracle and invariant suite."""

    FAST = [
        "check_c2_exactness",
        "check_boundaries",
        "check_conductance",
        "check_lb_identity",
        "check_euler_dmala_structure",
        "check_dwgf_descent",
    ]

    def test_fast_checks_pass(self):
        """The analytic checks pass on the real implementation."""
        report = ValidationService(threads=1).run(only=self.FAST)
        assert [c.name for c in report.checks] == [
            "c2_exactness",
            "boundary_conditions",
            "dwgf_descent",
            "conductance_equivalence",
            "lb_identity",
            "euler_dmala_structure",
        ]
        assert report.passed, [c.model_dump() for c in report.failures]

    def test_c2_grid_spans_six_decades(self):
        """alpha, beta and h run from 1e-3 to 1e3 and the rows stay exact."""
        service = ValidationService(threads=1)
        result = service.check_c2_exactness(points=25)
        assert result.passed, result.detail
        assert result.detail.endswith("(25^3 grid)")
        assert result.observed < 1e-10

    def test_dwgf_descent_covers_lattices(self):
        """Ising and Potts lattices are integrated from a point mass too."""
        result = ValidationService(threads=1).check_dwgf_descent(n_models=1)
        assert result.passed, result.detail
        assert "slowest: " in result.detail

    def test_mutation_is_caught(self):
        """The corrupted interpolation fails the C = 2 exactness check."""
        report = ValidationService(mutations=["interpolated_row"], threads=1).run(
            only=["check_c2_exactness"]
        )
        assert not report.passed
        assert report.failures[0].name == "c2_exactness"
        assert report.mutations == ["interpolated_row"]

    def test_raise_for_failures(self):
        """Failed reports raise with the failing check names; passing ones do not."""
        failing = ValidationService(mutations=["interpolated_row"], threads=1).run(
            only=["check_c2_exactness"]
        )
        with pytest.raises(ValidationFailedError, match="c2_exactness"):
            failing.raise_for_failures()
        ValidationService(threads=1).run(only=["check_lb_identity"]).raise_for_failures()

    def test_unknown_profile_and_mutation(self):
        """Only known names are accepted."""
        with pytest.raises(ValueError):
            ValidationService(profile="quick", threads=1)
        with pytest.raises(ValueError):
            ValidationService(mutations=["rates"], threads=1)

    def test_full_profile_adds_checks(self):
        """The full profile adds the ordering and determinism checks."""
        standard = ValidationService(threads=1).checks()
        full = ValidationService(profile="full", threads=1).checks()
        assert len(full) == len(standard) + 2

    def test_report_document(self, tmp_path):
        """The written report is the JSON document."""
        report = ValidationService(threads=1).run(only=["check_lb_identity"])
        path = report.write(str(tmp_path / "report.json"))
        document = json.loads(path.read_text(encoding="utf-8"))
        assert document["passed"] is True
        assert set(document["checks"][0]) == {
            "name", "criterion", "tolerance", "observed", "passed", "seconds", "detail"
        }
        assert isinstance(report, ValidationReport)

    @pytest.mark.slow
    def test_chain_exactness_subset(self):
        """DLMC and GWG reproduce the enumerated targets."""
        result = ValidationService(threads=1).check_chain_exactness(
            steps=100_000, burn_in=5_000, kinds=(SamplerKind.DLMC, SamplerKind.GWG)
        )
        assert result.passed, result.detail
