"""
Tests for experiment config and parameter file loading.
"""

import json

import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError

from dlangevin.loader import (
    ConfigLoader,
    ExperimentConfig,
    LoaderException,
    ModelSpec,
    ParamsLoader,
    ParserError,
    TuningSpec,
    UnsupportedFormatError,
    ValidationError,
    load_config,
    load_params,
    params_document,
    save_params,
)
from dlangevin.loader import FileNotFoundError as LoaderFileNotFoundError
from dlangevin.model import ModelFamily, build_model, generate_params
from dlangevin.sampler import SamplerConfig


def write_json(path, document):
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


class TestConfigLoader:
    """Experiment configs."""

    def test_valid(self, smoke_config):
        """A well-formed document converts to an ExperimentConfig."""
        config = ConfigLoader().convert(smoke_config)
        assert isinstance(config, ExperimentConfig)
        assert [s.kind.value for s in config.samplers] == ["dlmc", "rwm", "gwg"]
        assert config.model.name == "bernoulli-high"
        assert config.output.compare_exact

    def test_errors_reported_together(self, smoke_config):
        """Schema and semantic violations come back in one error."""
        smoke_config["chains"] = 0
        smoke_config["samplers"][0]["kind"] = "foo"
        with pytest.raises(ValidationError) as info:
            ConfigLoader().convert(smoke_config)
        errors = info.value.errors
        assert any(e.startswith("chains") for e in errors)
        assert any(e.startswith("samplers") for e in errors)

    def test_burn_in_not_below_steps(self, smoke_config):
        """burn_in >= steps is rejected."""
        smoke_config["burn_in"] = 100
        with pytest.raises(ValidationError) as info:
            ConfigLoader().convert(smoke_config)
        assert any("burn_in" in e for e in info.value.errors)

    def test_unknown_key(self, smoke_config):
        """Unknown top-level keys are schema violations."""
        smoke_config["stpes"] = 10
        with pytest.raises(ValidationError):
            ConfigLoader().convert(smoke_config)

    def test_load_file(self, tmp_path, smoke_config):
        """load_config reads a JSON file."""
        path = write_json(tmp_path / "config.json", smoke_config)
        assert load_config(str(path)).chains == 2

    def test_parser_error_location(self, tmp_path):
        """Malformed JSON reports its line."""
        path = tmp_path / "broken.json"
        path.write_text('{\n  "chains": 2,\n  "steps": \n}\n', encoding="utf-8")
        with pytest.raises(ParserError) as info:
            ConfigLoader().load(path)
        assert info.value.line == 4

    def test_missing_file(self, tmp_path):
        """A missing path raises the loader's FileNotFoundError."""
        with pytest.raises(LoaderFileNotFoundError):
            ConfigLoader().load_and_convert(tmp_path / "nope.json")

    def test_extension(self, tmp_path, smoke_config):
        """Only .json files are read."""
        path = write_json(tmp_path / "config.yaml", smoke_config)
        with pytest.raises(UnsupportedFormatError):
            ConfigLoader().load(path)

    def test_top_level_must_be_object(self, tmp_path):
        """A JSON array is not a config."""
        path = write_json(tmp_path / "list.json", [1, 2])
        with pytest.raises(ParserError):
            ConfigLoader().load(path)

    def test_loader_errors_share_base(self):
        """Every loader error is a LoaderException."""
        for cls in (ParserError, ValidationError, UnsupportedFormatError, LoaderFileNotFoundError):
            assert issubclass(cls, LoaderException)


class TestExperimentRecords:
    """Model, tuning and output sections."""

    def test_model_needs_one_source(self):
        """Exactly one of preset and params_file."""
        with pytest.raises(PydanticValidationError):
            ModelSpec(family="ising")
        with pytest.raises(PydanticValidationError):
            ModelSpec(family="ising", preset="ising-high", params_file="p.json")
        assert ModelSpec(family="ising", params_file="p.json").name == "ising"

    def test_preset_family_must_agree(self):
        """A preset belongs to one family."""
        with pytest.raises(PydanticValidationError):
            ModelSpec(family="rbm", preset="ising-high")
        with pytest.raises(PydanticValidationError):
            ModelSpec(family="ising", preset="ising-medium")

    def test_target_for(self):
        """Per-sampler target, then the RWM default, then the experiment target."""
        tuning = TuningSpec(target_rate=0.6)
        assert tuning.target_for(SamplerConfig(kind="dlmc")) == 0.6
        assert tuning.target_for(SamplerConfig(kind="rwm")) == 0.234
        assert tuning.target_for(SamplerConfig(kind="pas", target_rate=0.3)) == 0.3


class TestParamsFiles:
    """Parameter save and load."""

    @pytest.mark.parametrize(
        "family,shape",
        [
            (ModelFamily.BERNOULLI, {"n_sites": 5, "n_categories": 3}),
            (ModelFamily.ISING, {"side": 3, "lambda": 0.7}),
            (ModelFamily.FHMM, {"length": 4, "factors": 2}),
            (ModelFamily.RBM, {"n_visible": 6, "n_hidden": 2, "n_categories": 4}),
        ],
    )
    def test_saved_file_reproduces_energies(self, tmp_path, family, shape):
        """A reloaded model assigns identical energies."""
        params = generate_params(family, shape, seed=21)
        path = save_params(params, tmp_path / "params.json")
        loaded = load_params(path)
        original, reloaded = build_model(params), build_model(loaded)
        X = np.random.default_rng(0).integers(0, original.n_categories, (10, original.n_sites))
        np.testing.assert_array_equal(original.energies(X), reloaded.energies(X))

    def test_header_mismatch(self):
        """n and c must agree with the arrays."""
        params = generate_params(ModelFamily.BERNOULLI, {"n_sites": 4, "n_categories": 2}, 0)
        document = params_document(params)
        document["n"] = 5
        with pytest.raises(ValidationError) as info:
            ParamsLoader().convert(document)
        assert any(e.startswith("n:") for e in info.value.errors)

    def test_unknown_family(self):
        """The family must be one of the zoo."""
        with pytest.raises(ValidationError):
            ParamsLoader().convert({"family": "hopfield", "n": 1, "c": 2, "params": {}})


class TestParamsFileLayout:
    """On-disk layout of parameter files."""

    def test_arrays_at_top_level(self, tmp_path):
        """Arrays sit next to the header; FHMM observations are a top-level array."""
        params = generate_params(ModelFamily.FHMM, {"length": 3, "factors": 2}, seed=4)
        path = save_params(params, tmp_path / "fhmm.json")
        document = json.loads(path.read_text(encoding="utf-8"))
        assert "params" not in document
        assert (document["family"], document["n"], document["c"]) == ("fhmm", 6, 2)
        assert document["observations"]["shape"] == [3]
        assert document["W"]["shape"] == [2, 2]

    def test_seventeen_significant_digits(self, tmp_path):
        """Floats are written with 17 significant digits and read back exactly."""
        params = generate_params(ModelFamily.ISING, {"side": 2, "lambda": 0.1}, seed=1)
        path = save_params(params, tmp_path / "ising.json")
        text = path.read_text(encoding="utf-8")
        assert '"lambda": 0.10000000000000001' in text
        assert format(float(params.theta[0, 0]), ".17g") in text
        loaded = load_params(path)
        np.testing.assert_array_equal(loaded.theta, params.theta)
        assert loaded.lam == params.lam

    def test_flat_document_from_hand(self, tmp_path):
        """A hand-written flat file with a plain observation list loads."""
        params = generate_params(ModelFamily.FHMM, {"length": 2, "factors": 1}, seed=0)
        document = params_document(params)
        document["observations"] = [0.5, -1.25]
        loaded = load_params(write_json(tmp_path / "fhmm.json", document))
        np.testing.assert_array_equal(loaded.observations, [0.5, -1.25])

    def test_nested_layout_still_read(self):
        """Arrays nested under 'params' are accepted."""
        params = generate_params(ModelFamily.RBM, {"n_visible": 3, "n_hidden": 2}, seed=2)
        flat = params_document(params)
        nested = {key: flat.pop(key) for key in ("family", "n", "c")}
        nested["params"] = flat
        loaded = ParamsLoader().convert(nested)
        np.testing.assert_array_equal(loaded.weights, params.weights)

    def test_mixed_layout_rejected(self):
        """Top-level arrays next to a 'params' object are an error."""
        params = generate_params(ModelFamily.BERNOULLI, {"n_sites": 2, "n_categories": 2}, 0)
        document = params_document(params)
        document["params"] = {}
        with pytest.raises(ValidationError) as info:
            ParamsLoader().convert(document)
        assert info.value.errors == ["theta: outside 'params'"]
