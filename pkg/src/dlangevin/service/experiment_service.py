"""
Experiment Service - runs configured sampler comparisons.

This service:
1. Loads and validates the experiment config
2. Builds the target model from a preset or a parameter file
3. Tunes each sampler's hyperparameter (when enabled)
4. Runs every (sampler, chain) pair on a process pool
5. Writes the results CSV and the JSON summary

Chain c of sampler s draws from the stream splitmix64(splitmix64(
splitmix64(seed) ^ s) ^ c), so results do not depend on scheduling.
"""

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple, Union
import logging
import os

from dotenv import load_dotenv
from pydantic import Field
from pydantic import ValidationError as PydanticValidationError

from ..diagnostics import compare_to_exact, ess, summarize
from ..diagnostics.summary import ResultRow
from ..generator import GeneratorException, ResultsGenerator
from ..loader import (
    ConfigLoader,
    ExperimentConfig,
    LoaderException,
    ModelSpec,
    ParamsLoader,
)
from ..model import (
    DEFAULT_ENUMERATION_CAP,
    BaseElement,
    DenseDistribution,
    EnergyModel,
    ModelException,
    ModelParams,
    build_model,
    generate_params,
    preset_shape,
)
from ..sampler import (
    ChainState,
    SamplerConfig,
    SamplerException,
    TuningReport,
    build_sampler,
    chain_rng,
    run_chain,
    skipped,
    stream_id,
    tune,
)

THREADS_ENV = "DLANGEVIN_THREADS"
# Chain index of the tuning stream, outside any real chain index
TUNING_STREAM = 2**32


class ExperimentServiceException(Exception):
    """Base exception for experiment service errors."""
    pass


class ConfigurationError(ExperimentServiceException):
    """Raised when an experiment config or its inputs are invalid."""
    pass


class ExecutionError(ExperimentServiceException):
    """Raised when running chains or writing results fails."""
    pass


class ValidationFailedError(ExperimentServiceException):
    """Raised when validation checks fail."""
    pass


def resolve_threads(threads: Optional[int] = None) -> int:
    """
    Worker count: the explicit value, else DLANGEVIN_THREADS (a .env file
    is honoured), else the available parallelism.

    Raises:
        ConfigurationError: If the value is not a positive integer
    """
    if threads is None:
        load_dotenv()
        raw = os.getenv(THREADS_ENV)
        if raw:
            try:
                threads = int(raw)
            except ValueError:
                raise ConfigurationError(f"{THREADS_ENV} must be an integer, got '{raw}'")
    if threads is None:
        threads = os.cpu_count() or 1
    if threads < 1:
        raise ConfigurationError(f"Thread count must be >= 1, got {threads}")
    return threads


class ChainTask(NamedTuple):
    """Everything one worker needs to run one chain."""

    params: ModelParams
    config: SamplerConfig
    sampler_index: int
    chain_index: int
    seed: int
    steps: int
    burn_in: int
    exact: Optional[DenseDistribution]
    model_name: str
    record_timing: bool


def run_chain_task(task: ChainTask) -> Tuple[int, ResultRow]:
    """Run one chain and summarise it (module level so it pickles)."""
    model = build_model(task.params)
    rng = chain_rng(task.seed, task.sampler_index, task.chain_index)
    x0 = rng.integers(0, model.n_categories, size=model.n_sites)
    chain = ChainState.start(
        model,
        x0,
        rng,
        seed=stream_id(task.seed, task.sampler_index, task.chain_index),
        chain_id=task.chain_index,
    )
    sampler = build_sampler(task.config)
    record = run_chain(
        sampler, model, chain, task.steps, task.burn_in, keep_samples=task.exact is not None
    )
    report = ess(
        record.trace,
        energy_evals=record.energy_evals,
        wall_time=record.wall_time if task.record_timing else None,
    )
    tv = None
    if task.exact is not None and record.samples is not None:
        tv = compare_to_exact(record.samples, model, task.exact).tv_distance
    row = summarize(
        record,
        report,
        model=task.model_name,
        config=task.config,
        tv_to_exact=tv,
        record_timing=task.record_timing,
    )
    return task.sampler_index, row


class ExperimentResult(BaseElement):
    """Rows, tuning reports and written files of one experiment."""

    rows: List[ResultRow] = Field(default_factory=list)
    row_sampler_index: List[int] = Field(default_factory=list)
    samplers: List[SamplerConfig] = Field(default_factory=list)
    tuning: List[Optional[TuningReport]] = Field(default_factory=list)
    files: Dict[str, str] = Field(default_factory=dict)

    def rows_for(self, index: int) -> List[ResultRow]:
        return [r for r, s in zip(self.rows, self.row_sampler_index) if s == index]


class ExperimentService:
    """
    Service for running sampler experiments.

    Owns config loading, model construction, tuning, the worker pool and
    result collection.
    """

    def __init__(
        self,
        threads: Optional[int] = None,
        logger: Optional[logging.Logger] = None,
    ):
        """
        Initialize experiment service.

        Args:
            threads: Worker processes; see resolve_threads()
            logger: Optional logger instance
        """
        self.logger = logger or logging.getLogger(self.__class__.__name__)
        self.threads = resolve_threads(threads)
        self._config_loader = ConfigLoader(logger=self.logger)
        self._params_loader = ParamsLoader(logger=self.logger)
        self._generator = ResultsGenerator(logger=self.logger)

    # Configuration

    def load_config(self, source: Union[str, Path, Dict[str, Any]]) -> ExperimentConfig:
        """
        Load an experiment config from a file or an in-memory document.

        Raises:
            ConfigurationError: With every violation found
        """
        try:
            if isinstance(source, dict):
                return self._config_loader.convert(source)
            return self._config_loader.load_and_convert(str(source))
        except LoaderException as e:
            raise ConfigurationError(str(e)) from e

    def with_overrides(
        self,
        config: ExperimentConfig,
        seed: Optional[int] = None,
        output_dir: Optional[str] = None,
    ) -> ExperimentConfig:
        """
        Copy of a config with command-line overrides applied and re-validated.

        Raises:
            ConfigurationError: If an override is out of range
        """
        data = config.model_dump()
        if seed is not None:
            data["seed"] = seed
        if output_dir is not None:
            data["output"]["path"] = output_dir
        try:
            return ExperimentConfig.model_validate(data)
        except PydanticValidationError as e:
            raise ConfigurationError(f"Invalid override: {e}") from e

    def load_params(self, spec: ModelSpec, seed: int) -> ModelParams:
        """
        Parameters of the configured model.

        Raises:
            ConfigurationError: If the file is invalid or the generated
                parameters are rejected
        """
        try:
            if spec.params_file is not None:
                params = self._params_loader.load_and_convert(spec.params_file)
                if params.family != spec.family:
                    raise ConfigurationError(
                        f"{spec.params_file} holds a {params.family.value} model, "
                        f"config says {spec.family.value}"
                    )
                return params
            shape = preset_shape(spec.preset, spec.scale)
            shape.update(spec.overrides)
            params_seed = seed if spec.params_seed is None else spec.params_seed
            return generate_params(spec.family, shape, params_seed)
        except (LoaderException, KeyError, ValueError, ModelException) as e:
            raise ConfigurationError(f"Cannot build model '{spec.name}': {e}") from e

    def build_model(self, config: ExperimentConfig) -> EnergyModel:
        model = build_model(self.load_params(config.model, config.seed))
        self.logger.info(f"Model {config.model.name}: {model}")
        return model

    # Tuning

    def tune_samplers(
        self, config: ExperimentConfig, model: EnergyModel
    ) -> List[TuningReport]:
        """
        Tune every sampler that has a hyperparameter; others are skipped.

        Each sampler tunes on its own stream, independent of the chains.
        """
        reports = []
        for index, sampler_config in enumerate(config.samplers):
            target = config.tuning.target_for(sampler_config)
            if sampler_config.tunable is None:
                reports.append(skipped(sampler_config, target))
                continue
            rng = chain_rng(config.seed, index, TUNING_STREAM)
            try:
                reports.append(
                    tune(sampler_config, model, target, config.tuning.adaptation_steps, rng)
                )
            except (SamplerException, ModelException) as e:
                raise ConfigurationError(f"Cannot tune {sampler_config.label}: {e}") from e
        return reports

    # Running

    def exact_target(self, config: ExperimentConfig, model: EnergyModel) -> Optional[DenseDistribution]:
        """Enumerated target when requested and small enough."""
        if not config.output.compare_exact or model.space_size > DEFAULT_ENUMERATION_CAP:
            return None
        return model.enumerate_distribution()

    def run_experiment(
        self,
        config: ExperimentConfig,
        output_dir: Optional[str] = None,
        write: bool = True,
    ) -> ExperimentResult:
        """
        Tune (if enabled), run all (sampler, chain) pairs and write results.

        Args:
            config: Validated experiment config
            output_dir: Overrides config.output.path
            write: Write results.csv and summary.json

        Returns:
            ExperimentResult with rows in canonical (sampler, chain) order

        Raises:
            ConfigurationError: If the model or a sampler cannot be set up
            ExecutionError: If a chain or the output fails
        """
        model = self.build_model(config)
        for sampler_config in config.samplers:
            try:
                build_sampler(sampler_config).check_model(model)
            except (SamplerException, ModelException) as e:
                raise ConfigurationError(f"{sampler_config.label}: {e}") from e

        tuning: List[Optional[TuningReport]] = [None] * len(config.samplers)
        samplers = list(config.samplers)
        if config.tuning.enabled:
            reports = self.tune_samplers(config, model)
            tuning = list(reports)
            samplers = [report.config for report in reports]

        self.logger.debug(
            "Energy evaluations: one energy call, one exact-ratio sweep or one "
            "gradient each count as one evaluation"
        )
        tasks = self._tasks(config, model, samplers)
        self.logger.info(f"Running {len(tasks)} chain(s) on {min(self.threads, len(tasks))} worker(s)")
        outcomes = self._execute(tasks)
        outcomes.sort(key=lambda item: (item[0], item[1].chain_id))

        result = ExperimentResult(
            rows=[row for _, row in outcomes],
            row_sampler_index=[index for index, _ in outcomes],
            samplers=samplers,
            tuning=tuning,
        )
        if write:
            result.files = self._write(config, result, output_dir)
        return result

    def _tasks(
        self, config: ExperimentConfig, model: EnergyModel, samplers: Sequence[SamplerConfig]
    ) -> List[ChainTask]:
        exact = self.exact_target(config, model)
        return [
            ChainTask(
                params=model.params,
                config=sampler_config,
                sampler_index=s,
                chain_index=c,
                seed=config.seed,
                steps=config.steps,
                burn_in=config.burn_in,
                exact=exact,
                model_name=config.model.name,
                record_timing=config.output.record_timing,
            )
            for s, sampler_config in enumerate(samplers)
            for c in range(config.chains)
        ]

    def _execute(self, tasks: Sequence[ChainTask]) -> List[Tuple[int, ResultRow]]:
        try:
            if self.threads == 1 or len(tasks) == 1:
                return [run_chain_task(task) for task in tasks]
            with ProcessPoolExecutor(max_workers=min(self.threads, len(tasks))) as pool:
                return list(pool.map(run_chain_task, tasks))
        except ExperimentServiceException:
            raise
        except Exception as e:
            self.logger.error(f"Chain execution failed: {e}", exc_info=True)
            raise ExecutionError(f"Chain execution failed: {e}") from e

    def _write(
        self, config: ExperimentConfig, result: ExperimentResult, output_dir: Optional[str]
    ) -> Dict[str, str]:
        header = {
            "model": config.model.name,
            "family": config.model.family.value,
            "seed": config.seed,
            "chains": config.chains,
            "steps": config.steps,
            "burn_in": config.burn_in,
        }
        summary = self._generator.summary_document(
            result.rows, result.samplers, result.tuning, header, result.row_sampler_index
        )
        try:
            files = self._generator.generate(output_dir or config.output.path, result.rows, summary)
        except GeneratorException as e:
            raise ExecutionError(str(e)) from e
        return {key: str(path) for key, path in files.items()}
