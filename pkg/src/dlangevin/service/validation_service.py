"""
Validation Service - the oracle and invariant suite behind `dlangevin validate`.

Every check compares an implementation against an exact oracle (matrix
exponential, enumeration, closed forms, Gillespie simulation) and records
its tolerance and observed value. The `full` profile adds the desk-scale
efficiency ordering and the determinism re-run.
"""

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple
import json
import logging
import math
import tempfile
import time

import numpy as np
from pydantic import Field

from ..diagnostics import empirical_distribution, total_variation
from ..dynamics import (
    conductance_flow,
    dmala_rows,
    euler_rows,
    first_jump,
    full_rate_matrix,
    integrate_dwgf,
    interpolated_rows,
    log_g,
    master_equation_flow,
    matrix_exponential,
    rates_from_ratios,
    stationary_rows,
)
from ..generator import RESULTS_FILE
from ..model import (
    ACCEPT_TARGET,
    RWM_ACCEPT_TARGET,
    BaseElement,
    BernoulliModel,
    DenseDistribution,
    ModelFamily,
    ModelParams,
    SamplerKind,
    WeightKind,
    build_model,
    default_samplers,
    generate_params,
    preset_document,
    preset_shape,
)
from ..sampler import (
    ChainState,
    GwgSampler,
    SamplerConfig,
    build_sampler,
    run_chain,
    tune,
)
from .experiment_service import ExperimentService, ValidationFailedError

PROFILES = ("standard", "full")
MUTATIONS = ("interpolated_row",)

RowBuilder = Callable[[np.ndarray, np.ndarray, np.ndarray, float], np.ndarray]


class CheckResult(BaseElement):
    """Outcome of one named check."""

    name: str
    criterion: int = Field(..., ge=1)
    tolerance: float
    observed: float
    passed: bool
    seconds: float = Field(0.0, ge=0)
    detail: str = ""


class ValidationReport(BaseElement):
    profile: str
    mutations: List[str] = Field(default_factory=list)
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def raise_for_failures(self) -> None:
        """Raise ValidationFailedError naming every failed check."""
        if not self.passed:
            names = ", ".join(check.name for check in self.failures)
            raise ValidationFailedError(f"Validation failed: {names}")

    def document(self) -> Dict[str, Any]:
        return {
            "profile": self.profile,
            "mutations": self.mutations,
            "passed": self.passed,
            "checks": [
                check.model_dump(exclude={"description", "metadata"}) for check in self.checks
            ],
        }

    def write(self, path: str) -> Path:
        out = Path(path)
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", encoding="utf-8", newline="\n") as f:
            json.dump(self.document(), f, indent=2)
            f.write("\n")
        return out


def corrupted_interpolated_rows(
    rates: np.ndarray, log_ratios: np.ndarray, current: np.ndarray, h: float
) -> np.ndarray:
    """Negative control: linearised interpolation that ignores saturation."""
    nu = stationary_rows(log_ratios)
    rows = np.minimum(h * np.maximum(rates, 0.0), nu)
    sites = np.arange(rates.shape[0])
    rows[sites, current] = 0.0
    rows[sites, current] = np.maximum(1.0 - rows.sum(axis=1), 0.0)
    return rows


def _random_log_ratios(rng: np.random.Generator, c: int, current: int) -> np.ndarray:
    log_ratios = rng.uniform(-1.0, 1.0, size=c)
    log_ratios[current] = 0.0
    return log_ratios


# Models used by the chain-exactness check: (name, family, shape)
EXACTNESS_MODELS: Tuple[Tuple[str, ModelFamily, Dict[str, Any]], ...] = (
    ("bernoulli-n6-c2", ModelFamily.BERNOULLI, {"n_sites": 6, "n_categories": 2, "sigma2": 1.0}),
    ("ising-2x2-c2", ModelFamily.ISING, {"side": 2, "n_categories": 2, "lambda": 0.5}),
    ("potts-2x2-c3", ModelFamily.ISING, {"side": 2, "n_categories": 3, "lambda": 0.5}),
)


class ExactnessTask(NamedTuple):
    params: ModelParams
    config: SamplerConfig
    seed: int
    steps: int
    burn_in: int


def run_exactness_task(task: ExactnessTask) -> np.ndarray:
    """Empirical state distribution of one chain after burn-in."""
    model = build_model(task.params)
    rng = np.random.default_rng(task.seed)
    chain = ChainState.start(model, rng.integers(0, model.n_categories, model.n_sites), rng)
    sampler = build_sampler(task.config)
    record = run_chain(
        sampler, model, chain, task.steps + task.burn_in, task.burn_in, keep_samples=True
    )
    return empirical_distribution(record.samples, model.n_categories)


class ValidationService:
    """
    Runs the validation checks.

    Args:
        profile: "standard" or "full"
        mutations: Names of deliberately corrupted components
        threads: Worker processes for the chain checks
        seed: Base seed of every random draw in the suite
    """

    def __init__(
        self,
        profile: str = "standard",
        mutations: Iterable[str] = (),
        threads: Optional[int] = None,
        seed: int = 0,
        logger: Optional[logging.Logger] = None,
    ):
        self.logger = logger or logging.getLogger(self.__class__.__name__)
        if profile not in PROFILES:
            raise ValueError(f"Unknown profile '{profile}'. Expected one of: {', '.join(PROFILES)}")
        self.mutations = sorted(set(mutations))
        unknown = set(self.mutations) - set(MUTATIONS)
        if unknown:
            raise ValueError(f"Unknown mutation(s): {', '.join(sorted(unknown))}")
        self.profile = profile
        self.seed = seed
        self.experiments = ExperimentService(threads=threads, logger=self.logger)
        self.interpolated_rows: RowBuilder = (
            corrupted_interpolated_rows if "interpolated_row" in self.mutations else interpolated_rows
        )

    def _rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def _result(
        self,
        name: str,
        criterion: int,
        tolerance: float,
        observed: float,
        passed: bool,
        started: float,
        detail: str = "",
    ) -> CheckResult:
        result = CheckResult(
            name=name,
            criterion=criterion,
            tolerance=tolerance,
            observed=float(observed),
            passed=bool(passed),
            seconds=time.perf_counter() - started,
            detail=detail,
        )
        level = logging.INFO if result.passed else logging.WARNING
        self.logger.log(
            level,
            f"[{'PASS' if result.passed else 'FAIL'}] {name}: observed {result.observed:.3g} "
            f"(tolerance {tolerance:g})",
        )
        return result

    # Checks

    def check_c2_exactness(self, points: int = 13) -> CheckResult:
        """Interpolated rows equal exp(Qh) for C = 2 with alpha, beta and h over [1e-3, 1e3]."""
        started = time.perf_counter()
        grid = np.logspace(-3, 3, points)
        worst = 0.0
        worst_at = (grid[0], grid[0], grid[0])
        for alpha in grid:
            for beta in grid:
                Q = np.array([[-alpha, alpha], [beta, -beta]])
                log_ratios = np.array([[0.0, math.log(alpha / beta)], [math.log(beta / alpha), 0.0]])
                current = np.array([0, 1])
                for h in grid:
                    rows = self.interpolated_rows(Q, log_ratios, current, float(h))
                    error = float(np.abs(rows - matrix_exponential(Q, float(h))).max())
                    if error > worst:
                        worst, worst_at = error, (alpha, beta, h)
        return self._result(
            "c2_exactness", 1, 1e-10, worst, worst < 1e-10, started,
            "worst at alpha={:.3g} beta={:.3g} h={:.3g} ({}^3 grid)".format(*worst_at, points),
        )

    def check_boundaries(self, n_rows: int = 100) -> CheckResult:
        """h = 0 is one-hot, h = 1e9 is nu, and d/dh at 0 is the rate row."""
        started = time.perf_counter()
        rng = self._rng(2)
        # worst error per condition, each divided by its own tolerance
        worst = {"h=0": 0.0, "h=1e9": 0.0, "d/dh": 0.0}
        for c in (2, 4, 8):
            for _ in range(n_rows):
                current = int(rng.integers(c))
                log_ratios = _random_log_ratios(rng, c, current)[None, :]
                cur = np.array([current])
                rates = rates_from_ratios(log_ratios, cur, WeightKind.SQRT)
                one_hot = np.eye(c)[current]

                at_zero = self.interpolated_rows(rates, log_ratios, cur, 0.0)[0]
                if not np.array_equal(at_zero, one_hot):
                    worst["h=0"] = math.inf
                at_inf = self.interpolated_rows(rates, log_ratios, cur, 1e9)[0]
                err = float(np.abs(at_inf - stationary_rows(log_ratios)[0]).max())
                worst["h=1e9"] = max(worst["h=1e9"], err / 1e-9)
                h = 1e-6
                derivative = (self.interpolated_rows(rates, log_ratios, cur, h)[0] - one_hot) / h
                rel = float(np.abs(derivative - rates[0]).max() / np.abs(rates[0]).max())
                worst["d/dh"] = max(worst["d/dh"], rel / 1e-4)
        observed = max(worst.values())
        detail = ", ".join(f"{name}: {value:.3g}" for name, value in worst.items())
        return self._result(
            "boundary_conditions", 2, 1.0, observed, observed < 1.0, started,
            f"error / tolerance per condition ({detail})",
        )

    def check_chain_exactness(
        self,
        steps: int = 200_000,
        burn_in: int = 10_000,
        seeds: Sequence[int] = (0, 1, 2),
        kinds: Optional[Sequence[SamplerKind]] = None,
    ) -> CheckResult:
        """
        Every kernel's empirical distribution is within TV 0.02 of the
        enumerated target.

        Samples of the seeds are pooled per (model, kernel) before the
        distance is taken.
        """
        started = time.perf_counter()
        configs = [SamplerConfig.model_validate(doc) for doc in default_samplers()]
        if kinds is not None:
            configs = [cfg for cfg in configs if cfg.kind in kinds]
        tasks: List[ExactnessTask] = []
        groups: List[Tuple[str, DenseDistribution]] = []
        for m, (name, family, shape) in enumerate(EXACTNESS_MODELS):
            params = generate_params(family, shape, self.seed + m)
            exact = build_model(params).enumerate_distribution()
            for cfg in configs:
                groups.append((f"{name}/{cfg.label}", exact))
                for seed in seeds:
                    tasks.append(
                        ExactnessTask(params, cfg, self.seed * 1000 + seed, steps, burn_in)
                    )
        threads = min(self.experiments.threads, len(tasks))
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                histograms = list(pool.map(run_exactness_task, tasks))
        else:
            histograms = [run_exactness_task(task) for task in tasks]

        per_group = len(seeds)
        tvs = []
        for g, (_, exact) in enumerate(groups):
            pooled = np.mean(histograms[g * per_group:(g + 1) * per_group], axis=0)
            tvs.append(total_variation(pooled, exact.probs))
        worst = int(np.argmax(tvs))
        return self._result(
            "chain_exactness", 3, 0.02, tvs[worst], tvs[worst] < 0.02, started,
            f"worst: {groups[worst][0]}",
        )

    def check_dwgf_descent(self, n_models: int = 5, t_end: float = 50.0) -> CheckResult:
        """
        KL(rho_t || pi) never increases and reaches 1e-8 by t_end.

        Runs random Bernoulli models plus the tiny Ising and Potts lattices,
        each from a Dirichlet draw and from a point mass on the least likely state.
        """
        started = time.perf_counter()
        rng = self._rng(4)
        cases: List[Tuple[str, ModelParams]] = [
            (
                f"bernoulli-n3-{k}",
                generate_params(
                    ModelFamily.BERNOULLI,
                    {"n_sites": 3, "n_categories": 2, "sigma2": 1.0},
                    self.seed + 40 + k,
                ),
            )
            for k in range(n_models)
        ]
        cases += [
            (name, generate_params(family, shape, self.seed + 50 + k))
            for k, (name, family, shape) in enumerate(EXACTNESS_MODELS[1:])
        ]
        worst_rise = 0.0
        worst_final = 0.0
        worst_case = ""
        for k, (name, params) in enumerate(cases):
            weight = (WeightKind.SQRT, WeightKind.BARKER)[k % 2]
            generator = full_rate_matrix(build_model(params), weight)
            size = generator.Q.shape[0]
            starts = {
                "dirichlet": rng.dirichlet(np.ones(size)),
                "point mass": np.eye(size)[int(np.argmin(generator.pi.probs))],
            }
            for start, probs in starts.items():
                kl = integrate_dwgf(generator, DenseDistribution(probs=probs), t_end).kl
                worst_rise = max(worst_rise, float(np.max(np.diff(kl), initial=0.0)))
                if kl[-1] >= worst_final:
                    worst_final, worst_case = float(kl[-1]), f"{name} from {start}"
        passed = worst_rise <= 1e-12 and worst_final < 1e-8
        return self._result(
            "dwgf_descent", 4, 1e-8, worst_final, passed, started,
            f"largest KL increase {worst_rise:.3g} (slack 1e-12); slowest: {worst_case}",
        )

    def check_conductance(self, n_pairs: int = 100, n_states: int = 8) -> CheckResult:
        """Conductance form of the flow equals the master equation."""
        started = time.perf_counter()
        rng = self._rng(5)
        worst = 0.0
        for k in range(n_pairs):
            rho = rng.dirichlet(np.ones(n_states))
            pi = rng.dirichlet(np.ones(n_states))
            weight = (WeightKind.SQRT, WeightKind.BARKER)[k % 2]
            a = conductance_flow(rho, pi, -np.log(pi), weight)
            b = master_equation_flow(rho, pi, weight)
            worst = max(worst, float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300)))
        return self._result("conductance_equivalence", 5, 1e-10, worst, worst < 1e-10, started)

    def check_first_jump(self, n_paths: int = 100_000, n_models: int = 3) -> CheckResult:
        """Gillespie first jumps follow the GWG proposal law."""
        started = time.perf_counter()
        rng = self._rng(6)
        worst = 0.0
        for k in range(n_models):
            params = generate_params(
                ModelFamily.BERNOULLI,
                {"n_sites": 3, "n_categories": 3, "sigma2": 1.0},
                self.seed + 60 + k,
            )
            model = build_model(params)
            x = rng.integers(0, model.n_categories, model.n_sites)
            gwg = GwgSampler(SamplerConfig(kind=SamplerKind.GWG))
            chain = ChainState.start(model, x, rng)
            law = np.exp(gwg.jump_log_probs(model, chain.x, chain))
            counts = np.zeros_like(law)
            for _ in range(n_paths):
                event = first_jump(model, x, WeightKind.SQRT, rng)
                counts[event.site, event.value] += 1
            worst = max(worst, 0.5 * float(np.abs(counts / n_paths - law).sum()))
        return self._result("first_jump_law", 6, 0.02, worst, worst < 0.02, started)

    def check_lb_identity(self) -> CheckResult:
        """log g(t) = log t + log g(1/t) for both weights."""
        started = time.perf_counter()
        log_t = np.linspace(-18.0, 18.0, 3601)
        worst = 0.0
        for weight in WeightKind:
            lhs = np.asarray(log_g(weight, log_t))
            rhs = log_t + np.asarray(log_g(weight, -log_t))
            worst = max(worst, float(np.abs(lhs - rhs).max()))
        return self._result("lb_identity", 7, 1e-12, worst, worst < 1e-12, started)

    def check_tuner(self, adaptation_steps: int = 2000) -> CheckResult:
        """DLMC tunes to 0.574 and RWM to 0.234 on the desk high-temperature Ising."""
        started = time.perf_counter()
        params = generate_params(ModelFamily.ISING, preset_shape("ising-high"), self.seed)
        model = build_model(params)
        worst = 0.0
        details = []
        targets = ((SamplerKind.DLMC, ACCEPT_TARGET), (SamplerKind.RWM, RWM_ACCEPT_TARGET))
        for kind, target in targets:
            config = SamplerConfig(kind=kind)
            report = tune(config, model, target, adaptation_steps, self._rng(8))
            acceptance = report.trailing_acceptance or 0.0
            worst = max(worst, abs(acceptance - target))
            details.append(
                f"{kind.value}: {report.config.tunable}={report.value:g} acc={acceptance:.3f}"
            )
        return self._result(
            "tuner_targets", 8, 0.05, worst, worst <= 0.05, started, "; ".join(details)
        )

    def check_factorized_degeneration(self, steps: int = 2000) -> CheckResult:
        """DLMC with h = 1e9 on Bernoulli presets samples the exact marginals."""
        started = time.perf_counter()
        worst_rows = 0.0
        worst_acc = 1.0
        config = SamplerConfig(kind=SamplerKind.DLMC, step=1e9)
        for k, preset in enumerate(("bernoulli-high", "bernoulli-low", "bernoulli-c4", "bernoulli-c8")):
            params = generate_params(ModelFamily.BERNOULLI, preset_shape(preset), self.seed + k)
            model = BernoulliModel(params)
            rng = self._rng(100 + k)
            x = rng.integers(0, model.n_categories, model.n_sites)
            sampler = build_sampler(config)
            log_ratios = model.all_log_ratios(x)
            rates = rates_from_ratios(log_ratios, x, config.weight)
            rows = interpolated_rows(rates, log_ratios, x, 1e9)
            worst_rows = max(worst_rows, float(np.abs(rows - model.exact_marginals()).max()))
            chain = ChainState.start(model, x, rng)
            record = run_chain(sampler, model, chain, steps)
            worst_acc = min(worst_acc, record.acceptance_rate)
        passed = worst_rows < 1e-8 and worst_acc >= 0.999
        return self._result(
            "factorized_degeneration", 10, 1e-8, worst_rows, passed, started,
            f"lowest acceptance {worst_acc:.4f} (needs >= 0.999)",
        )

    def check_euler_dmala_structure(self, n_vectors: int = 1000) -> CheckResult:
        """Matched DLMCf and DMALA rows share off-diagonal shape; DLMCf stays less."""
        started = time.perf_counter()
        rng = self._rng(11)
        worst = 0.0
        ordered = True
        for _ in range(n_vectors):
            c = int(rng.choice([2, 4, 8]))
            current = int(rng.integers(c))
            log_ratios = _random_log_ratios(rng, c, current)[None, :]
            cur = np.array([current])
            alpha = float(rng.uniform(0.05, 1.0))
            h = math.exp(-1.0 / (2.0 * alpha))
            rates = rates_from_ratios(log_ratios, cur, WeightKind.SQRT)
            euler, _ = euler_rows(rates, cur, h)
            dmala = dmala_rows(log_ratios, cur, alpha)
            off = np.arange(c) != current
            ratio = euler[0, off] / dmala[0, off]
            worst = max(worst, float((ratio.max() - ratio.min()) / ratio.mean()))
            ordered &= bool(euler[0, current] <= dmala[0, current] + 1e-15)
        return self._result(
            "euler_dmala_structure", 11, 1e-12, worst, worst < 1e-12 and ordered, started,
            "DLMCf self-transition <= DMALA" if ordered else "DLMCf stayed more than DMALA",
        )

    def _ordering_document(self) -> Dict[str, Any]:
        doc = preset_document("ising-high", seed=self.seed)
        doc["samplers"] = [
            {"kind": "rwm", "flips": 1},
            {"kind": "dmala", "step": 1.0},
            {"kind": "dlmcf", "weight": "sqrt", "step": 0.1},
            {"kind": "dlmc", "weight": "sqrt", "step": 1.0},
        ]
        return doc

    def check_efficiency_ordering(self) -> CheckResult:
        """Median ess_per_eval: DLMC >= DMALA >= RWM and DLMCf >= DMALA."""
        started = time.perf_counter()
        config = self.experiments.load_config(self._ordering_document())
        result = self.experiments.run_experiment(config, write=False)
        medians = {}
        for index, sampler in enumerate(result.samplers):
            values = [row.ess_per_eval or 0.0 for row in result.rows_for(index)]
            medians[sampler.kind] = float(np.median(values))
        margins = [
            medians[SamplerKind.DLMC] - medians[SamplerKind.DMALA],
            medians[SamplerKind.DMALA] - medians[SamplerKind.RWM],
            medians[SamplerKind.DLMCF] - medians[SamplerKind.DMALA],
        ]
        worst = min(margins)
        detail = ", ".join(f"{k.value}={v:.3g}" for k, v in medians.items())
        return self._result("efficiency_ordering", 9, 0.0, worst, worst >= 0.0, started, detail)

    def check_determinism(self) -> CheckResult:
        """The desk-scale experiment re-run with the same seed is byte-identical."""
        started = time.perf_counter()
        config = self.experiments.load_config(self._ordering_document())
        contents = []
        with tempfile.TemporaryDirectory() as tmp:
            for run in ("a", "b"):
                out = Path(tmp) / run
                self.experiments.run_experiment(config, output_dir=str(out))
                contents.append((out / RESULTS_FILE).read_bytes())
        identical = contents[0] == contents[1]
        return self._result("determinism", 12, 0.0, 0.0 if identical else 1.0, identical, started)

    # Suite

    def checks(self) -> List[Callable[[], CheckResult]]:
        suite = [
            self.check_c2_exactness,
            self.check_boundaries,
            self.check_chain_exactness,
            self.check_dwgf_descent,
            self.check_conductance,
            self.check_first_jump,
            self.check_lb_identity,
            self.check_tuner,
            self.check_factorized_degeneration,
            self.check_euler_dmala_structure,
        ]
        if self.profile == "full":
            suite += [self.check_efficiency_ordering, self.check_determinism]
        return suite

    def run(self, only: Optional[Sequence[str]] = None) -> ValidationReport:
        """
        Run the suite.

        Args:
            only: Method names (e.g. "check_lb_identity") to restrict the run

        Returns:
            ValidationReport; failures do not raise
        """
        report = ValidationReport(profile=self.profile, mutations=self.mutations)
        for check in self.checks():
            if only and check.__name__ not in only:
                continue
            self.logger.info(f"Running {check.__name__}")
            report.checks.append(check())
        self.logger.info(
            f"Validation {'passed' if report.passed else 'failed'}: "
            f"{len(report.checks) - len(report.failures)}/{len(report.checks)} checks"
        )
        return report
