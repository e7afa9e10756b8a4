"""
Flat per-chain result records and their CSV schema.
"""

from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union
import csv

from pydantic import Field, field_validator

from ..model.base import BaseElement
from ..model.types import SamplerKind
from ..sampler.base import LOCALLY_BALANCED, RunRecord, SamplerConfig
from .base import EmptyRunError, EssReport

# Fixed column order of the results CSV
CSV_COLUMNS = (
    "model",
    "sampler",
    "weight",
    "tuned_value",
    "chain_id",
    "acceptance",
    "ess",
    "ess_per_eval",
    "ess_per_second",
    "energy_evals",
    "tv_to_exact",
    "seed",
)


class ResultRow(BaseElement):
    """One row per (sampler, chain)."""

    model: str = Field(..., description="Model or preset name")
    sampler: str = Field(..., description="Sampler kind")
    weight: Optional[str] = Field(None, description="Weight function for locally balanced kinds")
    tuned_value: Optional[float] = Field(None, description="Tuned hyperparameter value")
    chain_id: int = Field(..., ge=0)
    acceptance: float = Field(..., ge=0, le=1)
    ess: float = Field(..., ge=0)
    ess_per_eval: Optional[float] = Field(None, ge=0)
    ess_per_second: Optional[float] = Field(None, ge=0)
    energy_evals: int = Field(..., ge=0)
    tv_to_exact: Optional[float] = Field(None, ge=0, le=1)
    seed: int = Field(..., ge=0)
    # Not part of the CSV schema
    tuned_parameter: Optional[str] = Field(None, exclude=True)
    clamp_rate: float = Field(0.0, ge=0, exclude=True)
    hyperparameters: Dict[str, Any] = Field(default_factory=dict, exclude=True)

    @field_validator(
        "weight", "tuned_value", "ess_per_eval", "ess_per_second", "tv_to_exact", mode="before"
    )
    @classmethod
    def empty_to_none(cls, v: Any) -> Any:
        return None if v == "" else v

    def csv_cells(self) -> Dict[str, str]:
        return {name: format_cell(getattr(self, name)) for name in CSV_COLUMNS}


def format_cell(value: Any) -> str:
    """CSV text of a value; floats keep 17 significant digits."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def summarize(
    run: RunRecord,
    report: EssReport,
    model: str = "",
    config: Optional[SamplerConfig] = None,
    tv_to_exact: Optional[float] = None,
    record_timing: bool = True,
) -> ResultRow:
    """
    Flatten a run and its ESS report into a result row.

    Args:
        run: Finished chain record
        report: ESS of the run's trace
        model: Model name for the row
        config: Sampler config of the run (kind, weight, tuned value)
        tv_to_exact: TV distance to the exact target, when enumerable
        record_timing: Emit ess_per_second; off for reproducible outputs

    Returns:
        ResultRow

    Raises:
        EmptyRunError: If the run has no steps
    """
    if run.steps == 0:
        raise EmptyRunError(f"Run of {run.sampler} chain {run.chain_id} has no steps")
    if config is None:
        config = SamplerConfig.model_validate(run.hyperparameters)
    uses_weight = config.kind in LOCALLY_BALANCED and config.kind is not SamplerKind.DMALA
    return ResultRow(
        model=model,
        sampler=config.kind.value,
        weight=config.weight.value if uses_weight else None,
        tuned_value=config.tuned_value,
        chain_id=run.chain_id,
        acceptance=run.acceptance_rate,
        ess=report.ess,
        ess_per_eval=report.ess / run.energy_evals if run.energy_evals else None,
        ess_per_second=report.ess_per_second if record_timing else None,
        energy_evals=run.energy_evals,
        tv_to_exact=tv_to_exact,
        seed=run.seed,
        tuned_parameter=config.tunable,
        clamp_rate=run.clamp_events / run.steps,
        hyperparameters=dict(run.hyperparameters),
    )


def write_rows(rows: Iterable[ResultRow], path: Union[str, Path]) -> Path:
    """Write rows as UTF-8 CSV with LF line endings and a header row."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(CSV_COLUMNS), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.csv_cells())
    return path


def read_rows(path: Union[str, Path]) -> List[ResultRow]:
    """Read rows written by write_rows."""
    with Path(path).open("r", encoding="utf-8", newline="") as f:
        return [ResultRow.model_validate(record) for record in csv.DictReader(f)]
