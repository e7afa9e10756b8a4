"""
Results Generator - writes experiment results as CSV and a JSON summary.

The CSV holds one row per (sampler, chain) in canonical order; the JSON
summary carries per-sampler medians and the tuning outcome.
"""

from typing import Any, Dict, List, Optional, Sequence
from pathlib import Path
import json
import logging

import numpy as np

from ..diagnostics.summary import ResultRow, write_rows
from ..sampler.base import SamplerConfig
from ..sampler.tuner import TuningReport

RESULTS_FILE = "results.csv"
SUMMARY_FILE = "summary.json"


class GeneratorException(Exception):
    """Base exception for generator errors."""
    pass


def _median(values: Sequence[Optional[float]]) -> Optional[float]:
    present = [v for v in values if v is not None]
    return float(np.median(present)) if present else None


class ResultsGenerator:
    """
    Generator for experiment result files.

    Writes results.csv (fixed column order, 17 significant digits, LF line
    endings) and summary.json into an output directory.
    """

    def __init__(self, logger: Optional[logging.Logger] = None):
        """
        Initialize results generator.

        Args:
            logger: Optional logger instance
        """
        self.logger = logger or logging.getLogger(self.__class__.__name__)

    def summary_document(
        self,
        rows: Sequence[ResultRow],
        samplers: Sequence[SamplerConfig],
        tuning: Sequence[Optional[TuningReport]],
        header: Dict[str, Any],
        row_sampler_index: Sequence[int],
    ) -> Dict[str, Any]:
        """
        Per-sampler medians over chains.

        Args:
            rows: Result rows in canonical order
            samplers: Sampler configs as run (tuned values applied)
            tuning: Tuning report per sampler, None when tuning was off
            header: Experiment-level fields copied to the top of the document
            row_sampler_index: Sampler index of each row

        Returns:
            JSON-ready summary document
        """
        entries: List[Dict[str, Any]] = []
        for index, config in enumerate(samplers):
            mine = [row for row, s in zip(rows, row_sampler_index) if s == index]
            report = tuning[index] if index < len(tuning) else None
            entries.append({
                "index": index,
                "label": config.label,
                "kind": config.kind.value,
                "tuned_parameter": config.tunable,
                "tuned_value": config.tuned_value,
                "tuning_status": report.status.value if report else None,
                "trailing_acceptance": report.trailing_acceptance if report else None,
                "chains": len(mine),
                "median_acceptance": _median([r.acceptance for r in mine]),
                "median_ess": _median([r.ess for r in mine]),
                "median_ess_per_eval": _median([r.ess_per_eval for r in mine]),
                "median_ess_per_second": _median([r.ess_per_second for r in mine]),
                "median_tv_to_exact": _median([r.tv_to_exact for r in mine]),
                "median_clamp_rate": _median([r.clamp_rate for r in mine]),
            })
        return {**header, "samplers": entries}

    def generate(
        self,
        output_dir: str,
        rows: Sequence[ResultRow],
        summary: Dict[str, Any],
    ) -> Dict[str, Path]:
        """
        Write results.csv and summary.json.

        Args:
            output_dir: Output directory (created when missing)
            rows: Result rows in canonical order
            summary: Document from summary_document()

        Returns:
            Paths of the written files, keyed "csv" and "summary"

        Raises:
            GeneratorException: If writing fails
        """
        out = Path(output_dir)
        try:
            self.logger.info(f"Writing {len(rows)} result rows to {out}")
            csv_path = write_rows(rows, out / RESULTS_FILE)
            summary_path = out / SUMMARY_FILE
            with summary_path.open("w", encoding="utf-8", newline="\n") as f:
                json.dump(summary, f, indent=2)
                f.write("\n")
            self.logger.info(f"Results written: {csv_path}, {summary_path}")
            return {"csv": csv_path, "summary": summary_path}
        except OSError as e:
            raise GeneratorException(f"Failed to write results to {out}: {e}") from e
