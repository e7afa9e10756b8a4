"""
Command-line front end of the discrete Langevin toolkit.

Subcommands:
    run         Run an experiment config and write results.csv / summary.json
    validate    Run the oracle and invariant suite, print a JSON report
    tune        Tune the samplers of a config and print the tuned values
    preset      Print the experiment config of a named preset
    gen-params  Write a parameter file for a preset

Exit codes: 0 success, 1 validation or execution failure, 2 configuration error.
"""

from typing import Any, Dict, List, Optional, Sequence
import argparse
import json
import logging
import sys

from .loader import LoaderException, save_params
from .model import Scale, generate_params, list_presets, preset_document, preset_family, preset_shape
from .service import (
    MUTATIONS,
    PROFILES,
    ConfigurationError,
    ExecutionError,
    ExperimentService,
    ValidationService,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

logger = logging.getLogger("dlangevin")


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2^64), got {value}")
    return seed


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def _dump(document: Any) -> None:
    json.dump(document, sys.stdout, indent=2)
    sys.stdout.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlangevin",
        description="Discrete Langevin samplers, exact dynamics oracles and benchmark harness",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  dlangevin preset ising-high > ising.json
  dlangevin run --config ising.json --out results/ising --threads 4
  dlangevin validate --out validation.json
  dlangevin gen-params rbm-c4 --seed 7 --out rbm.json
        """,
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="Warnings and errors only")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run an experiment config")
    run.add_argument("--config", required=True, help="Experiment config (JSON)")
    run.add_argument("--seed", type=_seed, help="Override the config seed")
    run.add_argument("--out", help="Override the output directory")
    run.add_argument("--threads", type=_positive, help="Worker processes")

    validate = sub.add_parser("validate", help="Run the validation suite")
    validate.add_argument("--profile", choices=PROFILES, default="standard")
    validate.add_argument(
        "--mutation", action="append", choices=MUTATIONS, default=[],
        help="Swap in a corrupted component (negative control)",
    )
    validate.add_argument("--check", action="append", default=[],
                          help="Run only this check method, e.g. check_lb_identity")
    validate.add_argument("--seed", type=_seed, default=0)
    validate.add_argument("--out", help="Also write the report to this file")
    validate.add_argument("--threads", type=_positive, help="Worker processes")

    tune = sub.add_parser("tune", help="Tune the samplers of a config")
    tune.add_argument("--config", required=True, help="Experiment config (JSON)")
    tune.add_argument("--seed", type=_seed, help="Override the config seed")
    tune.add_argument("--threads", type=_positive, help="Worker processes")

    preset = sub.add_parser("preset", help="Print a preset experiment config")
    preset.add_argument("name", nargs="?", help="Preset name; omit with --list")
    preset.add_argument("--list", action="store_true", help="List preset names")
    preset.add_argument("--scale", choices=[s.value for s in Scale], default=Scale.DESK.value)
    preset.add_argument("--seed", type=_seed, default=0)
    preset.add_argument("--out", help="Write to this file instead of stdout")

    gen = sub.add_parser("gen-params", help="Write a parameter file for a preset")
    gen.add_argument("name", help="Preset name")
    gen.add_argument("--scale", choices=[s.value for s in Scale], default=Scale.DESK.value)
    gen.add_argument("--seed", type=_seed, default=0)
    gen.add_argument("--out", required=True, help="Parameter file to write")
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def cmd_run(args: argparse.Namespace) -> int:
    service = ExperimentService(threads=args.threads, logger=logger)
    config = service.with_overrides(service.load_config(args.config), args.seed, args.out)
    result = service.run_experiment(config)
    for name, path in result.files.items():
        print(f"{name}: {path}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    service = ValidationService(
        profile=args.profile,
        mutations=args.mutation,
        threads=args.threads,
        seed=args.seed,
        logger=logger,
    )
    report = service.run(only=args.check or None)
    if args.out:
        report.write(args.out)
    _dump(report.document())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_tune(args: argparse.Namespace) -> int:
    service = ExperimentService(threads=args.threads, logger=logger)
    config = service.with_overrides(service.load_config(args.config), args.seed)
    reports = service.tune_samplers(config, service.build_model(config))
    document: List[Dict[str, Any]] = [
        {
            "label": report.config.label,
            "tuned_parameter": report.config.tunable,
            "value": report.value,
            "status": report.status.value,
            "target_rate": report.target_rate,
            "trailing_acceptance": report.trailing_acceptance,
        }
        for report in reports
    ]
    _dump(document)
    return EXIT_OK if all(report.succeeded for report in reports) else EXIT_FAILED


def cmd_preset(args: argparse.Namespace) -> int:
    if args.list or not args.name:
        for name in list_presets():
            print(f"{name}\t{preset_family(name).value}")
        return EXIT_OK
    document = preset_document(args.name, Scale(args.scale), args.seed)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            json.dump(document, f, indent=2)
            f.write("\n")
    else:
        _dump(document)
    return EXIT_OK


def cmd_gen_params(args: argparse.Namespace) -> int:
    family = preset_family(args.name)
    params = generate_params(family, preset_shape(args.name, Scale(args.scale)), args.seed)
    path = save_params(params, args.out)
    print(f"{family.value} parameters (N={params.n_sites}, C={params.n_categories}): {path}")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "validate": cmd_validate,
    "tune": cmd_tune,
    "preset": cmd_preset,
    "gen-params": cmd_gen_params,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point of the `dlangevin` console script."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, LoaderException) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except KeyError as e:
        logger.error(f"Configuration error: {e.args[0] if e.args else e}")
        return EXIT_CONFIG
    except ExecutionError as e:
        logger.error(f"Execution failed: {e}")
        return EXIT_FAILED
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
