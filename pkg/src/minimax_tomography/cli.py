"""Command-line interface for minimax tomography.

Subcommands:
- validate-pom: check the geometric identities of a measurement
- estimate: apply an estimator to one count vector
- risk: exact risk of an estimator at one state
- risk-scan: risk over the state space with its extrema
- optimize-epsilon: minimax epsilon for a range of sample sizes
- simulate: Monte Carlo risk from simulated experiments
- figures: data tables for the likelihood, risk and epsilon figures

Global flags (accepted before or after the subcommand):
- --out PATH: write the result to a file instead of stdout
- --format {json,csv}: output format (default: csv for an --out path ending
  in .csv, json otherwise)
- --threads N, --seed N, --log-level LEVEL, --progress

Exit codes: 0 on success, 1 on usage or validation errors, 2 on numeric
and size-guard errors. Logs go to stderr so stdout stays parseable.

Examples:
  minimax-tomography validate-pom --kind tetrahedron
  minimax-tomography estimate --counts 4,0,0,0 --estimator quantum_minimax --epsilon 0
  minimax-tomography risk --estimator ml_quantum --N 1 --mixed
  minimax-tomography optimize-epsilon --family quantum_minimax --N 4..100 --out eps.csv
  minimax-tomography simulate --estimator classical_minimax --pom classical_die \\
      --true-probs 0.3,0.7 --N 1 --trials 100000 --seed 42
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from minimax_tomography.core.config import get_settings, reload_settings
from minimax_tomography.core.exceptions import TomographyError, UsageError
from minimax_tomography.models.estimator_spec import (
    QUBIT_SIC_KINDS,
    EstimatorKind,
    EstimatorSpec,
)
from minimax_tomography.models.figures import FigureId, FigureParams, FigureTable
from minimax_tomography.models.operators import PomKind, SymmetricPOM
from minimax_tomography.models.risk import EpsilonResult, GridSpec, SearchSpec, write_frame
from minimax_tomography.models.simulation import SimConfig
from minimax_tomography.models.states import CountVector, DensityOperator, ProbVector
from minimax_tomography.services.estimators import estimate
from minimax_tomography.services.figures import emit_figure_data
from minimax_tomography.services.minimax_search import optimize_epsilon
from minimax_tomography.services.pom_geometry import build_pom, validate_spom
from minimax_tomography.services.risk_engine import risk_exact, risk_extrema
from minimax_tomography.services.simulator import empirical_risk
from minimax_tomography.services.state_space import born_probs

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def setup_logging(level: Optional[str] = None) -> None:
    """Configure logging to stderr based on settings."""
    log_level = getattr(logging, level or get_settings().LOG_LEVEL)

    logging.basicConfig(
        level=log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
    )
    logging.getLogger().setLevel(log_level)

    logger.debug(f"Logging configured with level: {logging.getLevelName(log_level)}")


# =============================================================================
# Argument parsing helpers
# =============================================================================


def parse_floats(text: str) -> list[float]:
    """Parse '0.1,0.2,0.7'."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from e


def parse_sizes(text: str) -> list[int]:
    """Parse sample sizes: '4,10,20', an inclusive range '4..10' or '4..100:8'."""
    try:
        if ".." in text:
            span, _, step = text.partition(":")
            start, stop = (int(part) for part in span.split(".."))
            return list(range(start, stop + 1, int(step) if step else 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid sample sizes: {text!r}") from e


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="Output file")
    common.add_argument(
        "--format", choices=FORMATS, default=argparse.SUPPRESS, help="Output format"
    )
    common.add_argument(
        "--threads", type=int, default=argparse.SUPPRESS, help="Worker threads"
    )
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Random seed")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=argparse.SUPPRESS,
        help="Logging level",
    )
    common.add_argument(
        "--progress", action="store_true", default=argparse.SUPPRESS, help="Progress bars"
    )
    return common


def _add_pom_flags(parser: argparse.ArgumentParser, default: Optional[str] = None) -> None:
    parser.add_argument(
        "--pom",
        choices=[k.value for k in PomKind],
        default=default,
        help="Measurement (default: tetrahedron, or a classical die matching the data)",
    )
    parser.add_argument("--outcomes", type=int, help="K for the classical die")
    parser.add_argument(
        "--orientation", type=parse_floats, help="Row-major 3x3 rotation for qubit POMs"
    )


def _add_estimator_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--estimator", required=True, choices=[k.value for k in EstimatorKind]
    )
    parser.add_argument("--beta", type=float, help="Pseudo-count (add_beta, mean_mc)")
    parser.add_argument("--epsilon", type=float, default=0.0, help="Purity slack in [0, 1/4]")
    parser.add_argument("--variant-bn", action="store_true", help="Use b = sqrt(1 - 4 eps)")
    parser.add_argument("--samples", type=int, default=100_000, help="mean_mc draws")
    parser.add_argument("--indicator", action="store_true", help="mean_mc physicality cut")


def _add_state_flags(parser: argparse.ArgumentParser, probs_flag: str = "--probs") -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--bloch", type=parse_floats, help="Bloch vector x,y,z")
    group.add_argument(probs_flag, dest="probs", type=parse_floats, help="Probabilities")
    group.add_argument("--mixed", action="store_true", help="Maximally mixed state")


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--radii", type=int, help="Bloch-ball shells")
    parser.add_argument("--directions", type=int, help="Directions per shell")
    parser.add_argument("--resolution", type=int, default=20, help="Simplex grid denominator")
    parser.add_argument("--no-refine", action="store_true", help="Skip Nelder-Mead refinement")


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser with all subcommands."""
    common = _common_flags()
    parser = _Parser(
        prog="minimax-tomography",
        description="Minimax point estimators for quantum state tomography",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate-pom", parents=[common], help="Validate a measurement")
    p.add_argument("--kind", required=True, choices=[k.value for k in PomKind])
    p.add_argument("--outcomes", type=int, help="K for the classical die")
    p.add_argument("--orientation", type=parse_floats, help="Row-major 3x3 rotation")
    p.add_argument("--show-pom", action="store_true", help="Include the operators")
    p.set_defaults(handler=cmd_validate_pom)

    p = sub.add_parser("estimate", parents=[common], help="Estimate from counts")
    _add_pom_flags(p)
    p.add_argument("--counts", required=True, help="Comma-separated counts")
    _add_estimator_flags(p)
    p.set_defaults(handler=cmd_estimate)

    p = sub.add_parser("risk", parents=[common], help="Exact risk at one state")
    _add_pom_flags(p)
    _add_estimator_flags(p)
    _add_state_flags(p)
    p.add_argument("--N", type=int, required=True, help="Sample size")
    p.set_defaults(handler=cmd_risk)

    p = sub.add_parser("risk-scan", parents=[common], help="Risk over all states")
    _add_pom_flags(p)
    _add_estimator_flags(p)
    _add_grid_flags(p)
    p.add_argument("--N", type=int, required=True, help="Sample size")
    p.set_defaults(handler=cmd_risk_scan)

    p = sub.add_parser("optimize-epsilon", parents=[common], help="Minimax epsilon search")
    p.add_argument(
        "--family",
        default=EstimatorKind.QUANTUM_MINIMAX.value,
        choices=[
            EstimatorKind.QUANTUM_MINIMAX.value,
            EstimatorKind.ML_QUANTUM_EPSILON.value,
            EstimatorKind.ML_ADMIX.value,
        ],
    )
    p.add_argument("--N", type=parse_sizes, required=True, help="e.g. 4,10,20 or 4..100")
    p.add_argument("--variant-bn", action="store_true", help="Use b = sqrt(1 - 4 eps)")
    p.add_argument("--scan-points", type=int, help="Coarse scan points")
    p.add_argument("--tolerance", type=float, help="Golden-section tolerance")
    _add_grid_flags(p)
    p.set_defaults(handler=cmd_optimize_epsilon)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo risk")
    _add_pom_flags(p)
    _add_estimator_flags(p)
    _add_state_flags(p, probs_flag="--true-probs")
    p.add_argument("--N", type=int, required=True, help="Clicks per experiment")
    p.add_argument("--trials", type=int, default=100_000, help="Experiments")
    p.set_defaults(handler=cmd_simulate)

    p = sub.add_parser("figures", parents=[common], help="Figure data tables")
    p.add_argument("figure", choices=[f.value for f in FigureId] + ["all"])
    p.add_argument("--out-dir", type=Path, help="Directory for <figure>.csv files")
    p.add_argument("--sizes", type=parse_sizes, help="N grid for fig2/fig3")
    p.add_argument("--likelihood-sizes", type=parse_sizes, help="N values for fig1")
    p.add_argument("--p-points", type=int, default=101, help="p grid points for fig1")
    p.add_argument("--scan-points", type=int, help="Coarse epsilon scan points")
    _add_grid_flags(p)
    p.set_defaults(handler=cmd_figures)

    return parser


# =============================================================================
# Builders from arguments
# =============================================================================


def _orientation(args: argparse.Namespace) -> Optional[np.ndarray]:
    values = getattr(args, "orientation", None)
    if values is None:
        return None
    if len(values) != 9:
        raise UsageError("--orientation needs 9 numbers")
    return np.asarray(values).reshape(3, 3)


def _pom_for(args: argparse.Namespace, num_outcomes: Optional[int] = None) -> SymmetricPOM:
    kind = getattr(args, "pom", None)
    outcomes = getattr(args, "outcomes", None) or num_outcomes
    if kind is None:
        estimator = getattr(args, "estimator", None)
        quantum = estimator is not None and EstimatorKind(estimator) in QUBIT_SIC_KINDS
        if quantum or outcomes in (None, 4) and getattr(args, "bloch", None) is not None:
            kind = PomKind.TETRAHEDRON.value
        elif outcomes is not None:
            kind = PomKind.CLASSICAL_DIE.value
        else:
            kind = PomKind.TETRAHEDRON.value
    if kind == PomKind.CLASSICAL_DIE.value:
        return build_pom(kind, num_outcomes=outcomes)
    return build_pom(kind, orientation=_orientation(args))


def _estimator_for(args: argparse.Namespace) -> EstimatorSpec:
    return EstimatorSpec(
        kind=EstimatorKind(args.estimator),
        beta=args.beta,
        epsilon=args.epsilon,
        variant_bn=args.variant_bn,
        samples=args.samples,
        seed=get_settings().DEFAULT_SEED,
        indicator=args.indicator,
    )


def _state_for(args: argparse.Namespace) -> tuple[ProbVector, SymmetricPOM]:
    if args.probs is not None:
        state = ProbVector(probs=args.probs)
        return state, _pom_for(args, state.num_outcomes)
    pom = _pom_for(args)
    if args.mixed:
        return born_probs(DensityOperator.maximally_mixed(pom.dim), pom), pom
    if pom.dim != 2:
        raise UsageError("--bloch needs a qubit measurement")
    return born_probs(DensityOperator.from_bloch(args.bloch), pom), pom


def _grid_for(args: argparse.Namespace) -> GridSpec:
    overrides: dict[str, Any] = {
        "simplex_resolution": args.resolution,
        "refine": not args.no_refine,
    }
    if args.radii is not None:
        overrides["radii"] = args.radii
    if args.directions is not None:
        overrides["directions"] = args.directions
    return GridSpec(**overrides)


def _search_for(args: argparse.Namespace, family: EstimatorKind) -> SearchSpec:
    overrides: dict[str, Any] = {"family": family, "grid": _grid_for(args)}
    if getattr(args, "variant_bn", False):
        overrides["variant_bn"] = True
    if getattr(args, "scan_points", None) is not None:
        overrides["scan_points"] = args.scan_points
    if getattr(args, "tolerance", None) is not None:
        overrides["tolerance"] = args.tolerance
    return SearchSpec(**overrides)


# =============================================================================
# Output
# =============================================================================


def _json(data: Any) -> str:
    return json.dumps(data, indent=2) + "\n"


def _csv_row(data: dict[str, Any]) -> str:
    return write_frame(pd.DataFrame([data]))


# =============================================================================
# Commands
# =============================================================================


def cmd_validate_pom(args: argparse.Namespace, fmt: str) -> str:
    """Validate a measurement."""
    kind = PomKind(args.kind)
    if kind == PomKind.CLASSICAL_DIE:
        pom = build_pom(kind, num_outcomes=args.outcomes)
    else:
        pom = build_pom(kind, orientation=_orientation(args), num_outcomes=args.outcomes)
    report = validate_spom(pom)
    if fmt == "csv":
        return write_frame(pd.DataFrame([c.model_dump() for c in report.checks]))
    data = report.to_json_dict()
    if args.show_pom:
        data["pom"] = pom.to_json_dict()
    return _json(data)


def cmd_estimate(args: argparse.Namespace, fmt: str) -> str:
    """Apply an estimator to one count vector."""
    counts = CountVector.parse(args.counts)
    spec = _estimator_for(args)
    result = estimate(spec, counts, _pom_for(args, counts.num_outcomes))
    data = result.to_json_dict()
    if fmt == "csv":
        row = {f"p{k + 1}": p for k, p in enumerate(data.pop("p_hat"))}
        data.pop("std_err", None)
        return _csv_row({**data, **row})
    return _json(data)


def cmd_risk(args: argparse.Namespace, fmt: str) -> str:
    """Exact risk at one state."""
    state, pom = _state_for(args)
    spec = _estimator_for(args)
    value = risk_exact(spec, state, pom, args.N)
    data = {"estimator": spec.label, "N": args.N, "risk": value}
    if fmt == "csv":
        return _csv_row(data)
    return _json({**data, "state": list(state.probs)})


def cmd_risk_scan(args: argparse.Namespace, fmt: str) -> str:
    """Risk over all states with extrema."""
    pom = _pom_for(args)
    spec = _estimator_for(args)
    surface = risk_extrema(spec, pom, args.N, _grid_for(args))
    if fmt == "csv":
        return surface.to_csv()
    return _json({"estimator": spec.label, "N": args.N, **surface.extrema_json()})


def cmd_optimize_epsilon(args: argparse.Namespace, fmt: str) -> str:
    """Minimax epsilon for each requested sample size."""
    family = EstimatorKind(args.family)
    search = _search_for(args, family)
    results = [optimize_epsilon(family, N, search) for N in args.N]
    if fmt == "csv":
        return EpsilonResult.table_to_csv(results)
    return _json([r.model_dump(mode="json") for r in results])


def cmd_simulate(args: argparse.Namespace, fmt: str) -> str:
    """Monte Carlo risk."""
    state, pom = _state_for(args)
    spec = _estimator_for(args)
    config = SimConfig(seed=get_settings().DEFAULT_SEED, trials=args.trials, N=args.N)
    result = empirical_risk(spec, state, pom, config)
    data = result.model_dump()
    if fmt == "csv":
        return _csv_row(data)
    return _json(data)


def _table_output(table: FigureTable, fmt: str) -> str:
    if fmt == "json":
        return _json(table.model_dump(mode="json"))
    return table.to_csv()


def cmd_figures(args: argparse.Namespace, fmt: str) -> str:
    """Figure data tables."""
    overrides: dict[str, Any] = {"p_points": args.p_points}
    if args.sizes is not None:
        overrides["sample_sizes"] = args.sizes
    if args.likelihood_sizes is not None:
        overrides["likelihood_sizes"] = args.likelihood_sizes
    overrides["search"] = _search_for(args, EstimatorKind.QUANTUM_MINIMAX)
    params = FigureParams(**overrides)

    if args.figure != "all" and args.out_dir is None:
        return _table_output(emit_figure_data(args.figure, params), fmt)

    out_dir = args.out_dir or get_settings().OUTPUT_DIR
    out_dir.mkdir(parents=True, exist_ok=True)
    figures = list(FigureId) if args.figure == "all" else [FigureId(args.figure)]
    written = []
    for figure in figures:
        path = out_dir / f"{figure.value}.csv"
        emit_figure_data(figure, params).to_csv(path)
        logger.info(f"Wrote {path}")
        written.append(str(path))
    return _json({"written": written})


# =============================================================================
# Entry points
# =============================================================================


def _apply_overrides(args: argparse.Namespace) -> None:
    overrides: dict[str, Any] = {}
    if hasattr(args, "threads"):
        overrides["THREADS"] = args.threads
    if hasattr(args, "seed"):
        overrides["DEFAULT_SEED"] = args.seed
    if hasattr(args, "log_level"):
        overrides["LOG_LEVEL"] = args.log_level
    if hasattr(args, "progress"):
        overrides["SHOW_PROGRESS"] = True
    if overrides:
        reload_settings(**overrides)


def _output_format(args: argparse.Namespace) -> str:
    """--format if given, else csv for an --out path ending in .csv, else json."""
    if hasattr(args, "format"):
        return args.format
    out = getattr(args, "out", None)
    if out is not None and Path(out).suffix.lower() == ".csv":
        return "csv"
    return "json"


def run_command(argv: Sequence[str]) -> int:
    """Run one command line and return its exit code.

    Output goes to stdout or to --out; diagnostics go to stderr.
    """
    parser = create_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as e:
        print(f"usage error: {e.message}", file=sys.stderr)
        return 1
    except SystemExit as e:  # --help
        return int(e.code or 0)

    try:
        _apply_overrides(args)
        setup_logging()
        fmt = _output_format(args)
        handler: Callable[[argparse.Namespace, str], str] = args.handler
        output = handler(args, fmt)
    except UsageError as e:
        print(f"usage error: {e.message}", file=sys.stderr)
        return 1
    except ValidationError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return 1
    except TomographyError as e:
        logger.debug(f"{type(e).__name__}: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return 2

    out = getattr(args, "out", None)
    if out is not None:
        Path(out).write_text(output, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(output)
    return 0


def main() -> None:
    """Console-script entry point."""
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
