"""Command-line front end: simulate, assemble, identify, evaluate, replicate.

Exit codes: 0 success, 2 identification finished with flags, 1 error.

Examples:
    python scripts/ident_cli.py simulate --pde burgers --nx 256 --nt 101 --noise-percent 4 --out out/burgers
    python scripts/ident_cli.py assemble --data out/burgers/field.csv --form weak --dict-alpha 3 --dict-beta 3 --mx 10 --px 4 --out out/burgers
    python scripts/ident_cli.py identify --pipeline weak_ident --seed 3 --out out/run1
    python scripts/ident_cli.py evaluate out/run1/report.json --benchmark burgers
    python scripts/ident_cli.py replicate table1 --out out/table1
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.config.config_loader import load_config
from src.config.schema import BENCHMARK_NAMES, merge_config, validate_config
from src.data.loaders.field_loader import load_field
from src.data.writers.report_writer import read_report, write_report
from src.domain.assembly import assemble_differential, assemble_weak, dump_system_csv
from src.domain.dictionary.lookup import dictionary_from_labels
from src.domain.errors import ConfigError, DictionaryError, IdentError
from src.domain.grid.noise import add_gaussian_noise
from src.domain.metrics import evaluate_report
from src.domain.models import Boundary, DictionaryStyle, PipelineOptions
from src.domain.simulation.benchmarks import INITIAL_CONDITIONS, get_benchmark
from src.logging_setup import setup_logging
from src.pipeline.pipeline import IdentPipeline, write_noisy_field
from src.pipeline.settings import (
    dictionary_for,
    noise_spec,
    simulate_benchmark,
    smoother_config,
    test_function_for,
)

logger = logging.getLogger("ident_cli")

EXIT_OK, EXIT_ERROR, EXIT_FLAGGED = 0, 1, 2

BENCHMARK_FLAGS = ("nx", "nt", "final_time", "init", "boundary", "refine")
DICTIONARY_FLAGS = {"dict_alpha": "max_alpha", "dict_beta": "max_beta", "dict_degree": "max_total_degree"}
WEAK_FLAGS = ("mx", "mt", "px", "pt")


def _overrides(args) -> Dict:
    """CLI flags as a config fragment (flags win over the config file)."""
    out: Dict = {}
    if getattr(args, "seed", None) is not None:
        out["seed"] = args.seed
    if getattr(args, "pipeline", None):
        out["pipeline"] = args.pipeline
    if getattr(args, "out", None):
        out["output"] = {"dir": args.out}
    if getattr(args, "noise_percent", None) is not None:
        out["noise"] = {"kind": "percent", "level": args.noise_percent}
    if getattr(args, "noise_nsr", None) is not None:
        out["noise"] = {"kind": "nsr", "level": args.noise_nsr}
    if getattr(args, "benchmark", None):
        out.setdefault("data", {})["benchmark"] = args.benchmark
    if getattr(args, "data", None):
        out.setdefault("data", {})["path"] = args.data
    dictionary = {key: getattr(args, flag) for flag, key in DICTIONARY_FLAGS.items()
                  if getattr(args, flag, None) is not None}
    if dictionary:
        out["dictionary"] = dictionary
    weak = {key: getattr(args, key) for key in WEAK_FLAGS if getattr(args, key, None) is not None}
    if weak:
        out["weak"] = weak
    return out


def _benchmark_overrides(args, benchmark: str) -> Dict:
    """Grid and initial-condition flags for the benchmark being simulated."""
    settings = {key: getattr(args, key) for key in BENCHMARK_FLAGS if getattr(args, key, None) is not None}
    return {"benchmarks": {benchmark: settings}} if settings else {}


def _config_path(args) -> Optional[str]:
    if args.config:
        return args.config
    return "config.json" if Path("config.json").exists() else None


def cmd_simulate(args, config) -> int:
    if args.out and args.out.endswith(".csv"):
        out = Path(args.out)
    else:
        out = Path(config["output"]["dir"]) / "field.csv"
    path, field = write_noisy_field(config, str(out))
    logger.info("Simulated %s: nx=%d nt=%d -> %s", config["data"]["benchmark"],
                field.grid.nx, field.grid.nt, path)
    return EXIT_OK


def cmd_assemble(args, config) -> int:
    data = config["data"]
    if data.get("path"):
        U = load_field(data["path"])
    else:
        U = add_gaussian_noise(simulate_benchmark(config), noise_spec(config))
    if args.form == "weak":
        dictionary = dictionary_for(config, DictionaryStyle.WEAK)
        weak = config["weak"]
        sys_ = assemble_weak(U, dictionary, test_function_for(config, U, dictionary),
                             tuple(weak["stride"]), int(weak["max_rows"]))
    else:
        sys_ = assemble_differential(U, dictionary_for(config), smoother_config(config))
    path = dump_system_csv(sys_, str(Path(config["output"]["dir"]) / "system.csv"))
    logger.info("%s system: %d rows x %d features -> %s", args.form, sys_.n_rows, sys_.n_features, path)
    return EXIT_OK


def cmd_identify(args, config) -> int:
    options = PipelineOptions(
        pipeline=config["pipeline"],
        seed=int(config["seed"]),
        output_dir=config["output"]["dir"],
    )
    result = IdentPipeline(config).run(options)
    chosen = result.report["chosen"]
    logger.info("Chosen: %s", json.dumps(chosen["coefficients"]))
    if result.report.get("metrics"):
        logger.info("Metrics: %s", json.dumps(result.report["metrics"]))
    for flag in result.warnings:
        logger.warning("flag: %s", flag)
    return EXIT_FLAGGED if result.flagged else EXIT_OK


def _report_dictionary(labels: List[str]):
    """Rebuild a report's dictionary, trying the weak-form label grammar first."""
    try:
        return dictionary_from_labels(labels, DictionaryStyle.WEAK)
    except DictionaryError:
        return dictionary_from_labels(labels, DictionaryStyle.MONOMIAL)


def cmd_evaluate(args, config) -> int:
    report = read_report(args.report)
    truth_name = args.benchmark or (report.get("data") or {}).get("truth")
    if not truth_name:
        raise ConfigError("evaluate needs --benchmark or a report with data.truth")
    labels = list(report.get("dictionary") or [])
    dictionary = _report_dictionary(labels)
    coefficients = get_benchmark(truth_name).true_coefficients(dictionary.terms)
    truth = {label: float(c) for label, c in zip(labels, coefficients) if c}
    flags: List[str] = []
    metrics = evaluate_report(report, truth, flags)
    out = Path(args.report).with_name("evaluation.json")
    write_report({"truth": truth_name, "metrics": metrics, "flags": flags}, out)
    logger.info("Metrics vs %s: %s -> %s", truth_name, json.dumps(metrics), out)
    return EXIT_FLAGGED if flags else EXIT_OK


def cmd_replicate(args, config) -> int:
    table = config["replicate"].get(args.table)
    if not table:
        raise ConfigError(f"replicate.{args.table} is not configured")
    base_out = Path(config["output"]["dir"])
    seeds = [args.seed] if args.seed is not None else table.get("seeds", [config["seed"]])
    rows = []
    for run in table["runs"]:
        run_config = validate_config(merge_config(config, run["overrides"]))
        for seed in seeds:
            run_config["seed"] = int(seed)
            out = base_out / run["name"] / f"seed{seed}"
            options = PipelineOptions(pipeline=run_config["pipeline"], seed=int(seed), output_dir=str(out))
            result = IdentPipeline(run_config).run(options)
            chosen, metrics = result.report["chosen"], result.report.get("metrics") or {}
            rows.append({
                "run": run["name"],
                "seed": seed,
                "support": " + ".join(chosen["support"]),
                "coefficients": json.dumps(chosen["coefficients"], sort_keys=True),
                **{k: metrics.get(k) for k in ("e_c", "e_r", "e_e", "tpr", "ppv", "nsr")},
                "flags": ";".join(result.warnings),
            })
    summary = base_out / "summary.csv"
    summary.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows).to_csv(summary, index=False)
    logger.info("%s: %d runs -> %s", args.table, len(rows), summary)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config (default: ./config.json if present)")
    common.add_argument("--seed", type=int, help="noise seed")
    common.add_argument("--out", help="output directory")
    common.add_argument("--pipeline", choices=["ident", "robust_ident", "weak_ident", "gp_ident", "caslr"])
    common.add_argument("--quiet", action="store_true", help="log to the file only")
    noise = common.add_mutually_exclusive_group()
    noise.add_argument("--noise-percent", type=float, help="noise as percent of the rms")
    noise.add_argument("--noise-nsr", type=float, help="noise as a ratio of the centered rms")

    parser = argparse.ArgumentParser(description="PDE identification from noisy data")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="simulate a benchmark and write the field CSV")
    p.add_argument("--pde", "--benchmark", dest="benchmark", choices=BENCHMARK_NAMES)
    p.add_argument("--nx", type=int, help="spatial grid points")
    p.add_argument("--nt", type=int, help="time levels, t = 0 included")
    p.add_argument("--final-time", type=float)
    p.add_argument("--init", choices=sorted(INITIAL_CONDITIONS), help="initial condition")
    p.add_argument("--boundary", choices=[b.value for b in Boundary])
    p.add_argument("--refine", type=int, help="solver substeps per observation step")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("assemble", parents=[common], help="assemble and dump the identification system")
    p.add_argument("--data", help="field CSV (default: simulate data.benchmark)")
    p.add_argument("--benchmark")
    p.add_argument("--form", choices=["fd", "weak"], default="fd",
                   help="fd: smoothed finite-difference features; weak: test-function integrals")
    p.add_argument("--dict-alpha", type=int, help="highest derivative order")
    p.add_argument("--dict-beta", type=int, help="highest power of u")
    p.add_argument("--dict-degree", type=int, help="highest total degree (monomial dictionaries)")
    p.add_argument("--mx", type=int, help="test-function half width in x, in grid points")
    p.add_argument("--mt", type=int, help="test-function half width in t, in grid points")
    p.add_argument("--px", type=int, help="test-function degree in x")
    p.add_argument("--pt", type=int, help="test-function degree in t")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("identify", parents=[common], help="run an identification pipeline")
    p.add_argument("--data", help="field CSV (default: simulate data.benchmark)")
    p.add_argument("--benchmark", help="benchmark to simulate, or the truth for --data")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("evaluate", parents=[common], help="score a report against a benchmark")
    p.add_argument("report")
    p.add_argument("--benchmark")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("replicate", parents=[common], help="run a bundled experiment table")
    p.add_argument("table", choices=["table1", "table2", "table3", "table4"])
    p.set_defaults(func=cmd_replicate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = _overrides(args)
        if args.command == "identify" and getattr(args, "data", None) and args.benchmark:
            overrides["data"] = {"path": args.data, "truth": args.benchmark}
        config = load_config(_config_path(args), overrides)
        grid = _benchmark_overrides(args, config["data"]["benchmark"])
        if grid:
            config = validate_config(merge_config(config, grid))
    except IdentError as e:
        setup_logging()
        logger.error("%s", e)
        return EXIT_ERROR
    setup_logging(config["logging"]["dir"], config["logging"]["level"], console=not args.quiet)
    try:
        return args.func(args, config)
    except (IdentError, OSError) as e:
        logger.error("%s failed: %s", args.command, e)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
