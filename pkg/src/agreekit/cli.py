"""Command-line interface.

Exit codes form the pipeline-gating contract: 0 = success, 1 = input or
validation error, 2 = success with findings (a worker tripped a quality rule,
or a pilot landed in a hard tier). Diagnostics go to stderr; report payloads
go to stdout or --out files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .config import ToolConfig, apply_overrides, load_config
from .difficulty import (
    BaselineRegistry,
    forecast_pilot,
    load_registry,
    rank_difficulty,
    registry_to_dict,
    registry_upsert,
    save_registry,
)
from .errors import AgreeKitError, EmptyDataset, ParseError
from .heatmap import emit_heatmap
from .metrics import bootstrap_ci, profile
from .model import (
    ReliabilityData,
    build_reliability_matrix,
    iter_parsed,
    parse_records,
    serialize_records,
)
from .reports import (
    REPORT_VERSION,
    difficulty_report,
    emit_json,
    emit_worker_report,
    metrics_report,
)
from .simulate import SimulationSpec, generate
from .workers import flag_workers, has_quality_flags, pairwise_matrix


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems via exit code 1, not 2."""

    def error(self, message):
        raise _UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _infer_format(path: str, declared: str | None) -> str:
    if declared:
        return declared
    if path.endswith(".jsonl"):
        return "jsonl"
    if path.endswith(".csv"):
        return "csv"
    raise AgreeKitError(
        f"cannot infer format of {path!r}; pass --format jsonl|csv"
    )


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as exc:
        raise AgreeKitError(f"cannot read {path}: {exc.strerror}") from None


def _load_records(paths: list[str], declared_format: str | None):
    records = []
    for path in paths:
        fmt = _infer_format(path, declared_format)
        records.extend(parse_records(_read_bytes(path), fmt))
    return records


def _load_data(paths: list[str], declared_format: str | None) -> ReliabilityData:
    return build_reliability_matrix(_load_records(paths, declared_format))


def _emit(payload: bytes, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "wb") as handle:
            handle.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()


def _build_config(args) -> ToolConfig:
    config = load_config(args.config) if args.config else ToolConfig()
    return apply_overrides(
        config,
        min_abs_kappa=getattr(args, "min_abs_kappa", None),
        deviation_delta=getattr(args, "deviation_delta", None),
        min_units_per_pair=getattr(args, "min_units_per_pair", None),
        bootstrap_samples=getattr(args, "bootstrap_samples", None),
        confidence=getattr(args, "confidence", None),
        seed=getattr(args, "seed", None),
    )


def _add_common(parser: argparse.ArgumentParser, with_inputs: bool = True) -> None:
    if with_inputs:
        parser.add_argument(
            "--in",
            dest="inputs",
            action="append",
            metavar="PATH",
            help="input dataset (repeatable)",
        )
        parser.add_argument(
            "--format", choices=("jsonl", "csv"), help="input format (default: by extension)"
        )
    parser.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    parser.add_argument("--config", metavar="PATH", help="JSON config file")
    parser.add_argument("--seed", type=int, metavar="N")
    parser.add_argument("--min-abs-kappa", type=float, metavar="X")
    parser.add_argument("--deviation-delta", type=float, metavar="X")
    parser.add_argument("--min-units-per-pair", type=int, metavar="N")
    parser.add_argument("--bootstrap-samples", type=int, metavar="N")
    parser.add_argument("--confidence", type=float, metavar="X")


def _require_inputs(args) -> list[str]:
    if not args.inputs:
        raise AgreeKitError("at least one --in PATH is required")
    return args.inputs


def build_parser() -> _Parser:
    parser = _Parser(prog="agreekit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"agreekit {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("validate", help="check input files and summarize the dataset")
    _add_common(p)

    p = sub.add_parser("metrics", help="per-class agreement profiles")
    _add_common(p)
    p.add_argument("--ci", action="store_true", help="add bootstrap confidence intervals")

    p = sub.add_parser("workers", help="pairwise kappa matrix and worker flags")
    _add_common(p)
    p.add_argument("--doc-class", metavar="CLASS", help="restrict to one document class")
    p.add_argument("--heatmap", metavar="PATH", help="write a heatmap (.svg, or .txt for text)")
    p.add_argument(
        "--show-heatmap",
        action="store_true",
        help="print a text heatmap to stderr (ANSI color unless NO_COLOR)",
    )
    p.add_argument("--report-format", choices=("json", "csv"), default="json")

    p = sub.add_parser("difficulty", help="rank document classes by agreement")
    _add_common(p)
    p.add_argument("--registry", metavar="PATH", help="baseline registry file")
    p.add_argument("--update", action="store_true", help="upsert classes into the registry")
    p.add_argument("--pilot", metavar="PATH", help="pilot dataset to forecast")

    p = sub.add_parser("baseline", help="inspect or update the baseline registry")
    _add_common(p)
    p.add_argument("--registry", required=True, metavar="PATH")
    p.add_argument("--doc-class", metavar="CLASS", help="restrict upserts to one class")

    p = sub.add_parser("simulate", help="generate a synthetic dataset")
    _add_common(p, with_inputs=False)
    p.add_argument("--spec", metavar="PATH", help="JSON simulation spec file")
    p.add_argument("--n-units", type=int, metavar="N")
    p.add_argument("--n-labels", type=int, metavar="K")
    p.add_argument("--error-rates", metavar="E1,E2,...", help="per-worker error rates")
    p.add_argument("--coverage", type=float, metavar="X")
    p.add_argument(
        "--dist",
        metavar="uniform|P1,P2,...",
        help="true label distribution (default uniform)",
    )
    p.add_argument("--out-format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--truth-out", metavar="PATH", help="write the true labels as JSON")
    return parser


def _cmd_validate(args, config: ToolConfig) -> int:
    paths = _require_inputs(args)
    files = []
    all_records = []
    ok = True
    for path in paths:
        fmt = _infer_format(path, args.format)
        entries = []
        n_records = 0
        for lineno, item in iter_parsed(_read_bytes(path), fmt):
            if isinstance(item, ParseError):
                ok = False
                entries.append(
                    {
                        "line": lineno,
                        "error": type(item).__name__,
                        "message": str(item),
                    }
                )
                print(f"{path}: {type(item).__name__}: {item}", file=sys.stderr)
            else:
                n_records += 1
                all_records.append(item)
        files.append(
            {"path": path, "format": fmt, "n_records": n_records, "errors": entries}
        )
    payload: dict = {"version": REPORT_VERSION, "valid": ok, "files": files}
    if ok:
        try:
            data = build_reliability_matrix(all_records)
        except AgreeKitError as exc:
            # e.g. the same unit+annotator appears in two different files
            ok = False
            payload["valid"] = False
            payload["dataset_error"] = str(exc)
            print(f"dataset: {exc}", file=sys.stderr)
        else:
            payload["dataset"] = {
                "n_records": len(all_records),
                "n_units": data.n_units,
                "n_annotators": data.n_annotators,
                "n_classes": len(data.doc_classes()),
                "n_labels": len(data.labels),
            }
    _emit(emit_json(payload), args.out)
    return 0 if ok else 1


def _per_class_profiles(data: ReliabilityData, config: ToolConfig):
    out = []
    for doc_class in data.doc_classes():
        sliced = data.slice(by_doc_class=doc_class)
        try:
            out.append((doc_class, profile(sliced, config.min_units_per_pair), sliced))
        except EmptyDataset:
            continue
    if not out:
        raise EmptyDataset("no document class has two or more ratings on any unit")
    return out


def _cmd_metrics(args, config: ToolConfig) -> int:
    data = _load_data(_require_inputs(args), args.format)
    classes = []
    for doc_class, prof, sliced in _per_class_profiles(data, config):
        ci = None
        if args.ci:
            ci = {
                "fleiss": bootstrap_ci(
                    sliced,
                    "fleiss",
                    n_resamples=config.bootstrap_samples,
                    confidence=config.confidence,
                    seed=config.seed,
                ),
                "alpha": bootstrap_ci(
                    sliced,
                    "alpha",
                    n_resamples=config.bootstrap_samples,
                    confidence=config.confidence,
                    seed=config.seed,
                ),
            }
            if sliced.n_annotators == 2:
                ci["cohen"] = bootstrap_ci(
                    sliced,
                    "cohen",
                    n_resamples=config.bootstrap_samples,
                    confidence=config.confidence,
                    seed=config.seed,
                    annotators=(sliced.annotators[0], sliced.annotators[1]),
                )
        classes.append((doc_class, prof, ci))
    _emit(emit_json(metrics_report(classes, config)), args.out)
    return 0


def _cmd_workers(args, config: ToolConfig) -> int:
    data = _load_data(_require_inputs(args), args.format)
    matrix = pairwise_matrix(
        data, doc_class=args.doc_class, min_units_per_pair=config.min_units_per_pair
    )
    report = flag_workers(
        matrix,
        min_abs_kappa=config.min_abs_kappa,
        deviation_delta=config.deviation_delta,
    )
    if args.heatmap:
        fmt = "text" if args.heatmap.endswith(".txt") else "svg"
        with open(args.heatmap, "wb") as handle:
            handle.write(emit_heatmap(matrix, fmt))
    if args.show_heatmap:
        color = sys.stderr.isatty() and "NO_COLOR" not in os.environ
        sys.stderr.write(emit_heatmap(matrix, "text", color=color).decode("utf-8"))
    _emit(emit_worker_report(report, args.report_format, config), args.out)
    return 2 if has_quality_flags(report) else 0


def _cmd_difficulty(args, config: ToolConfig) -> int:
    data = _load_data(_require_inputs(args), args.format)
    per_class = _per_class_profiles(data, config)
    ranking = rank_difficulty(
        [(dc, prof) for dc, prof, _ in per_class], config.tier_boundaries
    )
    registry = BaselineRegistry()
    if args.registry and os.path.exists(args.registry):
        registry = load_registry(args.registry)
    if args.update:
        if not args.registry:
            raise AgreeKitError("--update requires --registry PATH")
        for doc_class, _, sliced in per_class:
            registry = registry_upsert(registry, doc_class, sliced)
        save_registry(registry, args.registry)
    pilot = None
    if args.pilot:
        pilot_data = _load_data([args.pilot], args.format)
        pilot = forecast_pilot(pilot_data, registry, config.tier_boundaries)
    _emit(emit_json(difficulty_report(ranking, config, pilot)), args.out)
    if pilot is not None and pilot.predicted_tier in ("hard", "very_hard"):
        return 2
    return 0


def _cmd_baseline(args, config: ToolConfig) -> int:
    registry = BaselineRegistry()
    if os.path.exists(args.registry):
        registry = load_registry(args.registry)
    if args.inputs:
        data = _load_data(args.inputs, args.format)
        classes = (
            [args.doc_class] if args.doc_class else list(data.doc_classes())
        )
        for doc_class in classes:
            sliced = data.slice(by_doc_class=doc_class)
            registry = registry_upsert(registry, doc_class, sliced)
        save_registry(registry, args.registry)
        print(
            f"updated {args.registry} ({len(classes)} class(es))", file=sys.stderr
        )
    _emit(emit_json(registry_to_dict(registry)), args.out)
    return 0


def _parse_rates(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise AgreeKitError(f"bad rate list {text!r}") from None


def _cmd_simulate(args, config: ToolConfig) -> int:
    if args.spec:
        try:
            obj = json.loads(_read_bytes(args.spec).decode("utf-8"))
            spec = SimulationSpec.from_dict(obj)
        except (json.JSONDecodeError, UnicodeDecodeError, TypeError, ValueError) as exc:
            raise AgreeKitError(f"{args.spec}: {exc}") from None
        if args.seed is not None:
            spec = SimulationSpec.from_dict(
                {**obj, "seed": args.seed}
            )
    else:
        if args.n_units is None or args.n_labels is None or args.error_rates is None:
            raise AgreeKitError(
                "simulate needs --spec PATH or --n-units/--n-labels/--error-rates"
            )
        dist: str | tuple[float, ...] = "uniform"
        if args.dist and args.dist != "uniform":
            dist = _parse_rates(args.dist)
        try:
            spec = SimulationSpec(
                n_units=args.n_units,
                n_labels=args.n_labels,
                worker_error_rates=_parse_rates(args.error_rates),
                coverage=args.coverage if args.coverage is not None else 1.0,
                true_label_distribution=dist,
                seed=args.seed if args.seed is not None else config.seed,
            )
        except ValueError as exc:
            raise AgreeKitError(str(exc)) from None
    data, truth = generate(spec)
    _emit(serialize_records(data.to_records(), args.out_format), args.out)
    if args.truth_out:
        truth_payload = {
            f"{u.doc_class}/{u.doc_id}/{u.item_id}": label
            for u, label in sorted(truth.items())
        }
        with open(args.truth_out, "wb") as handle:
            handle.write(emit_json(truth_payload))
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "metrics": _cmd_metrics,
    "workers": _cmd_workers,
    "difficulty": _cmd_difficulty,
    "baseline": _cmd_baseline,
    "simulate": _cmd_simulate,
}


def cli_dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        config = _build_config(args)
        return _COMMANDS[args.command](args, config)
    except AgreeKitError as exc:
        print(f"agreekit {args.command}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
