import argparse
import json
import logging
import math
import os
import sys
from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Any, NoReturn, TextIO, override

from pydantic import BaseModel, Field, ValidationError

from donormatch.catalog import Catalog, load_catalog, standard_catalog
from donormatch.classifier import NetworkClassifier
from donormatch.csv_ingest import ingest_csv, ingest_labeled_csv
from donormatch.donor import NEVER_DONATED_DAYS, BloodType, DonorRecord
from donormatch.eligibility import EligibilityRule
from donormatch.exceptions import (
    ConfigurationError,
    DonorMatchError,
    LexError,
    ParseError,
    PipelineError,
)
from donormatch.evaluator import RankedRow
from donormatch.model_store import JsonModelStore, TrainedModel
from donormatch.network import NetworkConfig, init_network
from donormatch.pipeline import DonorRanker, Explanation, explain, explain_row
from donormatch.query_engine import FuzzyQueryEngine
from donormatch.registry_store import NdjsonRegistryStore, Registry
from donormatch.synthetic import generate_synthetic, synthetic_csv
from donormatch.training import cross_validate, prepare_samples, train


ENV_PREFIX = "DONORMATCH_"

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2


class OutputFormat(Enum):
    TABLE = "table"
    JSON = "json"


class CliConfig(BaseModel):
    store_path: Path | None = None
    model_path: Path | None = None
    catalog_path: Path | None = None
    min_strength: float = Field(default=0.0, ge=0, lt=1)
    output_format: OutputFormat = OutputFormat.TABLE
    seed: int = Field(default=0, ge=0)
    noise: float = Field(default=0.0, ge=0, le=1)

    def require(self, name: str) -> Path:
        value = getattr(self, name)
        if value is None or not str(value).strip():
            flag = "--" + name.removesuffix("_path")
            raise ConfigurationError(f"{flag} (or {ENV_PREFIX}{name.removesuffix('_path').upper()}) is required")
        return value


class _ArgumentParser(argparse.ArgumentParser):
    @override
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _env(name: str, default: Any = None) -> Any:
    return os.environ.get(ENV_PREFIX + name, default)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--store", default=_env("STORE"), help="registry store (newline-delimited JSON)")
    common.add_argument("--model", default=_env("MODEL"), help="model file (JSON)")
    common.add_argument("--catalog", default=_env("CATALOG"), help="fuzzy catalog (JSON); built-in when omitted")
    common.add_argument("--min-strength", type=float, default=_env("MIN_STRENGTH", 0.0),
                        help="keep rows whose fire strength is strictly above this level")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=_env("FORMAT", "table"))
    common.add_argument("--seed", type=int, default=_env("SEED", 0))
    common.add_argument("--noise", type=float, default=_env("NOISE", 0.0),
                        help="label flip probability for synthetic data")
    common.add_argument("-v", "--verbose", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = _ArgumentParser(prog="donormatch", description="Blood donor eligibility and fuzzy ranking.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    ingest = commands.add_parser("ingest", parents=[common], help="load a registry CSV into the store")
    ingest.add_argument("csv_path", type=Path)
    ingest.add_argument("--append", action="store_true", help="merge into the existing store")

    train_cmd = commands.add_parser("train", parents=[common], help="cross-validate, then train and save a model")
    train_cmd.add_argument("labeled_csv_path", type=Path)
    defaults = NetworkConfig()
    train_cmd.add_argument("--learning-rate", type=float, default=defaults.learning_rate)
    train_cmd.add_argument("--momentum", type=float, default=defaults.momentum)
    train_cmd.add_argument("--epochs", type=int, default=defaults.max_epochs)
    train_cmd.add_argument("--epsilon", type=float, default=defaults.error_epsilon)
    train_cmd.add_argument("--folds", type=int, default=defaults.folds)
    train_cmd.add_argument("--hidden", type=int, default=defaults.layer_sizes[1])

    classify_cmd = commands.add_parser("classify", parents=[common], help="classify one donor")
    classify_cmd.add_argument("age", type=float)
    classify_cmd.add_argument("weight", type=float)

    for name, text in (("query", "fuzzy ranking without the network gate"), ("rank", "full ranking pipeline")):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("query_text", help="query text, or '-' to read it from stdin")
        sub.add_argument("--blood-type", action="append", default=[], help="only these blood types (repeatable)")
        sub.add_argument("--never-donated-days", type=int, default=NEVER_DONATED_DAYS)

    gen = commands.add_parser("gen-synthetic", parents=[common], help="write labeled synthetic donors as CSV")
    gen.add_argument("n", type=int)
    gen.add_argument("--output", type=Path, help="file to write; stdout when omitted")

    return parser


def _config(args: argparse.Namespace) -> CliConfig:
    return CliConfig(
        store_path=args.store,
        model_path=args.model,
        catalog_path=args.catalog,
        min_strength=args.min_strength,
        output_format=args.format,
        seed=args.seed,
        noise=args.noise,
    )


class Cli:
    """
    One command per invocation. Output goes to `stdout`, diagnostics to
    `stderr`.
    """

    def __init__(self, config: CliConfig, stdout: TextIO, stdin: TextIO) -> None:
        self._logger: logging.Logger = logging.getLogger(self.__class__.__name__)
        self.config: CliConfig = config
        self.stdout: TextIO = stdout
        self.stdin: TextIO = stdin
        self.registry_store: NdjsonRegistryStore = NdjsonRegistryStore()
        self.model_store: JsonModelStore = JsonModelStore()

    def _catalog(self) -> Catalog:
        if self.config.catalog_path is None:
            return standard_catalog()
        return load_catalog(self.config.catalog_path)

    def _write(self, text: str = "") -> None:
        print(text, file=self.stdout)

    def _write_json(self, payload: Any) -> None:
        self._write(json.dumps(payload, indent=2))

    def cmd_ingest(self, csv_path: Path, append: bool = False) -> None:
        store = self.config.require("store_path")
        records = ingest_csv(csv_path)
        registry = self.registry_store.load(store) if append and store.exists() else Registry()
        registry = registry.merge(records)
        self.registry_store.save(store, registry)
        self._write(f"Ingested {len(records)} record(s); store holds {len(registry)}.")

    def cmd_train(self, labeled_csv_path: Path, config: NetworkConfig) -> None:
        model_path = self.config.require("model_path")
        rows = ingest_labeled_csv(labeled_csv_path)
        normalizer, samples = prepare_samples(rows)

        report = cross_validate(samples, config)
        if self.config.output_format is OutputFormat.JSON:
            self._write_json({
                "fold_accuracies": report.fold_accuracies,
                "mean_accuracy": report.mean_accuracy,
                "config": config.model_dump(mode="json"),
            })
        else:
            for i, score in enumerate(report.fold_accuracies, start=1):
                self._write(f"fold {i:>2}: {score:.4f}")
            self._write(f"mean accuracy: {report.mean_accuracy:.4f}")

        network = init_network(config)
        final = train(network, samples, config)
        self._logger.debug(f"Final model: {final.epochs_run} epoch(s), mse {final.final_mse:.6f}")
        self.model_store.save(model_path, TrainedModel(network, normalizer, config))

    def cmd_classify(self, age: float, weight: float) -> None:
        for name, value in (("age", age), ("weight", weight)):
            if not math.isfinite(value):
                raise ConfigurationError(f"{name} must be a finite number, got {value}")
        model = self.model_store.load(self.config.require("model_path"))
        result = NetworkClassifier(model.network, model.normalizer).classify(age, weight)
        verdict = "Eligible" if result.is_eligible else "Ineligible"
        if self.config.output_format is OutputFormat.JSON:
            self._write_json({
                "verdict": verdict,
                "confidence_eligible": result.confidence_eligible,
                "confidence_ineligible": result.confidence_ineligible,
            })
        else:
            self._write(
                f"{verdict} (eligible {result.confidence_eligible:.4f}, "
                f"ineligible {result.confidence_ineligible:.4f})"
            )

    def _records(self, blood_types: Sequence[str]) -> list[DonorRecord]:
        registry = self.registry_store.load(self.config.require("store_path"))
        if not blood_types:
            return list(registry)
        try:
            wanted = {BloodType.parse(b) for b in blood_types}
        except ValueError as e:
            raise ConfigurationError(f"unknown blood type: {e}") from e
        return [r for r in registry if r.blood_type in wanted]

    def cmd_query(self, query_text: str, blood_types: Sequence[str] = (), never_donated_days: int = NEVER_DONATED_DAYS) -> None:
        engine = FuzzyQueryEngine(self._catalog(), never_donated_days)
        ast = engine.parse(query_text)
        records = self._records(blood_types)
        names = {r.id: r.name for r in records}
        rows: list[RankedRow] = engine.run(ast, records, self.config.min_strength)
        self._emit([explain_row(row, ast.condition, names[row.record_id]) for row in rows])

    def cmd_rank(self, query_text: str, blood_types: Sequence[str] = (), never_donated_days: int = NEVER_DONATED_DAYS) -> None:
        model = self.model_store.load(self.config.require("model_path"))
        ranker = DonorRanker(
            NetworkClassifier(model.network, model.normalizer),
            FuzzyQueryEngine(self._catalog(), never_donated_days),
            EligibilityRule(),
        )
        ranked = ranker.rank(query_text, self._records(blood_types), self.config.min_strength)
        self._emit([explain(r) for r in ranked])

    def cmd_gen_synthetic(self, n: int, output: Path | None = None) -> None:
        text = synthetic_csv(generate_synthetic(n, self.config.seed, self.config.noise))
        if output is None:
            self.stdout.write(text)
        else:
            output.write_text(text, encoding="utf-8")

    def _emit(self, explanations: list[Explanation]) -> None:
        if self.config.output_format is OutputFormat.JSON:
            self._write_json([e.model_dump(mode="json") for e in explanations])
            return

        if not explanations:
            self._write("(no matching donors)")
            return
        for position, e in enumerate(explanations, start=1):
            degrees = "  ".join(f"{p.label}={p.degree_display}" for p in e.predicates)
            nn = f"  nn={e.nn_confidence_eligible:.4f}" if e.nn_confidence_eligible is not None else ""
            self._write(f"{position:>3}. {e.record_id:<10} {e.name or '':<24} {degrees}  priority={e.priority}{nn}")


def _read_query(text: str, stdin: TextIO) -> str:
    return stdin.read().strip() if text == "-" else text


def _report(error: DonorMatchError, source: str | None, stderr: TextIO) -> None:
    cause = error.cause if isinstance(error, PipelineError) else error
    if isinstance(error, PipelineError):
        stage = error.stage
    elif isinstance(error, LexError | ParseError):
        stage = "parse"
    else:
        stage = type(error).__name__
    if isinstance(cause, LexError | ParseError) and source is not None:
        print(f"donormatch: {stage}: {cause.describe(source)}", file=stderr)
    else:
        print(f"donormatch: {stage}: {cause}", file=stderr)


def main(
    argv: Sequence[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
    stdin: TextIO | None = None,
) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin

    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_VALIDATION
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=stderr,
    )

    source: str | None = None
    try:
        cli = Cli(_config(args), stdout, stdin)
        match args.command:
            case "ingest":
                cli.cmd_ingest(args.csv_path, args.append)
            case "train":
                config = NetworkConfig(
                    layer_sizes=(2, args.hidden, 2),
                    learning_rate=args.learning_rate,
                    momentum=args.momentum,
                    max_epochs=args.epochs,
                    error_epsilon=args.epsilon,
                    folds=args.folds,
                    rng_seed=cli.config.seed,
                )
                cli.cmd_train(args.labeled_csv_path, config)
            case "classify":
                cli.cmd_classify(args.age, args.weight)
            case "query":
                source = _read_query(args.query_text, stdin)
                cli.cmd_query(source, args.blood_type, args.never_donated_days)
            case "rank":
                source = _read_query(args.query_text, stdin)
                cli.cmd_rank(source, args.blood_type, args.never_donated_days)
            case "gen-synthetic":
                cli.cmd_gen_synthetic(args.n, args.output)
    except ValidationError as e:
        first = e.errors()[0]
        print(f"donormatch: config: {'.'.join(map(str, first['loc']))}: {first['msg']}", file=stderr)
        return EXIT_VALIDATION
    except DonorMatchError as e:
        _report(e, source, stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"donormatch: io: {e}", file=stderr)
        return EXIT_IO
    return EXIT_OK
