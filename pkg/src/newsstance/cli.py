"""Command-line entry point: ``newsstance <subcommand> --config run.yaml``.

Exit codes: 0 success, 1 usage/config error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import shutil
import sys
from dataclasses import replace
from datetime import date
from importlib import resources
from pathlib import Path

from . import pipeline
from .config import ConfigError, RunConfig, load_config
from .corpus import CorpusError
from .feeds import FeedError
from .annotate import AnnotationError
from .analysis import AnalysisError
from .classifier import PromptError

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

log = logging.getLogger("newsstance")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _iso_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO date: {text!r}") from None


def _common(sub: argparse.ArgumentParser, fetch: bool = False) -> None:
    sub.add_argument("--config", "-c", default="newsstance.yaml", help="run configuration (YAML)")
    sub.add_argument("--out", type=Path, help="output directory (overrides output_dir)")
    sub.add_argument("-v", "--verbose", action="store_true")
    if fetch:
        sub.add_argument("--since", type=_iso_date, help="first publication day kept (YYYY-MM-DD)")
        sub.add_argument("--until", type=_iso_date, help="last publication day kept (YYYY-MM-DD)")
        sub.add_argument("--min-interval", type=float, help="seconds between requests to one host")
        sub.add_argument("--timeout", type=float, help="per-request timeout in seconds")
        sub.add_argument("--retries", type=int, help="retries on 5xx/timeouts")
        sub.add_argument("--no-robots", action="store_true", help="ignore robots.txt")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="newsstance", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    help_text = {
        "fetch-feeds": "download category feeds and keep items inside the date window",
        "scrape": "fetch each feed item's page and extract article text and comments",
        "build-corpus": "merge scraped articles into corpus.xml (and corpus.jsonl)",
        "sample-annotate": "write an annotation template for a stratified seed sample",
        "import-annotations": "import a filled annotation table as gold labels",
        "classify": "assign stance/party to every comment (lexicon or remote mode)",
        "analyze": "aggregate results into distributions, matrices and term lists",
        "report": "write one table file per analysis product",
        "run-all": "run every stage in order",
    }
    for name, text in help_text.items():
        sub = subs.add_parser(name, help=text, description=text)
        _common(sub, fetch=name in ("fetch-feeds", "scrape", "run-all"))
        if name in ("classify", "run-all"):
            sub.add_argument("--mode", choices=["lexicon", "remote"])
        if name == "import-annotations":
            sub.add_argument("--file", type=Path, help="filled annotation TSV")
        if name == "sample-annotate":
            sub.add_argument("-n", type=int, dest="seed_size", help="seed-set size (default 50)")
            sub.add_argument("--seed", type=int, help="sampling seed")
        if name in ("report", "run-all"):
            sub.add_argument("--format", dest="table_format",
                             choices=["delimited", "structured-record"])
    demo = subs.add_parser("init-demo", help="copy the bundled offline demo into a directory")
    demo.add_argument("directory", type=Path)
    return parser


def _config(args) -> RunConfig:
    cfg = load_config(args.config)
    overrides = {
        "output_dir": args.out,
        "since": getattr(args, "since", None),
        "until": getattr(args, "until", None),
        "mode": getattr(args, "mode", None),
        "seed_size": getattr(args, "seed_size", None),
        "seed": getattr(args, "seed", None),
        "table_format": getattr(args, "table_format", None),
    }
    cfg = cfg.with_overrides(**overrides)
    policy_changes = {
        "min_interval_per_host": getattr(args, "min_interval", None),
        "timeout": getattr(args, "timeout", None),
        "max_retries": getattr(args, "retries", None),
    }
    policy_changes = {k: v for k, v in policy_changes.items() if v is not None}
    if getattr(args, "no_robots", False):
        policy_changes["respect_robots"] = False
    if policy_changes:
        try:
            cfg = replace(cfg, fetch=replace(cfg.fetch, **policy_changes))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return cfg.validate()


def _setup_logging(out_dir: Path, verbose: bool) -> logging.Handler:
    out_dir.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(out_dir / pipeline.RUN_LOG, encoding="utf-8")
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    return handler


def init_demo(directory: Path) -> None:
    source = resources.files("newsstance.data").joinpath("demo")
    with resources.as_file(source) as src:
        shutil.copytree(src, directory, dirs_exist_ok=True)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "init-demo":
        init_demo(args.directory)
        print(f"demo copied to {args.directory}; run: newsstance run-all -c {args.directory / 'config.yaml'}")
        return EXIT_OK
    try:
        cfg = _config(args)
    except ConfigError as exc:
        print(f"newsstance: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    handler = _setup_logging(cfg.output_dir, args.verbose)
    try:
        if args.command == "run-all":
            reports = pipeline.run_all(cfg)
        elif args.command == "import-annotations":
            reports = [pipeline.import_annotation_file(cfg, args.file)]
        else:
            reports = [pipeline.STAGES[args.command](cfg)]
        for rep in reports:
            log.info("%s", rep.line())
            for warning in rep.warnings:
                log.warning("%s: %s", rep.stage, warning)
    except pipeline.MissingArtifact as exc:
        print(f"newsstance: {exc}", file=sys.stderr)
        log.error("%s", exc)
        return EXIT_RUNTIME
    except (pipeline.StageError, CorpusError, FeedError, AnnotationError, AnalysisError,
            PromptError, ValueError, OSError) as exc:
        print(f"newsstance: {args.command} failed: {exc}", file=sys.stderr)
        log.exception("%s failed", args.command)
        return EXIT_RUNTIME
    finally:
        logging.getLogger().removeHandler(handler)
        handler.close()
    for rep in reports:
        print(rep.line())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
