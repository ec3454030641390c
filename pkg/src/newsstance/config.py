"""Run configuration loaded from YAML.

Example::

    output_dir: out
    sources:
      - {base_url: "https://www.agoravox.fr", rubrique_id: 31, category_label: "Política francesa"}
    window: {since: 2024-06-24, until: 2024-06-27}
    fetch: {min_interval: 1.0, timeout: 20, max_retries: 3, backoff_base: 1.0,
            respect_robots: true, workers: 2, fixture_dir: null}
    vocab: {min_doc_coverage: 0.0, max_doc_coverage: 1.0, stopwords: null}
    classifier:
      mode: lexicon            # or remote
      lexicons_dir: lexicons
      programs_dir: programs
      annotations: null        # filled annotation table imported by run-all
      seed_size: 50
      seed: 0
      template_id: fewshot-v1
      endpoint: {url: null, model: null, api_key_env: NEWSSTANCE_API_KEY,
                 parallelism: 4, timeout: 60, max_retries: 2}
    analysis: {term_mode: strict}
    grouping:
      Izquierda: [LFI, PS]
      Derecha: [RN, LR]
      LREM: [LREM]
    report: {format: delimited}

Relative paths are resolved against the config file's directory. The
endpoint credential is never read from this file.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from datetime import date
from pathlib import Path

import yaml

from .analysis import AffinityGroup
from .corpus import VocabPolicy, load_stopwords
from .feeds import FeedError, FeedSource
from .labels import LabelError, PartyLabel
from .scraper import FetchPolicy


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class EndpointSettings:
    url: str | None = None
    model: str | None = None
    api_key_env: str = "NEWSSTANCE_API_KEY"
    parallelism: int = 4
    timeout: float = 60.0
    max_retries: int = 2


@dataclass
class RunConfig:
    output_dir: Path
    sources: list[FeedSource] = field(default_factory=list)
    since: date | None = None
    until: date | None = None
    fetch: FetchPolicy = field(default_factory=FetchPolicy)
    workers: int = 1
    fixture_dir: Path | None = None
    vocab: VocabPolicy = field(default_factory=VocabPolicy)
    mode: str = "lexicon"
    lexicons_dir: Path | None = None
    programs_dir: Path | None = None
    annotations: Path | None = None
    seed_size: int = 50
    seed: int = 0
    template_id: str = "fewshot-v1"
    endpoint: EndpointSettings = field(default_factory=EndpointSettings)
    grouping: list[AffinityGroup] = field(default_factory=list)
    term_mode: str = "strict"
    table_format: str = "delimited"

    def validate(self) -> RunConfig:
        if self.since and self.until and self.since > self.until:
            raise ConfigError(f"window since {self.since} is after until {self.until}")
        if self.mode not in ("lexicon", "remote"):
            raise ConfigError(f"classifier mode must be lexicon or remote, got {self.mode!r}")
        if self.mode == "remote" and not (self.endpoint.url and self.endpoint.model):
            raise ConfigError("remote mode needs classifier.endpoint.url and .model")
        if self.workers < 1:
            raise ConfigError("fetch.workers must be >= 1")
        if self.table_format not in ("delimited", "structured-record"):
            raise ConfigError(f"unknown report format {self.table_format!r}")
        if self.output_dir.exists() and not os.access(self.output_dir, os.W_OK):
            raise ConfigError(f"output directory {self.output_dir} is not writable")
        return self

    def with_overrides(self, **changes) -> RunConfig:
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def _date(value, name: str) -> date | None:
    if value is None or isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value))
    except ValueError:
        raise ConfigError(f"{name} is not an ISO date: {value!r}") from None


def _path(base: Path, value) -> Path | None:
    if value in (None, ""):
        return None
    path = Path(os.path.expanduser(str(value)))
    return path if path.is_absolute() else base / path


def parse_grouping(raw: dict) -> list[AffinityGroup]:
    groups = []
    for name, members in (raw or {}).items():
        try:
            parties = frozenset(PartyLabel.parse(str(m)) for m in members)
            groups.append(AffinityGroup(str(name), parties))
        except (LabelError, ValueError, TypeError) as exc:
            raise ConfigError(f"grouping {name!r}: {exc}") from None
    return groups


def config_from_dict(raw: dict, base: Path) -> RunConfig:
    raw = raw or {}
    try:
        sources = [
            FeedSource(s["base_url"], int(s["rubrique_id"]), str(s["category_label"]))
            for s in raw.get("sources", [])
        ]
    except (KeyError, TypeError, ValueError, FeedError) as exc:
        raise ConfigError(f"bad feed source: {exc}") from None
    window = raw.get("window") or {}
    fetch = raw.get("fetch") or {}
    vocab = raw.get("vocab") or {}
    clf = raw.get("classifier") or {}
    endpoint = clf.get("endpoint") or {}
    try:
        policy = FetchPolicy(
            min_interval_per_host=float(fetch.get("min_interval", 1.0)),
            timeout=float(fetch.get("timeout", 20.0)),
            max_retries=int(fetch.get("max_retries", 3)),
            backoff_base=float(fetch.get("backoff_base", 1.0)),
            user_agent=str(fetch.get("user_agent", FetchPolicy.user_agent)),
            respect_robots=bool(fetch.get("respect_robots", True)),
        )
        stop_path = _path(base, vocab.get("stopwords"))
        vocab_policy = VocabPolicy(
            min_doc_coverage=float(vocab.get("min_doc_coverage", 0.0)),
            max_doc_coverage=float(vocab.get("max_doc_coverage", 1.0)),
            stopword_list=load_stopwords(stop_path),
        )
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from None
    return RunConfig(
        output_dir=_path(base, raw.get("output_dir", "out")),
        sources=sources,
        since=_date(window.get("since"), "window.since"),
        until=_date(window.get("until"), "window.until"),
        fetch=policy,
        workers=int(fetch.get("workers", 1)),
        fixture_dir=_path(base, fetch.get("fixture_dir")),
        vocab=vocab_policy,
        mode=str(clf.get("mode", "lexicon")),
        lexicons_dir=_path(base, clf.get("lexicons_dir")),
        programs_dir=_path(base, clf.get("programs_dir")),
        annotations=_path(base, clf.get("annotations")),
        seed_size=int(clf.get("seed_size", 50)),
        seed=int(clf.get("seed", 0)),
        template_id=str(clf.get("template_id", "fewshot-v1")),
        endpoint=EndpointSettings(
            url=endpoint.get("url"),
            model=endpoint.get("model"),
            api_key_env=str(endpoint.get("api_key_env", EndpointSettings.api_key_env)),
            parallelism=int(endpoint.get("parallelism", 4)),
            timeout=float(endpoint.get("timeout", 60.0)),
            max_retries=int(endpoint.get("max_retries", 2)),
        ),
        grouping=parse_grouping(raw.get("grouping") or {}),
        term_mode=str((raw.get("analysis") or {}).get("term_mode", "strict")),
        table_format=str((raw.get("report") or {}).get("format", "delimited")),
    )


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text("utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from None
    if raw is not None and not isinstance(raw, dict):
        raise ConfigError(f"config {path} must be a mapping")
    return config_from_dict(raw or {}, path.resolve().parent)
