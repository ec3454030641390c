"""Classify every comment of a corpus, persisting results as they arrive."""

from __future__ import annotations

import json
import logging
import os
import time
from collections import deque
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from ..annotate import AnnotatedComment, attach_text
from ..corpus import Article, VocabPolicy, tokenize_clean
from .lexicon import PartyLexicon, classify_lexicon
from .prompt import PartyProgram, PromptError, build_prompt
from .remote import CompletionClient, classify_remote
from .results import GOLD, LEXICON, ClassificationError, ClassificationResult, Unclassified

log = logging.getLogger(__name__)


@dataclass
class ClassifyConfig:
    mode: str = "lexicon"
    lexicons: Sequence[PartyLexicon] = ()
    programs: Sequence[PartyProgram] = ()
    seed: Sequence[AnnotatedComment] = ()
    endpoint: CompletionClient | None = None
    template_id: str = "fewshot-v1"
    parallelism: int = 4
    max_retries: int = 2
    backoff: float = 1.0
    sleep: Callable[[float], None] = time.sleep
    vocab: VocabPolicy = field(default_factory=VocabPolicy)
    results_path: Path | None = None


@dataclass
class ClassificationRun:
    results: list[ClassificationResult]
    failures: list[Unclassified]
    sent: int = 0

    @property
    def summary(self) -> dict:
        return {"classified": len(self.results), "failed": len(self.failures), "sent": self.sent}


def _gold_result(a: AnnotatedComment) -> ClassificationResult:
    return ClassificationResult(a.comment_ref or "", a.stance, a.party, a.keywords, GOLD)


def read_results(path: Path) -> tuple[dict[str, ClassificationResult], dict[str, Unclassified]]:
    done: dict[str, ClassificationResult] = {}
    failed: dict[str, Unclassified] = {}
    if not path.exists():
        return done, failed
    for line in path.read_text("utf-8").split("\n"):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError:
            # a run killed mid-write can leave a torn last line
            log.warning("ignoring unreadable line in %s", path)
            continue
        ref = record["comment_ref"]
        if "error" in record:
            failed[ref] = Unclassified(ref, record["error"])
            done.pop(ref, None)
        else:
            done[ref] = ClassificationResult.from_dict(record)
            failed.pop(ref, None)
    return done, failed


def _line(record: ClassificationResult | Unclassified) -> str:
    return json.dumps(record.to_dict(), ensure_ascii=False, sort_keys=True) + "\n"


def classify_corpus(articles: Sequence[Article], config: ClassifyConfig) -> ClassificationRun:
    if config.mode not in ("lexicon", "remote"):
        raise ValueError(f"unknown classifier mode {config.mode!r}")
    comments = [(a, c) for a in articles for c in a.comments]
    known = {c.comment_id for _, c in comments}

    seed = attach_text(config.seed, articles)
    gold = {a.comment_ref: _gold_result(a) for a in seed if a.comment_ref in known}

    if config.mode == "remote":
        if config.endpoint is None or not config.programs or not seed:
            raise ValueError("remote mode needs an endpoint, party programs and a seed set")
    elif len({lex.party for lex in config.lexicons}) < 2:
        raise ValueError("lexicon mode needs lexicons for at least two parties")

    done: dict[str, ClassificationResult] = {}
    if config.results_path is not None and config.mode == "remote":
        # only endpoint answers are worth resuming; lexicon scores are cheap to redo
        previous, _ = read_results(config.results_path)
        done = {ref: r for ref, r in previous.items() if r.source not in (GOLD, LEXICON)}
    done.update(gold)

    pending = [(a, c) for a, c in comments if c.comment_id not in done]
    failures: dict[str, Unclassified] = {}
    sink = None
    if config.results_path is not None:
        mode = "a" if config.mode == "remote" else "w"
        sink = open(config.results_path, mode, encoding="utf-8")
        for ref in gold:
            sink.write(_line(gold[ref]))
        sink.flush()

    def record(outcome: ClassificationResult | Unclassified) -> None:
        if isinstance(outcome, Unclassified):
            failures[outcome.comment_ref] = outcome
        else:
            done[outcome.comment_ref] = outcome
        if sink is not None:
            sink.write(_line(outcome))
            sink.flush()
            os.fsync(sink.fileno())

    try:
        if config.mode == "lexicon":
            for _, comment in pending:
                tokens = tokenize_clean(comment.body_text, config.vocab)
                record(classify_lexicon(tokens, config.lexicons, comment.comment_id))
        else:
            _run_remote(pending, seed, config, record)
    finally:
        if sink is not None:
            sink.close()

    results = [done[c.comment_id] for _, c in comments if c.comment_id in done]
    if config.results_path is not None:
        # rewrite in corpus order so finished runs are byte-stable
        tmp = config.results_path.with_suffix(".tmp")
        tmp.write_text(
            "".join(_line(r) for r in results)
            + "".join(_line(failures[c.comment_id]) for _, c in comments
                      if c.comment_id in failures),
            "utf-8",
        )
        tmp.replace(config.results_path)
    ordered_failures = [failures[c.comment_id] for _, c in comments if c.comment_id in failures]
    return ClassificationRun(results, ordered_failures, sent=len(pending))


def _run_remote(pending, seed, config: ClassifyConfig, record) -> None:
    def work(comment) -> ClassificationResult | Unclassified:
        try:
            bundle = build_prompt(config.programs, seed, comment.body_text, config.template_id)
            return classify_remote(bundle, config.endpoint, comment.comment_id,
                                   config.max_retries, config.backoff, config.sleep)
        except (ClassificationError, PromptError) as exc:
            return Unclassified(comment.comment_id, str(exc))

    width = max(1, config.parallelism)
    with ThreadPoolExecutor(max_workers=width) as pool:
        window: deque[Future] = deque()
        queue = iter(pending)
        for _, comment in queue:
            window.append(pool.submit(work, comment))
            if len(window) >= width:
                record(window.popleft().result())
        while window:
            record(window.popleft().result())
