from __future__ import annotations

import enum
import json
import threading
from pathlib import Path

from .model import Article
from .xmlio import parse_corpus, serialize_corpus


class UpsertOutcome(enum.Enum):
    STORED = "stored"
    DUPLICATE = "duplicate"
    UPDATED = "updated"


class CorpusStore:
    """Articles keyed by guid, with a revision log for in-place updates.

    Writes go through a lock (single writer); ``save`` persists the corpus XML
    and, next to it, ``revisions.jsonl``.
    """

    def __init__(self, articles: list[Article] | None = None):
        self._articles: dict[str, Article] = {}
        self.revisions: list[dict] = []
        self._lock = threading.Lock()
        for article in articles or []:
            self.upsert(article)

    def __len__(self) -> int:
        return len(self._articles)

    def __contains__(self, guid: str) -> bool:
        return guid in self._articles

    def get(self, guid: str) -> Article | None:
        return self._articles.get(guid)

    def articles(self) -> list[Article]:
        return list(self._articles.values())

    def upsert(self, article: Article) -> UpsertOutcome:
        with self._lock:
            existing = self._articles.get(article.guid)
            if existing is None:
                self._articles[article.guid] = article
                return UpsertOutcome.STORED
            if existing == article:
                return UpsertOutcome.DUPLICATE
            old, new = existing.to_dict(), article.to_dict()
            changed = sorted(k for k in new if old.get(k) != new[k])
            self.revisions.append({"guid": article.guid, "changed": changed})
            self._articles[article.guid] = article
            return UpsertOutcome.UPDATED

    @classmethod
    def load(cls, path: str | Path) -> CorpusStore:
        path = Path(path)
        store = cls(parse_corpus(path.read_bytes()) if path.exists() else [])
        log = path.with_name("revisions.jsonl")
        if log.exists():
            store.revisions = [json.loads(l) for l in log.read_text("utf-8").split("\n") if l]
        return store

    def save(self, path: str | Path) -> None:
        path = Path(path)
        with self._lock:
            path.write_bytes(serialize_corpus(self._articles.values()))
            log = path.with_name("revisions.jsonl")
            if self.revisions or log.exists():
                log.write_text(
                    "".join(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n"
                            for r in self.revisions),
                    "utf-8",
                )
