"""Tokenization, stopword removal and document-frequency pruning."""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

_TOKEN_RE = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class TokenizedText:
    original: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class VocabPolicy:
    min_doc_coverage: float = 0.0
    max_doc_coverage: float = 1.0
    stopword_list: frozenset[str] = field(default_factory=frozenset)
    language: str = "fr"

    def __post_init__(self):
        if not 0.0 <= self.min_doc_coverage <= self.max_doc_coverage <= 1.0:
            raise ValueError(
                "need 0 <= min_doc_coverage <= max_doc_coverage <= 1, got "
                f"{self.min_doc_coverage}, {self.max_doc_coverage}"
            )
        object.__setattr__(
            self, "stopword_list", frozenset(w.lower() for w in self.stopword_list)
        )


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a one-word-per-line list; ``#`` starts a comment. Defaults to the bundled French list."""
    if path is None:
        text = resources.files("newsstance.data").joinpath("stopwords_fr.txt").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(unicodedata.normalize("NFC", line).lower())
    return frozenset(words)


def word_tokens(text: str) -> list[str]:
    """Maximal runs of Unicode letters/digits, after NFC composition."""
    return _TOKEN_RE.findall(unicodedata.normalize("NFC", text))


def tokenize_clean(text: str, policy: VocabPolicy) -> TokenizedText:
    stop = policy.stopword_list
    tokens = tuple(t for t in word_tokens(text) if t.lower() not in stop)
    return TokenizedText(original=text, tokens=tokens)


@dataclass
class PruneResult:
    docs: list[TokenizedText]
    dropped_low: set[str]
    dropped_high: set[str]


def document_frequency(docs: list[TokenizedText]) -> dict[str, float]:
    counts: Counter[str] = Counter()
    for doc in docs:
        counts.update(set(doc.tokens))
    return {token: n / len(docs) for token, n in counts.items()}


def prune_vocabulary(docs: list[TokenizedText], policy: VocabPolicy) -> PruneResult:
    if not docs:
        raise ValueError("prune_vocabulary needs at least one document")
    df = document_frequency(docs)
    low = {t for t, f in df.items() if f < policy.min_doc_coverage}
    high = {t for t, f in df.items() if f > policy.max_doc_coverage}
    dropped = low | high
    pruned = [
        TokenizedText(d.original, tuple(t for t in d.tokens if t not in dropped)) for d in docs
    ]
    return PruneResult(pruned, low, high)
