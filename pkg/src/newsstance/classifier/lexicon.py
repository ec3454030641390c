"""Deterministic term-matching baseline for party affinity."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from ..corpus import TokenizedText, word_tokens
from ..labels import PartyLabel, StanceLabel
from .results import LEXICON, ClassificationResult


@dataclass(frozen=True)
class PartyLexicon:
    """Terms for one party. Each phrase is kept as its lowercased token sequence."""

    party: PartyLabel
    terms: frozenset[str]
    phrases: tuple[tuple[str, tuple[str, ...]], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.party is PartyLabel.INDETERMINADO:
            raise ValueError("lexicon party must not be Indeterminado")
        if not self.terms:
            raise ValueError(f"lexicon for {self.party.code} is empty")
        if not self.phrases:
            object.__setattr__(self, "phrases", _phrases(self.terms, frozenset()))

    @classmethod
    def from_terms(cls, party: PartyLabel, terms: Iterable[str],
                   stopwords: frozenset[str] = frozenset()) -> PartyLexicon:
        """Phrases lose their stopwords so they line up with cleaned comment tokens."""
        clean = frozenset(t.strip() for t in terms if t.strip())
        return cls(party, clean, _phrases(clean, stopwords))


def _phrases(terms: Iterable[str], stopwords: frozenset[str]) -> tuple[tuple[str, tuple[str, ...]], ...]:
    out = []
    for term in sorted(terms):
        toks = tuple(t.lower() for t in word_tokens(term) if t.lower() not in stopwords)
        if toks:
            out.append((term, toks))
    return tuple(out)


def read_lexicon(path: str | Path, stopwords: frozenset[str] = frozenset()) -> PartyLexicon:
    """``<CODE>.txt`` with one term or phrase per line; ``#`` lines are comments."""
    path = Path(path)
    lines = path.read_text("utf-8").splitlines()
    return PartyLexicon.from_terms(
        PartyLabel.parse(path.stem), (l for l in lines if not l.lstrip().startswith("#")),
        stopwords,
    )


def load_lexicons(directory: str | Path, stopwords: frozenset[str] = frozenset()) -> list[PartyLexicon]:
    return [read_lexicon(p, stopwords) for p in sorted(Path(directory).glob("*.txt"))]


def match_positions(tokens: Sequence[str], phrase: Sequence[str]) -> list[int]:
    """Start offsets where ``phrase`` occurs as a contiguous run of ``tokens``."""
    n = len(phrase)
    return [i for i in range(len(tokens) - n + 1) if tuple(tokens[i:i + n]) == tuple(phrase)]


def score_lexicons(comment: TokenizedText,
                   lexicons: Sequence[PartyLexicon]) -> dict[PartyLabel, list[tuple[int, str]]]:
    """Per party, every (position, term) match in the comment."""
    lowered = [t.lower() for t in comment.tokens]
    hits: dict[PartyLabel, list[tuple[int, str]]] = {}
    for lexicon in lexicons:
        found = hits.setdefault(lexicon.party, [])
        for term, phrase in lexicon.phrases:
            found.extend((pos, term) for pos in match_positions(lowered, phrase))
    return hits


def _ordered_terms(matches: Iterable[tuple[int, str]]) -> tuple[str, ...]:
    out: list[str] = []
    for _, term in sorted(matches):
        if term not in out:
            out.append(term)
    return tuple(out)


def classify_lexicon(comment: TokenizedText, lexicons: Sequence[PartyLexicon],
                     comment_ref: str = "") -> ClassificationResult:
    """Party with the strictly highest match count wins; ties and zero go to Indeterminado.

    Stance is always Información: the baseline does not infer it.
    """
    parties = {lex.party for lex in lexicons}
    if len(parties) < 2:
        raise ValueError("lexicons must cover at least two parties")
    hits = score_lexicons(comment, lexicons)
    scores = {party: len(m) for party, m in hits.items()}
    best = max(scores.values())
    leaders = [p for p, s in scores.items() if s == best]
    if best >= 1 and len(leaders) == 1:
        party = leaders[0]
        keywords = _ordered_terms(hits[party])
    else:
        party = PartyLabel.INDETERMINADO
        keywords = _ordered_terms(m for matches in hits.values() for m in matches)
    return ClassificationResult(
        comment_ref=comment_ref,
        stance=StanceLabel.INFORMACION,
        party=party,
        keywords=keywords,
        source=LEXICON,
    )
