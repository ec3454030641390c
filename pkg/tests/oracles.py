"""Brute-force reference implementations used to cross-check the package.

They deliberately avoid the package's own helpers: tokenization scans
characters one by one, document frequency recounts by nested loops.
"""

from __future__ import annotations

import unicodedata


def tokens_oracle(text: str, stopwords: set[str]) -> list[str]:
    text = unicodedata.normalize("NFC", text)
    out, current = [], ""
    for ch in text + " ":
        if ch.isalnum():
            current += ch
            continue
        if current and current.lower() not in stopwords:
            out.append(current)
        current = ""
    return out


def df_oracle(docs: list[list[str]]) -> dict[str, float]:
    vocab = sorted({t for d in docs for t in d})
    return {t: sum(1 for d in docs if t in d) / len(docs) for t in vocab}


def prune_oracle(docs: list[list[str]], lo: float, hi: float) -> list[list[str]]:
    df = df_oracle(docs)
    keep = {t for t, f in df.items() if lo <= f <= hi}
    return [[t for t in d if t in keep] for d in docs]


def lexicon_score_oracle(tokens: list[str], lexicon: dict[str, list[str]],
                         stopwords: set[str] = frozenset()) -> dict[str, int]:
    """Per party, number of (position, term) matches; terms may be multi-word."""
    low = [t.lower() for t in tokens]
    scores = {}
    for party, terms in lexicon.items():
        n = 0
        for term in terms:
            words = [w for w in tokens_oracle(term.lower(), stopwords)]
            if not words:
                continue
            for i in range(len(low)):
                if low[i:i + len(words)] == words:
                    n += 1
        scores[party] = n
    return scores


def lexicon_winner_oracle(tokens: list[str], lexicon: dict[str, list[str]],
                          stopwords: set[str] = frozenset()) -> str:
    scores = lexicon_score_oracle(tokens, lexicon, stopwords)
    best = max(scores.values())
    winners = [p for p, s in scores.items() if s == best]
    if best == 0 or len(winners) > 1:
        return "Indeterminado"
    return winners[0]


def distinctive_oracle(group_docs: dict[str, list[list[str]]]) -> dict[str, set[str]]:
    vocab = {g: {t.lower() for d in docs for t in d} for g, docs in group_docs.items()}
    out = {}
    for g, terms in vocab.items():
        out[g] = {t for t in terms if all(t not in vocab[o] for o in vocab if o != g)}
    return out
