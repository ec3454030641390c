"""Aggregations over classification results: distributions, interest matrices, term lists."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .classifier import ClassificationResult, PartyProgram
from .corpus import Article, TokenizedText
from .labels import PartyLabel


class AnalysisError(ValueError):
    pass


@dataclass
class InterestMatrix:
    rows: list[str]
    columns: list[str]
    counts: list[list[int]]
    flagged: set[str] = field(default_factory=set)

    def __post_init__(self):
        if len(self.counts) != len(self.rows) or any(len(r) != len(self.columns) for r in self.counts):
            raise ValueError("counts grid does not match row/column labels")
        if any(v < 0 for r in self.counts for v in r):
            raise ValueError("counts must be non-negative")

    @property
    def shares(self) -> list[list[float]]:
        out = []
        for row in self.counts:
            total = sum(row)
            out.append([v / total if total else 0.0 for v in row])
        return out

    def count(self, row: str, column: str) -> int:
        return self.counts[self.rows.index(row)][self.columns.index(column)]


def affinity_distribution(results: Sequence[ClassificationResult]) -> dict[PartyLabel, int]:
    """Counts for every party label (zeros included), in enum order."""
    if not results:
        raise AnalysisError("no results to aggregate")
    tally = Counter(r.party for r in results)
    return {party: tally.get(party, 0) for party in PartyLabel}


def topic_interest(results: Sequence[ClassificationResult], articles: Sequence[Article]) -> InterestMatrix:
    category_of: dict[str, str] = {}
    for article in articles:
        for comment in article.comments:
            category_of.setdefault(comment.comment_id, article.category_label)
    columns = sorted({a.category_label for a in articles})
    rows = [p.code for p in PartyLabel]
    counts = [[0] * len(columns) for _ in rows]
    col_index = {c: i for i, c in enumerate(columns)}
    row_index = {p: i for i, p in enumerate(PartyLabel)}
    for r in results:
        category = category_of.get(r.comment_ref)
        if category is None:
            raise AnalysisError(f"result refers to unknown comment {r.comment_ref!r}")
        counts[row_index[r.party]][col_index[category]] += 1
    return InterestMatrix(rows, columns, counts, flagged={PartyLabel.INDETERMINADO.code})


def program_topics(programs: Sequence[PartyProgram]) -> InterestMatrix:
    for p in programs:
        if not p.declared_topics:
            raise AnalysisError(f"program for {p.party.code} declares no topics")
    columns = sorted({t for p in programs for t in p.declared_topics})
    order = list(PartyLabel)
    ordered = sorted(programs, key=lambda p: order.index(p.party))
    counts = []
    for p in ordered:
        tally = Counter(p.declared_topics)
        counts.append([tally.get(c, 0) for c in columns])
    return InterestMatrix([p.party.code for p in ordered], columns, counts)


@dataclass(frozen=True)
class AffinityGroup:
    name: str
    members: frozenset[PartyLabel]

    def __post_init__(self):
        if not self.members:
            raise ValueError(f"group {self.name!r} has no members")
        if PartyLabel.INDETERMINADO in self.members:
            raise ValueError("Indeterminado cannot belong to an affinity group")


DistinctiveTermReport = dict[str, list[tuple[str, int]]]


def _check_grouping(grouping: Sequence[AffinityGroup]) -> None:
    seen: dict[PartyLabel, str] = {}
    names = set()
    for group in grouping:
        if group.name in names:
            raise AnalysisError(f"duplicate group name {group.name!r}")
        names.add(group.name)
        for party in group.members:
            if party in seen:
                raise AnalysisError(
                    f"{party.code} is in both {seen[party]!r} and {group.name!r}"
                )
            seen[party] = group.name


def group_term_counts(results: Sequence[ClassificationResult], grouping: Sequence[AffinityGroup],
                      tokens: Mapping[str, TokenizedText]) -> dict[str, Counter[str]]:
    _check_grouping(grouping)
    group_of = {p: g.name for g in grouping for p in g.members}
    counts: dict[str, Counter[str]] = {g.name: Counter() for g in grouping}
    for r in results:
        name = group_of.get(r.party)
        if name is None:
            continue
        doc = tokens.get(r.comment_ref)
        if doc is None:
            raise AnalysisError(f"no tokens for comment {r.comment_ref!r}")
        counts[name].update(t.lower() for t in doc.tokens)
    return counts


def distinctive_terms(results: Sequence[ClassificationResult], grouping: Sequence[AffinityGroup],
                      tokens: Mapping[str, TokenizedText], mode: str = "strict",
                      prior: float = 10.0, z_min: float = 1.96) -> DistinctiveTermReport:
    """Terms owned by one group.

    Terms are compared lowercased. ``strict``: terms used by the group and
    by no other group, ranked by in-group frequency then alphabetically.
    ``log_odds``: weighted log-odds with an informative Dirichlet prior
    (group vs. all other groups), terms with z-score above ``z_min`` ranked
    by z.
    """
    counts = group_term_counts(results, grouping, tokens)
    if mode == "strict":
        report: DistinctiveTermReport = {}
        for name, tally in counts.items():
            elsewhere = set().union(*(set(c) for n, c in counts.items() if n != name))
            own = [(t, n) for t, n in tally.items() if t not in elsewhere]
            report[name] = sorted(own, key=lambda tn: (-tn[1], tn[0]))
        return report
    if mode == "log_odds":
        return _log_odds(counts, prior, z_min)
    raise AnalysisError(f"unknown ranking mode {mode!r}")


def _log_odds(counts: dict[str, Counter[str]], prior: float, z_min: float) -> DistinctiveTermReport:
    total: Counter[str] = Counter()
    for tally in counts.values():
        total.update(tally)
    n_all = sum(total.values())
    report: DistinctiveTermReport = {}
    for name, tally in counts.items():
        n_g = sum(tally.values())
        n_r = n_all - n_g
        scored = []
        for term, y_g in tally.items():
            y_r = total[term] - y_g
            alpha = prior * total[term] / n_all
            rest_g = n_g + prior - y_g - alpha
            rest_r = n_r + prior - y_r - alpha
            if rest_g <= 0 or rest_r <= 0:
                continue  # degenerate vocabulary: no contrast to measure
            delta = math.log((y_g + alpha) / rest_g) - math.log((y_r + alpha) / rest_r)
            z = delta / math.sqrt(1 / (y_g + alpha) + 1 / (y_r + alpha))
            if z > z_min:
                scored.append((-z, term, y_g))
        report[name] = [(term, y) for _, term, y in sorted(scored)]
    return report


def tokens_by_comment(articles: Iterable[Article], tokenize) -> dict[str, TokenizedText]:
    return {c.comment_id: tokenize(c.body_text) for a in articles for c in a.comments}
