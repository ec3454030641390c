"""Seed-set sampling and the tab-separated annotation table."""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Article, comment_index
from .labels import LabelError, PartyLabel, StanceLabel

ID_COL = "ID"
TITLE_COL = "Título"
USER_COL = "Usuario"
EXCERPT_COL = "Extracto"
STANCE_COL = "Tipo"
PARTY_COL = "Inclinación"
KEYWORDS_COL = "Palabras_Clave"
TEMPLATE_COLUMNS = [ID_COL, TITLE_COL, USER_COL, EXCERPT_COL, STANCE_COL, PARTY_COL, KEYWORDS_COL]
REQUIRED_COLUMNS = [USER_COL, STANCE_COL, PARTY_COL, KEYWORDS_COL]
EXCERPT_CHARS = 280


class AnnotationError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


@dataclass(frozen=True)
class AnnotatedComment:
    comment_ref: str | None
    article_title: str
    author: str
    stance: StanceLabel
    party: PartyLabel
    keywords: tuple[str, ...] = ()
    # comment body, filled from the corpus when the ref resolves
    text: str = field(default="", compare=False)


def sample_seed_set(articles: Sequence[Article], n: int, seed: int) -> list[str]:
    """Pick ``n`` comment ids, one per article per round, articles in corpus order.

    The comments within each article are shuffled with ``seed``; later rounds
    only visit articles that still have unpicked comments.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    pools = [[c.comment_id for c in a.comments] for a in articles]
    if not any(pools):
        raise ValueError("corpus has no comments to sample")
    rng = random.Random(seed)
    for pool in pools:
        rng.shuffle(pool)
    picked: list[str] = []
    seen: set[str] = set()
    depth = 0
    while len(picked) < n and any(len(p) > depth for p in pools):
        for pool in pools:
            if len(picked) >= n:
                break
            if depth < len(pool) and pool[depth] not in seen:
                seen.add(pool[depth])
                picked.append(pool[depth])
        depth += 1
    return picked


def _excerpt(text: str) -> str:
    flat = " ".join(text.split())
    return flat if len(flat) <= EXCERPT_CHARS else flat[: EXCERPT_CHARS - 1] + "…"


def export_annotation_template(refs: Iterable[str], articles: Sequence[Article]) -> str:
    index = comment_index(articles)
    out = io.StringIO()
    writer = csv.writer(out, delimiter="\t", lineterminator="\n")
    writer.writerow(TEMPLATE_COLUMNS)
    for ref in refs:
        if ref not in index:
            raise AnnotationError(f"comment ref {ref!r} not found in corpus")
        article, comment = index[ref]
        writer.writerow([ref, article.title, comment.author, _excerpt(comment.body_text), "", "", ""])
    return out.getvalue()


def split_keywords(cell: str) -> tuple[str, ...]:
    return tuple(k.strip() for k in cell.split(",") if k.strip())


def parse_annotations(text: str) -> list[AnnotatedComment]:
    reader = csv.reader(io.StringIO(text), delimiter="\t")
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise AnnotationError("annotation file is empty") from None
    # "Palabras Clave" (with a space) is accepted as well
    header = [KEYWORDS_COL if h == "Palabras Clave" else h for h in header]
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise AnnotationError(f"missing column(s): {', '.join(missing)}")
    pos = {name: i for i, name in enumerate(header)}

    def cell(row: list[str], name: str) -> str:
        i = pos.get(name)
        return row[i].strip() if i is not None and i < len(row) else ""

    out = []
    for row in reader:
        line = reader.line_num
        if not any(c.strip() for c in row):
            continue
        try:
            stance = StanceLabel.parse(cell(row, STANCE_COL))
            party = PartyLabel.parse(cell(row, PARTY_COL))
        except LabelError as exc:
            raise AnnotationError(str(exc), line) from None
        out.append(
            AnnotatedComment(
                comment_ref=cell(row, ID_COL) or None,
                article_title=cell(row, TITLE_COL),
                author=cell(row, USER_COL),
                stance=stance,
                party=party,
                keywords=split_keywords(cell(row, KEYWORDS_COL)),
                text=cell(row, EXCERPT_COL),
            )
        )
    return out


def import_annotations(path: str | Path) -> list[AnnotatedComment]:
    return parse_annotations(Path(path).read_text("utf-8-sig"))


def attach_text(annotations: Iterable[AnnotatedComment], articles: Sequence[Article]) -> list[AnnotatedComment]:
    """Replace excerpts with full comment bodies where the ref resolves."""
    index = comment_index(articles)
    out = []
    for a in annotations:
        hit = index.get(a.comment_ref) if a.comment_ref else None
        if hit is not None:
            a = AnnotatedComment(a.comment_ref, a.article_title or hit[0].title, a.author,
                                 a.stance, a.party, a.keywords, hit[1].body_text)
        out.append(a)
    return out
