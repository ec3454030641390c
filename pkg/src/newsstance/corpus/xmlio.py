"""Corpus XML (NOTICIA/TITULO/...) and the line-delimited JSON export."""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from dataclasses import replace
from datetime import date, datetime
from typing import Iterable

from ..scraper.extract import CommentRecord
from .model import Article

ROOT = "NOTICIAS"

_XML_ILLEGAL = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f\ufffe\uffff\ud800-\udfff]")


class CorpusError(ValueError):
    pass


def normalize_text(text: str) -> str:
    """Make text representable in XML 1.0 without change on re-read."""
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return _XML_ILLEGAL.sub("", text)


def _norm_opt(text: str | None) -> str | None:
    return None if text is None else normalize_text(text)


def _author(name: str) -> str:
    # a name made only of unrepresentable characters would become empty
    clean = normalize_text(name)
    return clean if clean.strip() else "anonyme"


def normalize_article(article: Article) -> Article:
    comments = tuple(
        replace(
            c,
            comment_id=normalize_text(c.comment_id),
            author=_author(c.author),
            body_text=normalize_text(c.body_text),
            reply_to_author=_norm_opt(c.reply_to_author),
            permalink=_norm_opt(c.permalink),
        )
        for c in article.comments
    )
    return replace(
        article,
        guid=normalize_text(article.guid),
        title=normalize_text(article.title),
        category_label=normalize_text(article.category_label),
        summary=normalize_text(article.summary),
        comments=comments,
    )


def serialize_corpus(articles: Iterable[Article]) -> bytes:
    root = ET.Element(ROOT)
    for article in articles:
        article = normalize_article(article)
        noticia = ET.SubElement(root, "NOTICIA", {"guid": article.guid})
        ET.SubElement(noticia, "TITULO").text = article.title
        ET.SubElement(noticia, "CATEGORIA").text = article.category_label
        ET.SubElement(noticia, "FECHA").text = article.published_date.isoformat()
        ET.SubElement(noticia, "RESUMEN").text = article.summary
        comentarios = ET.SubElement(noticia, "COMENTARIOS")
        for c in article.comments:
            attrs = {"id": c.comment_id, "usuario": c.author}
            if c.posted_at is not None:
                attrs["fecha"] = c.posted_at.isoformat()
            if c.star_rating is not None:
                attrs["estrellas"] = str(c.star_rating)
            if c.vote_count is not None:
                attrs["votos"] = str(c.vote_count)
            if c.reply_to_author is not None:
                attrs["responde_a"] = c.reply_to_author
            if c.permalink is not None:
                attrs["enlace"] = c.permalink
            ET.SubElement(comentarios, "COMENTARIO", attrs).text = c.body_text
    ET.indent(root, space="  ")
    body = ET.tostring(root, encoding="unicode")
    return ("<?xml version='1.0' encoding='utf-8'?>\n" + body + "\n").encode("utf-8")


def _int_attr(elem: ET.Element, name: str, index: int) -> int | None:
    value = elem.get(name)
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise CorpusError(f"article {index}: bad {name} value {value!r}") from None


def parse_corpus(document: bytes) -> list[Article]:
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise CorpusError(f"malformed corpus XML: {exc}") from exc
    if root.tag != ROOT:
        raise CorpusError(f"expected root element {ROOT}, found {root.tag}")
    articles = []
    for index, noticia in enumerate(root.findall("NOTICIA")):
        def required(tag: str) -> ET.Element:
            found = noticia.find(tag)
            if found is None:
                raise CorpusError(f"article {index}: missing <{tag}>")
            return found

        guid = noticia.get("guid")
        if not guid:
            raise CorpusError(f"article {index}: missing guid attribute")
        try:
            published = date.fromisoformat((required("FECHA").text or "").strip())
        except ValueError:
            raise CorpusError(f"article {index}: FECHA is not an ISO date") from None
        comments = []
        for elem in required("COMENTARIOS").findall("COMENTARIO"):
            fecha = elem.get("fecha")
            try:
                comments.append(
                    CommentRecord(
                        comment_id=elem.get("id") or "",
                        author=elem.get("usuario") or "",
                        body_text=elem.text or "",
                        posted_at=datetime.fromisoformat(fecha) if fecha else None,
                        star_rating=_int_attr(elem, "estrellas", index),
                        vote_count=_int_attr(elem, "votos", index),
                        reply_to_author=elem.get("responde_a"),
                        permalink=elem.get("enlace"),
                    )
                )
            except ValueError as exc:
                raise CorpusError(f"article {index}: invalid comment: {exc}") from exc
        articles.append(
            Article(
                guid=guid,
                title=required("TITULO").text or "",
                category_label=required("CATEGORIA").text or "",
                published_date=published,
                summary=required("RESUMEN").text or "",
                comments=tuple(comments),
            )
        )
    return articles


def export_jsonl(articles: Iterable[Article]) -> bytes:
    """One canonical JSON object per article, keys sorted."""
    lines = [
        json.dumps(a.to_dict(), ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        for a in articles
    ]
    return ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8")


def import_jsonl(document: bytes) -> list[Article]:
    return [
        Article.from_dict(json.loads(line))
        for line in document.decode("utf-8").split("\n")
        if line.strip()
    ]
