"""Article body and comment-thread extraction from fetched pages.

Expected comment markup (one block per comment, replies may nest)::

    <div class="comment" id="forum123">
      <div class="comment-header">Eric F 26 juin 14:23 ★☆☆ (3 votes)</div>
      <div class="comment-body"><p>@Fergus</p><p>...</p></div>
      <div class="comment-footer"><a>Répondre</a> <a>Signaler un abus</a>
        <a href="...#forum123">Lien permanent</a></div>
      <div class="comment-replies"> ...nested comment blocks... </div>
    </div>
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from datetime import datetime
from urllib.parse import urljoin, urlsplit

from ..htmltree import Node, parse_html
from .fetch import RawPage


class ExtractionError(ValueError):
    pass


FRENCH_MONTHS = {
    "janvier": 1, "février": 2, "mars": 3, "avril": 4, "mai": 5, "juin": 6,
    "juillet": 7, "août": 8, "septembre": 9, "octobre": 10, "novembre": 11,
    "décembre": 12,
    # abbreviated forms, written with a trailing dot on some pages
    "janv": 1, "févr": 2, "avr": 4, "juil": 7, "sept": 9, "oct": 10, "nov": 11, "déc": 12,
}

HEADER_RE = re.compile(
    r"^(?P<author>.+?)\s+(?P<day>\d{1,2})\s+(?P<month>[^\W\d_]+)\.?\s+"
    r"(?P<hour>\d{1,2}):(?P<minute>\d{2})"
    r"(?:\s*(?P<stars>[★☆]+))?"
    r"(?:\s*\(\s*(?P<votes>\d+)\s+votes?\s*\))?\s*$"
)
MENTION_RE = re.compile(r"^@(\S.{0,60}?)\s*$")

COMMENT_CLASS = "comment"
HEADER_CLASS = "comment-header"
BODY_CLASS = "comment-body"
FOOTER_CLASS = "comment-footer"


@dataclass(frozen=True)
class ArticleContent:
    url: str
    title: str
    body_text: str
    body_html_sanitized: str


@dataclass(frozen=True)
class CommentRecord:
    comment_id: str
    author: str
    body_text: str
    posted_at: datetime | None = None
    star_rating: int | None = None
    vote_count: int | None = None
    reply_to_author: str | None = None
    permalink: str | None = None

    def __post_init__(self):
        if not self.author.strip():
            raise ValueError("comment author must be non-empty")
        if self.star_rating is not None:
            if not 0 <= self.star_rating <= 3:
                raise ValueError(f"star_rating out of range: {self.star_rating}")
            if self.vote_count is None:
                raise ValueError("star_rating requires vote_count")
        if self.vote_count is not None and self.vote_count < 0:
            raise ValueError("vote_count must be non-negative")

    def to_dict(self) -> dict:
        return {
            "comment_id": self.comment_id,
            "author": self.author,
            "body_text": self.body_text,
            "posted_at": self.posted_at.isoformat() if self.posted_at else None,
            "star_rating": self.star_rating,
            "vote_count": self.vote_count,
            "reply_to_author": self.reply_to_author,
            "permalink": self.permalink,
        }

    @classmethod
    def from_dict(cls, data: dict) -> CommentRecord:
        data = dict(data)
        if data.get("posted_at"):
            data["posted_at"] = datetime.fromisoformat(data["posted_at"])
        return cls(**data)


@dataclass
class ExtractedComments:
    records: list[CommentRecord] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    next_page: str | None = None


def _decode(page: RawPage) -> Node:
    return parse_html(page.body)


def extract_article(page: RawPage) -> ArticleContent:
    """Sanitized ``#article`` container of the page; raises if there is none."""
    tree = _decode(page)
    container = tree.find(id="article")
    if container is None:
        raise ExtractionError(f"no article container in {page.url}")
    for node in container.find_all():
        if node.tag in ("script", "style", "noscript"):
            node.decompose()
    heading = container.find("h1")
    if heading is not None:
        title = heading.get_text()
    else:
        page_title = tree.find("title")
        title = page_title.get_text() if page_title is not None else ""
    skip = {id(n) for n in container.find_all(id="comments")}
    return ArticleContent(
        url=page.url,
        title=" ".join(title.split()),
        body_text=container.get_text(skip),
        body_html_sanitized=container.to_html(),
    )


def _is_comment(node: Node) -> bool:
    return COMMENT_CLASS in node.classes


def _own_descendants(block: Node) -> list[Node]:
    """Descendants of ``block`` that do not sit inside a nested comment block."""
    out: list[Node] = []
    stack = list(reversed([c for c in block.children if isinstance(c, Node)]))
    while stack:
        node = stack.pop()
        if _is_comment(node):
            continue
        out.append(node)
        stack.extend(reversed([c for c in node.children if isinstance(c, Node)]))
    return out


def parse_header(text: str, year: int) -> tuple[dict, list[str]]:
    """Split ``"Eric F 26 juin 14:23 ★☆☆ (3 votes)"`` into its parts."""
    text = " ".join(text.split())
    match = HEADER_RE.match(text)
    if not match:
        author = text.split(" ", 1)[0] if text else ""
        return {"author": author or "anonyme"}, [f"unparseable comment header {text!r}"]
    warnings = []
    fields: dict = {"author": match.group("author")}
    month = FRENCH_MONTHS.get(match.group("month").lower())
    if month is None:
        warnings.append(f"unknown month {match.group('month')!r} in header {text!r}")
    else:
        try:
            fields["posted_at"] = datetime(
                year, month, int(match.group("day")),
                int(match.group("hour")), int(match.group("minute")),
            )
        except ValueError:
            warnings.append(f"invalid date in header {text!r}")
    if match.group("votes") is not None:
        fields["vote_count"] = int(match.group("votes"))
        if match.group("stars"):
            fields["star_rating"] = min(match.group("stars").count("★"), 3)
    elif match.group("stars"):
        warnings.append(f"star rating without vote count in header {text!r}")
    return fields, warnings


def _comment_id(block: Node, permalink: str | None, page_url: str, index: int) -> str:
    if block.attrs.get("id"):
        return block.attrs["id"]
    if permalink:
        fragment = urlsplit(permalink).fragment
        if fragment:
            return fragment
    digest = hashlib.sha1(f"{page_url}#{index}".encode("utf-8")).hexdigest()[:12]
    return f"c-{digest}"


def extract_comments(page: RawPage, collection_year: int) -> ExtractedComments:
    tree = _decode(page)
    result = ExtractedComments()
    blocks = [n for n in tree.find_all() if _is_comment(n)]
    authors: dict[int, str] = {}
    for index, block in enumerate(blocks):
        own = _own_descendants(block)
        header = next((n for n in own if HEADER_CLASS in n.classes), None)
        header_text = header.get_text().replace("\n", " ") if header is not None else ""
        fields, warnings = parse_header(header_text, collection_year)
        result.warnings.extend(f"comment {index}: {w}" for w in warnings)

        body_node = next((n for n in own if BODY_CLASS in n.classes), None)
        if body_node is not None:
            body = body_node.get_text()
        else:
            skip = {id(n) for n in own if HEADER_CLASS in n.classes or FOOTER_CLASS in n.classes}
            skip |= {id(n) for n in block.find_all() if _is_comment(n)}
            body = block.get_text(skip)

        reply_to = None
        lines = body.split("\n")
        mention = MENTION_RE.match(lines[0]) if lines and lines[0] else None
        if mention:
            reply_to = mention.group(1)
            if len(lines) > 1:
                body = "\n".join(lines[1:])
        else:
            parent = next((a for a in block.ancestors() if _is_comment(a)), None)
            if parent is not None:
                reply_to = authors.get(id(parent))

        permalink = None
        for anchor in own:
            if anchor.tag != "a" or not anchor.attrs.get("href"):
                continue
            if anchor.get_text().lower() == "lien permanent" or "bookmark" in anchor.attrs.get("rel", ""):
                permalink = urljoin(page.url, anchor.attrs["href"])
                break

        if not body.strip():
            result.warnings.append(f"comment {index}: empty body")
        record = CommentRecord(
            comment_id=_comment_id(block, permalink, page.url, index),
            body_text=body,
            reply_to_author=reply_to,
            permalink=permalink,
            **fields,
        )
        authors[id(block)] = record.author
        result.records.append(record)

    section = tree.find(id="comments") or tree
    for anchor in section.find_all("a"):
        if "next" in anchor.attrs.get("rel", "").split() and anchor.attrs.get("href"):
            result.next_page = urljoin(page.url, anchor.attrs["href"])
            break
    return result
