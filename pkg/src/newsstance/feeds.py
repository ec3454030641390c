"""Category feed URLs and RSS "backend" document parsing."""

from __future__ import annotations

import html
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone
from urllib.parse import urlencode, urljoin, urlsplit

from .htmltree import parse_html

DC_NS = "http://purl.org/dc/elements/1.1/"
XML_LANG = "{http://www.w3.org/XML/1998/namespace}lang"

_ISO_Z = re.compile(r"^\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}(\.\d+)?Z$")


class FeedError(ValueError):
    pass


def is_absolute_url(url: str) -> bool:
    parts = urlsplit(url)
    return parts.scheme in ("http", "https") and bool(parts.netloc)


@dataclass(frozen=True)
class FeedSource:
    base_url: str
    rubrique_id: int
    category_label: str

    def __post_init__(self):
        if not isinstance(self.base_url, str) or not is_absolute_url(self.base_url):
            raise FeedError(f"base_url is not an absolute http(s) URL: {self.base_url!r}")
        if isinstance(self.rubrique_id, bool) or not isinstance(self.rubrique_id, int) \
                or self.rubrique_id < 1:
            raise FeedError(f"rubrique_id must be a positive integer, got {self.rubrique_id!r}")
        if not str(self.category_label).strip():
            raise FeedError("category_label must not be empty")


@dataclass(frozen=True)
class FeedItem:
    title: str
    link: str
    guid: str
    guid_is_permalink: bool
    description: str
    language: str
    category_label: str
    published_at: datetime | None = None
    author: str | None = None
    category_url: str | None = None

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "link": self.link,
            "guid": self.guid,
            "guid_is_permalink": self.guid_is_permalink,
            "description": self.description,
            "language": self.language,
            "category_label": self.category_label,
            "published_at": format_utc(self.published_at) if self.published_at else None,
            "author": self.author,
            "category_url": self.category_url,
        }

    @classmethod
    def from_dict(cls, data: dict) -> FeedItem:
        data = dict(data)
        if data.get("published_at"):
            data["published_at"] = parse_iso_utc(data["published_at"])
        return cls(**data)


@dataclass
class ParsedFeed:
    items: list[FeedItem] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def build_feed_url(source: FeedSource) -> str:
    """``https://host`` + rubrique 31 -> ``https://host/spip.php?page=backend&id_rubrique=31``."""
    base = source.base_url if source.base_url.endswith("/") else source.base_url + "/"
    query = urlencode({"page": "backend", "id_rubrique": source.rubrique_id})
    return urljoin(base, "spip.php") + "?" + query


def parse_iso_utc(text: str) -> datetime:
    if not _ISO_Z.match(text):
        raise ValueError(f"not an ISO-8601 UTC timestamp: {text!r}")
    return datetime.fromisoformat(text[:-1]).replace(tzinfo=timezone.utc)


def format_utc(moment: datetime) -> str:
    return moment.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _byte_offset(document: bytes, line: int, column: int) -> int:
    lines = document.split(b"\n")
    offset = sum(len(chunk) + 1 for chunk in lines[: max(line - 1, 0)])
    # expat columns count characters; close enough for locating the fault
    return offset + column


def _text(elem: ET.Element | None) -> str | None:
    if elem is None:
        return None
    text = "".join(elem.itertext()).strip()
    return text or None


def _plain(fragment: str) -> tuple[str, str | None]:
    """Plain text of an HTML fragment plus the href of a ``rel=directory`` anchor."""
    tree = parse_html(fragment)
    category_url = None
    for anchor in tree.find_all("a"):
        if "directory" in anchor.attrs.get("rel", "").split():
            category_url = anchor.attrs.get("href") or None
            break
    return " ".join(tree.get_text().split()), category_url


def _description_markup(elem: ET.Element | None) -> str:
    if elem is None:
        return ""
    if len(elem) == 0:
        return elem.text or ""
    # description carried as real child elements rather than escaped markup
    inner = elem.text or ""
    for child in elem:
        inner += ET.tostring(child, encoding="unicode")
    return inner


def parse_feed(document: bytes, source: FeedSource) -> ParsedFeed:
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        line, column = exc.position
        offset = _byte_offset(document, line, column)
        raise FeedError(f"malformed feed XML at byte offset {offset}: {exc}") from exc

    channel = root.find("channel")
    channel_lang = None
    if channel is not None:
        channel_lang = _text(channel.find("language")) or _text(channel.find(f"{{{DC_NS}}}language"))
    # RSS 2.0 nests items in <channel>; RSS 1.0 puts them at the root.
    items = [el for el in root.iter() if el.tag in ("item", "{http://purl.org/rss/1.0/}item")]

    result = ParsedFeed()
    for index, item in enumerate(items):
        def child(name: str) -> ET.Element | None:
            found = item.find(name)
            if found is None:
                found = item.find(f"{{http://purl.org/rss/1.0/}}{name}")
            return found

        link = _text(child("link"))
        guid_el = child("guid")
        guid = _text(guid_el)
        if not link:
            result.warnings.append(f"item {index}: missing link, skipped")
            continue
        if not guid:
            result.warnings.append(f"item {index}: missing guid, skipped")
            continue
        link = urljoin(source.base_url, link)
        if not is_absolute_url(link):
            result.warnings.append(f"item {index}: link {link!r} is not absolute, skipped")
            continue

        permalink_attr = None
        for key, value in guid_el.attrib.items():
            if key.lower() == "ispermalink":
                permalink_attr = value
        guid_is_permalink = (permalink_attr or "true").strip().lower() == "true"

        published_at = None
        raw_date = _text(item.find(f"{{{DC_NS}}}date")) or _text(child("pubDate"))
        if raw_date:
            try:
                published_at = parse_iso_utc(raw_date)
            except ValueError:
                result.warnings.append(f"item {index}: unsupported timestamp {raw_date!r}, left empty")

        title = " ".join(html.unescape(_text(child("title")) or "").split())
        description, category_url = _plain(_description_markup(child("description")))
        language = (
            item.get(XML_LANG)
            or _text(item.find(f"{{{DC_NS}}}language"))
            or channel_lang
            or ""
        )
        result.items.append(
            FeedItem(
                title=title,
                link=link,
                guid=guid,
                guid_is_permalink=guid_is_permalink,
                description=description,
                language=language,
                category_label=source.category_label,
                published_at=published_at,
                author=_text(item.find(f"{{{DC_NS}}}creator")) or _text(child("author")),
                category_url=category_url,
            )
        )
    return result
