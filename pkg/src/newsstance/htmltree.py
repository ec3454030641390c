"""Small tolerant HTML tree built on :mod:`html.parser`.

Only what the extractors need: find by id/class/tag, remove nodes,
serialize back to markup and flatten to plain text.
"""

from __future__ import annotations

import html
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from typing import Iterator

VOID_TAGS = frozenset(
    "area base br col embed hr img input link meta param source track wbr".split()
)
RAW_TEXT_TAGS = frozenset(["script", "style"])
BLOCK_TAGS = frozenset(
    """address article aside blockquote br dd div dl dt fieldset figcaption figure
    footer form h1 h2 h3 h4 h5 h6 header hr li main nav ol p pre section table tr
    ul""".split()
)
# Tags whose open element is implicitly closed by a new sibling of the same kind.
_AUTO_CLOSE = {"p": {"p"}, "li": {"li"}, "dt": {"dt", "dd"}, "dd": {"dt", "dd"}}


@dataclass
class Node:
    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    children: list[Node | str] = field(default_factory=list)
    parent: Node | None = field(default=None, repr=False, compare=False)

    @property
    def classes(self) -> list[str]:
        return self.attrs.get("class", "").split()

    def iter(self) -> Iterator[Node]:
        """Depth-first, document-order walk over element descendants (self first)."""
        yield self
        for child in self.children:
            if isinstance(child, Node):
                yield from child.iter()

    def find_all(self, tag: str | None = None, *, id: str | None = None,
                 class_: str | None = None) -> list[Node]:
        out = []
        for node in self.iter():
            if node is self:
                continue
            if tag is not None and node.tag != tag:
                continue
            if id is not None and node.attrs.get("id") != id:
                continue
            if class_ is not None and class_ not in node.classes:
                continue
            out.append(node)
        return out

    def find(self, tag: str | None = None, *, id: str | None = None,
             class_: str | None = None) -> Node | None:
        found = self.find_all(tag, id=id, class_=class_)
        return found[0] if found else None

    def decompose(self) -> None:
        if self.parent is not None:
            self.parent.children = [c for c in self.parent.children if c is not self]
            self.parent = None

    def ancestors(self) -> Iterator[Node]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def to_html(self) -> str:
        parts: list[str] = []
        _serialize(self, parts)
        return "".join(parts)

    def get_text(self, skip: set[int] | None = None) -> str:
        """Plain text with block boundaries as newlines and runs of spaces collapsed.

        ``skip`` holds ``id()`` of nodes whose subtree is left out.
        """
        chunks: list[str] = []
        _collect_text(self, chunks, skip or set())
        return normalize_lines("".join(chunks))


def normalize_lines(text: str) -> str:
    lines = []
    for line in text.split("\n"):
        line = re.sub(r"[ \t\r\f\v ]+", " ", line).strip()
        if line:
            lines.append(line)
    return "\n".join(lines)


def _collect_text(node: Node, chunks: list[str], skip: set[int]) -> None:
    if id(node) in skip or node.tag in RAW_TEXT_TAGS:
        return
    block = node.tag in BLOCK_TAGS
    if block:
        chunks.append("\n")
    for child in node.children:
        if isinstance(child, str):
            chunks.append(child.replace("\n", " "))
        else:
            _collect_text(child, chunks, skip)
    if block:
        chunks.append("\n")


def _serialize(node: Node, parts: list[str]) -> None:
    if node.tag == "#document":
        for child in node.children:
            _serialize_child(child, parts, raw=False)
        return
    attrs = "".join(
        f' {k}="{html.escape(v, quote=True)}"' for k, v in node.attrs.items()
    )
    parts.append(f"<{node.tag}{attrs}>")
    if node.tag in VOID_TAGS:
        return
    raw = node.tag in RAW_TEXT_TAGS
    for child in node.children:
        _serialize_child(child, parts, raw=raw)
    parts.append(f"</{node.tag}>")


def _serialize_child(child: Node | str, parts: list[str], raw: bool) -> None:
    if isinstance(child, str):
        parts.append(child if raw else html.escape(child, quote=False))
    else:
        _serialize(child, parts)


class _TreeBuilder(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.root = Node("#document")
        self.stack = [self.root]

    def _append(self, node: Node) -> None:
        node.parent = self.stack[-1]
        self.stack[-1].children.append(node)

    def handle_starttag(self, tag, attrs):
        closes = _AUTO_CLOSE.get(self.stack[-1].tag)
        if closes and tag in closes:
            self.stack.pop()
        node = Node(tag, {k: (v if v is not None else "") for k, v in attrs})
        self._append(node)
        if tag not in VOID_TAGS:
            self.stack.append(node)

    def handle_startendtag(self, tag, attrs):
        node = Node(tag, {k: (v if v is not None else "") for k, v in attrs})
        self._append(node)

    def handle_endtag(self, tag):
        for depth in range(len(self.stack) - 1, 0, -1):
            if self.stack[depth].tag == tag:
                del self.stack[depth:]
                return
        # stray end tag: ignored

    def handle_data(self, data):
        parent = self.stack[-1]
        if parent.children and isinstance(parent.children[-1], str):
            parent.children[-1] += data
        else:
            parent.children.append(data)


def parse_html(markup: str | bytes, encoding: str = "utf-8") -> Node:
    if isinstance(markup, bytes):
        markup = markup.decode(sniff_encoding(markup, encoding), errors="replace")
    builder = _TreeBuilder()
    builder.feed(markup)
    builder.close()
    return builder.root


_META_CHARSET = re.compile(rb"""<meta[^>]+charset\s*=\s*["']?([A-Za-z0-9_\-]+)""", re.I)


def sniff_encoding(body: bytes, default: str = "utf-8") -> str:
    match = _META_CHARSET.search(body[:4096])
    if match:
        name = match.group(1).decode("ascii")
        try:
            "".encode(name)
            return name
        except LookupError:
            pass
    return default


def html_to_text(markup: str) -> str:
    """Strip tags and decode entities from an HTML fragment."""
    return parse_html(markup).get_text()
