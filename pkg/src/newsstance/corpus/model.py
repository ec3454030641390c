from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date

from ..scraper.extract import CommentRecord


@dataclass(frozen=True)
class Article:
    guid: str
    title: str
    category_label: str
    published_date: date
    summary: str = ""
    comments: tuple[CommentRecord, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not self.guid:
            raise ValueError("article guid must be non-empty")
        if not isinstance(self.published_date, date):
            raise ValueError(f"published_date must be a date, got {self.published_date!r}")
        if not isinstance(self.comments, tuple):
            object.__setattr__(self, "comments", tuple(self.comments))

    def to_dict(self) -> dict:
        return {
            "guid": self.guid,
            "title": self.title,
            "category_label": self.category_label,
            "published_date": self.published_date.isoformat(),
            "summary": self.summary,
            "comments": [c.to_dict() for c in self.comments],
        }

    @classmethod
    def from_dict(cls, data: dict) -> Article:
        return cls(
            guid=data["guid"],
            title=data["title"],
            category_label=data["category_label"],
            published_date=date.fromisoformat(data["published_date"]),
            summary=data.get("summary", ""),
            comments=tuple(CommentRecord.from_dict(c) for c in data.get("comments", [])),
        )

    def with_comments(self, comments) -> Article:
        return replace(self, comments=tuple(comments))


def comment_index(articles) -> dict[str, tuple[Article, CommentRecord]]:
    """comment_id -> (article, comment); later duplicates do not override earlier ones."""
    index: dict[str, tuple[Article, CommentRecord]] = {}
    for article in articles:
        for comment in article.comments:
            index.setdefault(comment.comment_id, (article, comment))
    return index
