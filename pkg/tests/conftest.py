from __future__ import annotations

from datetime import date
from pathlib import Path

import pytest

from newsstance.corpus import Article
from newsstance.scraper import CommentRecord

FIXTURES = Path(__file__).parent / "fixtures"
DEMO = Path(__file__).resolve().parents[1] / "src" / "newsstance" / "data" / "demo"


def make_article(guid: str, texts: list[str], category: str = "Política francesa",
                 title: str | None = None, day: date = date(2024, 6, 25)) -> Article:
    comments = tuple(
        CommentRecord(comment_id=f"{guid}-{i}", author=f"user{i}", body_text=text)
        for i, text in enumerate(texts)
    )
    return Article(guid=f"https://example.org/{guid}", title=title or guid.title(),
                   category_label=category, published_date=day, comments=comments)


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def demo_dir() -> Path:
    return DEMO


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import OUTCOMES

    if OUTCOMES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(OUTCOMES, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
