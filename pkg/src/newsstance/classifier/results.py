from __future__ import annotations

from dataclasses import dataclass, field

from ..labels import PartyLabel, StanceLabel

GOLD = "gold"
LEXICON = "lexicon"


class ClassificationError(RuntimeError):
    """The comment could not be classified; it stays unclassified, not Indeterminado."""


@dataclass(frozen=True)
class ClassificationResult:
    comment_ref: str
    stance: StanceLabel
    party: PartyLabel
    keywords: tuple[str, ...]
    source: str
    raw_response: str | None = None
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.source:
            raise ValueError("source must be set")

    def to_dict(self) -> dict:
        return {
            "comment_ref": self.comment_ref,
            "stance": self.stance.name,
            "party": self.party.name,
            "keywords": list(self.keywords),
            "source": self.source,
            "raw_response": self.raw_response,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ClassificationResult:
        return cls(
            comment_ref=data["comment_ref"],
            stance=StanceLabel[data["stance"]],
            party=PartyLabel[data["party"]],
            keywords=tuple(data.get("keywords", ())),
            source=data["source"],
            raw_response=data.get("raw_response"),
            warnings=tuple(data.get("warnings", ())),
        )


@dataclass(frozen=True)
class Unclassified:
    comment_ref: str
    error: str

    def to_dict(self) -> dict:
        return {"comment_ref": self.comment_ref, "error": self.error}


def coverage(results: list[ClassificationResult]) -> float:
    """Share of results whose party is not Indeterminado.

    Failed comments never appear as results, so they are out of both counts.
    """
    if not results:
        raise ValueError("coverage of an empty result list is undefined")
    assigned = sum(1 for r in results if r.party is not PartyLabel.INDETERMINADO)
    return assigned / len(results)
