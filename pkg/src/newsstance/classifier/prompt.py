"""Party programs and few-shot prompt rendering."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from ..annotate import AnnotatedComment
from ..labels import PARTIES, PartyLabel, StanceLabel

RESPONSE_FIELDS = ("Tipo", "Inclinación", "Palabras_Clave")


class PromptError(ValueError):
    pass


@dataclass(frozen=True)
class PartyProgram:
    party: PartyLabel
    title: str
    body: str
    declared_topics: tuple[str, ...] = ()

    def __post_init__(self):
        if self.party is PartyLabel.INDETERMINADO:
            raise ValueError("a program must belong to a concrete party")
        if not self.body.strip():
            raise ValueError(f"program for {self.party.code} has an empty body")


def read_program(path: str | Path) -> PartyProgram:
    """Load ``<CODE>.txt``: optional ``title:`` / ``topics:`` header lines, a blank line, then the body.

    Topics are separated by ``;`` and may repeat.
    """
    path = Path(path)
    party = PartyLabel.parse(path.stem)
    lines = path.read_text("utf-8").splitlines()
    meta: dict[str, str] = {}
    start = 0
    for i, line in enumerate(lines):
        key, sep, value = line.partition(":")
        if sep and key.strip().lower() in ("title", "topics"):
            meta[key.strip().lower()] = value.strip()
            start = i + 1
            continue
        if not line.strip() and meta:
            start = i + 1
        break
    topics = tuple(t.strip() for t in meta.get("topics", "").split(";") if t.strip())
    return PartyProgram(
        party=party,
        title=meta.get("title", party.display_name),
        body="\n".join(lines[start:]).strip(),
        declared_topics=topics,
    )


def load_programs(directory: str | Path) -> list[PartyProgram]:
    programs = [read_program(p) for p in sorted(Path(directory).glob("*.txt"))]
    seen: set[PartyLabel] = set()
    for program in programs:
        if program.party in seen:
            raise ValueError(f"duplicate program for {program.party.code}")
        seen.add(program.party)
    return programs


def render_reply(stance: StanceLabel, party: PartyLabel, keywords: Sequence[str]) -> str:
    return (
        f"Tipo: {stance.render()} | Inclinación: {party.display_name} | "
        f"Palabras_Clave: {', '.join(keywords)}"
    )


PREAMBLE = (
    "Eres un analista político. Para cada comentario de lectores de un agregador de "
    "noticias francés indica el tipo de postura, el partido con el que el autor muestra "
    "mayor afinidad según los programas electorales adjuntos, y las palabras clave que "
    "lo justifican."
)


def _instructions() -> str:
    stances = ", ".join(s.render() for s in StanceLabel)
    parties = ", ".join(p.display_name for p in PartyLabel)
    return (
        "Responde con una sola línea y exactamente este formato:\n"
        "Tipo: <tipo> | Inclinación: <partido> | Palabras_Clave: <palabras separadas por comas>\n"
        f"Valores de Tipo: {stances}.\n"
        f"Valores de Inclinación: {parties}.\n"
        "Usa Indeterminado si no es posible establecer la afinidad."
    )


TEMPLATES = {"fewshot-v1"}


@dataclass(frozen=True)
class PromptBundle:
    system_preamble: str
    context_docs: tuple[str, ...]
    context_parties: tuple[PartyLabel, ...]
    few_shot_examples: tuple[tuple[str, str], ...]
    target: str
    response_schema: tuple[str, ...] = RESPONSE_FIELDS
    template_id: str = "fewshot-v1"

    def render(self) -> str:
        parts = [self.system_preamble, ""]
        for party, doc in zip(self.context_parties, self.context_docs):
            parts += [f"### Programa electoral: {party.display_name}", doc, ""]
        parts += ["### Instrucciones", _instructions(), "", "### Ejemplos", ""]
        for comment, reply in self.few_shot_examples:
            parts += [f"Comentario: {comment}", f"Respuesta: {reply}", ""]
        parts += ["### Comentario a clasificar", f"Comentario: {self.target}", "Respuesta:"]
        return "\n".join(parts)


def _one_line(text: str) -> str:
    return " ".join(text.split())


def build_prompt(programs: Sequence[PartyProgram], seed: Sequence[AnnotatedComment],
                 comment: str, template_id: str = "fewshot-v1") -> PromptBundle:
    if template_id not in TEMPLATES:
        raise PromptError(f"unknown template {template_id!r}")
    if not programs:
        raise PromptError("at least one party program is required")
    if not seed:
        raise PromptError("at least one seed example is required")
    if not comment.strip():
        raise PromptError("comment to classify is empty")
    order = {p: i for i, p in enumerate(PARTIES)}
    ordered = sorted(programs, key=lambda p: order[p.party])
    docs = tuple(
        f"{p.title}\nTemas: {'; '.join(p.declared_topics)}\n{p.body}" if p.declared_topics
        else f"{p.title}\n{p.body}"
        for p in ordered
    )
    examples = tuple(
        (_one_line(a.text) or ", ".join(a.keywords), render_reply(a.stance, a.party, a.keywords))
        for a in seed
    )
    return PromptBundle(
        system_preamble=PREAMBLE,
        context_docs=docs,
        context_parties=tuple(p.party for p in ordered),
        few_shot_examples=examples,
        target=_one_line(comment),
        template_id=template_id,
    )
