"""Stance and party label vocabularies shared by annotation and classification."""

from __future__ import annotations

import re
import unicodedata
from enum import Enum


class LabelError(ValueError):
    """Raised when a stance or party string cannot be mapped to a label."""


def _fold(text: str) -> str:
    text = unicodedata.normalize("NFC", text).strip().casefold()
    return re.sub(r"\s+", " ", text)


def _strip_accents(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


class StanceLabel(Enum):
    APOYO = "Apoyo"
    CRITICA = "Crítica"
    ACUSACION = "Acusación"
    RECHAZO = "Rechazo"
    ADMIRACION = "Admiración"
    PREGUNTA = "Pregunta"
    INFORMACION = "Información"

    @classmethod
    def parse(cls, text: str) -> StanceLabel:
        """Parse ``"de apoyo"``, ``"De crítica"``, ``"Pregunta"`` and similar."""
        folded = _fold(text)
        if folded.startswith("de "):
            folded = folded[3:].strip()
        bare = _strip_accents(folded)
        for label in cls:
            if bare == _strip_accents(_fold(label.value)):
                return label
        raise LabelError(f"unknown stance label: {text!r}")

    def render(self) -> str:
        """Spelling used in annotation tables: ``de apoyo`` ... ``Pregunta``."""
        if self in (StanceLabel.PREGUNTA, StanceLabel.INFORMACION):
            return self.value
        return "de " + self.value.lower()


class PartyLabel(Enum):
    LFI = "LFI"
    PS = "PS"
    RN = "RN"
    LREM = "LREM"
    LR = "LR"
    INDETERMINADO = "Indeterminado"

    @property
    def code(self) -> str:
        return self.value

    @property
    def display_name(self) -> str:
        return _DISPLAY_NAMES[self]

    @classmethod
    def parse(cls, text: str) -> PartyLabel:
        """Accept party codes, display names, or any string ending in ``(CODE)``."""
        folded = _fold(text)
        for label in cls:
            if folded in (_fold(label.value), _fold(label.display_name)):
                return label
        bare = _strip_accents(folded)
        for label in cls:
            if bare == _strip_accents(_fold(label.display_name)):
                return label
        match = re.search(r"\(([^()]+)\)\s*$", text.strip())
        if match:
            code = _fold(match.group(1))
            for label in cls:
                if label is not PartyLabel.INDETERMINADO and code == _fold(label.value):
                    return label
        raise LabelError(f"unknown party label: {text!r}")


_DISPLAY_NAMES = {
    PartyLabel.LFI: "Francia Insumisa (LFI)",
    PartyLabel.PS: "Partido Socialista (PS)",
    PartyLabel.RN: "Reagrupación Nacional (RN)",
    PartyLabel.LREM: "La République En Marche! (LREM)",
    PartyLabel.LR: "Los Republicanos (LR)",
    PartyLabel.INDETERMINADO: "Indeterminado",
}

PARTIES = [p for p in PartyLabel if p is not PartyLabel.INDETERMINADO]
