"""Completion-endpoint client and structured-reply parsing."""

from __future__ import annotations

import logging
import os
import re
import time
from dataclasses import dataclass
from typing import Callable, Protocol

from ..annotate import split_keywords
from ..labels import LabelError, PartyLabel, StanceLabel
from .prompt import PromptBundle
from .results import ClassificationError, ClassificationResult

log = logging.getLogger(__name__)

DEFAULT_API_KEY_ENV = "NEWSSTANCE_API_KEY"


class EndpointError(RuntimeError):
    pass


class EndpointTimeout(EndpointError):
    pass


class CompletionClient(Protocol):
    model_id: str

    def complete(self, prompt: str) -> str: ...


@dataclass
class HttpCompletionClient:
    """Chat-completions style HTTP endpoint; the key is read from the environment only."""

    url: str
    model_id: str
    api_key_env: str = DEFAULT_API_KEY_ENV
    timeout: float = 60.0
    temperature: float = 0.0

    def complete(self, prompt: str) -> str:
        import requests

        key = os.environ.get(self.api_key_env)
        if not key:
            raise EndpointError(f"environment variable {self.api_key_env} is not set")
        payload = {
            "model": self.model_id,
            "temperature": self.temperature,
            "messages": [{"role": "user", "content": prompt}],
        }
        try:
            resp = requests.post(
                self.url,
                json=payload,
                headers={"Authorization": f"Bearer {key}"},
                timeout=self.timeout,
            )
        except requests.Timeout as exc:
            raise EndpointTimeout(str(exc)) from exc
        except requests.RequestException as exc:
            raise EndpointError(str(exc)) from exc
        if resp.status_code != 200:
            raise EndpointError(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise EndpointError(f"unexpected response body: {exc}") from exc


_FIELD_RE = re.compile(r"^\s*([^:]+?)\s*:\s*(.*?)\s*$", re.S)
_FIELD_NAMES = {
    "tipo": "Tipo",
    "inclinación": "Inclinación",
    "inclinacion": "Inclinación",
    "palabras_clave": "Palabras_Clave",
    "palabras clave": "Palabras_Clave",
}


def split_reply(reply: str) -> dict[str, str] | None:
    """Fields of the first ``Tipo: .. | Inclinación: .. | Palabras_Clave: ..`` line."""
    for line in reply.splitlines():
        if "|" not in line or "tipo" not in line.lower():
            continue
        fields: dict[str, str] = {}
        for chunk in line.split("|"):
            match = _FIELD_RE.match(chunk)
            if not match:
                break
            name = _FIELD_NAMES.get(match.group(1).strip().strip("*").lower())
            if name:
                fields[name] = match.group(2)
        if len(fields) == 3:
            return fields
    return None


def parse_reply(comment_ref: str, reply: str, source: str) -> ClassificationResult:
    """Map a reply to labels; anything unreadable degrades to Indeterminado with a warning."""
    fields = split_reply(reply)
    warnings: list[str] = []
    if fields is None:
        warnings.append("reply is not a three-field Tipo | Inclinación | Palabras_Clave line")
        return ClassificationResult(comment_ref, StanceLabel.INFORMACION,
                                    PartyLabel.INDETERMINADO, (), source, reply, tuple(warnings))
    try:
        stance = StanceLabel.parse(fields["Tipo"])
    except LabelError as exc:
        warnings.append(str(exc))
        stance = StanceLabel.INFORMACION
    try:
        party = PartyLabel.parse(fields["Inclinación"])
    except LabelError as exc:
        warnings.append(str(exc))
        party = PartyLabel.INDETERMINADO
    return ClassificationResult(comment_ref, stance, party,
                                split_keywords(fields["Palabras_Clave"]), source, reply,
                                tuple(warnings))


def classify_remote(bundle: PromptBundle, endpoint: CompletionClient, comment_ref: str = "",
                    max_retries: int = 2, backoff: float = 1.0,
                    sleep: Callable[[float], None] = time.sleep) -> ClassificationResult:
    prompt = bundle.render()
    errors = []
    for attempt in range(max_retries + 1):
        if attempt:
            sleep(backoff * 2 ** (attempt - 1))
        try:
            reply = endpoint.complete(prompt)
        except (EndpointError, TimeoutError, ConnectionError) as exc:
            errors.append(f"attempt {attempt + 1}: {exc}")
            log.debug("endpoint failure for %s: %s", comment_ref, exc)
            continue
        return parse_reply(comment_ref, reply, endpoint.model_id)
    raise ClassificationError("; ".join(errors))
