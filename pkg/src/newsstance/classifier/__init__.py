from .lexicon import PartyLexicon, classify_lexicon, load_lexicons, read_lexicon, score_lexicons
from .prompt import (
    PartyProgram,
    PromptBundle,
    PromptError,
    build_prompt,
    load_programs,
    read_program,
    render_reply,
)
from .remote import (
    CompletionClient,
    EndpointError,
    EndpointTimeout,
    HttpCompletionClient,
    classify_remote,
    parse_reply,
    split_reply,
)
from .results import GOLD, LEXICON, ClassificationError, ClassificationResult, Unclassified, coverage
from .runner import ClassificationRun, ClassifyConfig, classify_corpus, read_results

__all__ = [
    "PartyLexicon", "classify_lexicon", "load_lexicons", "read_lexicon", "score_lexicons",
    "PartyProgram", "PromptBundle", "PromptError", "build_prompt", "load_programs",
    "read_program", "render_reply", "CompletionClient", "EndpointError", "EndpointTimeout",
    "HttpCompletionClient", "classify_remote", "parse_reply", "split_reply", "GOLD",
    "LEXICON", "ClassificationError", "ClassificationResult", "Unclassified", "coverage",
    "ClassificationRun", "ClassifyConfig", "classify_corpus", "read_results",
]
