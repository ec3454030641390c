from .model import Article, comment_index
from .store import CorpusStore, UpsertOutcome
from .text import (
    PruneResult,
    TokenizedText,
    VocabPolicy,
    document_frequency,
    load_stopwords,
    prune_vocabulary,
    tokenize_clean,
    word_tokens,
)
from .xmlio import (
    CorpusError,
    export_jsonl,
    import_jsonl,
    normalize_article,
    parse_corpus,
    serialize_corpus,
)

__all__ = [
    "Article", "comment_index", "CorpusStore", "UpsertOutcome", "PruneResult",
    "TokenizedText", "VocabPolicy", "document_frequency", "load_stopwords",
    "prune_vocabulary", "tokenize_clean", "word_tokens", "CorpusError",
    "export_jsonl", "import_jsonl", "normalize_article", "parse_corpus",
    "serialize_corpus",
]
