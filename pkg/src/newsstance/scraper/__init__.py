from .extract import (
    ArticleContent,
    CommentRecord,
    ExtractedComments,
    ExtractionError,
    extract_article,
    extract_comments,
    parse_header,
)
from .fetch import (
    Fetcher,
    FetchError,
    FetchPolicy,
    FileTransport,
    HostRateLimiter,
    RawPage,
    RequestsTransport,
    RobotsDisallowed,
    SimulatedClock,
    SystemClock,
    TransportError,
    TransportResponse,
    TransportTimeout,
    fetch_page,
)

__all__ = [
    "ArticleContent", "CommentRecord", "ExtractedComments", "ExtractionError",
    "extract_article", "extract_comments", "parse_header", "Fetcher", "FetchError", "FetchPolicy",
    "FileTransport", "HostRateLimiter", "RawPage", "RequestsTransport",
    "RobotsDisallowed", "SimulatedClock", "SystemClock", "TransportError",
    "TransportResponse", "TransportTimeout", "fetch_page",
]
