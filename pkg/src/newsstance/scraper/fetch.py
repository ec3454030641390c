"""Polite HTTP fetching: per-host spacing, retries with backoff, robots.txt."""

from __future__ import annotations

import json
import logging
import threading
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Mapping, Protocol
from urllib.parse import urlsplit
from urllib.robotparser import RobotFileParser

log = logging.getLogger(__name__)


class FetchError(RuntimeError):
    def __init__(self, message: str, url: str, attempts: list[str] | None = None,
                 status: int | None = None):
        super().__init__(message)
        self.url = url
        self.attempts = attempts or []
        self.status = status


class RobotsDisallowed(FetchError):
    pass


class TransportError(OSError):
    """Connection-level failure; retryable."""


class TransportTimeout(TransportError):
    pass


@dataclass(frozen=True)
class TransportResponse:
    status: int
    body: bytes
    content_type: str = "text/html"
    headers: Mapping[str, str] = field(default_factory=dict)


Transport = Callable[[str, Mapping[str, str], float], TransportResponse]


class Clock(Protocol):
    def now(self) -> float: ...

    def sleep(self, seconds: float) -> None: ...


class SystemClock:
    def now(self) -> float:
        return time.monotonic()

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            time.sleep(seconds)


class SimulatedClock:
    """Clock whose ``sleep`` advances virtual time instantly."""

    def __init__(self, start: float = 0.0):
        self._now = start
        self._lock = threading.Lock()

    def now(self) -> float:
        with self._lock:
            return self._now

    def sleep(self, seconds: float) -> None:
        if seconds > 0:
            with self._lock:
                self._now += seconds

    def advance(self, seconds: float) -> None:
        self.sleep(seconds)


@dataclass(frozen=True)
class FetchPolicy:
    min_interval_per_host: float = 1.0
    timeout: float = 20.0
    max_retries: int = 3
    backoff_base: float = 1.0
    user_agent: str = "newsstance/0.1 (+research crawler)"
    respect_robots: bool = True

    def __post_init__(self):
        if self.min_interval_per_host < 0:
            raise ValueError("min_interval_per_host must be >= 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be > 0")
        if self.backoff_base < 0:
            raise ValueError("backoff_base must be >= 0")


@dataclass(frozen=True)
class RawPage:
    url: str
    fetched_at: datetime
    status: int
    body: bytes
    content_type: str
    attempts: int = 1

    def __post_init__(self):
        if not 100 <= self.status <= 599:
            raise ValueError(f"HTTP status out of range: {self.status}")


@dataclass(frozen=True)
class RequestRecord:
    host: str
    url: str
    started: float
    outcome: str


class HostRateLimiter:
    """Serializes requests per host and spaces their start times.

    Holding the host slot for the whole request gives at most one in-flight
    request per host.
    """

    def __init__(self, min_interval: float, clock: Clock):
        self.min_interval = min_interval
        self.clock = clock
        self._guard = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._last_start: dict[str, float] = {}
        self.trace: list[RequestRecord] = []

    def _lock_for(self, host: str) -> threading.Lock:
        with self._guard:
            return self._locks.setdefault(host, threading.Lock())

    def run(self, host: str, url: str, request: Callable[[], TransportResponse]) -> TransportResponse:
        with self._lock_for(host):
            last = self._last_start.get(host)
            if last is not None:
                wait = last + self.min_interval - self.clock.now()
                if wait > 0:
                    self.clock.sleep(wait)
            started = self.clock.now()
            self._last_start[host] = started
            outcome = "error"
            try:
                response = request()
                outcome = str(response.status)
                return response
            except TransportTimeout:
                outcome = "timeout"
                raise
            finally:
                with self._guard:
                    self.trace.append(RequestRecord(host, url, started, outcome))


def _retry_after(headers: Mapping[str, str]) -> float | None:
    for key, value in headers.items():
        if key.lower() == "retry-after":
            try:
                return max(float(value), 0.0)
            except ValueError:
                return None
    return None


class Fetcher:
    def __init__(self, policy: FetchPolicy, transport: Transport | None = None,
                 clock: Clock | None = None, limiter: HostRateLimiter | None = None):
        self.policy = policy
        self.transport = transport or RequestsTransport()
        self.clock = clock or SystemClock()
        self.limiter = limiter or HostRateLimiter(policy.min_interval_per_host, self.clock)
        self._robots: dict[str, RobotFileParser] = {}
        self._robots_lock = threading.Lock()

    @property
    def trace(self) -> list[RequestRecord]:
        return self.limiter.trace

    def fetch(self, url: str) -> RawPage:
        if self.policy.respect_robots and not self.allowed(url):
            raise RobotsDisallowed(f"robots.txt disallows {url}", url)
        return self._fetch(url)

    def _fetch(self, url: str) -> RawPage:
        host = urlsplit(url).netloc
        if not host:
            raise FetchError(f"URL has no host: {url!r}", url)
        headers = {"User-Agent": self.policy.user_agent}
        attempts: list[str] = []
        pause = 0.0
        for attempt in range(self.policy.max_retries + 1):
            if attempt:
                delay = self.policy.backoff_base * 2 ** (attempt - 1)
                self.clock.sleep(max(delay, pause))
            pause = 0.0
            try:
                response = self.limiter.run(
                    host, url, lambda: self.transport(url, headers, self.policy.timeout)
                )
            except TransportTimeout as exc:
                attempts.append(f"attempt {attempt + 1}: timeout ({exc})")
                continue
            except TransportError as exc:
                attempts.append(f"attempt {attempt + 1}: transport error ({exc})")
                continue
            if 500 <= response.status <= 599:
                attempts.append(f"attempt {attempt + 1}: HTTP {response.status}")
                pause = _retry_after(response.headers) or 0.0
                continue
            if 400 <= response.status <= 499:
                attempts.append(f"attempt {attempt + 1}: HTTP {response.status}")
                raise FetchError(f"HTTP {response.status} for {url}", url, attempts,
                                 status=response.status)
            return RawPage(
                url=url,
                fetched_at=datetime.now(timezone.utc),
                status=response.status,
                body=response.body,
                content_type=response.content_type,
                attempts=attempt + 1,
            )
        raise FetchError(
            f"giving up on {url} after {len(attempts)} attempts", url, attempts
        )

    def allowed(self, url: str) -> bool:
        parts = urlsplit(url)
        origin = f"{parts.scheme}://{parts.netloc}"
        with self._robots_lock:
            parser = self._robots.get(origin)
            if parser is None:
                parser = self._load_robots(origin)
                self._robots[origin] = parser
        return parser.can_fetch(self.policy.user_agent, url)

    def _load_robots(self, origin: str) -> RobotFileParser:
        parser = RobotFileParser(origin + "/robots.txt")
        try:
            page = self._fetch(origin + "/robots.txt")
        except FetchError as exc:
            if exc.status in (401, 403):
                parser.disallow_all = True
            elif exc.status is not None:
                parser.allow_all = True
            else:
                log.warning("robots.txt unreachable for %s; treating host as disallowed", origin)
                parser.disallow_all = True
            return parser
        parser.parse(page.body.decode("utf-8", errors="replace").splitlines())
        return parser


def fetch_page(url: str, policy: FetchPolicy, clock: Clock, transport: Transport,
               limiter: HostRateLimiter | None = None) -> RawPage:
    """One-shot fetch; pass a shared ``limiter`` to keep spacing across calls."""
    return Fetcher(policy, transport, clock, limiter)._fetch(url)


class RequestsTransport:
    def __init__(self):
        import requests

        self._requests = requests
        self._session = requests.Session()

    def __call__(self, url: str, headers: Mapping[str, str], timeout: float) -> TransportResponse:
        try:
            resp = self._session.get(url, headers=dict(headers), timeout=timeout)
        except self._requests.Timeout as exc:
            raise TransportTimeout(str(exc)) from exc
        except self._requests.RequestException as exc:
            raise TransportError(str(exc)) from exc
        return TransportResponse(
            status=resp.status_code,
            body=resp.content,
            content_type=resp.headers.get("Content-Type", ""),
            headers=dict(resp.headers),
        )


class FileTransport:
    """Serves URLs from a directory holding ``index.json`` (URL -> relative file).

    Unknown URLs answer 404, which lets offline runs exercise the real
    fetch path.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.index: dict[str, str] = json.loads((self.root / "index.json").read_text("utf-8"))

    def __call__(self, url: str, headers: Mapping[str, str], timeout: float) -> TransportResponse:
        name = self.index.get(url)
        if name is None:
            return TransportResponse(404, b"", "text/plain")
        path = self.root / name
        ctype = "application/rss+xml" if path.suffix == ".xml" else (
            "text/plain" if path.suffix == ".txt" else "text/html")
        return TransportResponse(200, path.read_bytes(), ctype)
