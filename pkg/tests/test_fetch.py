from __future__ import annotations

import json
import threading

import pytest
from hypothesis import given, settings, strategies as st

from newsstance.scraper import (FetchError, Fetcher, FetchPolicy, FileTransport, HostRateLimiter,
                                RawPage, RobotsDisallowed, SimulatedClock, TransportResponse,
                                TransportTimeout, fetch_page)


class Scripted:
    """Transport replaying a queue of outcomes: an int status, or an exception instance."""

    def __init__(self, outcomes, clock=None, cost=0.0, robots=None):
        self.outcomes = list(outcomes)
        self.calls: list[str] = []
        self.clock = clock
        self.cost = cost
        self.robots = robots

    def __call__(self, url, headers, timeout):
        if url.endswith("/robots.txt"):
            if self.robots is None:
                return TransportResponse(404, b"")
            return TransportResponse(200, self.robots.encode())
        self.calls.append(url)
        if self.clock is not None and self.cost:
            self.clock.advance(self.cost)
        outcome = self.outcomes.pop(0) if self.outcomes else 200
        if isinstance(outcome, Exception):
            raise outcome
        if isinstance(outcome, tuple):
            status, headers = outcome
            return TransportResponse(status, b"body", headers=headers)
        return TransportResponse(outcome, b"<html></html>")


def policy(**kw) -> FetchPolicy:
    base = dict(min_interval_per_host=0.5, timeout=5.0, max_retries=3, backoff_base=1.0,
                respect_robots=False)
    base.update(kw)
    return FetchPolicy(**base)


def test_ten_same_host_fetches_span_min_interval():
    clock = SimulatedClock()
    fetcher = Fetcher(policy(), Scripted([]), clock)
    for i in range(10):
        fetcher.fetch(f"https://www.agoravox.fr/a/{i}")
    starts = [r.started for r in fetcher.trace]
    assert len(starts) == 10
    assert starts[-1] - starts[0] >= 4.5
    assert all(b - a >= 0.5 for a, b in zip(starts, starts[1:]))


def test_other_hosts_are_not_delayed():
    clock = SimulatedClock()
    fetcher = Fetcher(policy(min_interval_per_host=10.0), Scripted([]), clock)
    fetcher.fetch("https://a.example/1")
    fetcher.fetch("https://b.example/1")
    assert clock.now() == 0.0


@pytest.mark.parametrize("script,expected_calls", [
    ([503, 503, 200], 3),
    ([TransportTimeout("slow"), 200], 2),
    ([503, TransportTimeout("slow"), 502, 200], 4),
])
def test_retries_until_success(script, expected_calls):
    transport = Scripted(script)
    page = Fetcher(policy(), transport, SimulatedClock()).fetch("https://h.example/x")
    assert page.status == 200
    assert page.attempts == expected_calls == len(transport.calls)


def test_retries_exhausted_reports_every_attempt():
    transport = Scripted([503] * 10)
    with pytest.raises(FetchError) as info:
        Fetcher(policy(max_retries=3), transport, SimulatedClock()).fetch("https://h.example/x")
    assert len(transport.calls) == 4
    assert len(info.value.attempts) == 4
    assert all("503" in a for a in info.value.attempts)


def test_backoff_schedule_is_exponential():
    clock = SimulatedClock()
    transport = Scripted([503, 503, 503, 200])
    fetcher = Fetcher(policy(min_interval_per_host=0.0, backoff_base=1.0), transport, clock)
    fetcher.fetch("https://h.example/x")
    starts = [r.started for r in fetcher.trace]
    assert [b - a for a, b in zip(starts, starts[1:])] == [1.0, 2.0, 4.0]


def test_retry_after_is_honoured():
    clock = SimulatedClock()
    transport = Scripted([(503, {"Retry-After": "7"}), 200])
    fetcher = Fetcher(policy(min_interval_per_host=0.0), transport, clock)
    fetcher.fetch("https://h.example/x")
    assert fetcher.trace[1].started - fetcher.trace[0].started == 7.0


@pytest.mark.parametrize("status", [400, 404, 410, 429])
def test_client_errors_are_not_retried(status):
    transport = Scripted([status, 200])
    with pytest.raises(FetchError) as info:
        Fetcher(policy(), transport, SimulatedClock()).fetch("https://h.example/x")
    assert info.value.status == status
    assert len(transport.calls) == 1


def test_robots_disallow_blocks_before_any_request():
    transport = Scripted([], robots="User-agent: *\nDisallow: /private/\n")
    fetcher = Fetcher(policy(respect_robots=True), transport, SimulatedClock())
    with pytest.raises(RobotsDisallowed):
        fetcher.fetch("https://h.example/private/page")
    assert fetcher.fetch("https://h.example/public").status == 200
    assert transport.calls == ["https://h.example/public"]


def test_robots_switch_off():
    transport = Scripted([], robots="User-agent: *\nDisallow: /\n")
    fetcher = Fetcher(policy(respect_robots=False), transport, SimulatedClock())
    assert fetcher.fetch("https://h.example/x").status == 200


def test_missing_robots_file_allows():
    fetcher = Fetcher(policy(respect_robots=True), Scripted([]), SimulatedClock())
    assert fetcher.fetch("https://h.example/x").status == 200


def test_shared_limiter_spaces_one_shot_fetches():
    clock = SimulatedClock()
    limiter = HostRateLimiter(2.0, clock)
    for _ in range(3):
        fetch_page("https://h.example/x", policy(), clock, Scripted([]), limiter)
    assert [r.started for r in limiter.trace] == [0.0, 2.0, 4.0]


def test_threads_never_overlap_on_one_host():
    clock = SimulatedClock()
    inflight = []
    peak = []
    lock = threading.Lock()

    def transport(url, headers, timeout):
        with lock:
            inflight.append(url)
            peak.append(len(inflight))
        with lock:
            inflight.remove(url)
        return TransportResponse(200, b"")

    fetcher = Fetcher(policy(min_interval_per_host=0.1), transport, clock)
    threads = [threading.Thread(target=fetcher.fetch, args=(f"https://h.example/{i}",)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert max(peak) == 1
    starts = sorted(r.started for r in fetcher.trace)
    assert all(b - a >= 0.1 - 1e-9 for a, b in zip(starts, starts[1:]))


@settings(max_examples=60)
@given(
    interval=st.floats(0.0, 3.0),
    cost=st.floats(0.0, 2.0),
    hosts=st.lists(st.sampled_from(["a.example", "b.example", "c.example"]), min_size=1, max_size=12),
)
def test_trace_respects_spacing_per_host(interval, cost, hosts):
    clock = SimulatedClock()
    fetcher = Fetcher(policy(min_interval_per_host=interval), Scripted([], clock, cost), clock)
    for i, host in enumerate(hosts):
        fetcher.fetch(f"https://{host}/{i}")
    by_host: dict[str, list[float]] = {}
    for record in fetcher.trace:
        by_host.setdefault(record.host, []).append(record.started)
    for starts in by_host.values():
        assert all(b - a >= interval - 1e-9 for a, b in zip(starts, starts[1:]))


def test_policy_and_page_validation():
    with pytest.raises(ValueError):
        FetchPolicy(min_interval_per_host=-1)
    with pytest.raises(ValueError):
        FetchPolicy(max_retries=-1)
    with pytest.raises(ValueError):
        RawPage("https://h.example", None, 999, b"", None)


def test_file_transport(tmp_path):
    (tmp_path / "page.html").write_text("<p>hi</p>", "utf-8")
    (tmp_path / "index.json").write_text(json.dumps({"https://h.example/p": "page.html"}))
    transport = FileTransport(tmp_path)
    assert transport("https://h.example/p", {}, 1.0).body == b"<p>hi</p>"
    assert transport("https://h.example/missing", {}, 1.0).status == 404
