"""TimeMap parsing, paired-capture analysis, and binary-search refinement.

TimeMaps arrive in application/link-format. Pairing windows follow the
half-of-year convention: a page is "paired" when it has at least one
capture in each window; the capture picked per window is a parameter
(earliest by default).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import datetime
from typing import Callable, Mapping, Sequence
from urllib.parse import urlsplit

from .errors import MalformedLinkFormat, NoChange
from .extract import extract_text, tokenize
from .warc import parse_memento_datetime

BUCKETS = ("200", "3xx", "4xx", "5xx", "missing")


@dataclass(frozen=True)
class TimeMapEntry:
    uri_m: str
    capture_datetime: datetime
    source_archive: str
    rel: frozenset[str] = frozenset({"memento"})


def _split_links(body: str) -> list[str]:
    """Split link-format on top-level commas (commas inside quotes stay)."""
    parts = []
    buf = []
    in_quote = False
    for ch in body:
        if ch == '"':
            in_quote = not in_quote
        if ch == "," and not in_quote:
            parts.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
    parts.append("".join(buf))
    return [p.strip() for p in parts if p.strip()]


_PARAM_RE = re.compile(r'(\w+)\s*=\s*(?:"([^"]*)"|([^;]*))')


def parse_timemap(body: str) -> list[TimeMapEntry]:
    """Memento entries of a link-format TimeMap, sorted by datetime."""
    entries = []
    for link in _split_links(body):
        if not link.startswith("<"):
            raise MalformedLinkFormat(f"link does not start with '<': {link[:40]!r}")
        end = link.find(">")
        if end == -1:
            raise MalformedLinkFormat(f"unterminated URI in {link[:40]!r}")
        uri = link[1:end]
        params: dict[str, str] = {}
        for m in _PARAM_RE.finditer(link[end + 1 :]):
            params[m.group(1).lower()] = (m.group(2) if m.group(2) is not None else m.group(3) or "").strip()
        rels = set((params.get("rel") or "").lower().split())
        if "memento" not in rels:
            continue
        if "datetime" not in params:
            raise MalformedLinkFormat(f"memento link without datetime: {link[:60]!r}")
        dt = parse_memento_datetime(params["datetime"])
        host = urlsplit(uri).hostname or ""
        if not host:
            raise MalformedLinkFormat(f"memento URI is not absolute: {uri!r}")
        entries.append(
            TimeMapEntry(
                uri_m=uri,
                capture_datetime=dt,
                source_archive=host,
                rel=frozenset(rels),
            )
        )
    entries.sort(key=lambda e: (e.capture_datetime, e.uri_m))
    return entries


Window = tuple[datetime, datetime]  # half-open [start, end)


def _in_window(entry: TimeMapEntry, window: Window) -> bool:
    return window[0] <= entry.capture_datetime < window[1]


def find_pairs(
    entries: Sequence[TimeMapEntry],
    window_a: Window,
    window_b: Window,
    select: str = "earliest",
) -> tuple[TimeMapEntry, TimeMapEntry] | None:
    """The capture pair for two disjoint windows, or None when either
    window has no capture. ``select`` picks earliest or latest per window."""
    if window_a[1] > window_b[0]:
        raise ValueError("windows must be disjoint with A before B")
    pick = min if select == "earliest" else max
    in_a = [e for e in entries if _in_window(e, window_a)]
    in_b = [e for e in entries if _in_window(e, window_b)]
    if not in_a or not in_b:
        return None
    key = lambda e: (e.capture_datetime, e.uri_m)
    return pick(in_a, key=key), pick(in_b, key=key)


@dataclass(frozen=True)
class PageCaptures:
    entries: tuple[TimeMapEntry, ...]
    statuses: Mapping[str, int] = field(default_factory=dict)  # uri_m -> status


def status_bucket(status: int | None) -> str:
    """Collapse an HTTP status to the report's granularity; None (unknown
    or no capture) collapses to missing."""
    if status is None:
        return "missing"
    if 200 <= status < 300:
        return "200"
    if 300 <= status < 400:
        return "3xx"
    if 400 <= status < 500:
        return "4xx"
    if 500 <= status < 600:
        return "5xx"
    return "missing"


@dataclass
class PairingReport:
    total_pages: int
    paired_pages: int
    bucket_counts: dict[tuple[str, str], int]
    bucket_fractions: dict[tuple[str, str], float]
    archive_coverage: dict[str, tuple[float, float]]
    page_status: dict[str, tuple[str, str]]

    def window_fractions(self, which: int) -> dict[str, float]:
        """Marginal bucket fractions for one window (0 = A, 1 = B)."""
        out: dict[str, float] = {b: 0.0 for b in BUCKETS}
        for (ba, bb), frac in self.bucket_fractions.items():
            out[(ba, bb)[which]] += frac
        return out


def pairing_report(
    pages: Mapping[str, PageCaptures],
    window_a: Window,
    window_b: Window,
    select: str = "earliest",
) -> PairingReport:
    """Status-bucket matrix over all pages and per-archive coverage.

    Bucket fractions use all pages as the denominator, so each window's
    marginals sum to 1. Archive coverage counts paired pages with at
    least one in-window capture at that archive, divided by the number of
    paired pages; a page counts once per archive, so columns are
    deliberately non-additive.
    """
    total = len(pages)
    bucket_counts: dict[tuple[str, str], int] = {}
    page_status: dict[str, tuple[str, str]] = {}
    paired_urls: list[str] = []

    for url, page in pages.items():
        pair = find_pairs(page.entries, window_a, window_b, select=select)
        if pair is None:
            in_a = [e for e in page.entries if _in_window(e, window_a)]
            in_b = [e for e in page.entries if _in_window(e, window_b)]
            pick = min if select == "earliest" else max
            key = lambda e: (e.capture_datetime, e.uri_m)
            ba = status_bucket(page.statuses.get(pick(in_a, key=key).uri_m)) if in_a else "missing"
            bb = status_bucket(page.statuses.get(pick(in_b, key=key).uri_m)) if in_b else "missing"
        else:
            paired_urls.append(url)
            ba = status_bucket(page.statuses.get(pair[0].uri_m))
            bb = status_bucket(page.statuses.get(pair[1].uri_m))
        page_status[url] = (ba, bb)
        bucket_counts[(ba, bb)] = bucket_counts.get((ba, bb), 0) + 1

    fractions = {
        k: (v / total if total else 0.0) for k, v in bucket_counts.items()
    }

    coverage: dict[str, tuple[float, float]] = {}
    if paired_urls:
        archives = sorted(
            {e.source_archive for u in paired_urls for e in pages[u].entries}
        )
        for archive in archives:
            hits_a = sum(
                1
                for u in paired_urls
                if any(
                    e.source_archive == archive and _in_window(e, window_a)
                    for e in pages[u].entries
                )
            )
            hits_b = sum(
                1
                for u in paired_urls
                if any(
                    e.source_archive == archive and _in_window(e, window_b)
                    for e in pages[u].entries
                )
            )
            coverage[archive] = (hits_a / len(paired_urls), hits_b / len(paired_urls))

    return PairingReport(
        total_pages=total,
        paired_pages=len(paired_urls),
        bucket_counts=bucket_counts,
        bucket_fractions=fractions,
        archive_coverage=coverage,
        page_status=page_status,
    )


@dataclass
class RefinementResult:
    """Adjacent candidate indices straddling the term's change point."""

    pre_index: int
    post_index: int
    fetches: int
    non_monotone: bool = False


def term_count(html: bytes | str, term: str) -> int:
    """Occurrences of a term in a page, via the standard extraction path."""
    count = 0
    for block in extract_text(html):
        count += sum(1 for t in tokenize(block) if t == term)
    return count


def refine_change_interval(
    fetch: Callable[[int], bytes],
    n_candidates: int,
    term: str,
    count_lo: int,
    count_hi: int,
) -> RefinementResult:
    """Binary-search the change point of a term across ordered versions.

    Candidates are indexed 0..n_candidates-1 in datetime order; index 0
    and n_candidates-1 are the already-indexed endpoints whose counts the
    caller supplies, so only intermediate versions are fetched: at most
    ceil(log2(k+1)) fetches for k intermediates. A fetched count matching
    neither endpoint is evidence of more than one change event; the first
    straddle is still returned, flagged non_monotone.
    """
    if count_lo == count_hi:
        raise NoChange(f"term {term!r} has count {count_lo} at both endpoints")
    if n_candidates < 2:
        raise ValueError("need at least the two endpoint versions")

    fetches = 0
    non_monotone = False
    counts: dict[int, int] = {0: count_lo, n_candidates - 1: count_hi}

    def probe(i: int) -> int:
        nonlocal fetches, non_monotone
        if i not in counts:
            fetches += 1
            counts[i] = term_count(fetch(i), term)
            if counts[i] not in (count_lo, count_hi):
                non_monotone = True
        return counts[i]

    lo, hi = 0, n_candidates - 1
    # Invariant: count(lo) == count_lo observed, count(hi) != count_lo.
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if probe(mid) == count_lo:
            lo = mid
        else:
            hi = mid
    return RefinementResult(
        pre_index=lo, post_index=hi, fetches=fetches, non_monotone=non_monotone
    )
