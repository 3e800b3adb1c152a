"""Ingested-corpus storage and the records-to-chains pipeline."""

from __future__ import annotations

import base64
import json
from pathlib import Path
from typing import Iterable

from .extract import build_extracted_doc
from .temporal import VersionChain, build_chain
from .warc import (
    MementoRecord,
    canonicalize_url,
    format_memento_datetime,
    parse_memento_datetime,
)

BodyStore = dict[tuple[str, str], tuple[bytes, str]]  # (url, ts14) -> (body, ctype)


def save_records(path: str | Path, records: Iterable[MementoRecord]) -> int:
    """Write ingested records as JSON lines (bodies base64); returns count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fp:
        for r in records:
            fp.write(
                json.dumps(
                    {
                        "uriR": r.uri_r,
                        "uriM": r.uri_m,
                        "ts": format_memento_datetime(r.capture_datetime),
                        "status": r.http_status,
                        "contentType": r.content_type,
                        "archive": r.source_archive,
                        "body": base64.b64encode(r.body).decode("ascii"),
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
            n += 1
    return n


def load_records(path: str | Path) -> list[MementoRecord]:
    records = []
    with open(path, encoding="utf-8") as fp:
        for line in fp:
            if not line.strip():
                continue
            rec = json.loads(line)
            records.append(
                MementoRecord(
                    uri_r=rec["uriR"],
                    uri_m=rec.get("uriM"),
                    capture_datetime=parse_memento_datetime(rec["ts"]),
                    http_status=rec["status"],
                    content_type=rec.get("contentType", "text/html"),
                    body=base64.b64decode(rec["body"]),
                    source_archive=rec.get("archive", "local"),
                )
            )
    return records


def build_chains(
    records: Iterable[MementoRecord],
    keep_statuses: set[int] | None = frozenset({200}),
) -> tuple[list[VersionChain], BodyStore]:
    """Group records by canonical URL into chains, plus a replay body store.

    keep_statuses filters captures before chain building (ingest keeps
    every status; indexing defaults to successful responses only). Pass
    None to keep everything.
    """
    by_url: dict[str, list[MementoRecord]] = {}
    bodies: BodyStore = {}
    for record in records:
        if keep_statuses is not None and record.http_status not in keep_statuses:
            continue
        url = str(canonicalize_url(record.uri_r))
        by_url.setdefault(url, []).append(record)
        ts = format_memento_datetime(record.capture_datetime)
        bodies[(url, ts)] = (record.body, record.content_type)

    chains = []
    for url in sorted(by_url):
        docs = [build_extracted_doc(r) for r in by_url[url]]
        chains.append(build_chain(docs))
    return chains, bodies
