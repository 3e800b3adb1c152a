"""Read-only HTTP API over a loaded index, plus bannerless replay.

All /api responses are JSON with stable camel-case field names under
apiVersion "1". Replay responses carry a Memento-Datetime header in
RFC 1123 form. The service holds one immutable index snapshot; reloads
swap the snapshot reference atomically, so concurrent readers always see
a complete index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from email.utils import format_datetime
from pathlib import Path
from typing import Any
from urllib.parse import quote

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse

from . import index as index_mod
from .analytics import TemporalRules, categorize_terms, load_termlist, top_deleted_terms
from .animate import AnimTiming, build_animation
from .diffs import sliding_sequence
from .errors import (
    ChronodiffError,
    EmptyChain,
    InvalidDatetime,
    InvalidQuery,
    UnknownUrl,
    UnknownVersion,
)
from .extract import MementoRef
from .query import QUERY_TYPES, ChangeQuery, SearchHit, execute
from .temporal import VersionChain
from .warc import canonicalize_url, format_memento_datetime, parse_memento_datetime

API_VERSION = "1"

_BAD_REQUEST = {
    "EmptyQuery",
    "PhraseTooShort",
    "InvalidQuery",
    "InvalidDatetime",
    "InvalidUrl",
    "UnknownField",
}
_NOT_FOUND = {"UnknownUrl", "UnknownVersion", "EmptyChain"}


@dataclass
class ApiConfig:
    index_dir: str | Path
    listen: str = "127.0.0.1:8600"
    page_size: int = 10
    snippet_context: int = 10
    timing: AnimTiming = field(default_factory=AnimTiming)
    ui_path: str | Path | None = None
    stoplist_path: str | Path | None = None
    seedlist_path: str | Path | None = None

    def __post_init__(self) -> None:
        if self.page_size < 1:
            raise ValueError("page size must be at least 1")


class ServiceUnavailable(Exception):
    pass


class IndexHolder:
    """Atomic reference to the current index snapshot.

    swap() loads the new directory completely before publishing it, so a
    request never observes a half-built index; requests that arrive
    before any snapshot exists get a 503.
    """

    def __init__(self) -> None:
        self._index: index_mod.ChangeIndex | None = None

    def load(self, directory: str | Path) -> None:
        self.swap(directory)

    def swap(self, directory: str | Path) -> None:
        new_index = index_mod.load(directory)
        self._index = new_index

    def clear(self) -> None:
        self._index = None

    @property
    def current(self) -> index_mod.ChangeIndex:
        idx = self._index
        if idx is None:
            raise ServiceUnavailable("index swap in progress")
        return idx


def closest_memento(chain: VersionChain, t: datetime) -> tuple[int, MementoRef]:
    """Member memento with capture datetime nearest t; ties go earlier."""
    if not chain.versions:
        raise EmptyChain(str(chain.canonical_url))
    best = None
    for version_index, member in chain.all_members():
        key = (abs((member.capture_datetime - t).total_seconds()), member.capture_datetime)
        if best is None or key < best[0]:
            best = (key, version_index, member)
    return best[1], best[2]


def _iso(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _interval_json(interval: tuple[datetime, datetime] | None) -> dict | None:
    if interval is None:
        return None
    return {"start": _iso(interval[0]), "end": _iso(interval[1])}


def replay_link(url: str, dt: datetime) -> str:
    return f"/replay/{format_memento_datetime(dt)}/{quote(url, safe='/:?&=')}"


def serialize_hit(hit: SearchHit) -> dict[str, Any]:
    def version_json(ref) -> dict | None:
        if ref is None:
            return None
        return {
            "versionIndex": ref.version_index,
            "captureDatetime": _iso(ref.capture_datetime),
            "ts": format_memento_datetime(ref.capture_datetime),
            "uriM": ref.uri_m,
            "archive": ref.archive,
            "replayUrl": replay_link(hit.canonical_url, ref.capture_datetime),
        }

    url_q = quote(hit.canonical_url, safe="")
    t1 = format_memento_datetime(hit.pre_change.capture_datetime)
    t2 = format_memento_datetime(hit.post_change.capture_datetime)
    lifespan = None
    if hit.lifespan is not None:
        lifespan = {
            "firstVersion": hit.lifespan.first_version,
            "lastVersion": hit.lifespan.last_version,
            "added": _interval_json(hit.lifespan.added),
            "removed": _interval_json(hit.lifespan.removed),
        }
    return {
        "canonicalUrl": hit.canonical_url,
        "chainId": hit.chain_id,
        "transitionIndex": hit.transition_index,
        "preChange": version_json(hit.pre_change),
        "postChange": version_json(hit.post_change),
        "additionVersion": version_json(hit.addition_version),
        "changeInterval": _interval_json(hit.change_interval),
        "lifespan": lifespan,
        "partial": hit.partial,
        "delta": hit.delta,
        "snippet": [{"text": t.text, "mark": t.mark} for t in hit.snippet],
        "score": list(hit.score),
        "links": {
            "replayPre": replay_link(hit.canonical_url, hit.pre_change.capture_datetime),
            "replayPost": replay_link(hit.canonical_url, hit.post_change.capture_datetime),
            "replayAddition": (
                replay_link(hit.canonical_url, hit.addition_version.capture_datetime)
                if hit.addition_version
                else None
            ),
            "slide": f"/api/slide?url={url_q}&i={hit.transition_index}",
            "animate": f"/api/animate?url={url_q}&t1={t1}&t2={t2}",
        },
    }


def _error_json(code: str, message: str) -> dict:
    return {"apiVersion": API_VERSION, "error": {"code": code, "message": message}}


def _parse_opt_datetime(value: str | None) -> datetime | None:
    if value in (None, ""):
        return None
    return parse_memento_datetime(value)


def create_app(config: ApiConfig, holder: IndexHolder | None = None) -> FastAPI:
    app = FastAPI(title="chronodiff", docs_url=None, redoc_url=None)
    if holder is None:
        holder = IndexHolder()
        holder.load(config.index_dir)
    app.state.holder = holder
    app.state.config = config

    stoplist = load_termlist(config.stoplist_path) if config.stoplist_path else set()
    seedlist = load_termlist(config.seedlist_path) if config.seedlist_path else set()

    @app.exception_handler(ChronodiffError)
    async def chronodiff_error(request: Request, exc: ChronodiffError):
        if exc.code in _BAD_REQUEST:
            status = 400
        elif exc.code in _NOT_FOUND:
            status = 404
        else:
            status = 500
        return JSONResponse(status_code=status, content=_error_json(exc.code, str(exc)))

    @app.exception_handler(ServiceUnavailable)
    async def unavailable(request: Request, exc: ServiceUnavailable):
        return JSONResponse(
            status_code=503, content=_error_json("IndexSwapInProgress", str(exc))
        )

    @app.exception_handler(RequestValidationError)
    async def invalid_params(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content=_error_json("InvalidParameters", str(exc))
        )

    def chain_for(url: str) -> tuple[int, VersionChain]:
        idx = holder.current
        cid = idx.chain_for_url(str(canonicalize_url(url)))
        if cid is None:
            raise UnknownUrl(url)
        return cid, idx.chains[cid]

    def _date_range(from_s, to_s):
        lo = _parse_opt_datetime(from_s)
        hi = _parse_opt_datetime(to_s)
        if lo is None and hi is None:
            return None
        return (lo, hi)

    @app.get("/api/search")
    def api_search(
        request: Request,
        type: str,
        q: str,
        partial: bool = True,
        domain: str | None = None,
        page: int = 1,
    ):
        if type not in QUERY_TYPES:
            raise InvalidQuery(f"unknown change type {type!r}")
        if page < 1:
            raise InvalidQuery("page must be at least 1")
        params = request.query_params
        query = ChangeQuery(
            change_type=type,
            text=q,
            include_partial=partial,
            date_range=_date_range(params.get("from"), params.get("to")),
            domain=domain,
        )
        hits = execute(query, holder.current, context=config.snippet_context)
        size = config.page_size
        start = (page - 1) * size
        return {
            "apiVersion": API_VERSION,
            "query": {
                "type": type,
                "q": q,
                "partial": partial,
                "from": params.get("from"),
                "to": params.get("to"),
                "domain": domain,
            },
            "total": len(hits),
            "page": page,
            "pageSize": size,
            "hits": [serialize_hit(h) for h in hits[start : start + size]],
        }

    @app.get("/api/versions")
    def api_versions(url: str):
        cid, chain = chain_for(url)
        seq = sliding_sequence(chain)
        return {
            "apiVersion": API_VERSION,
            "canonicalUrl": str(chain.canonical_url),
            "chainId": cid,
            "first": seq.first_index,
            "last": seq.last_index,
            "identicalSkipMap": [e.identical for e in seq.entries],
            "versions": [
                {
                    "index": v.version_index,
                    "validity": {
                        "start": _iso(v.validity[0]),
                        "end": _iso(v.validity[1]) if v.validity[1] else None,
                    },
                    "members": [
                        {
                            "ts": format_memento_datetime(m.capture_datetime),
                            "captureDatetime": _iso(m.capture_datetime),
                            "uriM": m.uri_m,
                            "status": m.http_status,
                            "archive": m.source_archive,
                            "replayUrl": replay_link(
                                str(chain.canonical_url), m.capture_datetime
                            ),
                        }
                        for m in v.members
                    ],
                }
                for v in chain.versions
            ],
        }

    @app.get("/api/slide")
    def api_slide(url: str, i: int):
        _, chain = chain_for(url)
        seq = sliding_sequence(chain)
        if not 0 <= i < len(seq.entries):
            raise UnknownVersion(f"no transition {i} for {url}")
        entry = seq.entries[i]
        return {
            "apiVersion": API_VERSION,
            "canonicalUrl": str(chain.canonical_url),
            "pair": list(entry.pair),
            "identical": entry.identical,
            "first": seq.first_index,
            "last": seq.last_index,
            "count": len(seq.entries),
            "regions": [
                {
                    "kind": r.kind,
                    "aTokens": list(r.a_tokens),
                    "bTokens": list(r.b_tokens),
                }
                for r in entry.script.regions
            ],
        }

    @app.get("/api/animate")
    def api_animate(url: str, t1: str, t2: str):
        cid, chain = chain_for(url)
        idx = holder.current
        _, m1 = closest_memento(chain, parse_memento_datetime(t1))
        _, m2 = closest_memento(chain, parse_memento_datetime(t2))
        bodies = []
        for m in (m1, m2):
            stored = idx.bodies.get((cid, format_memento_datetime(m.capture_datetime)))
            if stored is None:
                raise UnknownVersion(
                    f"no stored body for {url} at {format_memento_datetime(m.capture_datetime)}"
                )
            bodies.append(stored[0])
        doc = build_animation(bodies[0], bodies[1], timing=config.timing)
        return HTMLResponse(content=doc, media_type="text/html")

    @app.get("/replay/{ts}/{url:path}")
    def replay(ts: str, url: str, request: Request):
        if request.url.query:
            url = url + "?" + request.url.query
        try:
            t = parse_memento_datetime(ts)
        except InvalidDatetime:
            raise UnknownVersion(f"bad replay timestamp {ts!r}")
        cid, chain = chain_for(url)
        idx = holder.current
        _, member = closest_memento(chain, t)
        member_ts = format_memento_datetime(member.capture_datetime)
        stored = idx.bodies.get((cid, member_ts))
        if stored is None:
            raise UnknownVersion(f"no stored body for {url} at {member_ts}")
        body, content_type = stored
        return Response(
            content=body,
            media_type=content_type or "text/html",
            headers={
                "Memento-Datetime": format_datetime(
                    member.capture_datetime.astimezone(timezone.utc), usegmt=True
                ),
                "X-Memento-Ts": member_ts,
            },
        )

    @app.get("/api/analytics/top-deleted")
    def api_top_deleted(n: int = 10):
        if n < 1:
            raise InvalidQuery("n must be at least 1")
        ranked = top_deleted_terms(holder.current, n)
        cats, histogram = categorize_terms(ranked, stoplist, seedlist, TemporalRules())
        return {
            "apiVersion": API_VERSION,
            "terms": [
                {
                    "term": c.term,
                    "deletions": c.deletion_doc_frequency,
                    "category": c.category,
                }
                for c in cats
            ],
            "histogram": histogram,
        }

    if config.ui_path:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(config.ui_path), html=True), name="ui")

    return app
