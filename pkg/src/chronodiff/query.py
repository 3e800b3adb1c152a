"""Change queries over an index: term/phrase additions and deletions.

Term queries read the change fields directly. Two-token phrases read the
bigram change fields. Longer phrases gather candidate transitions from
the text field (versions containing every phrase token) and verify each
candidate with a positional recount, so results match an exhaustive
transition scan even for adjacency-only changes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .diffs import KEEP, token_diff
from .errors import EmptyQuery, InvalidQuery, PhraseTooShort
from .extract import ExtractedDoc, tokenize
from .index import (
    ADDED,
    ADDED_BIGRAM,
    DELETED,
    DELETED_BIGRAM,
    PARTIALLY_ADDED,
    PARTIALLY_DELETED,
    TEXT,
    ChangeIndex,
    lookup,
)
from .temporal import Lifespan, VersionChain, lifespan_runs

ADDED_TERM = "added_term"
DELETED_TERM = "deleted_term"
ADDED_PHRASE = "added_phrase"
DELETED_PHRASE = "deleted_phrase"

QUERY_TYPES = (ADDED_TERM, DELETED_TERM, ADDED_PHRASE, DELETED_PHRASE)


@dataclass(frozen=True)
class ChangeQuery:
    change_type: str
    text: str
    include_partial: bool = True
    date_range: tuple[datetime | None, datetime | None] | None = None
    domain: str | None = None

    def tokens(self) -> list[str]:
        return tokenize(self.text)

    @property
    def is_deletion(self) -> bool:
        return self.change_type in (DELETED_TERM, DELETED_PHRASE)

    @property
    def is_phrase(self) -> bool:
        return self.change_type in (ADDED_PHRASE, DELETED_PHRASE)


@dataclass(frozen=True)
class SnippetToken:
    text: str
    mark: str  # kept | added | deleted | ellipsis


@dataclass(frozen=True)
class VersionRef:
    version_index: int
    capture_datetime: datetime
    uri_m: str | None
    archive: str


@dataclass
class SearchHit:
    canonical_url: str
    chain_id: int
    transition_index: int
    pre_change: VersionRef
    post_change: VersionRef
    addition_version: VersionRef | None
    change_interval: tuple[datetime, datetime]
    lifespan: Lifespan | None
    partial: bool
    delta: int
    snippet: list[SnippetToken] = field(default_factory=list)
    score: tuple = ()


def validate_query(query: ChangeQuery) -> list[str]:
    if query.change_type not in QUERY_TYPES:
        raise InvalidQuery(f"unknown change type {query.change_type!r}")
    toks = query.tokens()
    if not toks:
        raise EmptyQuery("query text has no tokens")
    if query.is_phrase:
        if len(toks) < 2:
            raise PhraseTooShort("phrase queries need at least two tokens")
    elif len(toks) != 1:
        raise InvalidQuery("term queries take exactly one token")
    return toks


def rank_key(hit: SearchHit) -> tuple:
    """Deterministic total order: full changes first, then larger deltas,
    then more recent change intervals, then URL and transition."""
    return (
        1 if hit.partial else 0,
        -hit.delta,
        -hit.change_interval[1].timestamp(),
        hit.canonical_url,
        hit.transition_index,
    )


def _host_matches(host: str, domain: str) -> bool:
    host = host.split(":", 1)[0]
    domain = domain.lower().lstrip(".")
    return host == domain or host.endswith("." + domain)


def _interval_overlaps(
    interval: tuple[datetime, datetime],
    date_range: tuple[datetime | None, datetime | None],
) -> bool:
    # change_interval is (start, end]; the filter range is closed.
    lo, hi = date_range
    if lo is not None and interval[1] < lo:
        return False
    if hi is not None and interval[0] >= hi:
        return False
    return True


def _passes_filters(query: ChangeQuery, chain: VersionChain, k: int) -> bool:
    if query.domain and not _host_matches(chain.canonical_url.host, query.domain):
        return False
    if query.date_range is not None:
        if not _interval_overlaps(chain.transitions[k].change_interval, query.date_range):
            return False
    return True


def _version_ref(chain: VersionChain, index: int, use_last: bool) -> VersionRef:
    v = chain.versions[index]
    m = v.members[-1] if use_last else v.members[0]
    return VersionRef(
        version_index=index,
        capture_datetime=m.capture_datetime,
        uri_m=m.uri_m,
        archive=m.source_archive,
    )


def _build_hit(
    query: ChangeQuery,
    index: ChangeIndex,
    chain_id: int,
    k: int,
    delta: int,
    partial: bool,
    query_tokens: list[str],
    context: int,
) -> SearchHit:
    chain = index.chains[chain_id]
    presence = [v.doc.count_phrase(query_tokens) > 0 for v in chain.versions]
    runs = lifespan_runs(chain, presence)
    anchor = k if query.is_deletion else k + 1
    lifespan = next(
        (r for r in runs if r.first_version <= anchor <= r.last_version), None
    )

    addition = None
    if query.is_deletion and lifespan is not None and lifespan.added is not None:
        addition = _version_ref(chain, lifespan.first_version, use_last=False)

    snippet = make_snippet(
        chain.versions[k].doc,
        chain.versions[k + 1].doc,
        query_tokens,
        context=context,
        deletion=query.is_deletion,
    )
    return SearchHit(
        canonical_url=str(chain.canonical_url),
        chain_id=chain_id,
        transition_index=k,
        pre_change=_version_ref(chain, k, use_last=True),
        post_change=_version_ref(chain, k + 1, use_last=False),
        addition_version=addition,
        change_interval=chain.transitions[k].change_interval,
        lifespan=lifespan,
        partial=partial,
        delta=delta,
        snippet=snippet,
    )


def execute(query: ChangeQuery, index: ChangeIndex, context: int = 10) -> list[SearchHit]:
    """Run one change query; hits come back in rank order."""
    toks = validate_query(query)
    matches: list[tuple[int, int, int, bool]] = []  # chain, transition, delta, partial

    if not query.is_phrase:
        term = toks[0]
        full_field = DELETED if query.is_deletion else ADDED
        part_field = PARTIALLY_DELETED if query.is_deletion else PARTIALLY_ADDED
        for p in lookup(index, full_field, term):
            matches.append((p.chain_id, p.ordinal, abs(p.payload), False))
        if query.include_partial:
            for p in lookup(index, part_field, term):
                matches.append((p.chain_id, p.ordinal, abs(p.payload), True))
    elif len(toks) == 2:
        bigram_field = DELETED_BIGRAM if query.is_deletion else ADDED_BIGRAM
        for p in lookup(index, bigram_field, toks[0] + " " + toks[1]):
            chain = index.chains[p.chain_id]
            post_count = chain.versions[p.ordinal + 1].doc.count_phrase(toks)
            pre_count = chain.versions[p.ordinal].doc.count_phrase(toks)
            partial = (post_count if query.is_deletion else pre_count) > 0
            if partial and not query.include_partial:
                continue
            matches.append((p.chain_id, p.ordinal, abs(post_count - pre_count), partial))
    else:
        matches.extend(_long_phrase_matches(query, index, toks))

    hits = [
        _build_hit(query, index, cid, k, delta, partial, toks, context)
        for cid, k, delta, partial in matches
        if _passes_filters(query, index.chains[cid], k)
    ]
    for h in hits:
        h.score = rank_key(h)
    hits.sort(key=lambda h: h.score)
    return hits


def _long_phrase_matches(
    query: ChangeQuery, index: ChangeIndex, toks: list[str]
) -> list[tuple[int, int, int, bool]]:
    # Versions containing all phrase tokens, seeded from the rarest token.
    postings_per_token = [lookup(index, TEXT, t) for t in set(toks)]
    postings_per_token.sort(key=len)
    candidates = {(p.chain_id, p.ordinal) for p in postings_per_token[0]}
    for plist in postings_per_token[1:]:
        if not candidates:
            return []
        candidates &= {(p.chain_id, p.ordinal) for p in plist}

    transitions = set()
    for cid, v in candidates:
        n_trans = len(index.chains[cid].transitions)
        if v > 0:
            transitions.add((cid, v - 1))
        if v < n_trans:
            transitions.add((cid, v))

    out = []
    for cid, k in sorted(transitions):
        chain = index.chains[cid]
        pre_count = chain.versions[k].doc.count_phrase(toks)
        post_count = chain.versions[k + 1].doc.count_phrase(toks)
        if query.is_deletion:
            if pre_count <= post_count:
                continue
            partial = post_count > 0
        else:
            if post_count <= pre_count:
                continue
            partial = pre_count > 0
        if partial and not query.include_partial:
            continue
        out.append((cid, k, abs(post_count - pre_count), partial))
    return out


def make_snippet(
    pre: ExtractedDoc,
    post: ExtractedDoc,
    query_tokens: list[str],
    context: int = 10,
    deletion: bool = True,
) -> list[SnippetToken]:
    """Windowed diff snippet around the edit region matching the query.

    Picks the first edit region whose deleted (or, for additions,
    inserted) tokens include a query token; falls back to the largest
    edit region when the match came from counts elsewhere. Emits the
    region's marked tokens with up to ``context`` kept tokens per side
    and ellipsis markers where the stream is truncated.
    """
    script = token_diff(pre.tokens, post.tokens)
    if script.is_identity():
        return []

    # Merged stream of (token, mark) with region ids.
    stream: list[tuple[str, str, int]] = []
    region_ids: list[int] = []
    for rid, region in enumerate(script.regions):
        if region.kind == KEEP:
            stream.extend((t, "kept", rid) for t in region.a_tokens)
        else:
            stream.extend((t, "deleted", rid) for t in region.a_tokens)
            stream.extend((t, "added", rid) for t in region.b_tokens)
            region_ids.append(rid)

    wanted = set(query_tokens)

    def region_matches(rid: int) -> bool:
        region = script.regions[rid]
        side = region.a_tokens if deletion else region.b_tokens
        return any(t in wanted for t in side)

    chosen = next((rid for rid in region_ids if region_matches(rid)), None)
    if chosen is None:
        chosen = max(
            region_ids,
            key=lambda rid: len(script.regions[rid].a_tokens)
            + len(script.regions[rid].b_tokens),
        )

    first = next(i for i, item in enumerate(stream) if item[2] == chosen)
    last = max(i for i, item in enumerate(stream) if item[2] == chosen)

    start = first
    kept_seen = 0
    while start > 0 and kept_seen < context:
        start -= 1
        if stream[start][1] == "kept":
            kept_seen += 1
    end = last
    kept_seen = 0
    while end < len(stream) - 1 and kept_seen < context:
        end += 1
        if stream[end][1] == "kept":
            kept_seen += 1
    if context == 0:
        start, end = first, last

    out = []
    if start > 0:
        out.append(SnippetToken("…", "ellipsis"))
    out.extend(SnippetToken(t, m) for t, m, _ in stream[start : end + 1])
    if end < len(stream) - 1:
        out.append(SnippetToken("…", "ellipsis"))
    return out
