"""Version chains with coalescing, validity ranges, and change sets.

Captures of one canonicalized URL are ordered by datetime and consecutive
captures with identical extracted token streams are coalesced into one
version. Each version carries a half-open validity interval; the last
version is open-ended. Changes between consecutive versions are reported
as datetime intervals, never point estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .errors import MixedUrls
from .extract import ExtractedDoc, MementoRef
from .warc import CanonicalUrl


@dataclass(frozen=True)
class ChangeSet:
    """Term and bigram deltas between two consecutive coalesced versions.

    added/removed hold full transitions (count 0 -> >0 and >0 -> 0);
    the partially_* sets hold strict count changes that stay positive.
    Bigram sets follow the same split so bigram phrase queries can be
    answered with full/partial semantics straight from the index.
    """

    from_index: int
    to_index: int
    change_interval: tuple[datetime, datetime]
    added_terms: frozenset[str]
    removed_terms: frozenset[str]
    partially_removed_terms: frozenset[str]
    partially_added_terms: frozenset[str]
    added_bigrams: frozenset[tuple[str, str]]
    removed_bigrams: frozenset[tuple[str, str]]
    partially_removed_bigrams: frozenset[tuple[str, str]]
    partially_added_bigrams: frozenset[tuple[str, str]]

    def is_empty(self) -> bool:
        return not (
            self.added_terms
            or self.removed_terms
            or self.partially_removed_terms
            or self.partially_added_terms
            or self.added_bigrams
            or self.removed_bigrams
            or self.partially_removed_bigrams
            or self.partially_added_bigrams
        )


@dataclass
class CoalescedVersion:
    """A maximal run of captures sharing one extracted token stream."""

    version_index: int
    validity: tuple[datetime, datetime | None]  # half-open; None = unbounded
    members: list[MementoRef]
    doc: ExtractedDoc

    @property
    def first_capture(self) -> datetime:
        return self.members[0].capture_datetime

    @property
    def last_capture(self) -> datetime:
        return self.members[-1].capture_datetime


@dataclass
class VersionChain:
    canonical_url: CanonicalUrl
    versions: list[CoalescedVersion]
    transitions: list[ChangeSet] = field(default_factory=list)

    def all_members(self) -> list[tuple[int, MementoRef]]:
        """(version_index, member) pairs in capture order."""
        out = []
        for v in self.versions:
            out.extend((v.version_index, m) for m in v.members)
        return out


def compute_changes(a: ExtractedDoc, b: ExtractedDoc, from_index: int = 0) -> ChangeSet:
    """Count-based change set between an earlier doc a and a later doc b."""
    added, removed, part_removed, part_added = set(), set(), set(), set()
    for term in a.unigram_counts.keys() | b.unigram_counts.keys():
        ca = a.unigram_counts.get(term, 0)
        cb = b.unigram_counts.get(term, 0)
        if ca == cb:
            continue
        if ca == 0:
            added.add(term)
        elif cb == 0:
            removed.add(term)
        elif cb < ca:
            part_removed.add(term)
        else:
            part_added.add(term)

    b_added, b_removed, b_part_removed, b_part_added = set(), set(), set(), set()
    for bg in a.bigram_counts.keys() | b.bigram_counts.keys():
        ca = a.bigram_counts.get(bg, 0)
        cb = b.bigram_counts.get(bg, 0)
        if ca == cb:
            continue
        if ca == 0:
            b_added.add(bg)
        elif cb == 0:
            b_removed.add(bg)
        elif cb < ca:
            b_part_removed.add(bg)
        else:
            b_part_added.add(bg)

    return ChangeSet(
        from_index=from_index,
        to_index=from_index + 1,
        change_interval=(a.capture_datetime, b.capture_datetime),
        added_terms=frozenset(added),
        removed_terms=frozenset(removed),
        partially_removed_terms=frozenset(part_removed),
        partially_added_terms=frozenset(part_added),
        added_bigrams=frozenset(b_added),
        removed_bigrams=frozenset(b_removed),
        partially_removed_bigrams=frozenset(b_part_removed),
        partially_added_bigrams=frozenset(b_part_added),
    )


def build_chain(docs: list[ExtractedDoc]) -> VersionChain:
    """Coalesce captures of one URL into a chain of distinct versions."""
    if not docs:
        raise MixedUrls("no documents given")
    url = docs[0].canonical_url
    for d in docs[1:]:
        if d.canonical_url != url:
            raise MixedUrls(f"{d.canonical_url} does not match {url}")

    ordered = sorted(
        docs,
        key=lambda d: (d.capture_datetime, d.memento.uri_m if d.memento else ""),
    )

    versions: list[CoalescedVersion] = []
    for doc in ordered:
        ref = doc.memento or MementoRef(
            uri_r=str(doc.canonical_url),
            capture_datetime=doc.capture_datetime,
            http_status=200,
            content_type="text/html",
        )
        if versions and versions[-1].doc.content_hash == doc.content_hash:
            versions[-1].members.append(ref)
        else:
            versions.append(
                CoalescedVersion(
                    version_index=len(versions),
                    validity=(doc.capture_datetime, None),
                    members=[ref],
                    doc=doc,
                )
            )

    for i in range(len(versions) - 1):
        start = versions[i].validity[0]
        versions[i].validity = (start, versions[i + 1].first_capture)

    transitions = [
        _transition(versions[i], versions[i + 1]) for i in range(len(versions) - 1)
    ]
    return VersionChain(canonical_url=url, versions=versions, transitions=transitions)


def _transition(pre: CoalescedVersion, post: CoalescedVersion) -> ChangeSet:
    cs = compute_changes(pre.doc, post.doc, from_index=pre.version_index)
    # The change happened after the old content was last seen and no later
    # than the first time the new content was seen.
    return ChangeSet(
        from_index=pre.version_index,
        to_index=post.version_index,
        change_interval=(pre.last_capture, post.first_capture),
        added_terms=cs.added_terms,
        removed_terms=cs.removed_terms,
        partially_removed_terms=cs.partially_removed_terms,
        partially_added_terms=cs.partially_added_terms,
        added_bigrams=cs.added_bigrams,
        removed_bigrams=cs.removed_bigrams,
        partially_removed_bigrams=cs.partially_removed_bigrams,
        partially_added_bigrams=cs.partially_added_bigrams,
    )


@dataclass(frozen=True)
class Lifespan:
    """One maximal run of versions in which a term (or phrase) is present.

    added is the datetime pair bracketing when the text appeared, None when
    the run starts at the first capture (presence predates the corpus).
    removed brackets the disappearance, None when the run reaches the final
    version (still present at the end).
    """

    first_version: int
    last_version: int
    added: tuple[datetime, datetime] | None
    removed: tuple[datetime, datetime] | None


def lifespan_runs(chain: VersionChain, present: list[bool]) -> list[Lifespan]:
    """Lifespans for an arbitrary per-version presence vector."""
    if len(present) != len(chain.versions):
        raise ValueError("presence vector length must match version count")
    runs: list[Lifespan] = []
    i = 0
    n = len(present)
    while i < n:
        if not present[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and present[j + 1]:
            j += 1
        added = None
        if i > 0:
            added = (chain.versions[i - 1].last_capture, chain.versions[i].first_capture)
        removed = None
        if j < n - 1:
            removed = (chain.versions[j].last_capture, chain.versions[j + 1].first_capture)
        runs.append(Lifespan(first_version=i, last_version=j, added=added, removed=removed))
        i = j + 1
    return runs


def term_lifespan(chain: VersionChain, term: str) -> list[Lifespan]:
    """Lifespan intervals for a single term; empty if never present."""
    present = [v.doc.unigram_counts.get(term, 0) > 0 for v in chain.versions]
    return lifespan_runs(chain, present)


def phrase_lifespan(chain: VersionChain, phrase: list[str] | tuple[str, ...]) -> list[Lifespan]:
    present = [v.doc.count_phrase(phrase) > 0 for v in chain.versions]
    return lifespan_runs(chain, present)
