"""Corpus-level change mining: most-deleted terms and their categories."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .index import DELETED, PARTIALLY_DELETED, ChangeIndex, lookup

CATEGORIES = ("stopword", "temporal", "seed", "newly_found")

_SPELLED_NUMBERS = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
}
_MONTHS = {
    "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december",
}


@dataclass(frozen=True)
class TemporalRules:
    """What counts as a temporal term; every piece is replaceable."""

    allow_digits: bool = True
    year_range: tuple[int, int] = (1900, 2099)
    spelled_numbers: frozenset[str] = frozenset(_SPELLED_NUMBERS)
    month_names: frozenset[str] = frozenset(_MONTHS)
    extra_words: frozenset[str] = frozenset({"day", "month", "year"})

    def matches(self, term: str) -> bool:
        if self.allow_digits and term.isdigit():
            return True
        if len(term) == 4 and term.isdigit():
            return self.year_range[0] <= int(term) <= self.year_range[1]
        return (
            term in self.spelled_numbers
            or term in self.month_names
            or term in self.extra_words
        )


@dataclass(frozen=True)
class TermCategory:
    term: str
    category: str
    deletion_doc_frequency: int


def load_termlist(path: str | Path) -> set[str]:
    """One term per line, UTF-8; blank lines and # comments skipped."""
    terms = set()
    for line in Path(path).read_text("utf-8").splitlines():
        line = line.strip().lower()
        if line and not line.startswith("#"):
            terms.add(line)
    return terms


def deletion_doc_frequency(index: ChangeIndex, term: str) -> int:
    """Transitions in which the term was fully or partially removed."""
    return len(lookup(index, DELETED, term)) + len(lookup(index, PARTIALLY_DELETED, term))


def top_deleted_terms(
    index: ChangeIndex, n: int, weighted: bool = False
) -> list[tuple[str, int]]:
    """Terms ranked by deletion count, descending, ties lexicographic.

    With weighted=True the rank key is the summed occurrence delta rather
    than the number of transitions.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    scores: dict[str, int] = {}
    for field_name in (DELETED, PARTIALLY_DELETED):
        for term, plist in index.postings[field_name].items():
            add = sum(abs(p.payload) for p in plist) if weighted else len(plist)
            scores[term] = scores.get(term, 0) + add
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]


def categorize_terms(
    terms: Sequence[tuple[str, int]] | Iterable[str],
    stoplist: set[str],
    seedlist: set[str],
    temporal_rules: TemporalRules | None = None,
) -> tuple[list[TermCategory], dict[str, int]]:
    """Exclusive categories assigned in order stopword, temporal, seed,
    newly_found; returns the per-term assignments and a histogram."""
    rules = temporal_rules or TemporalRules()
    out: list[TermCategory] = []
    histogram = {c: 0 for c in CATEGORIES}
    for item in terms:
        term, ddf = item if isinstance(item, tuple) else (item, 0)
        if term in stoplist:
            category = "stopword"
        elif rules.matches(term):
            category = "temporal"
        elif term in seedlist:
            category = "seed"
        else:
            category = "newly_found"
        histogram[category] += 1
        out.append(TermCategory(term=term, category=category, deletion_doc_frequency=ddf))
    return out, histogram
