"""Acceptance criteria, one test per criterion at its stated tolerance.

The terminal summary (conftest) prints one [PASS]/[FAIL] line per
criterion; run `pytest tests/test_acceptance.py -v` to watch them
individually.
"""

from __future__ import annotations

import math
import random
import time
from datetime import datetime, timedelta, timezone

import pytest

from chronodiff.analytics import categorize_terms
from chronodiff.errors import CorruptIndex
from chronodiff.extract import doc_from_blocks
from chronodiff.index import FIELDS, build_index, load, lookup, persist
from chronodiff.memento import PageCaptures, TimeMapEntry, pairing_report, refine_change_interval
from chronodiff.query import ChangeQuery, execute
from chronodiff.temporal import build_chain
from chronodiff.warc import canonicalize_url

from corpusgen import PHRASES, VOCAB, random_corpus
from oracle import OracleCorpus, hitset, linear_first_straddle

UTC = timezone.utc


# -- criterion 1: oracle equivalence (core claim) -----------------------------


def test_oracle_equivalence_200_chains():
    """execute() == brute-force transition scan, all query types, both
    partial settings, 200 seeded chains; zero tolerance, < 30 s."""
    started = time.monotonic()
    chains = random_corpus(seed=20160104, n_chains=200, max_versions=8)
    assert len(VOCAB) <= 60
    idx = build_index(chains)
    oracle = OracleCorpus(chains)

    rng = random.Random(7)
    seen_bigrams, seen_trigrams = set(), set()
    for chain in chains:
        for v in chain.versions:
            toks = v.doc.tokens
            for i, bg in enumerate(zip(toks, toks[1:])):
                seen_bigrams.add(bg)
                if i + 2 < len(toks):
                    seen_trigrams.add((toks[i], toks[i + 1], toks[i + 2]))
    bigrams = rng.sample(sorted(seen_bigrams), min(60, len(seen_bigrams)))
    trigrams = rng.sample(sorted(seen_trigrams), min(30, len(seen_trigrams)))
    phrases = (
        [tuple(p) for p in PHRASES]
        + bigrams
        + trigrams
        + [("t00", "never-seen"), ("no", "such", "phrase")]
    )

    checked = 0
    for include_partial in (True, False):
        for term in VOCAB:
            for deletion, qtype in ((True, "deleted_term"), (False, "added_term")):
                got = hitset(
                    execute(ChangeQuery(qtype, term, include_partial=include_partial), idx)
                )
                want = oracle.term_hits(term, deletion, include_partial)
                assert got == want, (qtype, term, include_partial)
                checked += 1
        for phrase in phrases:
            text = " ".join(phrase)
            for deletion, qtype in ((True, "deleted_phrase"), (False, "added_phrase")):
                got = hitset(
                    execute(ChangeQuery(qtype, text, include_partial=include_partial), idx)
                )
                want = oracle.phrase_hits(phrase, deletion, include_partial)
                assert got == want, (qtype, text, include_partial)
                checked += 1

    elapsed = time.monotonic() - started
    assert checked >= 4 * (len(VOCAB) + len(phrases))
    assert elapsed < 30.0, f"took {elapsed:.1f}s"


# -- criterion 2: the introduction scenario ------------------------------------


def test_niehs_february_march_interval(fixture_index):
    """One deleted_term('pollution') hit; interval exactly
    (2017-02 capture, 2017-03 capture]."""
    hits = execute(ChangeQuery("deleted_term", "pollution"), fixture_index)
    assert len(hits) == 1
    hit = hits[0]
    assert hit.canonical_url == "www.niehs.nih.gov/health/topics/agents/index.cfm"
    assert hit.change_interval == (
        datetime(2017, 2, 4, 12, 0, 0, tzinfo=UTC),
        datetime(2017, 3, 10, 8, 30, 0, tzinfo=UTC),
    )


# -- criterion 3: phrase deletion with adjacency semantics ----------------------


def test_fws_phrase_deletion_adjacency(fixture_index):
    hits = execute(ChangeQuery("deleted_phrase", "endangered species"), fixture_index)
    assert len(hits) == 1
    assert hits[0].canonical_url == "www.fws.gov/ENDANGERED/permits/index.html"
    reversed_hits = execute(
        ChangeQuery("deleted_phrase", "species endangered"), fixture_index
    )
    assert reversed_hits == []


# -- criterion 4: coalescing and validity ---------------------------------------


def test_coalescing_and_validity_tiling():
    url = canonicalize_url("http://coalesce.org/page")
    byte_variants = [
        b"<html><body><p>same text content</p></body></html>",
        b'<html><body >\n<p class="x">same   text\tcontent</p>\n</body></html>',
        b"<HTML><BODY><P>same text content</P></BODY></HTML>",
    ]
    docs = []
    from chronodiff.extract import extract_text

    for i, raw in enumerate(byte_variants):
        docs.append(
            doc_from_blocks(
                url, datetime(2018, 1, 1 + i, tzinfo=UTC), extract_text(raw)
            )
        )
    docs.append(doc_from_blocks(url, datetime(2018, 2, 1, tzinfo=UTC), ["changed text"]))
    chain = build_chain(docs)
    assert len(chain.versions) == 2
    assert len(chain.versions[0].members) == 3

    for chain in random_corpus(seed=40400, n_chains=1000, max_versions=8):
        versions = chain.versions
        assert versions[0].validity[0] == versions[0].first_capture
        assert versions[-1].validity[1] is None
        for a, b in zip(versions, versions[1:]):
            assert a.validity[1] == b.validity[0]
            assert a.validity[0] < a.validity[1]
            assert a.doc.content_hash != b.doc.content_hash


# -- criterion 5: binary-search refinement ---------------------------------------


def test_refinement_matches_linear_scan_500_chains():
    rng = random.Random(5150)
    ks = [0, 1, 2, 3, 1024]
    while len(ks) < 500:
        ks.append(rng.randint(0, 1024))
    for trial, k in enumerate(ks):
        n = k + 2
        flip_after = rng.randint(0, n - 2)
        old = rng.randint(1, 5)
        counts = [old] * (flip_after + 1) + [0] * (n - flip_after - 1)
        fetched = []

        def fetch(i: int, counts=counts, fetched=fetched) -> bytes:
            fetched.append(i)
            return (
                "<html><body><p>"
                + " ".join(["marker"] * counts[i])
                + " padding words</p></body></html>"
            ).encode()

        res = refine_change_interval(fetch, n, "marker", counts[0], counts[-1])
        assert (res.pre_index, res.post_index) == linear_first_straddle(counts), trial
        budget = math.ceil(math.log2(k + 1)) if k else 0
        assert res.fetches == len(fetched) <= budget, (k, res.fetches, budget)
        assert not res.non_monotone


# -- criterion 6: change-calculation throughput ----------------------------------


def test_change_calculation_1000_pairs_under_10s():
    rng = random.Random(808)
    vocab = [f"w{i:03d}" for i in range(400)]
    doc_pairs = []
    for i in range(1000):
        url = canonicalize_url(f"http://scale.org/page/{i}")
        base = [rng.choice(vocab) for _ in range(500)]
        changed = list(base)
        for _ in range(rng.randint(1, 40)):
            op = rng.random()
            if op < 0.4 and changed:
                del changed[rng.randrange(len(changed))]
            elif op < 0.8:
                changed.insert(rng.randint(0, len(changed)), rng.choice(vocab))
            elif changed:
                changed[rng.randrange(len(changed))] = rng.choice(vocab)
        blocks_a = [" ".join(base[j : j + 100]) for j in range(0, len(base), 100)]
        blocks_b = [" ".join(changed[j : j + 100]) for j in range(0, len(changed), 100)]
        doc_pairs.append(
            (
                doc_from_blocks(url, datetime(2016, 3, 1, tzinfo=UTC), blocks_a),
                doc_from_blocks(url, datetime(2020, 3, 1, tzinfo=UTC), blocks_b),
            )
        )

    started = time.monotonic()
    chains = [build_chain(list(pair)) for pair in doc_pairs]
    elapsed = time.monotonic() - started
    assert all(len(c.transitions) == 1 for c in chains)
    assert elapsed < 10.0, f"change calculation took {elapsed:.2f}s"


# -- criterion 7: persistence ------------------------------------------------------


def test_persistence_round_trip_and_corruption(tmp_path):
    chains = random_corpus(seed=777, n_chains=60)
    idx = build_index(chains)
    root = persist(idx, tmp_path / "idx")
    loaded = load(root)
    for field in FIELDS:
        assert set(loaded.postings[field].keys()) == set(idx.postings[field].keys())
        for term in idx.postings[field]:
            assert lookup(loaded, field, term) == lookup(idx, field, term), (field, term)

    raw = (root / "postings").read_bytes()
    (root / "postings").write_bytes(raw[:-7])
    with pytest.raises(CorruptIndex):
        load(root)


# -- criterion 8: analytics categorization shape -----------------------------------


STOPWORDS_49 = [
    "about", "more", "which", "state", "the", "and", "for", "that", "with",
    "this", "from", "are", "was", "were", "been", "have", "has", "had",
    "not", "but", "all", "any", "can", "will", "would", "should", "could",
    "there", "their", "them", "they", "these", "those", "then", "than",
    "when", "where", "who", "whom", "why", "how", "what", "while", "also",
    "into", "over", "under", "between", "because",
]
TEMPORAL_13 = [
    "2015", "2016", "2020", "2", "7", "one", "ten", "year", "month", "day",
    "january", "march", "1999",
]
SEED_11 = [
    "climate", "clean", "impacts", "water", "energy", "emissions",
    "warming", "sustainability", "anthropogenic", "regulation", "toxic",
]
NEWLY_27 = [
    "public", "development", "access", "science", "national", "support",
    "program", "resources", "process", "data", "including", "u.s",
    "united", "learn", "department", "action", "work", "impact", "tools",
    "areas", "search", "laboratory", "technology", "efforts", "include",
    "natural", "planning",
]


def test_categorization_counts_exact():
    assert len(STOPWORDS_49) == 49
    assert len(TEMPORAL_13) == 13
    assert len(SEED_11) == 11
    assert len(NEWLY_27) == 27
    terms = [(t, 1) for t in STOPWORDS_49 + TEMPORAL_13 + SEED_11 + NEWLY_27]
    assert len(terms) == 100
    cats, histogram = categorize_terms(terms, set(STOPWORDS_49), set(SEED_11))
    assert histogram == {
        "stopword": 49,
        "temporal": 13,
        "seed": 11,
        "newly_found": 27,
    }
    by_term = {c.term: c.category for c in cats}
    assert by_term["about"] == "stopword"
    assert by_term["2015"] == "temporal"
    assert by_term["climate"] == "seed"
    assert by_term["public"] == "newly_found"


# -- criterion 9: pairing report ----------------------------------------------------


def test_pairing_report_desk_scale():
    wa = (datetime(2016, 1, 1, tzinfo=UTC), datetime(2016, 7, 1, tzinfo=UTC))
    wb = (datetime(2020, 1, 1, tzinfo=UTC), datetime(2020, 7, 1, tzinfo=UTC))

    def entry(uri: str, *args) -> TimeMapEntry:
        return TimeMapEntry(
            uri_m=uri,
            capture_datetime=datetime(*args, tzinfo=UTC),
            source_archive=uri.split("/")[2],
        )

    pages = {}
    statuses = {}
    for i in range(6):
        a = f"http://web.archive.org/web/a{i}"
        b = f"http://web.archive.org/web/b{i}"
        entries = [entry(a, 2016, 2, 1 + i), entry(b, 2020, 3, 1 + i)]
        statuses.update({a: 200, b: 200})
        if i == 0:
            # duplicate coverage at a second archive for the same page
            extra = "http://webarchive.loc.gov/web/a0x"
            entries.append(entry(extra, 2016, 3, 15))
            statuses[extra] = 200
        pages[f"page{i}"] = PageCaptures(
            entries=tuple(entries), statuses={u: statuses[u] for u in statuses}
        )
    a7 = "http://web.archive.org/web/a7"
    b7 = "http://web.archive.org/web/b7"
    statuses.update({a7: 200, b7: 301})
    pages["page7"] = PageCaptures(
        entries=(entry(a7, 2016, 4, 1), entry(b7, 2020, 4, 1)),
        statuses={a7: 200, b7: 301},
    )
    a8 = "http://web.archive.org/web/a8"
    pages["page8"] = PageCaptures(entries=(entry(a8, 2016, 5, 1),), statuses={a8: 200})

    report = pairing_report(pages, wa, wb)
    assert report.total_pages == 8
    assert report.paired_pages == 7
    assert report.bucket_fractions[("200", "200")] == 0.75
    assert report.bucket_fractions[("200", "3xx")] == pytest.approx(1 / 8)
    assert report.bucket_fractions[("200", "missing")] == pytest.approx(1 / 8)
    assert sum(report.window_fractions(0).values()) == pytest.approx(1.0)
    assert sum(report.window_fractions(1).values()) == pytest.approx(1.0)

    cov = report.archive_coverage
    assert cov["web.archive.org"][0] == 1.0
    assert cov["webarchive.loc.gov"][0] == pytest.approx(1 / 7)
    # page0 counted once per archive: window-A columns exceed 1 in total
    assert sum(c[0] for c in cov.values()) > 1.0
