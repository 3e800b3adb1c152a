"""edit scripts, sliding sequences."""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from hypothesis import given, settings, strategies as st

from chronodiff.diffs import (
    DELETE,
    INSERT,
    KEEP,
    REPLACE,
    apply_script,
    sliding_sequence,
    token_diff,
)
from chronodiff.extract import doc_from_blocks
from chronodiff.temporal import build_chain
from chronodiff.warc import canonicalize_url

from corpusgen import random_corpus
from oracle import lcs_distance

UTC = timezone.utc

tokens_st = st.lists(st.sampled_from("abcd"), max_size=12)


def test_identity_single_keep():
    script = token_diff(["x", "y"], ["x", "y"])
    assert [r.kind for r in script.regions] == [KEEP]
    assert script.is_identity()


def test_single_delete():
    script = token_diff(["x"], [])
    assert [r.kind for r in script.regions] == [DELETE]
    assert script.regions[0].a_tokens == ("x",)


def test_single_insert():
    script = token_diff([], ["x"])
    assert [r.kind for r in script.regions] == [INSERT]


def test_replace_merging():
    script = token_diff(["a", "x", "b"], ["a", "y", "b"])
    kinds = [r.kind for r in script.regions]
    assert kinds == [KEEP, REPLACE, KEEP]
    assert script.regions[1].a_tokens == ("x",)
    assert script.regions[1].b_tokens == ("y",)


@settings(max_examples=300)
@given(tokens_st, tokens_st)
def test_apply_reproduces_b(a, b):
    assert apply_script(token_diff(a, b), a) == b


@settings(max_examples=300)
@given(tokens_st, tokens_st)
def test_script_is_minimal(a, b):
    assert token_diff(a, b).edit_size == lcs_distance(a, b)


@settings(max_examples=200)
@given(tokens_st, tokens_st)
def test_antisymmetric_under_swap(a, b):
    # Swapping inputs swaps the deletion and insertion volumes. Token-level
    # mirrors are not guaranteed (two optimal subsequences may differ), but
    # the cardinalities must correspond exactly.
    fwd = token_diff(a, b)
    rev = token_diff(b, a)
    def volumes(script):
        deleted = sum(len(r.a_tokens) for r in script.regions if r.kind != KEEP)
        inserted = sum(len(r.b_tokens) for r in script.regions if r.kind != KEEP)
        return deleted, inserted
    fwd_del, fwd_ins = volumes(fwd)
    rev_del, rev_ins = volumes(rev)
    assert (fwd_del, fwd_ins) == (rev_ins, rev_del)
    assert fwd.edit_size == rev.edit_size
    assert apply_script(rev, b) == a


@settings(max_examples=200)
@given(tokens_st, tokens_st)
def test_regions_tile_both_sequences(a, b):
    script = token_diff(a, b)
    a_pos = b_pos = 0
    for r in script.regions:
        assert r.a_range[0] == a_pos and r.b_range[0] == b_pos
        a_pos, b_pos = r.a_range[1], r.b_range[1]
        if r.kind == KEEP:
            assert a[r.a_range[0] : r.a_range[1]] == b[r.b_range[0] : r.b_range[1]]
    assert (a_pos, b_pos) == (len(a), len(b))


def test_deterministic():
    rng = random.Random(3)
    for _ in range(50):
        a = [rng.choice("abcdef") for _ in range(rng.randint(0, 30))]
        b = [rng.choice("abcdef") for _ in range(rng.randint(0, 30))]
        assert token_diff(a, b) == token_diff(a, b)


# -- sliding sequence ------------------------------------------------------------


def _chain(texts, start=datetime(2017, 1, 1, tzinfo=UTC)):
    canon = canonicalize_url("http://slide.org/page")
    docs = [
        doc_from_blocks(canon, start + timedelta(days=30 * i), [t])
        for i, t in enumerate(texts)
    ]
    return build_chain(docs)


def test_sliding_counts():
    seq = sliding_sequence(_chain(["v one", "v two", "v three", "v four"]))
    assert len(seq.entries) == 3
    assert [e.pair for e in seq.entries] == [(0, 1), (1, 2), (2, 3)]
    assert (seq.first_index, seq.last_index) == (0, 3)


def test_sliding_singleton():
    seq = sliding_sequence(_chain(["only"]))
    assert seq.entries == ()
    assert (seq.first_index, seq.last_index) == (0, 0)


def test_sliding_niehs_scientific(niehs_chain):
    seq = sliding_sequence(niehs_chain)
    deleting = [
        e
        for e in seq.entries
        if any(
            "scientific" in r.a_tokens for r in e.script.regions if r.kind != KEEP
        )
    ]
    assert len(deleting) == 1
    assert deleting[0].pair == (0, 1)


def test_identical_flag_matches_empty_change_sets():
    canon = canonicalize_url("http://slide.org/r")
    # reorder-only transition: same blocks, shuffled order
    docs = [
        doc_from_blocks(canon, datetime(2017, 1, 1, tzinfo=UTC), ["alpha one", "beta two"]),
        doc_from_blocks(canon, datetime(2017, 2, 1, tzinfo=UTC), ["beta two", "alpha one"]),
        doc_from_blocks(canon, datetime(2017, 3, 1, tzinfo=UTC), ["gamma three"]),
    ]
    chain = build_chain(docs)
    seq = sliding_sequence(chain)
    assert [e.identical for e in seq.entries] == [True, False]
    for e, cs in zip(seq.entries, chain.transitions):
        assert e.identical == cs.is_empty()


def test_sliding_over_random_corpus():
    for chain in random_corpus(seed=61, n_chains=25):
        seq = sliding_sequence(chain)
        assert len(seq.entries) == len(chain.versions) - 1
        for e, cs in zip(seq.entries, chain.transitions):
            assert e.identical == cs.is_empty()
            assert apply_script(e.script, chain.versions[e.pair[0]].doc.tokens) == (
                chain.versions[e.pair[1]].doc.tokens
            )
        pairs = [e.pair for e in seq.entries]
        assert pairs == sorted(pairs)
