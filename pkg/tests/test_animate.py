"""animation plans and the generated standalone document."""

from __future__ import annotations

import re

import pytest

from chronodiff.animate import (
    AnimTiming,
    build_animation,
    build_animation_plan,
    extract_words,
)
from chronodiff.diffs import KEEP, token_diff
from chronodiff.errors import EmptyDocuments

PRE = b"""<html><head><title>T</title></head><body>
<nav>Main menu</nav>
<p>The <b>endangered species</b> permit program protects wildlife.</p>
<p>Contact the regional office for details.</p>
<img src="logo.png" alt="logo">
</body></html>"""

POST = b"""<html><head><title>T</title></head><body>
<nav>Main menu</nav>
<p>The permit program protects wildlife and local habitats.</p>
<p>Contact the regional office for details.</p>
<img src="logo.png" alt="logo">
</body></html>"""


def test_plan_changes_match_non_keep_regions():
    plan = build_animation_plan(PRE, POST)
    a = [w for b in extract_words(PRE) for w in b]
    b = [w for blk in extract_words(POST) for w in blk]
    script = token_diff(a, b)
    non_keep = [r for r in script.regions if r.kind != KEEP]
    assert len(plan.changes) == len(non_keep)
    assert plan.changes == sorted(plan.changes)


def test_plan_segments_belong_to_one_change():
    plan = build_animation_plan(PRE, POST)
    seen: dict[int, set[str]] = {}
    for block in plan.blocks:
        for seg in block:
            if seg.kind in ("del", "ins"):
                assert seg.change is not None
                seen.setdefault(seg.change, set()).add(seg.kind)
    assert set(seen) == set(plan.changes)


def test_document_contains_marked_spans_and_images():
    doc = build_animation(PRE, POST).decode()
    assert re.search(
        r'<span class="cd-del" data-chg="\d+">endangered species</span>', doc
    )
    assert 'class="cd-ins"' in doc
    assert '<img src="logo.png" alt="logo">' in doc
    assert "<script>" in doc and "__playbackLog" in doc
    # no external fetches: no src/href pointing anywhere but data/img assets
    assert "http://" not in doc.split("<script>")[1]


def test_identical_versions_render_static():
    doc = build_animation(PRE, PRE).decode()
    assert 'class="cd-del"' not in doc
    assert 'class="cd-ins"' not in doc
    assert "<p>The <b>endangered species</b> permit program" in doc


def test_deletion_then_insertion_order():
    pre = b"<body><p>alpha beta gamma</p><p>tail text</p></body>"
    post = b"<body><p>alpha gamma</p><p>tail text extra words</p></body>"
    plan = build_animation_plan(pre, post)
    assert len(plan.changes) == 2
    kinds = []
    for block in plan.blocks:
        for seg in block:
            if seg.kind in ("del", "ins"):
                kinds.append((seg.change, seg.kind))
    assert kinds == [(0, "del"), (1, "ins")]


def test_replace_shares_one_change():
    pre = b"<body><p>the old wording stays</p></body>"
    post = b"<body><p>the new wording stays</p></body>"
    plan = build_animation_plan(pre, post)
    assert len(plan.changes) == 1
    doc = build_animation(pre, post).decode()
    assert doc.count('data-chg="0"') >= 2  # del span + ins span


def test_whole_paragraph_deleted_anchors_in_document():
    pre = b"<body><p>keep one</p><p>drop this paragraph completely</p><p>keep two</p></body>"
    post = b"<body><p>keep one</p><p>keep two</p></body>"
    doc = build_animation(pre, post).decode()
    m = re.search(r'<span class="cd-del" data-chg="0">drop this paragraph completely</span>', doc)
    assert m
    # anchored before the following kept words
    assert m.start() < doc.index("keep two")


def test_trailing_deletion_lands_before_body_end():
    pre = b"<body><p>shared start</p><p>the vanished tail</p></body>"
    post = b"<body><p>shared start</p></body>"
    doc = build_animation(pre, post).decode()
    span_at = doc.index("the vanished tail")
    assert span_at < doc.index("</body>")


def test_timing_config_embedded():
    doc = build_animation(PRE, POST, timing=AnimTiming(1, 2, 3)).decode()
    assert '"letterMs": 1' in doc
    assert '"wordMs": 2' in doc
    assert '"pauseMs": 3' in doc


def test_empty_documents_rejected():
    with pytest.raises(EmptyDocuments):
        build_animation(b"<body></body>", b"<body><script>x()</script></body>")


def test_entities_survive_weaving():
    pre = b"<body><p>AT&amp;T research &lt;old&gt;</p></body>"
    post = b"<body><p>AT&amp;T research &lt;new&gt;</p></body>"
    doc = build_animation(pre, post).decode()
    assert "AT&amp;T" in doc
    assert "&lt;new&gt;" in doc


def test_word_split_by_inline_tag_gets_piecewise_spans():
    pre = b"<body><p>plain</p></body>"
    post = b"<body><p>plain cli<b>mate</b></p></body>"
    doc = build_animation(pre, post).decode()
    assert re.search(r'<span class="cd-ins" data-chg="0">cli</span>', doc)
    assert re.search(r'<b><span class="cd-ins" data-chg="0">mate</span></b>', doc)
