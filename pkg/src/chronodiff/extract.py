"""HTML text extraction and tokenization.

Boilerplate removal is rule-based: script/style/noscript/template/head
content is dropped, as are nav/header/footer/aside elements and anything
with a navigation/banner/contentinfo role. Visible text is grouped into
blocks at block-level element boundaries. The rules are deliberately
simple and documented because they directly shape what counts as a
"change" downstream.
"""

from __future__ import annotations

import hashlib
import re
from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from html.parser import HTMLParser

from .warc import CanonicalUrl, MementoRecord, canonicalize_url

# Content of these elements is never visible text. title is metadata even
# when a sloppy page omits the head element around it.
_DROP_CONTENT = {"script", "style", "noscript", "template", "head", "title"}
# These elements are boilerplate wholesale, children included.
_DROP_ELEMENT = {"nav", "header", "footer", "aside"}
_DROP_ROLES = {"navigation", "banner", "contentinfo"}

_BLOCK_TAGS = {
    "address", "article", "blockquote", "body", "caption", "dd", "div", "dl",
    "dt", "fieldset", "figcaption", "figure", "form", "h1", "h2", "h3", "h4",
    "h5", "h6", "hr", "html", "li", "main", "ol", "p", "pre", "section",
    "table", "tbody", "td", "tfoot", "th", "thead", "tr", "ul",
}

_VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link",
    "meta", "param", "source", "track", "wbr",
}

_WS_RE = re.compile(r"\s+")
# Token characters: letters, digits, period, hyphen. Underscore splits.
_TOKEN_RE = re.compile(r"[\w.\-]+", re.UNICODE)


class _Extractor(HTMLParser):
    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.blocks: list[str] = []
        self._buf: list[str] = []
        self._skip = 0
        self._stack: list[tuple[str, bool]] = []  # (tag, opened a skip region)

    def _flush(self) -> None:
        text = _WS_RE.sub(" ", "".join(self._buf)).strip()
        self._buf = []
        if text:
            self.blocks.append(text)

    def _should_skip(self, tag: str, attrs) -> bool:
        if tag in _DROP_CONTENT or tag in _DROP_ELEMENT:
            return True
        for name, value in attrs:
            if name == "role" and value and value.strip().lower() in _DROP_ROLES:
                return True
        return False

    def handle_starttag(self, tag, attrs):
        if tag in _VOID_TAGS:
            if not self._skip:
                if tag == "br":
                    self._buf.append(" ")
                elif tag == "hr":
                    self._flush()
            return
        entered = self._should_skip(tag, attrs)
        if not self._skip and not entered and tag in _BLOCK_TAGS:
            self._flush()
        if entered:
            self._skip += 1
        self._stack.append((tag, entered))

    def handle_endtag(self, tag):
        if tag in _VOID_TAGS:
            return
        # Pop to the matching open tag; stray end tags are ignored.
        for i in range(len(self._stack) - 1, -1, -1):
            if self._stack[i][0] == tag:
                closed = self._stack[i:]
                del self._stack[i:]
                for _, entered in closed:
                    if entered:
                        self._skip -= 1
                if not self._skip and any(t in _BLOCK_TAGS for t, _ in closed):
                    self._flush()
                return

    def handle_data(self, data):
        if not self._skip and data:
            self._buf.append(data)

    def close(self):
        super().close()
        self._flush()


def extract_text(html: bytes | str) -> list[str]:
    """Return the visible text of a page as whitespace-normalized blocks."""
    if isinstance(html, (bytes, bytearray)):
        html = html.decode("utf-8", "replace")
    parser = _Extractor()
    try:
        parser.feed(html)
        parser.close()
    except Exception:
        # Lenient worst case: strip tags and hand back whatever text is left.
        text = _WS_RE.sub(" ", re.sub(r"<[^>]*>", " ", html)).strip()
        return [text] if text else []
    return parser.blocks


def tokenize(text: str) -> list[str]:
    """Lowercase terms split on non-token characters.

    Internal periods and hyphens survive ("u.s", "climate-change");
    leading and trailing ones are stripped.
    """
    out = []
    for raw in _TOKEN_RE.findall(text.lower()):
        for part in raw.split("_"):
            tok = part.strip(".-")
            if tok:
                out.append(tok)
    return out


@dataclass(frozen=True)
class MementoRef:
    """Pointer to one capture: everything about it except the body."""

    uri_r: str
    capture_datetime: datetime
    http_status: int
    content_type: str
    uri_m: str | None = None
    source_archive: str = "local"


@dataclass
class ExtractedDoc:
    """Boilerplate-stripped token view of one capture."""

    canonical_url: CanonicalUrl
    capture_datetime: datetime
    blocks: list[str]
    tokens: list[str]
    block_starts: list[int]  # token offset where each block begins
    unigram_counts: Counter = field(default_factory=Counter)
    bigram_counts: Counter = field(default_factory=Counter)
    positions: dict[str, list[int]] = field(default_factory=dict)
    content_hash: str = ""
    memento: MementoRef | None = None

    def block_of(self, pos: int) -> int:
        return bisect_right(self.block_starts, pos) - 1

    def count_phrase(self, phrase: tuple[str, ...] | list[str]) -> int:
        """Occurrences of an exact adjacent-token phrase within one block."""
        n = len(phrase)
        if n == 0:
            return 0
        if n == 1:
            return self.unigram_counts.get(phrase[0], 0)
        if n == 2:
            return self.bigram_counts.get((phrase[0], phrase[1]), 0)
        count = 0
        for p in self.positions.get(phrase[0], ()):
            if p + n > len(self.tokens):
                continue
            if self.tokens[p : p + n] == list(phrase):
                if self.block_of(p) == self.block_of(p + n - 1):
                    count += 1
        return count


def _hash_tokens(tokens: list[str]) -> str:
    # Tokens never contain whitespace, so the join is injective.
    return hashlib.blake2b(" ".join(tokens).encode("utf-8"), digest_size=8).hexdigest()


def doc_from_blocks(
    canonical_url: CanonicalUrl,
    capture_datetime: datetime,
    blocks: list[str],
    memento: MementoRef | None = None,
) -> ExtractedDoc:
    """Build an ExtractedDoc from already-extracted text blocks."""
    tokens: list[str] = []
    block_starts: list[int] = []
    bigrams: Counter = Counter()
    for block in blocks:
        block_starts.append(len(tokens))
        btoks = tokenize(block)
        for a, b in zip(btoks, btoks[1:]):
            bigrams[(a, b)] += 1
        tokens.extend(btoks)

    positions: dict[str, list[int]] = {}
    for i, tok in enumerate(tokens):
        positions.setdefault(tok, []).append(i)

    return ExtractedDoc(
        canonical_url=canonical_url,
        capture_datetime=capture_datetime,
        blocks=list(blocks),
        tokens=tokens,
        block_starts=block_starts,
        unigram_counts=Counter(tokens),
        bigram_counts=bigrams,
        positions=positions,
        content_hash=_hash_tokens(tokens),
        memento=memento,
    )


def build_extracted_doc(record: MementoRecord) -> ExtractedDoc:
    """Extract, tokenize, and summarize one memento record."""
    ref = MementoRef(
        uri_r=record.uri_r,
        capture_datetime=record.capture_datetime,
        http_status=record.http_status,
        content_type=record.content_type,
        uri_m=record.uri_m,
        source_archive=record.source_archive,
    )
    return doc_from_blocks(
        canonicalize_url(record.uri_r),
        record.capture_datetime,
        extract_text(record.body),
        memento=ref,
    )
