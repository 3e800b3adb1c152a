"""Self-contained animated merged replay of two page versions.

The two versions' visible text streams (case-preserving, whitespace
split) are diffed word-by-word. The post version's markup is then
re-serialized with insertions wrapped in green-highlighted spans and
deletions re-inserted at their anchor positions in red-highlighted
spans, images and all other unchanged markup left in place. An embedded
script visits each change in document order: deletions animate
letter-by-letter for the first three words then whole-word, insertions
letter-by-letter, with a configurable pause between changes. The
document needs no external fetches.
"""

from __future__ import annotations

import html as html_mod
import json
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser

from .diffs import KEEP, token_diff
from .errors import EmptyDocuments
from .extract import _DROP_CONTENT, _DROP_ELEMENT, _DROP_ROLES, _VOID_TAGS, extract_text


@dataclass(frozen=True)
class AnimTiming:
    letter_ms: int = 30
    word_ms: int = 120
    pause_ms: int = 1500


@dataclass(frozen=True)
class Segment:
    kind: str  # text | del | ins
    text: str
    change: int | None = None


@dataclass
class AnimationPlan:
    """Merged word stream grouped into post-version blocks.

    changes lists change ids in document order; every del/ins segment
    carries exactly one of them.
    """

    blocks: list[list[Segment]]
    changes: list[int]
    timing: AnimTiming
    post_words: list[str] = field(default_factory=list)
    word_marks: list[tuple[str, int | None]] = field(default_factory=list)
    pending_deletions: dict[int, list[tuple[str, int]]] = field(default_factory=dict)


def extract_words(html: bytes | str) -> list[list[str]]:
    """Case-preserving visible words per block, same walk as extract_text."""
    return [block.split() for block in extract_text(html)]


def build_animation_plan(
    pre_html: bytes | str,
    post_html: bytes | str,
    timing: AnimTiming | None = None,
) -> AnimationPlan:
    timing = timing or AnimTiming()
    pre_blocks = extract_words(pre_html)
    post_blocks = extract_words(post_html)
    a_words = [w for b in pre_blocks for w in b]
    b_words = [w for b in post_blocks for w in b]
    if not a_words and not b_words:
        raise EmptyDocuments("neither version has visible text")

    script = token_diff(a_words, b_words)

    word_marks: list[tuple[str, int | None]] = [("kept", None)] * len(b_words)
    pending: dict[int, list[tuple[str, int]]] = {}
    changes: list[int] = []
    change_id = 0
    for region in script.regions:
        if region.kind == KEEP:
            continue
        if region.a_tokens:
            anchor = region.b_range[0]
            pending.setdefault(anchor, []).append(
                (" ".join(region.a_tokens), change_id)
            )
        for i in range(region.b_range[0], region.b_range[1]):
            word_marks[i] = ("ins", change_id)
        changes.append(change_id)
        change_id += 1

    blocks: list[list[Segment]] = []
    cursor = 0
    for bwords in post_blocks:
        segs: list[Segment] = []
        for w in bwords:
            for text, chg in pending.get(cursor, ()):
                segs.append(Segment("del", text, chg))
            mark, chg = word_marks[cursor]
            if mark == "ins":
                if segs and segs[-1].kind == "ins" and segs[-1].change == chg:
                    segs[-1] = Segment("ins", segs[-1].text + " " + w, chg)
                else:
                    segs.append(Segment("ins", w, chg))
            else:
                if segs and segs[-1].kind == "text":
                    segs[-1] = Segment("text", segs[-1].text + " " + w)
                else:
                    segs.append(Segment("text", w))
            cursor += 1
        blocks.append(segs)
    trailing = pending.get(len(b_words), ())
    if trailing:
        tail = [Segment("del", text, chg) for text, chg in trailing]
        if blocks:
            blocks[-1] = blocks[-1] + tail
        else:
            blocks.append(tail)

    return AnimationPlan(
        blocks=blocks,
        changes=changes,
        timing=timing,
        post_words=b_words,
        word_marks=word_marks,
        pending_deletions=pending,
    )


_STYLE = """
.cd-del { background: #fdd; color: #900; text-decoration: line-through; }
.cd-ins { background: #dfd; color: #060; }
.cd-gone { display: none; }
.cd-active { outline: 2px solid #f80; }
#cd-replay { position: fixed; top: 8px; right: 8px; z-index: 9999; }
"""

_SCRIPT = """
(function () {
  var cfg = __CONFIG__;
  var log = (window.__playbackLog = []);
  function delay(ms) {
    return new Promise(function (r) { setTimeout(r, ms); });
  }
  function groups() {
    var map = {};
    var order = [];
    var nodes = document.querySelectorAll("[data-chg]");
    for (var i = 0; i < nodes.length; i++) {
      var id = parseInt(nodes[i].getAttribute("data-chg"), 10);
      if (!(id in map)) { map[id] = []; order.push(id); }
      map[id].push(nodes[i]);
    }
    order.sort(function (a, b) { return a - b; });
    return order.map(function (id) { return { id: id, spans: map[id] }; });
  }
  function prepare() {
    var ins = document.querySelectorAll(".cd-ins");
    for (var i = 0; i < ins.length; i++) {
      ins[i].setAttribute("data-full", ins[i].textContent);
      ins[i].textContent = "";
    }
  }
  function restore() {
    var nodes = document.querySelectorAll(".cd-del");
    for (var i = 0; i < nodes.length; i++) {
      if (nodes[i].getAttribute("data-full") !== null) {
        nodes[i].textContent = nodes[i].getAttribute("data-full");
      }
      nodes[i].classList.remove("cd-gone");
    }
  }
  async function animateDelete(spans) {
    var wordIdx = 0;
    for (var s = 0; s < spans.length; s++) {
      var el = spans[s];
      if (el.getAttribute("data-full") === null) {
        el.setAttribute("data-full", el.textContent);
      }
      while (el.textContent.length > 0) {
        var text = el.textContent;
        if (wordIdx < 3) {
          var isSpace = text.charAt(0) === " ";
          el.textContent = text.slice(1);
          if (isSpace) { wordIdx++; } else { await delay(cfg.letterMs); }
          if (el.textContent.length === 0) wordIdx++;
        } else {
          var cut = text.indexOf(" ");
          el.textContent = cut === -1 ? "" : text.slice(cut + 1);
          wordIdx++;
          await delay(cfg.wordMs);
        }
      }
      el.classList.add("cd-gone");
    }
  }
  async function animateInsert(spans) {
    for (var s = 0; s < spans.length; s++) {
      var el = spans[s];
      var full = el.getAttribute("data-full") || "";
      for (var i = 1; i <= full.length; i++) {
        el.textContent = full.slice(0, i);
        await delay(cfg.letterMs);
      }
      el.textContent = full;
    }
  }
  async function run() {
    prepare();
    var gs = groups();
    for (var g = 0; g < gs.length; g++) {
      var dels = gs[g].spans.filter(function (e) { return e.className.indexOf("cd-del") !== -1; });
      var inss = gs[g].spans.filter(function (e) { return e.className.indexOf("cd-ins") !== -1; });
      var anchor = gs[g].spans[0];
      log.push({ change: gs[g].id, action: "jump" });
      if (anchor && typeof anchor.scrollIntoView === "function") {
        try { anchor.scrollIntoView({ block: "center" }); } catch (e) {}
      }
      for (var i = 0; i < gs[g].spans.length; i++) gs[g].spans[i].classList.add("cd-active");
      if (dels.length) {
        log.push({ change: gs[g].id, action: "delete" });
        await animateDelete(dels);
      }
      if (inss.length) {
        log.push({ change: gs[g].id, action: "insert" });
        await animateInsert(inss);
      }
      for (var j = 0; j < gs[g].spans.length; j++) gs[g].spans[j].classList.remove("cd-active");
      log.push({ change: gs[g].id, action: "done" });
      await delay(cfg.pauseMs);
    }
    log.push({ action: "end" });
  }
  window.__animate = function () {
    restore();
    var p = run();
    window.__animationDone = p;
    return p;
  };
  var replay = document.getElementById("cd-replay");
  if (replay) replay.addEventListener("click", function () { window.__animate(); });
  if (cfg.autoplay) {
    if (document.readyState === "loading") {
      document.addEventListener("DOMContentLoaded", function () { window.__animate(); });
    } else {
      window.__animate();
    }
  }
})();
"""


class _Weaver(HTMLParser):
    """Echo post-version markup, wrapping visible words with diff marks.

    Word alignment with the plan is guaranteed because the skip rules and
    whitespace handling mirror the text extractor's walk exactly.
    """

    def __init__(self, plan: AnimationPlan, assets: str):
        super().__init__(convert_charrefs=True)
        self.out: list[str] = []
        self._marks = plan.word_marks
        self._words = plan.post_words
        self._pending = {k: list(v) for k, v in plan.pending_deletions.items()}
        self._assets = assets
        self._assets_done = False
        self._cursor = 0
        self._char_pos = 0
        self._skip = 0
        self._raw = 0  # inside script/style: echo data without escaping
        self._stack: list[tuple[str, bool, bool]] = []

    # -- emit helpers --

    def _emit_pending(self, key: int) -> None:
        for text, chg in self._pending.pop(key, ()):
            self.out.append(
                '<span class="cd-del" data-chg="%d">%s</span> '
                % (chg, html_mod.escape(text))
            )

    def _emit_assets(self) -> None:
        if not self._assets_done:
            self._assets_done = True
            self.out.append(self._assets)

    # -- parser hooks --

    def _should_skip(self, tag: str, attrs) -> bool:
        if tag in _DROP_CONTENT or tag in _DROP_ELEMENT:
            return True
        for name, value in attrs:
            if name == "role" and value and value.strip().lower() in _DROP_ROLES:
                return True
        return False

    def handle_starttag(self, tag, attrs):
        self.out.append(self.get_starttag_text() or "")
        if tag in _VOID_TAGS:
            return
        entered = self._should_skip(tag, attrs)
        raw = tag in ("script", "style")
        if entered:
            self._skip += 1
        if raw:
            self._raw += 1
        self._stack.append((tag, entered, raw))

    def handle_startendtag(self, tag, attrs):
        self.out.append(self.get_starttag_text() or "")

    def handle_endtag(self, tag):
        if tag == "body":
            self._emit_pending(len(self._marks))
            self._emit_assets()
        if tag not in _VOID_TAGS:
            for i in range(len(self._stack) - 1, -1, -1):
                if self._stack[i][0] == tag:
                    for _, entered, raw in self._stack[i:]:
                        if entered:
                            self._skip -= 1
                        if raw:
                            self._raw -= 1
                    del self._stack[i:]
                    break
        self.out.append(f"</{tag}>")

    def handle_data(self, data):
        if self._raw or self._skip:
            self.out.append(data if self._raw else html_mod.escape(data, quote=False))
            return
        for piece in re.split(r"(\s+)", data):
            if not piece:
                continue
            if piece.isspace():
                self.out.append(piece)
                continue
            while piece:
                if self._cursor >= len(self._marks):
                    # More visible text than extracted words; echo verbatim.
                    self.out.append(html_mod.escape(piece, quote=False))
                    piece = ""
                    break
                if self._char_pos == 0:
                    self._emit_pending(self._cursor)
                word_len = self._word_len(self._cursor)
                take = piece[: word_len - self._char_pos]
                mark, chg = self._marks[self._cursor]
                if mark == "ins":
                    self.out.append(
                        '<span class="cd-ins" data-chg="%d">%s</span>'
                        % (chg, html_mod.escape(take, quote=False))
                    )
                else:
                    self.out.append(html_mod.escape(take, quote=False))
                self._char_pos += len(take)
                piece = piece[len(take):]
                if self._char_pos >= word_len:
                    self._cursor += 1
                    self._char_pos = 0

    def _word_len(self, cursor: int) -> int:
        return len(self._words[cursor])

    def handle_comment(self, data):
        self.out.append(f"<!--{data}-->")

    def handle_decl(self, decl):
        self.out.append(f"<!{decl}>")

    def handle_pi(self, data):
        self.out.append(f"<?{data}>")

    def unknown_decl(self, data):
        self.out.append(f"<![{data}]>")

    def close(self):
        super().close()
        self._emit_pending(len(self._marks))
        self._emit_assets()


def render_animation(plan: AnimationPlan, post_html: bytes | str, autoplay: bool = True) -> bytes:
    """Weave the plan into the post version's markup; returns a full document."""
    if isinstance(post_html, (bytes, bytearray)):
        post_html = post_html.decode("utf-8", "replace")

    config = {
        "letterMs": plan.timing.letter_ms,
        "wordMs": plan.timing.word_ms,
        "pauseMs": plan.timing.pause_ms,
        "autoplay": autoplay,
    }
    assets = (
        '<button id="cd-replay" type="button">Replay changes</button>'
        f"<style>{_STYLE}</style>"
        "<script>"
        + _SCRIPT.replace("__CONFIG__", json.dumps(config))
        + "</script>"
    )

    weaver = _Weaver(plan, assets)
    weaver.feed(post_html)
    weaver.close()
    return "".join(weaver.out).encode("utf-8")


def build_animation(
    pre_html: bytes | str,
    post_html: bytes | str,
    timing: AnimTiming | None = None,
    autoplay: bool = True,
) -> bytes:
    """Standalone animated document merging two versions of one page."""
    plan = build_animation_plan(pre_html, post_html, timing)
    return render_animation(plan, post_html, autoplay=autoplay)
