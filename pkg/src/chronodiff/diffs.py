"""Token-level diffs and the sliding version-to-version diff sequence.

token_diff produces a minimal edit script (Myers' O(ND) algorithm in
linear space), so script length always equals the token edit distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .temporal import VersionChain

KEEP = "keep"
DELETE = "delete"
INSERT = "insert"
REPLACE = "replace"


@dataclass(frozen=True)
class Region:
    """One tiled span of the edit script.

    a_range/b_range are half-open token index ranges into the two input
    sequences; keep and replace advance both, delete only a, insert only b.
    """

    kind: str
    a_range: tuple[int, int]
    b_range: tuple[int, int]
    a_tokens: tuple[str, ...] = ()
    b_tokens: tuple[str, ...] = ()


@dataclass(frozen=True)
class EditScript:
    regions: tuple[Region, ...]

    @property
    def edit_size(self) -> int:
        """Total deleted plus inserted tokens (the LCS edit distance)."""
        return sum(
            len(r.a_tokens) + len(r.b_tokens)
            for r in self.regions
            if r.kind != KEEP
        )

    def is_identity(self) -> bool:
        return all(r.kind == KEEP for r in self.regions)


def apply_script(script: EditScript, a: Sequence[str]) -> list[str]:
    """Reproduce sequence b from sequence a; sanity check for the tiling."""
    out: list[str] = []
    pos = 0
    for r in script.regions:
        if r.a_range[0] != pos:
            raise ValueError("regions do not tile sequence a")
        if r.kind == KEEP:
            out.extend(a[r.a_range[0] : r.a_range[1]])
        elif r.kind in (INSERT, REPLACE):
            out.extend(r.b_tokens)
        pos = r.a_range[1]
    if pos != len(a):
        raise ValueError("regions do not tile sequence a")
    return out


# -- Myers linear-space midpoint search --------------------------------------


def _midpoint(a, b, left, top, right, bottom):
    """Middle snake of an optimal path through the given edit-graph box."""
    width = right - left
    height = bottom - top
    size = width + height
    if size == 0:
        return None
    delta = width - height
    max_d = (size // 2) + (size % 2)
    span = 2 * max_d + 1
    vf = [0] * span
    vf[1] = left
    vb = [0] * span
    vb[1] = bottom

    for d in range(max_d + 1):
        # forward pass
        for k in range(d, -d - 1, -2):
            c = k - delta
            if k == -d or (k != d and vf[(k - 1) % span] < vf[(k + 1) % span]):
                px = x = vf[(k + 1) % span]
            else:
                px = vf[(k - 1) % span]
                x = px + 1
            y = top + (x - left) - k
            py = y if (d == 0 or x != px) else y - 1
            while x < right and y < bottom and a[x] == b[y]:
                x += 1
                y += 1
            vf[k % span] = x
            if delta % 2 == 1 and -(d - 1) <= c <= d - 1 and y >= vb[c % span]:
                return ((px, py), (x, y))
        # backward pass
        for c in range(d, -d - 1, -2):
            k = c + delta
            if c == -d or (c != d and vb[(c - 1) % span] > vb[(c + 1) % span]):
                py = y = vb[(c + 1) % span]
            else:
                py = vb[(c - 1) % span]
                y = py - 1
            x = left + (y - top) + k
            px = x if (d == 0 or y != py) else x + 1
            while x > left and y > top and a[x - 1] == b[y - 1]:
                x -= 1
                y -= 1
            vb[c % span] = y
            if delta % 2 == 0 and -d <= k <= d and x <= vf[k % span]:
                return ((x, y), (px, py))
    raise AssertionError("midpoint search failed")


def _find_path(a, b, left, top, right, bottom):
    """Path points of an optimal route; consecutive points are separated by
    at most one non-diagonal move plus diagonal runs."""
    snake = _midpoint(a, b, left, top, right, bottom)
    if snake is None:
        return None
    start, finish = snake
    head = _find_path(a, b, left, top, start[0], start[1]) or [start]
    tail = _find_path(a, b, finish[0], finish[1], right, bottom) or [finish]
    return head + tail


def _trace(a, b):
    """Yield (kind, a_index, b_index) unit moves along an optimal path."""
    points = _find_path(a, b, 0, 0, len(a), len(b))
    if not points:
        return
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        while x1 < x2 and y1 < y2 and a[x1] == b[y1]:
            yield (KEEP, x1, y1)
            x1 += 1
            y1 += 1
        if x2 - x1 > y2 - y1:
            yield (DELETE, x1, y1)
            x1 += 1
        elif x2 - x1 < y2 - y1:
            yield (INSERT, x1, y1)
            y1 += 1
        while x1 < x2 and y1 < y2:
            yield (KEEP, x1, y1)
            x1 += 1
            y1 += 1


def token_diff(a: Sequence[str], b: Sequence[str]) -> EditScript:
    """Minimal LCS-based edit script over two token sequences.

    Maximal runs of non-keep moves collapse into a single region: pure
    deletions, pure insertions, or a replace when both sides are present.
    """
    a = list(a)
    b = list(b)

    pre = 0
    while pre < len(a) and pre < len(b) and a[pre] == b[pre]:
        pre += 1
    suf = 0
    while (
        suf < len(a) - pre and suf < len(b) - pre and a[-1 - suf] == b[-1 - suf]
    ):
        suf += 1

    moves = [(KEEP, i, i) for i in range(pre)]
    mid_a, mid_b = a[pre : len(a) - suf], b[pre : len(b) - suf]
    moves.extend((k, x + pre, y + pre) for k, x, y in _trace(mid_a, mid_b))
    moves.extend(
        (KEEP, len(a) - suf + i, len(b) - suf + i) for i in range(suf)
    )

    regions: list[Region] = []
    i = 0
    while i < len(moves):
        is_keep = moves[i][0] == KEEP
        j = i
        while j < len(moves) and (moves[j][0] == KEEP) == is_keep:
            j += 1
        ax, bx = moves[i][1], moves[i][2]
        a_end = ax + sum(1 for m in moves[i:j] if m[0] in (KEEP, DELETE))
        b_end = bx + sum(1 for m in moves[i:j] if m[0] in (KEEP, INSERT))
        if is_keep:
            regions.append(
                Region(KEEP, (ax, a_end), (bx, b_end), tuple(a[ax:a_end]), ())
            )
        else:
            deleted = tuple(a[ax:a_end])
            inserted = tuple(b[bx:b_end])
            kind = REPLACE if deleted and inserted else (DELETE if deleted else INSERT)
            regions.append(Region(kind, (ax, a_end), (bx, b_end), deleted, inserted))
        i = j

    if not regions:
        regions.append(Region(kind=KEEP, a_range=(0, 0), b_range=(0, 0)))
    return EditScript(regions=tuple(regions))


# -- sliding sequence ---------------------------------------------------------


@dataclass(frozen=True)
class SlideEntry:
    pair: tuple[int, int]
    script: EditScript
    identical: bool


@dataclass(frozen=True)
class SlidingSequence:
    """Consecutive version diffs plus endpoint indices for jump navigation."""

    entries: tuple[SlideEntry, ...]
    first_index: int
    last_index: int


def sliding_sequence(chain: VersionChain) -> SlidingSequence:
    """One diff entry per consecutive version pair of a chain.

    identical is true exactly when the transition's change set is empty
    (a pure reordering): those are the pairs the viewer's fast-forward and
    rewind skip past.
    """
    entries = []
    for i in range(len(chain.versions) - 1):
        script = token_diff(chain.versions[i].doc.tokens, chain.versions[i + 1].doc.tokens)
        entries.append(
            SlideEntry(
                pair=(i, i + 1),
                script=script,
                identical=chain.transitions[i].is_empty(),
            )
        )
    return SlidingSequence(
        entries=tuple(entries),
        first_index=0,
        last_index=max(len(chain.versions) - 1, 0),
    )
