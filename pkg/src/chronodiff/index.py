"""Persistent inverted index over text and change fields.

On disk an index is a directory of five files:

    manifest   JSON: format version, counts, build timestamp, checksums
    dict       sorted term table: field, term, offset, length, postings
    postings   delta-encoded binary posting lists
    chains     line-delimited JSON chain records (urls, validity, members)
    docs       line-delimited JSON per-version block/body store

The format version string is "chronodiff-index/1". A loaded index is
immutable; rebuilds write a fresh directory and services swap by path.
"""

from __future__ import annotations

import base64
import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import CorruptIndex, DuplicateChainId, UnknownField, VersionMismatch
from .extract import MementoRef, doc_from_blocks
from .temporal import CoalescedVersion, VersionChain
from .warc import CanonicalUrl, format_memento_datetime, parse_memento_datetime

FORMAT_VERSION = "chronodiff-index/1"

TEXT = "text"
ADDED = "added"
DELETED = "deleted"
PARTIALLY_DELETED = "partially_deleted"
PARTIALLY_ADDED = "partially_added"
ADDED_BIGRAM = "added_bigram"
DELETED_BIGRAM = "deleted_bigram"

FIELDS = (
    TEXT,
    ADDED,
    DELETED,
    PARTIALLY_DELETED,
    PARTIALLY_ADDED,
    ADDED_BIGRAM,
    DELETED_BIGRAM,
)


@dataclass(frozen=True, order=True)
class Posting:
    """One index entry: a version (text field) or transition (change fields).

    payload is the term frequency for the text field and the signed
    occurrence delta for change fields (never zero there).
    """

    chain_id: int
    ordinal: int
    payload: int


@dataclass
class ChangeIndex:
    chains: list[VersionChain]
    postings: dict[str, dict[str, list[Posting]]]
    manifest: dict
    bodies: dict[tuple[int, str], tuple[bytes, str]] = field(default_factory=dict)
    url_to_chain: dict[str, int] = field(default_factory=dict)

    def chain_for_url(self, url: CanonicalUrl | str) -> int | None:
        return self.url_to_chain.get(str(url))


def _bigram_key(bg: tuple[str, str]) -> str:
    return bg[0] + " " + bg[1]


def build_index(
    chains: list[VersionChain],
    bodies: dict[tuple[str, str], tuple[bytes, str]] | None = None,
) -> ChangeIndex:
    """Index every term of every version plus all change-set members.

    bodies optionally maps (canonical url, 14-digit capture timestamp) to
    (raw body, content type); stored member bodies back the replay and
    animation endpoints.
    """
    seen: dict[str, int] = {}
    for i, chain in enumerate(chains):
        key = str(chain.canonical_url)
        if key in seen:
            raise DuplicateChainId(f"two chains share canonical url {key}")
        seen[key] = i

    postings: dict[str, dict[str, list[Posting]]] = {f: {} for f in FIELDS}

    def post(field_name: str, term: str, chain_id: int, ordinal: int, payload: int) -> None:
        postings[field_name].setdefault(term, []).append(
            Posting(chain_id=chain_id, ordinal=ordinal, payload=payload)
        )

    n_versions = n_transitions = 0
    for cid, chain in enumerate(chains):
        for v in chain.versions:
            n_versions += 1
            for term, tf in v.doc.unigram_counts.items():
                post(TEXT, term, cid, v.version_index, tf)
        for k, cs in enumerate(chain.transitions):
            n_transitions += 1
            pre = chain.versions[k].doc
            pst = chain.versions[k + 1].doc

            def delta(term: str) -> int:
                return pst.unigram_counts.get(term, 0) - pre.unigram_counts.get(term, 0)

            def bdelta(bg: tuple[str, str]) -> int:
                return pst.bigram_counts.get(bg, 0) - pre.bigram_counts.get(bg, 0)

            for t in cs.added_terms:
                post(ADDED, t, cid, k, delta(t))
            for t in cs.removed_terms:
                post(DELETED, t, cid, k, delta(t))
            for t in cs.partially_removed_terms:
                post(PARTIALLY_DELETED, t, cid, k, delta(t))
            for t in cs.partially_added_terms:
                post(PARTIALLY_ADDED, t, cid, k, delta(t))
            for bg in cs.added_bigrams | cs.partially_added_bigrams:
                post(ADDED_BIGRAM, _bigram_key(bg), cid, k, bdelta(bg))
            for bg in cs.removed_bigrams | cs.partially_removed_bigrams:
                post(DELETED_BIGRAM, _bigram_key(bg), cid, k, bdelta(bg))

    for per_term in postings.values():
        for plist in per_term.values():
            plist.sort()

    body_map: dict[tuple[int, str], tuple[bytes, str]] = {}
    if bodies:
        for (url, ts), payload in bodies.items():
            cid = seen.get(url)
            if cid is not None:
                body_map[(cid, ts)] = payload

    manifest = {
        "format": FORMAT_VERSION,
        "created": datetime.now(timezone.utc).isoformat(),
        "counts": {
            "chains": len(chains),
            "versions": n_versions,
            "transitions": n_transitions,
            "terms": {f: len(per) for f, per in postings.items()},
            "postings": {
                f: sum(len(p) for p in per.values()) for f, per in postings.items()
            },
        },
    }
    return ChangeIndex(
        chains=list(chains),
        postings=postings,
        manifest=manifest,
        bodies=body_map,
        url_to_chain=seen,
    )


def lookup(index: ChangeIndex, field_name: str, term: str) -> list[Posting]:
    """Exact-match posting list, sorted by (chain_id, ordinal)."""
    if field_name not in FIELDS:
        raise UnknownField(field_name)
    return list(index.postings[field_name].get(term, ()))


# -- varint encoding ----------------------------------------------------------


def _write_uvarint(out: bytearray, n: int) -> None:
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _read_uvarint(buf: bytes, pos: int) -> tuple[int, int]:
    shift = 0
    value = 0
    while True:
        if pos >= len(buf):
            raise CorruptIndex("unexpected end of postings data")
        byte = buf[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7


def _zigzag(n: int) -> int:
    return n << 1 if n >= 0 else ((-n) << 1) - 1


def _unzigzag(n: int) -> int:
    return (n >> 1) if (n & 1) == 0 else -((n + 1) >> 1)


def _encode_postings(plist: list[Posting]) -> bytes:
    out = bytearray()
    _write_uvarint(out, len(plist))
    prev_chain = 0
    for p in plist:
        _write_uvarint(out, p.chain_id - prev_chain)
        _write_uvarint(out, p.ordinal)
        _write_uvarint(out, _zigzag(p.payload))
        prev_chain = p.chain_id
    return bytes(out)


def _decode_postings(buf: bytes) -> list[Posting]:
    n, pos = _read_uvarint(buf, 0)
    out = []
    chain = 0
    for _ in range(n):
        dchain, pos = _read_uvarint(buf, pos)
        ordinal, pos = _read_uvarint(buf, pos)
        zz, pos = _read_uvarint(buf, pos)
        chain += dchain
        out.append(Posting(chain_id=chain, ordinal=ordinal, payload=_unzigzag(zz)))
    if pos != len(buf):
        raise CorruptIndex("trailing bytes in postings entry")
    return out


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fp:
        for chunk in iter(lambda: fp.read(1 << 20), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def _iso(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def _member_record(m: MementoRef) -> dict:
    return {
        "uriR": m.uri_r,
        "uriM": m.uri_m,
        "ts": format_memento_datetime(m.capture_datetime),
        "status": m.http_status,
        "contentType": m.content_type,
        "archive": m.source_archive,
    }


def _member_from_record(rec: dict) -> MementoRef:
    return MementoRef(
        uri_r=rec["uriR"],
        capture_datetime=parse_memento_datetime(rec["ts"]),
        http_status=rec["status"],
        content_type=rec.get("contentType", ""),
        uri_m=rec.get("uriM"),
        source_archive=rec.get("archive", "local"),
    )


def persist(index: ChangeIndex, directory: str | Path) -> Path:
    """Write the index to a directory; returns the directory path."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)

    postings_buf = bytearray()
    dict_lines = []
    for field_name in FIELDS:
        for term in sorted(index.postings[field_name]):
            encoded = _encode_postings(index.postings[field_name][term])
            dict_lines.append(
                "\t".join(
                    (
                        field_name,
                        term,
                        str(len(postings_buf)),
                        str(len(encoded)),
                        str(len(index.postings[field_name][term])),
                    )
                )
            )
            postings_buf.extend(encoded)
    (root / "postings").write_bytes(bytes(postings_buf))
    (root / "dict").write_text("\n".join(dict_lines) + ("\n" if dict_lines else ""), "utf-8")

    with open(root / "chains", "w", encoding="utf-8") as fp:
        for cid, chain in enumerate(index.chains):
            fp.write(
                json.dumps(
                    {
                        "chainId": cid,
                        "canonicalUrl": str(chain.canonical_url),
                        "versions": [
                            {
                                "index": v.version_index,
                                "validity": [
                                    _iso(v.validity[0]),
                                    _iso(v.validity[1]) if v.validity[1] else None,
                                ],
                                "members": [_member_record(m) for m in v.members],
                            }
                            for v in chain.versions
                        ],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )

    with open(root / "docs", "w", encoding="utf-8") as fp:
        for cid, chain in enumerate(index.chains):
            for v in chain.versions:
                bodies = []
                for m in v.members:
                    ts = format_memento_datetime(m.capture_datetime)
                    stored = index.bodies.get((cid, ts))
                    if stored is not None:
                        bodies.append(
                            {
                                "ts": ts,
                                "contentType": stored[1],
                                "body": base64.b64encode(stored[0]).decode("ascii"),
                            }
                        )
                fp.write(
                    json.dumps(
                        {
                            "chainId": cid,
                            "version": v.version_index,
                            "blocks": v.doc.blocks,
                            "bodies": bodies,
                        },
                        ensure_ascii=False,
                    )
                    + "\n"
                )

    manifest = dict(index.manifest)
    manifest["format"] = FORMAT_VERSION
    manifest["checksums"] = {
        name: _sha256(root / name) for name in ("dict", "postings", "chains", "docs")
    }
    (root / "manifest").write_text(json.dumps(manifest, indent=2), "utf-8")
    return root


def load(directory: str | Path) -> ChangeIndex:
    """Load a persisted index; observationally identical to what was saved."""
    root = Path(directory)
    try:
        manifest = json.loads((root / "manifest").read_text("utf-8"))
    except FileNotFoundError as exc:
        raise CorruptIndex(f"missing manifest in {root}") from exc
    except json.JSONDecodeError as exc:
        raise CorruptIndex(f"unreadable manifest in {root}") from exc

    fmt = manifest.get("format")
    if fmt != FORMAT_VERSION:
        raise VersionMismatch(f"index format {fmt!r}, expected {FORMAT_VERSION!r}")

    for name, expected in manifest.get("checksums", {}).items():
        path = root / name
        if not path.exists():
            raise CorruptIndex(f"missing index file {name}")
        if _sha256(path) != expected:
            raise CorruptIndex(f"checksum mismatch for {name}")

    postings_raw = (root / "postings").read_bytes()
    postings: dict[str, dict[str, list[Posting]]] = {f: {} for f in FIELDS}
    dict_text = (root / "dict").read_text("utf-8")
    for line in dict_text.splitlines():
        if not line:
            continue
        try:
            field_name, term, offset_s, length_s, _count = line.split("\t")
            offset, length = int(offset_s), int(length_s)
        except ValueError as exc:
            raise CorruptIndex(f"bad dict line {line!r}") from exc
        if field_name not in FIELDS:
            raise CorruptIndex(f"unknown field {field_name!r} in dict")
        postings[field_name][term] = _decode_postings(
            postings_raw[offset : offset + length]
        )

    docs: dict[tuple[int, int], dict] = {}
    bodies: dict[tuple[int, str], tuple[bytes, str]] = {}
    with open(root / "docs", encoding="utf-8") as fp:
        for line in fp:
            rec = json.loads(line)
            docs[(rec["chainId"], rec["version"])] = rec
            for b in rec.get("bodies", ()):
                bodies[(rec["chainId"], b["ts"])] = (
                    base64.b64decode(b["body"]),
                    b.get("contentType", "text/html"),
                )

    chains: list[VersionChain] = []
    url_to_chain: dict[str, int] = {}
    with open(root / "chains", encoding="utf-8") as fp:
        for line in fp:
            rec = json.loads(line)
            cid = rec["chainId"]
            url = CanonicalUrl(rec["canonicalUrl"])
            versions = []
            for vrec in rec["versions"]:
                members = [_member_from_record(m) for m in vrec["members"]]
                doc_rec = docs.get((cid, vrec["index"]))
                if doc_rec is None:
                    raise CorruptIndex(
                        f"docs store missing version {vrec['index']} of chain {cid}"
                    )
                doc = doc_from_blocks(
                    url,
                    members[0].capture_datetime,
                    doc_rec["blocks"],
                    memento=members[0],
                )
                validity_end = vrec["validity"][1]
                versions.append(
                    CoalescedVersion(
                        version_index=vrec["index"],
                        validity=(
                            datetime.fromisoformat(vrec["validity"][0].replace("Z", "+00:00")),
                            datetime.fromisoformat(validity_end.replace("Z", "+00:00"))
                            if validity_end
                            else None,
                        ),
                        members=members,
                        doc=doc,
                    )
                )
            chain = _rebuild_chain(url, versions)
            if cid != len(chains):
                raise CorruptIndex("chain records out of order")
            url_to_chain[str(url)] = cid
            chains.append(chain)

    return ChangeIndex(
        chains=chains,
        postings=postings,
        manifest=manifest,
        bodies=bodies,
        url_to_chain=url_to_chain,
    )


def _rebuild_chain(url: CanonicalUrl, versions: list[CoalescedVersion]) -> VersionChain:
    from .temporal import _transition  # change sets are derived data

    transitions = [
        _transition(versions[i], versions[i + 1]) for i in range(len(versions) - 1)
    ]
    return VersionChain(canonical_url=url, versions=versions, transitions=transitions)
