"""WARC parsing, URL canonicalization, and archive datetime handling.

Input corpora are WARC 1.0/1.1 files (plain or gzipped; record-level gzip
members decompress as one multi-member stream). Only ``response`` records
with an HTML content type become memento records; everything else is
counted and skipped.
"""

from __future__ import annotations

import gzip
import io
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from email.utils import parsedate_to_datetime
from typing import BinaryIO, Iterator
from urllib.parse import parse_qsl, urlencode

from .errors import InvalidDatetime, InvalidUrl, MalformedWarc, UnsupportedCompression

_GZIP_MAGIC = b"\x1f\x8b"
# Known compression magics we refuse rather than misparse.
_REJECTED_MAGICS = {
    b"\x28\xb5\x2f\xfd": "zstd",
    b"\x42\x5a\x68": "bzip2",
    b"\xfd7zXZ": "xz",
}

_TS14_RE = re.compile(r"^\d{14}$")


@dataclass(frozen=True)
class MementoRecord:
    """One archived capture of a web page."""

    uri_r: str
    capture_datetime: datetime
    http_status: int
    content_type: str
    body: bytes
    uri_m: str | None = None
    source_archive: str = "local"

    def __post_init__(self) -> None:
        if not self.uri_r:
            raise MalformedWarc("record has no target URI")
        if not 100 <= self.http_status <= 599:
            raise MalformedWarc(f"HTTP status {self.http_status} out of range")


@dataclass(frozen=True)
class CanonicalUrl:
    """Normalized URL under which all captures of one page group together."""

    value: str

    @property
    def host(self) -> str:
        return self.value.split("/", 1)[0]

    def __str__(self) -> str:
        return self.value


@dataclass
class IngestStats:
    """Counters for records seen and skipped by parse_warc."""

    responses: int = 0
    skipped_non_response: int = 0
    skipped_non_html: int = 0


def parse_memento_datetime(s: str) -> datetime:
    """Parse a 14-digit YYYYMMDDHHMMSS timestamp or an RFC 1123 date to UTC."""
    s = s.strip()
    if _TS14_RE.match(s):
        try:
            return datetime.strptime(s, "%Y%m%d%H%M%S").replace(tzinfo=timezone.utc)
        except ValueError as exc:
            raise InvalidDatetime(f"bad 14-digit timestamp {s!r}: {exc}") from exc
    try:
        dt = parsedate_to_datetime(s)
    except (TypeError, ValueError) as exc:
        raise InvalidDatetime(f"unrecognized datetime {s!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_memento_datetime(dt: datetime) -> str:
    """Inverse of parse_memento_datetime for the 14-digit form."""
    if dt.tzinfo is not None:
        dt = dt.astimezone(timezone.utc)
    return dt.strftime("%Y%m%d%H%M%S")


def _parse_iso_warc_date(s: str) -> datetime:
    # WARC-Date is ISO 8601, e.g. 2017-02-04T12:34:56Z
    try:
        dt = datetime.fromisoformat(s.replace("Z", "+00:00"))
    except ValueError as exc:
        raise MalformedWarc(f"bad WARC-Date {s!r}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    # Second precision so the 14-digit round trip is exact.
    return dt.astimezone(timezone.utc).replace(microsecond=0)


_UNRESERVED = set(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-._~"
)


def _decode_unreserved(s: str) -> str:
    def repl(m: re.Match) -> str:
        ch = chr(int(m.group(1), 16))
        return ch if ch in _UNRESERVED else m.group(0)

    return re.sub(r"%([0-9A-Fa-f]{2})", repl, s)


def canonicalize_url(url: str) -> CanonicalUrl:
    """Normalize a URL so all captures of one page share a single key.

    The scheme is dropped entirely (http/https collapse), the host is
    lowercased, default ports and fragments are removed, query parameters
    are sorted by key, percent-escapes of unreserved characters are
    decoded, and a bare trailing slash is removed. Idempotent.
    """
    if not isinstance(url, str) or not url.strip():
        raise InvalidUrl("empty URL")
    url = url.strip()

    rest = url
    if "://" in url:
        scheme, rest = url.split("://", 1)
        if not re.match(r"^[A-Za-z][A-Za-z0-9+.-]*$", scheme):
            raise InvalidUrl(f"bad scheme in {url!r}")
    rest = rest.split("#", 1)[0]

    if "?" in rest:
        locpath, query = rest.split("?", 1)
    else:
        locpath, query = rest, ""

    if "/" in locpath:
        netloc, path = locpath.split("/", 1)
        path = "/" + path
    else:
        netloc, path = locpath, ""

    # Strip credentials if present, lowercase host, drop default ports.
    netloc = netloc.rsplit("@", 1)[-1]
    if ":" in netloc:
        host, port = netloc.rsplit(":", 1)
        if not port.isdigit():
            raise InvalidUrl(f"bad port in {url!r}")
        netloc = host.lower() if port in ("80", "443") else f"{host.lower()}:{port}"
    else:
        netloc = netloc.lower()
    if not netloc.split(":", 1)[0]:
        raise InvalidUrl(f"no host in {url!r}")

    path = _decode_unreserved(path)
    if path == "/":
        path = ""

    if query:
        params = sorted(parse_qsl(query, keep_blank_values=True))
        query = urlencode(params)

    value = netloc + path + (("?" + query) if query else "")
    return CanonicalUrl(value)


def _read_header_block(fp: BinaryIO) -> bytes | None:
    """Read bytes up to and excluding the blank CRLF line; None at EOF."""
    buf = bytearray()
    while True:
        chunk = fp.read(1)
        if not chunk:
            if not buf.strip():
                return None
            raise MalformedWarc("truncated record header")
        buf += chunk
        if buf.endswith(b"\r\n\r\n"):
            return bytes(buf[:-4])


def _split_http_payload(block: bytes) -> tuple[int, str, bytes]:
    """Split an HTTP response block into (status, content_type, body)."""
    if b"\r\n\r\n" in block:
        head, body = block.split(b"\r\n\r\n", 1)
    elif b"\n\n" in block:
        head, body = block.split(b"\n\n", 1)
    else:
        head, body = block, b""
    lines = head.replace(b"\r\n", b"\n").split(b"\n")
    status_line = lines[0].decode("latin-1", "replace")
    m = re.match(r"^HTTP/\d(?:\.\d)?\s+(\d{3})", status_line)
    if not m:
        raise MalformedWarc(f"bad HTTP status line {status_line!r}")
    status = int(m.group(1))
    content_type = ""
    for line in lines[1:]:
        if b":" not in line:
            continue
        k, v = line.split(b":", 1)
        if k.strip().lower() == b"content-type":
            content_type = v.strip().decode("latin-1", "replace")
    return status, content_type, body


def parse_warc(
    stream: BinaryIO | bytes,
    stats: IngestStats | None = None,
    source_archive: str = "local",
) -> Iterator[MementoRecord]:
    """Yield one MementoRecord per HTML ``response`` record in a WARC stream.

    Request, metadata, warcinfo and non-HTML records are skipped (counted
    in ``stats``). HTTP headers are stripped from the body; the status is
    taken from the embedded HTTP response line.
    """
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)

    head = stream.read(6)
    if head[:2] == _GZIP_MAGIC:
        # Multi-member (record-level gzip) streams decode as one stream.
        fp: BinaryIO = gzip.GzipFile(fileobj=_Concat(head, stream))
    else:
        for magic, name in _REJECTED_MAGICS.items():
            if head.startswith(magic):
                raise UnsupportedCompression(f"{name} compression is not supported")
        fp = _Concat(head, stream)
    while True:
        header = _read_header_block(fp)
        if header is None:
            return
        header = header.lstrip(b"\r\n")
        if not header:
            continue
        lines = header.split(b"\r\n")
        version = lines[0].strip()
        if version not in (b"WARC/1.0", b"WARC/1.1"):
            raise MalformedWarc(f"unsupported record header {version!r}")
        fields: dict[bytes, bytes] = {}
        for line in lines[1:]:
            if b":" not in line:
                raise MalformedWarc(f"bad header line {line!r}")
            k, v = line.split(b":", 1)
            fields[k.strip().lower()] = v.strip()
        try:
            length = int(fields[b"content-length"])
        except (KeyError, ValueError) as exc:
            raise MalformedWarc("missing or bad Content-Length") from exc
        block = fp.read(length)
        if len(block) < length:
            raise MalformedWarc("truncated record block")
        fp.read(4)  # trailing CRLF CRLF between records

        rec_type = fields.get(b"warc-type", b"")
        if rec_type != b"response":
            if stats:
                stats.skipped_non_response += 1
            continue
        content_type = fields.get(b"content-type", b"")
        if b"application/http" not in content_type:
            if stats:
                stats.skipped_non_response += 1
            continue

        status, http_ct, body = _split_http_payload(block)
        if "html" not in http_ct.lower():
            if stats:
                stats.skipped_non_html += 1
            continue

        uri = fields.get(b"warc-target-uri", b"").decode("utf-8", "replace").strip("<>")
        date = fields.get(b"warc-date", b"").decode("ascii", "replace")
        if stats:
            stats.responses += 1
        yield MementoRecord(
            uri_r=uri,
            capture_datetime=_parse_iso_warc_date(date),
            http_status=status,
            content_type=http_ct,
            body=body,
            uri_m=None,
            source_archive=source_archive,
        )


class _Concat(io.RawIOBase):
    """Read-only stream chaining an already-read prefix with the remainder."""

    def __init__(self, prefix: bytes, rest) -> None:
        self._prefix = prefix
        self._rest = rest

    def read(self, n: int = -1) -> bytes:
        out = b""
        if self._prefix:
            if n is None or n < 0:
                out, self._prefix = self._prefix, b""
            else:
                out, self._prefix = self._prefix[:n], self._prefix[n:]
                n -= len(out)
                if n == 0:
                    return out
        tail = self._rest.read(n if n is not None and n >= 0 else -1)
        return out + (tail or b"")
