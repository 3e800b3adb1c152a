"""Minimal WARC writer for building test fixtures."""

from __future__ import annotations

import gzip
import io


def warc_response(
    uri: str,
    date_iso: str,
    body: bytes,
    status: int = 200,
    content_type: str = "text/html",
    version: str = "WARC/1.0",
) -> bytes:
    reason = {200: "OK", 301: "Moved Permanently", 404: "Not Found"}.get(status, "X")
    http = (
        f"HTTP/1.1 {status} {reason}\r\n"
        f"Content-Type: {content_type}\r\n"
        f"Content-Length: {len(body)}\r\n\r\n"
    ).encode() + body
    head = (
        f"{version}\r\n"
        "WARC-Type: response\r\n"
        f"WARC-Record-ID: <urn:uuid:{abs(hash((uri, date_iso))):032x}>\r\n"
        f"WARC-Target-URI: {uri}\r\n"
        f"WARC-Date: {date_iso}\r\n"
        "Content-Type: application/http; msgtype=response\r\n"
        f"Content-Length: {len(http)}\r\n\r\n"
    ).encode()
    return head + http + b"\r\n\r\n"


def warc_info(version: str = "WARC/1.0") -> bytes:
    payload = b"software: testbuild\r\n"
    head = (
        f"{version}\r\n"
        "WARC-Type: warcinfo\r\n"
        "WARC-Record-ID: <urn:uuid:0>\r\n"
        "WARC-Date: 2020-01-01T00:00:00Z\r\n"
        "Content-Type: application/warc-fields\r\n"
        f"Content-Length: {len(payload)}\r\n\r\n"
    ).encode()
    return head + payload + b"\r\n\r\n"


def warc_request(uri: str, version: str = "WARC/1.0") -> bytes:
    http = f"GET {uri} HTTP/1.1\r\nHost: x\r\n\r\n".encode()
    head = (
        f"{version}\r\n"
        "WARC-Type: request\r\n"
        "WARC-Record-ID: <urn:uuid:1>\r\n"
        f"WARC-Target-URI: {uri}\r\n"
        "WARC-Date: 2020-01-01T00:00:00Z\r\n"
        "Content-Type: application/http; msgtype=request\r\n"
        f"Content-Length: {len(http)}\r\n\r\n"
    ).encode()
    return head + http + b"\r\n\r\n"


def gzip_records(raw: bytes) -> bytes:
    """Record-level gzip: each record becomes its own gzip member."""
    out = io.BytesIO()
    pos = 0
    while pos < len(raw):
        # Records end with the double CRLF written by the builders above.
        nxt = raw.find(b"\r\n\r\nWARC/", pos)
        end = len(raw) if nxt == -1 else nxt + 4
        out.write(gzip.compress(raw[pos:end]))
        pos = end
    return out.getvalue()
