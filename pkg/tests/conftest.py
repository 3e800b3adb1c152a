"""Shared fixtures: the niehs and fws scenario corpora and index helpers."""

from __future__ import annotations

from datetime import datetime, timezone

import pytest

from chronodiff.corpus import build_chains
from chronodiff.index import build_index
from chronodiff.warc import MementoRecord

NIEHS_URL = "https://www.niehs.nih.gov/health/topics/agents/index.cfm"
FWS_URL = "http://www.fws.gov/ENDANGERED/permits/index.html"


def _page(paragraphs: list[str]) -> bytes:
    body = "".join(f"<p>{p}</p>" for p in paragraphs)
    return (
        "<html><head><title>Fixture</title><script>var x=1;</script></head>"
        f"<body><nav>Home | Topics | Search</nav>{body}"
        "<footer>Contact us</footer></body></html>"
    ).encode()


def _utc(*args) -> datetime:
    return datetime(*args, tzinfo=timezone.utc)


NIEHS_CONTENT_A = [
    "Air pollution affects health. Pollution sources include traffic. "
    "Indoor pollution and outdoor pollution are monitored.",
    "The scientific review of environmental agents continues.",
]
NIEHS_CONTENT_B = [
    "Air quality affects health. Sources include traffic. "
    "Indoor air and outdoor air are monitored.",
    "The review of environmental agents continues.",
]
NIEHS_CONTENT_C = [
    "Air quality affects health. Sources include traffic. "
    "Indoor air and outdoor air are monitored.",
    "The review of environmental agents continues with updated guidance.",
]

NIEHS_CAPTURES = [
    (_utc(2016, 7, 15, 9, 0, 0), NIEHS_CONTENT_A),
    (_utc(2017, 2, 4, 12, 0, 0), NIEHS_CONTENT_A),
    (_utc(2017, 3, 10, 8, 30, 0), NIEHS_CONTENT_B),
    (_utc(2020, 1, 20, 16, 45, 0), NIEHS_CONTENT_C),
]

FWS_CAPTURES = [
    (
        _utc(2016, 5, 1, 10, 0, 0),
        [
            "The endangered species permit program protects wildlife.",
            "Apply for permits through the regional office.",
        ],
    ),
    (
        _utc(2017, 6, 12, 14, 0, 0),
        [
            "The permit program protects wildlife. Species recovery continues.",
            "Apply for permits through the regional office.",
        ],
    ),
]


def records_for(url: str, captures) -> list[MementoRecord]:
    return [
        MementoRecord(
            uri_r=url,
            capture_datetime=dt,
            http_status=200,
            content_type="text/html",
            body=_page(paragraphs),
            uri_m=f"https://web.archive.org/web/{dt:%Y%m%d%H%M%S}/{url}",
            source_archive="web.archive.org",
        )
        for dt, paragraphs in captures
    ]


@pytest.fixture(scope="session")
def niehs_records():
    return records_for(NIEHS_URL, NIEHS_CAPTURES)


@pytest.fixture(scope="session")
def fws_records():
    return records_for(FWS_URL, FWS_CAPTURES)


@pytest.fixture(scope="session")
def fixture_index(niehs_records, fws_records):
    chains, bodies = build_chains(niehs_records + fws_records)
    return build_index(chains, bodies)


@pytest.fixture(scope="session")
def niehs_chain(fixture_index):
    cid = fixture_index.chain_for_url(
        "www.niehs.nih.gov/health/topics/agents/index.cfm"
    )
    return fixture_index.chains[cid]


@pytest.fixture(scope="session")
def fws_chain(fixture_index):
    cid = fixture_index.chain_for_url("www.fws.gov/ENDANGERED/permits/index.html")
    return fixture_index.chains[cid]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = []
    for status, label in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance" in nodeid and "::" in nodeid:
                lines.append((nodeid.split("::")[-1], label))
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria:")
        for name, label in sorted(set(lines)):
            terminalreporter.write_line(f"[{label}] {name}")
