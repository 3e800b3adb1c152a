#!/usr/bin/env python3
"""Regenerate the frontend test fixtures from the backend's real interfaces.

Run from the repository root:

    python3 frontend/test/fixtures/regenerate.py

The fixtures are genuine API responses (and one animation document)
produced from the same capture corpus the backend test suite uses, so the
frontend tests exercise the documented wire formats and nothing else.
"""

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parents[3]
sys.path.insert(0, str(ROOT / "tests"))

from conftest import FWS_CAPTURES, FWS_URL, NIEHS_CAPTURES, NIEHS_URL, records_for  # noqa: E402
from fastapi.testclient import TestClient  # noqa: E402

from chronodiff.animate import AnimTiming, build_animation  # noqa: E402
from chronodiff.corpus import build_chains  # noqa: E402
from chronodiff.index import build_index, persist  # noqa: E402
from chronodiff.service import ApiConfig, create_app  # noqa: E402

OUT = Path(__file__).resolve().parent
NIEHS_CANON = "www.niehs.nih.gov/health/topics/agents/index.cfm"


def main() -> None:
    records = records_for(NIEHS_URL, NIEHS_CAPTURES) + records_for(FWS_URL, FWS_CAPTURES)
    chains, bodies = build_chains(records)
    idx = build_index(chains, bodies)

    with tempfile.TemporaryDirectory() as d:
        persist(idx, d)
        client = TestClient(create_app(ApiConfig(index_dir=d)))

        r = client.get("/api/search", params={"type": "deleted_term", "q": "pollution"})
        r.raise_for_status()
        (OUT / "search_niehs.json").write_text(json.dumps(r.json(), indent=2), "utf-8")

        r = client.get("/api/versions", params={"url": NIEHS_CANON})
        r.raise_for_status()
        (OUT / "versions_niehs.json").write_text(json.dumps(r.json(), indent=2), "utf-8")

        r = client.get("/api/slide", params={"url": NIEHS_CANON, "i": 0})
        r.raise_for_status()
        (OUT / "slide_niehs_0.json").write_text(json.dumps(r.json(), indent=2), "utf-8")

    cid = idx.chain_for_url(NIEHS_CANON)
    b1 = idx.bodies[(cid, "20170204120000")][0]
    b2 = idx.bodies[(cid, "20170310083000")][0]
    doc = build_animation(b1, b2, timing=AnimTiming(letter_ms=0, word_ms=0, pause_ms=0))
    (OUT / "animate_niehs_zero_delay.html").write_bytes(doc)
    print(f"fixtures regenerated under {OUT}")


if __name__ == "__main__":
    main()
