"""Operator CLI: ingest, index, search, analyze, animate, timemap-report, serve.

Exit codes: 0 success, 2 usage error (click), 1 data error.
"""

from __future__ import annotations

import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import click

from . import corpus as corpus_mod
from . import index as index_mod
from .analytics import TemporalRules, categorize_terms, load_termlist, top_deleted_terms
from .animate import AnimTiming, build_animation
from .errors import ChronodiffError, UnknownUrl
from .memento import PageCaptures, pairing_report, parse_timemap
from .query import ChangeQuery, execute
from .service import ApiConfig, closest_memento, create_app, serialize_hit
from .warc import (
    IngestStats,
    canonicalize_url,
    format_memento_datetime,
    parse_memento_datetime,
    parse_warc,
)


@click.group()
def main() -> None:
    """Change-text search over archived web page versions."""


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc.__class__.__name__}: {exc}", err=True)
    sys.exit(1)


class _Stage:
    """Prints per-stage wall-clock timings as the pipeline runs."""

    def __init__(self) -> None:
        self._t0 = time.perf_counter()

    def done(self, name: str, detail: str = "") -> None:
        dt = time.perf_counter() - self._t0
        suffix = f" ({detail})" if detail else ""
        click.echo(f"stage={name} seconds={dt:.3f}{suffix}")
        self._t0 = time.perf_counter()


@main.command()
@click.argument("warcs", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
def ingest(warcs: tuple[str, ...], out_path: str) -> None:
    """Parse WARC files into a record corpus (JSON lines)."""
    records = []
    stats = IngestStats()
    try:
        for path in warcs:
            with open(path, "rb") as fp:
                records.extend(parse_warc(fp, stats=stats))
    except ChronodiffError as exc:
        _fail(exc)
    n = corpus_mod.save_records(out_path, records)
    click.echo(
        f"ingested {n} html responses "
        f"(skipped {stats.skipped_non_response} non-response, "
        f"{stats.skipped_non_html} non-html) -> {out_path}"
    )


@main.command("index")
@click.argument("corpus", type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option(
    "--statuses",
    default="200",
    show_default=True,
    help="comma-separated HTTP statuses to keep, or 'all'",
)
def index_cmd(corpus: str, out_dir: str, statuses: str) -> None:
    """Build chains, calculate change sets, and persist the index."""
    keep = None if statuses == "all" else {int(s) for s in statuses.split(",")}
    stage = _Stage()
    try:
        records = corpus_mod.load_records(corpus)
        stage.done("load", f"{len(records)} records")
        chains, bodies = corpus_mod.build_chains(records, keep_statuses=keep)
        n_versions = sum(len(c.versions) for c in chains)
        n_transitions = sum(len(c.transitions) for c in chains)
        stage.done(
            "chains+changes",
            f"{len(chains)} chains, {n_versions} versions, {n_transitions} transitions",
        )
        idx = index_mod.build_index(chains, bodies)
        stage.done("index", f"{idx.manifest['counts']['postings']}")
        index_mod.persist(idx, out_dir)
        stage.done("persist", out_dir)
    except ChronodiffError as exc:
        _fail(exc)
    click.echo(f"index written to {out_dir}")


@main.command()
@click.argument("indexdir", type=click.Path(exists=True))
@click.option("--type", "change_type", required=True)
@click.option("--q", "text", required=True)
@click.option("--partial/--no-partial", default=True, show_default=True)
@click.option("--from", "from_s", default=None, help="change interval filter start")
@click.option("--to", "to_s", default=None, help="change interval filter end")
@click.option("--domain", default=None)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["table", "records"]),
    default="table",
    show_default=True,
)
def search(indexdir, change_type, text, partial, from_s, to_s, domain, fmt) -> None:
    """Run one change query and print the hits."""
    try:
        idx = index_mod.load(indexdir)
        date_range = None
        if from_s or to_s:
            date_range = (
                parse_memento_datetime(from_s) if from_s else None,
                parse_memento_datetime(to_s) if to_s else None,
            )
        query = ChangeQuery(
            change_type=change_type,
            text=text,
            include_partial=partial,
            date_range=date_range,
            domain=domain,
        )
        hits = execute(query, idx)
    except ChronodiffError as exc:
        _fail(exc)

    if fmt == "records":
        for h in hits:
            click.echo(json.dumps(serialize_hit(h), ensure_ascii=False))
        return

    click.echo(f"{len(hits)} hit(s) for {change_type} {text!r}")
    for h in hits:
        interval = (
            f"({h.change_interval[0]:%Y-%m-%d %H:%M}, {h.change_interval[1]:%Y-%m-%d %H:%M}]"
        )
        snippet = " ".join(
            {"kept": "%s", "added": "+%s+", "deleted": "[%s]", "ellipsis": "%s"}[t.mark]
            % t.text
            for t in h.snippet
        )
        flavor = "partial" if h.partial else "full"
        click.echo(f"- {h.canonical_url}  transition {h.transition_index}  {flavor}  delta={h.delta}")
        click.echo(f"  changed {interval}")
        click.echo(f"  {snippet}")


@main.command()
@click.argument("indexdir", type=click.Path(exists=True))
@click.option("--top", "top_n", default=100, show_default=True)
@click.option("--stoplist", type=click.Path(exists=True), default=None)
@click.option("--seedlist", type=click.Path(exists=True), default=None)
@click.option("--out-dir", type=click.Path(), default=None, help="write TSV + figures here")
@click.option("--weighted", is_flag=True, help="rank by occurrence delta, not transitions")
def analyze(indexdir, top_n, stoplist, seedlist, out_dir, weighted) -> None:
    """Rank the most-deleted terms and categorize them."""
    try:
        idx = index_mod.load(indexdir)
        ranked = top_deleted_terms(idx, top_n, weighted=weighted)
        stop = load_termlist(stoplist) if stoplist else set()
        seed = load_termlist(seedlist) if seedlist else set()
        cats, histogram = categorize_terms(ranked, stop, seed, TemporalRules())
    except ChronodiffError as exc:
        _fail(exc)

    click.echo(f"top {len(cats)} deleted terms")
    for c in cats:
        click.echo(f"{c.deletion_doc_frequency:6d}  {c.category:<11}  {c.term}")
    click.echo("histogram: " + ", ".join(f"{k}={v}" for k, v in histogram.items()))

    if out_dir:
        from .report import write_analytics_report

        for path in write_analytics_report(out_dir, cats, histogram):
            click.echo(f"wrote {path}")


@main.command()
@click.argument("indexdir", type=click.Path(exists=True))
@click.option("--url", required=True)
@click.option("--t1", required=True)
@click.option("--t2", required=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--letter-ms", default=30, show_default=True)
@click.option("--word-ms", default=120, show_default=True)
@click.option("--pause-ms", default=1500, show_default=True)
def animate(indexdir, url, t1, t2, out_path, letter_ms, word_ms, pause_ms) -> None:
    """Write the standalone animation document for two versions of a page."""
    try:
        idx = index_mod.load(indexdir)
        cid = idx.chain_for_url(str(canonicalize_url(url)))
        if cid is None:
            raise UnknownUrl(url)
        chain = idx.chains[cid]
        bodies = []
        for ts in (t1, t2):
            _, member = closest_memento(chain, parse_memento_datetime(ts))
            stored = idx.bodies.get((cid, format_memento_datetime(member.capture_datetime)))
            if stored is None:
                raise UnknownUrl(f"no stored body for {url} at {ts}")
            bodies.append(stored[0])
        doc = build_animation(
            bodies[0],
            bodies[1],
            timing=AnimTiming(letter_ms=letter_ms, word_ms=word_ms, pause_ms=pause_ms),
        )
    except ChronodiffError as exc:
        _fail(exc)
    Path(out_path).write_bytes(doc)
    click.echo(f"wrote {out_path} ({len(doc)} bytes)")


def _parse_window(value: str) -> tuple[datetime, datetime]:
    try:
        start_s, end_s = value.split("/", 1)
    except ValueError:
        raise click.UsageError(f"window must be START/END, got {value!r}")
    return (_parse_loose(start_s), _parse_loose(end_s))


def _parse_loose(s: str) -> datetime:
    s = s.strip()
    if len(s) == 10 and s[4] == "-":
        return datetime.fromisoformat(s).replace(tzinfo=timezone.utc)
    return parse_memento_datetime(s)


@main.command("timemap-report")
@click.argument("timemap_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--window-a", "--windowA", "window_a", required=True,
              help="START/END, e.g. 2016-01-01/2016-07-01")
@click.option("--window-b", "--windowB", "window_b", required=True)
@click.option("--statuses", "statuses_file", type=click.Path(exists=True), default=None,
              help="JSON file mapping memento URL to HTTP status")
@click.option("--out-dir", type=click.Path(), default=None, help="write TSV + figures here")
def timemap_report_cmd(timemap_dir, window_a, window_b, statuses_file, out_dir) -> None:
    """Pair captures from two windows across a directory of TimeMaps."""
    wa = _parse_window(window_a)
    wb = _parse_window(window_b)
    statuses = {}
    if statuses_file:
        statuses = json.loads(Path(statuses_file).read_text("utf-8"))

    pages = {}
    try:
        paths = sorted(
            p
            for p in Path(timemap_dir).iterdir()
            if p.suffix in (".timemap", ".link", ".txt")
        )
        for p in paths:
            entries = parse_timemap(p.read_text("utf-8"))
            page_statuses = {e.uri_m: statuses[e.uri_m] for e in entries if e.uri_m in statuses}
            pages[p.stem] = PageCaptures(entries=tuple(entries), statuses=page_statuses)
        report = pairing_report(pages, wa, wb)
    except ChronodiffError as exc:
        _fail(exc)

    click.echo(f"pages={report.total_pages} paired={report.paired_pages}")
    click.echo("status pairs (fraction of all pages):")
    for (ba, bb), count in sorted(report.bucket_counts.items()):
        click.echo(f"  {ba:>7} / {bb:<7} {count:5d}  {report.bucket_fractions[(ba, bb)]:.2%}")
    if report.archive_coverage:
        click.echo("archive coverage (of paired pages; columns non-additive):")
        for archive, (fa, fb) in sorted(report.archive_coverage.items()):
            click.echo(f"  {archive:<28} A={fa:.2%}  B={fb:.2%}")

    if out_dir:
        from .report import write_pairing_report

        for path in write_pairing_report(out_dir, report):
            click.echo(f"wrote {path}")


@main.command()
@click.argument("indexdir", type=click.Path(exists=True))
@click.option("--listen", default="127.0.0.1:8600", show_default=True)
@click.option("--ui", "ui_path", type=click.Path(exists=True), default=None)
@click.option("--page-size", default=10, show_default=True)
@click.option("--stoplist", type=click.Path(exists=True), default=None)
@click.option("--seedlist", type=click.Path(exists=True), default=None)
@click.option("--letter-ms", default=30, show_default=True)
@click.option("--word-ms", default=120, show_default=True)
@click.option("--pause-ms", default=1500, show_default=True)
def serve(indexdir, listen, ui_path, page_size, stoplist, seedlist,
          letter_ms, word_ms, pause_ms) -> None:
    """Serve the HTTP API (and optionally the static UI bundle)."""
    import uvicorn

    config = ApiConfig(
        index_dir=indexdir,
        listen=listen,
        page_size=page_size,
        ui_path=ui_path,
        stoplist_path=stoplist,
        seedlist_path=seedlist,
        timing=AnimTiming(letter_ms=letter_ms, word_ms=word_ms, pause_ms=pause_ms),
    )
    try:
        app = create_app(config)
    except ChronodiffError as exc:
        _fail(exc)
    host, _, port = listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))


if __name__ == "__main__":
    main()
