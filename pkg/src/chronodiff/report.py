"""Delimited report files and matplotlib figures for the CLI report paths."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analytics import CATEGORIES, TermCategory
from .memento import BUCKETS, PairingReport


def write_analytics_report(
    out_dir: str | Path,
    categories: list[TermCategory],
    histogram: dict[str, int],
) -> list[Path]:
    """terms.tsv + categories.tsv plus bar-chart figures; returns paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    terms_path = out / "top_deleted.tsv"
    with open(terms_path, "w", newline="", encoding="utf-8") as fp:
        w = csv.writer(fp, delimiter="\t")
        w.writerow(["term", "deletions", "category"])
        for c in categories:
            w.writerow([c.term, c.deletion_doc_frequency, c.category])
    written.append(terms_path)

    hist_path = out / "categories.tsv"
    with open(hist_path, "w", newline="", encoding="utf-8") as fp:
        w = csv.writer(fp, delimiter="\t")
        w.writerow(["category", "count"])
        for cat in CATEGORIES:
            w.writerow([cat, histogram.get(cat, 0)])
    written.append(hist_path)

    top = categories[:30]
    if top:
        fig, ax = plt.subplots(figsize=(8, max(3, 0.28 * len(top))))
        ax.barh(
            [c.term for c in reversed(top)],
            [c.deletion_doc_frequency for c in reversed(top)],
            color="#b33",
        )
        ax.set_xlabel("transitions with deletion")
        ax.set_title("Most-deleted terms")
        fig.tight_layout()
        fig_path = out / "top_deleted.png"
        fig.savefig(fig_path, dpi=120)
        plt.close(fig)
        written.append(fig_path)

    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.bar(list(CATEGORIES), [histogram.get(c, 0) for c in CATEGORIES], color="#369")
    ax.set_ylabel("terms")
    ax.set_title("Deleted-term categories")
    fig.tight_layout()
    hist_fig = out / "categories.png"
    fig.savefig(hist_fig, dpi=120)
    plt.close(fig)
    written.append(hist_fig)
    return written


def write_pairing_report(out_dir: str | Path, report: PairingReport) -> list[Path]:
    """Status-pair and archive-coverage tables plus their figures."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    pairs_path = out / "status_pairs.tsv"
    with open(pairs_path, "w", newline="", encoding="utf-8") as fp:
        w = csv.writer(fp, delimiter="\t")
        w.writerow(["bucket_a", "bucket_b", "pages", "fraction"])
        for (ba, bb), count in sorted(report.bucket_counts.items()):
            w.writerow([ba, bb, count, f"{report.bucket_fractions[(ba, bb)]:.4f}"])
    written.append(pairs_path)

    pages_path = out / "pages.tsv"
    with open(pages_path, "w", newline="", encoding="utf-8") as fp:
        w = csv.writer(fp, delimiter="\t")
        w.writerow(["page", "bucket_a", "bucket_b"])
        for url, (ba, bb) in sorted(report.page_status.items()):
            w.writerow([url, ba, bb])
    written.append(pages_path)

    archives_path = out / "archives.tsv"
    with open(archives_path, "w", newline="", encoding="utf-8") as fp:
        w = csv.writer(fp, delimiter="\t")
        w.writerow(["archive", "coverage_a", "coverage_b"])
        for archive, (fa, fb) in sorted(report.archive_coverage.items()):
            w.writerow([archive, f"{fa:.4f}", f"{fb:.4f}"])
    written.append(archives_path)

    # Bucket matrix heat map.
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    matrix = [
        [report.bucket_counts.get((ba, bb), 0) for bb in BUCKETS] for ba in BUCKETS
    ]
    im = ax.imshow(matrix, cmap="Reds")
    ax.set_xticks(range(len(BUCKETS)), BUCKETS)
    ax.set_yticks(range(len(BUCKETS)), BUCKETS)
    ax.set_xlabel("window B status")
    ax.set_ylabel("window A status")
    ax.set_title(f"Status pairs over {report.total_pages} pages")
    for i in range(len(BUCKETS)):
        for j in range(len(BUCKETS)):
            if matrix[i][j]:
                ax.text(j, i, str(matrix[i][j]), ha="center", va="center")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    matrix_fig = out / "status_pairs.png"
    fig.savefig(matrix_fig, dpi=120)
    plt.close(fig)
    written.append(matrix_fig)

    if report.archive_coverage:
        archives = sorted(report.archive_coverage)
        xs = range(len(archives))
        fig, ax = plt.subplots(figsize=(max(5, 0.9 * len(archives)), 3.5))
        width = 0.38
        ax.bar(
            [x - width / 2 for x in xs],
            [report.archive_coverage[a][0] for a in archives],
            width,
            label="window A",
            color="#369",
        )
        ax.bar(
            [x + width / 2 for x in xs],
            [report.archive_coverage[a][1] for a in archives],
            width,
            label="window B",
            color="#b33",
        )
        ax.set_xticks(list(xs), archives, rotation=30, ha="right")
        ax.set_ylabel("fraction of paired pages")
        ax.set_title("Per-archive coverage (columns are non-additive)")
        ax.legend()
        fig.tight_layout()
        cov_fig = out / "archive_coverage.png"
        fig.savefig(cov_fig, dpi=120)
        plt.close(fig)
        written.append(cov_fig)
    return written
