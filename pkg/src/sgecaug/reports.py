"""Report rendering: aligned text tables, delimited plot data, and
matplotlib figures written alongside the delimited output."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional, Sequence

from .edits import EditScore
from .metrics import CorrelationReport, DistanceSummary, WerBreakdown


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [
        max(len(header[c]), *(len(r[c]) for r in rows)) if rows else len(header[c])
        for c in range(len(header))
    ]
    def fmt(row):
        return "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
    lines = [fmt(header), fmt(["-" * w for w in widths])]
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines) + "\n"


def render_score_table(rows: Sequence[tuple[str, EditScore]]) -> str:
    """P/R/F0.5 table, percentages with one decimal."""
    body = [
        [
            name,
            f"{100 * s.triple.precision:.1f}",
            f"{100 * s.triple.recall:.1f}",
            f"{100 * s.triple.f_half:.1f}",
        ]
        for name, s in rows
    ]
    return _table(["Text", "P", "R", "F0.5"], body)


def render_wer_table(rows: Sequence[tuple[str, WerBreakdown]]) -> str:
    """WER/Sub/Del/Ins table, percentages with one decimal."""
    body = [
        [
            name,
            f"{100 * b.wer:.1f}",
            f"{100 * b.sub_rate:.1f}",
            f"{100 * b.del_rate:.1f}",
            f"{100 * b.ins_rate:.1f}",
        ]
        for name, b in rows
    ]
    return _table(["Dataset", "WER", "Sub", "Del", "Ins"], body)


def write_distribution_report(
    ref_distribution: dict[str, float],
    hyp_distribution: dict[str, float],
    out_csv,
    out_png=None,
    top: int = 20,
) -> list[tuple[str, float, float]]:
    """Side-by-side category frequencies, sorted by reference frequency."""
    categories = sorted(
        set(ref_distribution) | set(hyp_distribution),
        key=lambda c: (-ref_distribution.get(c, 0.0), c),
    )[:top]
    rows = [
        (c, ref_distribution.get(c, 0.0), hyp_distribution.get(c, 0.0))
        for c in categories
    ]
    out_csv = Path(out_csv)
    with out_csv.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "ref_freq", "hyp_freq"])
        for c, ref, hyp in rows:
            writer.writerow([c, f"{ref:.6f}", f"{hyp:.6f}"])
    if out_png is not None:
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(10, 5))
        xs = range(len(rows))
        width = 0.4
        ax.bar([x - width / 2 for x in xs], [r[1] for r in rows], width, label="ref")
        ax.bar([x + width / 2 for x in xs], [r[2] for r in rows], width, label="hyp")
        ax.set_xticks(list(xs))
        ax.set_xticklabels([r[0] for r in rows], rotation=45, ha="right")
        ax.set_ylabel("normalized frequency")
        ax.legend()
        fig.tight_layout()
        fig.savefig(out_png, dpi=120)
        plt.close(fig)
    return rows


def write_distance_report(
    summaries: dict[str, DistanceSummary], out_csv, out_png=None
) -> None:
    """Cumulative-curve data (one column block per system) plus a figure."""
    out_csv = Path(out_csv)
    with out_csv.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["system", "cumulative_fraction", "distance"])
        for name in sorted(summaries):
            values = summaries[name].sorted_distances
            n = len(values)
            for i, value in enumerate(values, start=1):
                writer.writerow([name, f"{i / n:.6f}", f"{value:.6f}"])
    if out_png is not None:
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(7, 5))
        for name in sorted(summaries):
            summary = summaries[name]
            values = summary.sorted_distances
            n = len(values)
            fractions = [i / n for i in range(1, n + 1)]
            ax.plot(values, fractions, label=f"{name} (AUC={summary.auc:.3f})")
        ax.set_xlabel("cosine distance")
        ax.set_ylabel("cumulative fraction")
        ax.set_xlim(0, 2)
        ax.legend()
        fig.tight_layout()
        fig.savefig(out_png, dpi=120)
        plt.close(fig)


def write_scatter_report(
    report: CorrelationReport,
    parts: Optional[dict[str, int]],
    out_csv,
    out_png=None,
    x_label: str = "x",
    y_label: str = "y",
) -> None:
    """Scatter pairs as delimited text (id, x, y, part) plus a figure."""
    out_csv = Path(out_csv)
    with out_csv.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "x", "y", "part"])
        for rid, x, y in report.scatter:
            part = parts.get(rid, "") if parts else ""
            writer.writerow([rid, f"{x:.6f}", f"{y:.6f}", part])
    if out_png is not None:
        plt = _pyplot()
        fig, ax = plt.subplots(figsize=(6, 6))
        ax.scatter(
            [x for _, x, _ in report.scatter],
            [y for _, _, y in report.scatter],
            s=12,
            alpha=0.6,
        )
        pcc = "n/a" if report.pcc is None else f"{report.pcc:.3f}"
        src = "n/a" if report.src is None else f"{report.src:.3f}"
        ax.set_title(f"PCC={pcc}  SRC={src}  RMSE={report.rmse:.3f}  n={report.n}")
        ax.set_xlabel(x_label)
        ax.set_ylabel(y_label)
        fig.tight_layout()
        fig.savefig(out_png, dpi=120)
        plt.close(fig)


def read_score_file(path) -> tuple[dict[str, float], dict[str, int]]:
    """Delimited score file: header id,part,score. Returns (scores, parts)."""
    scores: dict[str, float] = {}
    parts: dict[str, int] = {}
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            rid = row["id"]
            scores[rid] = float(row["score"])
            if row.get("part"):
                parts[rid] = int(row["part"])
    return scores, parts


def write_score_file(path, scores: dict[str, float], parts: Optional[dict[str, int]] = None) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "part", "score"])
        for rid in sorted(scores):
            part = parts.get(rid, "") if parts else ""
            writer.writerow([rid, part, f"{scores[rid]:.6f}"])
