"""Static SVG charts rendered from a results table.

One dot-and-interval chart per analysis unit on a log odds-ratio axis, rows
grouped by the stereotype tag of their event class, plus a stacked bar chart
of the share of significant keys per unit. Rendering is pinned down so the
same results file always produces the same bytes: fixed hash salt, no
embedded timestamps, and a fixed figure layout.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .lexicon import Lexicon, load_lexicon  # noqa: E402
from .stats import ANALYSIS_UNITS, ResultRow  # noqa: E402

SHARE_CHART_NAME = "significant_share.svg"

_GROUP_ORDER = ("female", "male", "untagged")
_GROUP_COLORS = {"female": "#b2357a", "male": "#2f6db3", "untagged": "#5f6b72"}

_SAVEFIG_KWARGS = {"format": "svg", "metadata": {"Date": None}}


def _configure_determinism() -> None:
    plt.rcParams["svg.hashsalt"] = "nece"
    plt.rcParams["svg.fonttype"] = "path"


def _row_label(row: ResultRow) -> str:
    def type_label(cls: str, sub: str, role: str) -> str:
        name = f"{cls}.{sub}" if sub else cls
        return f"{name} ({role})"

    core = type_label(row.event_class, row.sub_class, row.role)
    if row.unit == "bigram_before":
        return f"{core} before {type_label(row.anchor_class, row.anchor_sub_class, row.anchor_role)}"
    if row.unit == "bigram_after":
        return f"{core} after {type_label(row.anchor_class, row.anchor_sub_class, row.anchor_role)}"
    if row.unit == "section":
        return f"{core} in {row.position}"
    return core


def _group_of(row: ResultRow, lexicon: Lexicon) -> str:
    tag = lexicon.stereotype_of(row.event_class)
    return tag if tag in ("female", "male") else "untagged"


def render_unit_chart(
    unit: str,
    rows: Sequence[tuple[int, ResultRow]],
    out_path: Path,
    lexicon: Lexicon,
) -> None:
    """Dot-and-interval chart for one unit; rows carry their global CSV index.

    Every row paints exactly one marker carrying gid marker-<csv index>, which
    downstream checks use to tie chart contents back to the table. Open
    markers mean the interval crosses 1.0.
    """
    _configure_determinism()
    ordered: list[tuple[int, ResultRow, str]] = []
    for group in _GROUP_ORDER:
        for idx, row in rows:
            if _group_of(row, lexicon) == group:
                ordered.append((idx, row, group))

    height = max(2.8, 0.32 * len(ordered) + 1.6)
    fig, ax = plt.subplots(figsize=(9.0, height))
    ax.set_xscale("log")
    ax.axvline(1.0, color="#888888", linewidth=0.9, linestyle="--", zorder=1)

    for y, (idx, row, group) in enumerate(ordered):
        color = _GROUP_COLORS[group]
        ax.hlines(y, row.ci_low, row.ci_high, color=color, linewidth=1.4, zorder=2)
        marker = ax.scatter(
            [row.odds_ratio_m_f],
            [y],
            s=42,
            zorder=3,
            marker="o",
            facecolors=color if row.significant else "none",
            edgecolors=color,
            linewidths=1.3,
        )
        marker.set_gid(f"marker-{idx}")

    ax.set_yticks(range(len(ordered)))
    ax.set_yticklabels([_row_label(row) for _, row, _ in ordered], fontsize=7)
    ax.invert_yaxis()
    ax.set_xlabel("odds ratio (male : female), log scale")
    ax.set_title(f"{unit}: odds ratios by stereotype group")

    handles = [
        plt.Line2D(
            [], [], color=_GROUP_COLORS[g], marker="o", linestyle="-",
            markersize=6, label=f"{g} stereotype" if g != "untagged" else "untagged",
        )
        for g in _GROUP_ORDER
    ]
    handles.append(
        plt.Line2D(
            [], [], color="#444444", marker="o", linestyle="none",
            markerfacecolor="none", markersize=6, label="not significant",
        )
    )
    ax.legend(handles=handles, loc="best", fontsize=7)
    fig.tight_layout()
    fig.savefig(out_path, **_SAVEFIG_KWARGS)
    plt.close(fig)


def render_share_chart(rows: Sequence[ResultRow], out_path: Path) -> None:
    """Stacked bars: per unit, the share of keys whose interval excludes 1.0."""
    _configure_determinism()
    units = [u for u in ANALYSIS_UNITS if any(r.unit == u for r in rows)]
    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    if units:
        sig_shares = []
        rest_shares = []
        for unit in units:
            unit_rows = [r for r in rows if r.unit == unit]
            share = sum(1 for r in unit_rows if r.significant) / len(unit_rows)
            sig_shares.append(share)
            rest_shares.append(1.0 - share)
        x = range(len(units))
        ax.bar(x, sig_shares, color="#c0392b", label="significant")
        ax.bar(x, rest_shares, bottom=sig_shares, color="#bdc3c7", label="not significant")
        ax.set_xticks(list(x))
        ax.set_xticklabels(units, fontsize=8)
        for xi, share in zip(x, sig_shares):
            ax.annotate(f"{share:.0%}", (xi, share), ha="center", va="bottom", fontsize=8)
        ax.legend(fontsize=8)
    else:
        ax.annotate("no rows", (0.5, 0.5), xycoords="axes fraction", ha="center", va="center")
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("share of keys")
    ax.set_title("significant share by analysis unit")
    fig.tight_layout()
    fig.savefig(out_path, **_SAVEFIG_KWARGS)
    plt.close(fig)


def render_report(
    rows: Sequence[ResultRow],
    out_dir: str | Path,
    lexicon: Optional[Lexicon] = None,
) -> list[Path]:
    """Write one chart per unit present plus the share chart; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lexicon = lexicon if lexicon is not None else load_lexicon()
    written: list[Path] = []
    for unit in ANALYSIS_UNITS:
        unit_rows = [(i, row) for i, row in enumerate(rows) if row.unit == unit]
        if not unit_rows:
            continue
        path = out / f"{unit}.svg"
        render_unit_chart(unit, unit_rows, path, lexicon)
        written.append(path)
    share_path = out / SHARE_CHART_NAME
    render_share_chart(rows, share_path)
    written.append(share_path)
    return written
