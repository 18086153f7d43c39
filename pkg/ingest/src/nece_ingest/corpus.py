"""Corpus export: a directory of .txt stories becomes interchange JSON."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

from nece.errors import EmptyCorpusError, NeceError
from nece.interchange import parse_and_validate

from nece_ingest.annotate import annotate_story
from nece_ingest.config import AdapterConfig

MANIFEST_COLUMNS = (
    "story_id", "status", "tokens", "clusters", "frames", "relations", "detail",
)


@dataclass
class ExportSummary:
    written: list[tuple[str, Path]] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)
    manifest_path: Path | None = None


def _batches(items: list[Path], size: int) -> list[list[Path]]:
    return [items[i : i + size] for i in range(0, len(items), size)]


def export_corpus(input_dir: str | Path, cfg: AdapterConfig) -> ExportSummary:
    """Annotate every .txt story under input_dir into cfg.output_dir.

    One JSON document per story, named by the story id (the file stem),
    plus a manifest.csv with per-story counts.  A story whose annotation
    fails is skipped: it gets a manifest row with the error in the detail
    column and the run carries on.  The manifest counts are taken from
    re-parsed output files, not from intermediate state, so they always
    describe what a consumer will actually read.
    """
    if cfg.output_dir is None:
        raise ValueError("cfg.output_dir must be set for export_corpus")
    in_dir = Path(input_dir)
    stories = sorted(p for p in in_dir.iterdir() if p.suffix == ".txt" and p.is_file())
    if not stories:
        raise EmptyCorpusError(f"no .txt stories found in {in_dir}")

    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    summary = ExportSummary()
    rows: list[dict[str, str]] = []
    for batch in _batches(stories, cfg.batch_size):
        for path in batch:
            story_id = path.stem
            try:
                payload = annotate_story(path.read_text("utf-8"), cfg, story_id)
            except NeceError as err:
                summary.skipped.append((story_id, str(err)))
                rows.append({
                    "story_id": story_id, "status": "skipped",
                    "tokens": "0", "clusters": "0", "frames": "0",
                    "relations": "0", "detail": str(err),
                })
                continue
            out_path = out_dir / f"{story_id}.json"
            out_path.write_bytes(payload)
            doc = parse_and_validate(out_path.read_bytes())
            rows.append({
                "story_id": story_id, "status": "ok",
                "tokens": str(len(doc.tokens)),
                "clusters": str(len(doc.clusters)),
                "frames": str(len(doc.frames)),
                "relations": str(len(doc.temporal)),
                "detail": "",
            })
            summary.written.append((story_id, out_path))

    manifest = out_dir / "manifest.csv"
    with manifest.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=MANIFEST_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    summary.manifest_path = manifest
    return summary
