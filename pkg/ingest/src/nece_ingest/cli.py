"""Command-line entry point: nece-ingest --input texts/ --output annotations/."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from nece.errors import NeceError

from nece_ingest import __version__
from nece_ingest.config import AdapterConfig
from nece_ingest.corpus import export_corpus

_DEFAULTS = AdapterConfig()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nece-ingest",
        description="Annotate plain-text stories into interchange documents.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--input", required=True, type=Path,
                        help="directory of .txt stories, one story per file")
    parser.add_argument("--output", required=True, type=Path,
                        help="directory to write .json documents and manifest.csv")
    parser.add_argument("--coref-model", default=_DEFAULTS.coref_model,
                        help="coreference rule set identifier")
    parser.add_argument("--srl-model", default=_DEFAULTS.srl_model,
                        help="role labelling rule set identifier")
    parser.add_argument("--temporal-model", default=_DEFAULTS.temporal_model,
                        help="temporal linking rule set identifier")
    parser.add_argument("--batch-size", type=int, default=_DEFAULTS.batch_size,
                        help="stories per processing batch")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = AdapterConfig(
            coref_model=args.coref_model,
            srl_model=args.srl_model,
            temporal_model=args.temporal_model,
            batch_size=args.batch_size,
            output_dir=args.output,
        )
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if not args.input.is_dir():
        print(f"error: input directory not found: {args.input}", file=sys.stderr)
        return 2

    try:
        summary = export_corpus(args.input, cfg)
    except NeceError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1

    for story_id, detail in summary.skipped:
        print(f"warning: {story_id}: {detail}", file=sys.stderr)
    if not summary.written:
        print("error: no stories could be annotated", file=sys.stderr)
        return 1
    print(
        f"wrote {len(summary.written)} document(s) to {cfg.output_dir}"
        f" ({len(summary.skipped)} skipped)"
    )
    return 0


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))
