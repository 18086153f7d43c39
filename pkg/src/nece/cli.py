"""Command-line front end.

Subcommands: validate, extract, analyze, report, lexicon lookup. Exit codes:
0 success, 1 data error in the documents or derived files, 2 usage error.
Every file-writing run also writes a manifest recording the resolved config,
input and output digests, and any warnings, with no timestamps, so a rerun
on the same inputs produces the same bytes everywhere.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .chains import (
    StoryChains,
    build_chains,
    chains_to_story_record,
    order_events,
    read_chains_file,
    write_chains_file,
)
from .characters import select_main_characters
from .errors import DuplicateError, EmptyCorpusError, NeceError
from .events import extract_events, load_aux_stoplist, score_salience
from .interchange import DocumentAnnotation, iter_corpus_paths, load_document
from .lexicon import Lexicon, load_lexicon
from .report import render_report
from .stats import ANALYSIS_UNITS, AnalysisConfig, analyze, read_results_csv, result_to_row, write_results_csv

DEFAULT_SEED = 42
SEED_ENV_VAR = "NECE_SEED"


class UsageError(Exception):
    """Bad invocation (missing paths, malformed flags/config); maps to exit 2."""


# ---------------------------------------------------------------------------
# Config file: flat key = value lines, # comments, [sections] ignored.
# ---------------------------------------------------------------------------

_CONFIG_KEYS = {
    "seed": int,
    "min_count": int,
    "bootstrap": int,
    "workers": int,
    "confidence": float,
    "main_ratio": float,
    "salience_quantile": float,
    "conf_threshold": float,
    "always_correct": bool,
    "exhaustive": bool,
    "exclude_classes": str,
}


def _parse_scalar(key: str, raw: str, where: str):
    kind = _CONFIG_KEYS[key]
    raw = raw.strip()
    if len(raw) >= 2 and raw[0] == raw[-1] and raw[0] in "\"'":
        raw = raw[1:-1]
    if kind is bool:
        if raw.lower() in ("true", "1", "yes"):
            return True
        if raw.lower() in ("false", "0", "no"):
            return False
        raise UsageError(f"{where}: {key} must be true or false, got {raw!r}")
    if kind is str:
        return raw
    try:
        return kind(raw)
    except ValueError as exc:
        raise UsageError(f"{where}: bad value for {key}: {raw!r}") from exc


def parse_config_file(path: str | Path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"config file not found: {path}")
    values: dict = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#") or (
            stripped.startswith("[") and stripped.endswith("]")
        ):
            continue
        if "=" not in stripped:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _parse_scalar(key, raw, f"{path}:{lineno}")
    return values


def _split_classes(raw: str) -> frozenset[str]:
    return frozenset(part.strip() for part in raw.split(",") if part.strip())


def resolve_config(args: argparse.Namespace) -> AnalysisConfig:
    """Merge flag > config file > environment (seed only) > default."""
    file_cfg = parse_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(flag_name: str, key: str, default):
        flag_val = getattr(args, flag_name, None)
        if flag_val is not None:
            return flag_val
        if key in file_cfg:
            return file_cfg[key]
        return default

    seed_default = DEFAULT_SEED
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            seed_default = int(env_seed)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}") from exc

    excluded = pick("exclude_classes", "exclude_classes", None)
    if isinstance(excluded, str):
        excluded = _split_classes(excluded)

    kwargs = dict(
        min_count=pick("min_count", "min_count", 5),
        bootstrap_reps=pick("bootstrap", "bootstrap", 1000),
        confidence=pick("confidence", "confidence", 0.95),
        rng_seed=pick("seed", "seed", seed_default),
        main_ratio=pick("main_ratio", "main_ratio", 0.67),
        salience_quantile=pick("salience_quantile", "salience_quantile", 0.3),
        conf_threshold=pick("conf_threshold", "conf_threshold", 0.5),
        always_correct=pick("always_correct", "always_correct", False),
        exhaustive_bootstrap=pick("exhaustive_bootstrap", "exhaustive", False),
        workers=pick("workers", "workers", 1),
    )
    if excluded is not None:
        kwargs["excluded_classes"] = excluded
    try:
        return AnalysisConfig(**kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _config_snapshot(cfg: AnalysisConfig, **extra) -> dict:
    snap = dataclasses.asdict(cfg)
    snap["excluded_classes"] = sorted(cfg.excluded_classes)
    snap.update(extra)
    return snap


# ---------------------------------------------------------------------------
# Manifest.
# ---------------------------------------------------------------------------


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(
    manifest_path: Path,
    command: str,
    config: dict,
    inputs: Sequence[Path],
    outputs: Sequence[Path],
    warnings: Sequence[str],
) -> None:
    payload = {
        "tool": "nece",
        "version": __version__,
        "command": command,
        "config": config,
        "inputs": [{"path": str(p), "sha256": _sha256(p)} for p in inputs],
        "outputs": [{"path": str(p), "sha256": _sha256(p)} for p in outputs],
        "warnings": list(warnings),
    }
    manifest_path.write_text(
        json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


# ---------------------------------------------------------------------------
# Pipeline driver shared by extract.
# ---------------------------------------------------------------------------


def _load_corpus_reporting(input_dir: Path) -> list[DocumentAnnotation]:
    """Parse every corpus document, reporting all offenders before failing."""
    paths = iter_corpus_paths(input_dir)
    if not paths:
        raise EmptyCorpusError(f"no *.json documents in {input_dir}")
    docs = []
    failures = []
    for path in paths:
        try:
            docs.append(load_document(path))
        except NeceError as exc:
            failures.append(f"{path.name}: {exc}")
    if failures:
        for line in failures:
            print(line, file=sys.stderr)
        raise NeceError(f"{len(failures)} invalid document(s) in {input_dir}")
    seen: dict[str, str] = {}
    for path, doc in zip(paths, docs):
        if doc.story_id in seen:
            raise DuplicateError(
                f"story_id {doc.story_id!r} appears in both {seen[doc.story_id]} and {path.name}"
            )
        seen[doc.story_id] = path.name
    docs.sort(key=lambda d: d.story_id)
    return docs


def run_extraction(
    docs: Sequence[DocumentAnnotation],
    cfg: AnalysisConfig,
    lexicon: Lexicon,
) -> tuple[list[StoryChains], list[str]]:
    """Documents to chains. Returns (stories sorted by story_id, warnings)."""
    stoplist = load_aux_stoplist()

    def stage_one(doc: DocumentAnnotation):
        profiles = select_main_characters(doc, ratio=cfg.main_ratio)
        events = extract_events(doc, profiles, lexicon)
        return profiles, events

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            staged = list(pool.map(stage_one, docs))
    else:
        staged = [stage_one(doc) for doc in docs]

    corpus_events = {doc.story_id: events for doc, (_, events) in zip(docs, staged)}
    score_salience(corpus_events, stoplist, cfg.salience_quantile)

    unmapped = sum(
        1
        for events in corpus_events.values()
        for rec in events
        if lexicon.lookup(rec.lemma) is None
    )

    def stage_two(doc: DocumentAnnotation, profiles, events):
        # the ordering domain is the salient events (participant-less ones
        # included); dropped events contribute no ordering constraints
        salient = [rec for rec in events if rec.salient]
        ordering = order_events(doc, salient, cfg.conf_threshold)
        record = chains_to_story_record(doc.story_id, build_chains(doc, profiles, events, ordering))
        return record, [f"{doc.story_id}: {w}" for w in ordering.warnings]

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            produced = list(
                pool.map(lambda pair: stage_two(pair[0], *pair[1]), zip(docs, staged))
            )
    else:
        produced = [stage_two(doc, *stage) for doc, stage in zip(docs, staged)]

    stories = [record for record, _ in produced]
    warnings: list[str] = []
    for _, story_warnings in produced:
        warnings.extend(story_warnings)
    if unmapped:
        warnings.append(f"{unmapped} event(s) with lemmas outside the lexicon typed as other")
    return stories, warnings


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    path = Path(args.input)
    if not path.exists():
        raise UsageError(f"input path not found: {path}")
    paths = [path] if path.is_file() else iter_corpus_paths(path)
    if not paths:
        raise EmptyCorpusError(f"no *.json documents in {path}")
    failures = 0
    seen: dict[str, str] = {}
    for doc_path in paths:
        try:
            doc = load_document(doc_path)
        except NeceError as exc:
            print(f"{doc_path.name}: {exc}", file=sys.stderr)
            failures += 1
            continue
        if doc.story_id in seen:
            print(
                f"{doc_path.name}: E_DUPLICATE: story_id {doc.story_id!r} already used "
                f"by {seen[doc.story_id]}",
                file=sys.stderr,
            )
            failures += 1
            continue
        seen[doc.story_id] = doc_path.name
        print(
            f"ok {doc_path.name}: story_id={doc.story_id} tokens={len(doc.tokens)} "
            f"clusters={len(doc.clusters)} frames={len(doc.frames)} temporal={len(doc.temporal)}"
        )
    return 1 if failures else 0


def cmd_extract(args: argparse.Namespace) -> int:
    input_dir = Path(args.input)
    if not input_dir.is_dir():
        raise UsageError(f"input directory not found: {input_dir}")
    cfg = resolve_config(args)
    output = Path(args.output)
    lexicon = load_lexicon(args.lexicon)

    docs = _load_corpus_reporting(input_dir)
    stories, warnings = run_extraction(docs, cfg, lexicon)

    output.parent.mkdir(parents=True, exist_ok=True)
    write_chains_file(output, stories)
    manifest_path = output.with_name(output.name + ".manifest.json")
    write_manifest(
        manifest_path,
        command="extract",
        config=_config_snapshot(cfg, input=str(input_dir), output=str(output)),
        inputs=iter_corpus_paths(input_dir),
        outputs=[output],
        warnings=warnings,
    )
    mains = sum(1 for s in stories for c in s.characters if c.main)
    print(f"wrote {output} ({len(stories)} stories, {mains} main characters)")
    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    chains_path = Path(args.chains)
    if not chains_path.is_file():
        raise UsageError(f"chains file not found: {chains_path}")
    cfg = resolve_config(args)
    output = Path(args.output)

    stories = read_chains_file(chains_path)
    results = analyze(stories, args.unit, cfg)

    output.parent.mkdir(parents=True, exist_ok=True)
    write_results_csv(output, results)
    outputs = [output]
    if args.json:
        json_path = Path(args.json)
        json_path.parent.mkdir(parents=True, exist_ok=True)
        rows = [dataclasses.asdict(result_to_row(r)) for r in results]
        json_path.write_text(
            json.dumps(rows, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        outputs.append(json_path)
    manifest_path = output.with_name(output.name + ".manifest.json")
    write_manifest(
        manifest_path,
        command="analyze",
        config=_config_snapshot(cfg, unit=args.unit, chains=str(chains_path), output=str(output)),
        inputs=[chains_path],
        outputs=outputs,
        warnings=[],
    )
    significant = sum(1 for r in results if r.significant)
    print(f"wrote {output} ({len(results)} keys, {significant} significant)")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    results_path = Path(args.results)
    if not results_path.is_file():
        raise UsageError(f"results file not found: {results_path}")
    out_dir = Path(args.out_dir)
    lexicon = load_lexicon(args.lexicon)

    rows = read_results_csv(results_path)
    written = render_report(rows, out_dir, lexicon)
    write_manifest(
        out_dir / "manifest.json",
        command="report",
        config={"results": str(results_path), "out_dir": str(out_dir)},
        inputs=[results_path],
        outputs=written,
        warnings=[],
    )
    print(f"wrote {len(written)} chart(s) to {out_dir}")
    return 0


def cmd_lexicon_lookup(args: argparse.Namespace) -> int:
    lexicon = load_lexicon(args.lexicon)
    entry = lexicon.lookup(args.lemma.lower())
    if entry is None:
        print(f"{args.lemma}: not in lexicon (events with this lemma are typed as other)")
        return 0
    sub = entry.sub_class or "-"
    stereotype = entry.stereotype or "-"
    print(
        f"{entry.lemma}: class={entry.event_class} sub_class={sub} "
        f"stereotype={stereotype} provenance={entry.provenance}"
    )
    return 0


# ---------------------------------------------------------------------------
# Parser wiring.
# ---------------------------------------------------------------------------


def _add_config_flags(sub: argparse.ArgumentParser, analysis: bool) -> None:
    sub.add_argument("--config", help="key = value config file")
    sub.add_argument("--seed", type=int, dest="seed", help="random seed (default 42)")
    sub.add_argument("--workers", type=int, dest="workers", help="worker thread count")
    if analysis:
        sub.add_argument("--min-count", type=int, dest="min_count")
        sub.add_argument("--bootstrap", type=int, dest="bootstrap", help="bootstrap replicates")
        sub.add_argument("--confidence", type=float, dest="confidence")
        sub.add_argument(
            "--exclude-classes",
            dest="exclude_classes",
            help="comma-separated event classes dropped before building bigrams",
        )
        sub.add_argument("--always-correct", action="store_const", const=True, dest="always_correct")
        sub.add_argument(
            "--exhaustive-bootstrap",
            action="store_const",
            const=True,
            dest="exhaustive_bootstrap",
            help="enumerate all ordered resamples (tiny corpora only)",
        )
    else:
        sub.add_argument("--main-ratio", type=float, dest="main_ratio")
        sub.add_argument("--salience-quantile", type=float, dest="salience_quantile")
        sub.add_argument("--conf-threshold", type=float, dest="conf_threshold")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nece",
        description="Extract character event chains from annotated stories and "
        "measure gender bias in them.",
    )
    parser.add_argument("--version", action="version", version=f"nece {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p_validate = commands.add_parser("validate", help="check interchange documents")
    p_validate.add_argument("--input", required=True, help="document file or corpus directory")
    p_validate.set_defaults(func=cmd_validate)

    p_extract = commands.add_parser("extract", help="build per-character event chains")
    p_extract.add_argument("--input", required=True, help="corpus directory")
    p_extract.add_argument("--output", required=True, help="chains file to write")
    p_extract.add_argument("--lexicon", help="alternate event lexicon TSV")
    _add_config_flags(p_extract, analysis=False)
    p_extract.set_defaults(func=cmd_extract)

    p_analyze = commands.add_parser("analyze", help="odds ratios with bootstrap intervals")
    p_analyze.add_argument("--chains", required=True, help="chains file from extract")
    p_analyze.add_argument("--unit", required=True, choices=ANALYSIS_UNITS)
    p_analyze.add_argument("--output", required=True, help="results CSV to write")
    p_analyze.add_argument("--json", help="also write results as JSON")
    _add_config_flags(p_analyze, analysis=True)
    p_analyze.set_defaults(func=cmd_analyze)

    p_report = commands.add_parser("report", help="render SVG charts from results")
    p_report.add_argument("--results", required=True, help="results CSV from analyze")
    p_report.add_argument("--out-dir", required=True, help="directory for chart files")
    p_report.add_argument("--lexicon", help="alternate event lexicon TSV")
    p_report.set_defaults(func=cmd_report)

    p_lexicon = commands.add_parser("lexicon", help="event lexicon utilities")
    lexicon_cmds = p_lexicon.add_subparsers(dest="lexicon_command", required=True)
    p_lookup = lexicon_cmds.add_parser("lookup", help="show the typing for one lemma")
    p_lookup.add_argument("lemma")
    p_lookup.add_argument("--lexicon", help="alternate event lexicon TSV")
    p_lookup.set_defaults(func=cmd_lexicon_lookup)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        print("run `nece --help` for usage", file=sys.stderr)
        return 2
    except NeceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))
