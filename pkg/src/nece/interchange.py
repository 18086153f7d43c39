"""Tool-agnostic story annotation documents: parsing, validation, serialization.

A document is UTF-8 JSON, one story per file. Spans are inclusive token-index
ranges. The normative field names are those of ``schema/interchange.schema.json``;
`parse_and_validate` enforces the same structure plus the cross-reference
invariants a JSON schema cannot express (contiguous token indices, span
overlap, dangling ids, duplicate temporal pairs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .errors import (
    DanglingRefError,
    DocumentSyntaxError,
    DuplicateError,
    SpanError,
)

TEMPORAL_RELS = ("before", "after", "simultaneous", "vague")
ARG_ROLES = ("agent", "patient")


@dataclass(frozen=True)
class Token:
    index: int
    sentence: int
    text: str
    lemma: str
    pos: str
    char_start: int
    char_end: int


@dataclass(frozen=True)
class MentionSpan:
    first: int
    last: int
    pronoun: bool


@dataclass(frozen=True)
class CharacterCluster:
    id: int
    name: Optional[str]
    mentions: tuple[MentionSpan, ...]


@dataclass(frozen=True)
class SrlArg:
    role: str
    first: int
    last: int


@dataclass(frozen=True)
class SrlFrame:
    id: int
    verb_token: int
    lemma: str
    args: tuple[SrlArg, ...]


@dataclass(frozen=True)
class TemporalRelation:
    e1: int
    e2: int
    rel: str
    conf: float


@dataclass(frozen=True)
class DocumentAnnotation:
    story_id: str
    source: Optional[str]
    tokens: tuple[Token, ...] = field(default=())
    clusters: tuple[CharacterCluster, ...] = field(default=())
    frames: tuple[SrlFrame, ...] = field(default=())
    temporal: tuple[TemporalRelation, ...] = field(default=())


def _get(obj: dict, key: str, kind, where: str, optional: bool = False):
    if key not in obj:
        if optional:
            return None
        raise DocumentSyntaxError(f"{where}: missing field {key!r}")
    value = obj[key]
    if kind is int:
        # bool is an int subclass; reject it for integer fields
        if isinstance(value, bool) or not isinstance(value, int):
            raise DocumentSyntaxError(f"{where}.{key}: expected integer, got {type(value).__name__}")
    elif kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DocumentSyntaxError(f"{where}.{key}: expected number, got {type(value).__name__}")
        value = float(value)
    elif not isinstance(value, kind):
        raise DocumentSyntaxError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _check_span(first: int, last: int, n_tokens: int, where: str) -> None:
    if first > last:
        raise SpanError(f"{where}: inverted span [{first}, {last}]")
    if first < 0 or last >= n_tokens:
        raise DanglingRefError(f"{where}: span [{first}, {last}] outside token range 0..{n_tokens - 1}")


def parse_and_validate(data: bytes | str) -> DocumentAnnotation:
    """Parse one interchange document and verify every structural invariant.

    Raises DocumentSyntaxError (E_SYNTAX) for malformed JSON or field/type
    problems, DanglingRefError (E_DANGLING_REF) for out-of-range indices,
    DuplicateError (E_DUPLICATE) for duplicate ids or temporal pairs, and
    SpanError (E_SPAN) for inverted or overlapping spans.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"not valid UTF-8: {exc}") from exc
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise DocumentSyntaxError("document root must be a JSON object")

    story_id = _get(raw, "story_id", str, "document")
    if not story_id:
        raise DocumentSyntaxError("document.story_id must be non-empty")
    source = _get(raw, "source", str, "document", optional=True)

    for key in ("tokens", "clusters", "frames", "temporal"):
        if not isinstance(raw.get(key, None), list):
            raise DocumentSyntaxError(f"document.{key}: expected array")

    tokens = []
    prev_sent = 0
    for pos, item in enumerate(raw["tokens"]):
        where = f"tokens[{pos}]"
        if not isinstance(item, dict):
            raise DocumentSyntaxError(f"{where}: expected object")
        idx = _get(item, "i", int, where)
        if idx != pos:
            raise DocumentSyntaxError(f"{where}.i: expected contiguous index {pos}, got {idx}")
        sent = _get(item, "sent", int, where)
        if sent < 0:
            raise DocumentSyntaxError(f"{where}.sent: negative sentence index")
        if pos > 0 and sent < prev_sent:
            raise DocumentSyntaxError(f"{where}.sent: sentence index decreases ({prev_sent} -> {sent})")
        prev_sent = sent
        start = _get(item, "start", int, where)
        end = _get(item, "end", int, where)
        if start < 0 or start >= end:
            raise SpanError(f"{where}: char offsets [{start}, {end}) are not a forward range")
        tokens.append(
            Token(
                index=idx,
                sentence=sent,
                text=_get(item, "text", str, where),
                lemma=_get(item, "lemma", str, where),
                pos=_get(item, "pos", str, where),
                char_start=start,
                char_end=end,
            )
        )
    n_tokens = len(tokens)

    clusters = []
    seen_cluster_ids: set[int] = set()
    for pos, item in enumerate(raw["clusters"]):
        where = f"clusters[{pos}]"
        if not isinstance(item, dict):
            raise DocumentSyntaxError(f"{where}: expected object")
        cid = _get(item, "id", int, where)
        if cid in seen_cluster_ids:
            raise DuplicateError(f"{where}: duplicate cluster id {cid}")
        seen_cluster_ids.add(cid)
        name = _get(item, "name", str, where, optional=True)
        raw_mentions = item.get("mentions")
        if not isinstance(raw_mentions, list) or not raw_mentions:
            raise DocumentSyntaxError(f"{where}.mentions: expected non-empty array")
        mentions = []
        for mpos, ment in enumerate(raw_mentions):
            mwhere = f"{where}.mentions[{mpos}]"
            if not isinstance(ment, dict):
                raise DocumentSyntaxError(f"{mwhere}: expected object")
            first = _get(ment, "first", int, mwhere)
            last = _get(ment, "last", int, mwhere)
            _check_span(first, last, n_tokens, mwhere)
            pronoun = _get(ment, "pronoun", bool, mwhere)
            mentions.append(MentionSpan(first=first, last=last, pronoun=pronoun))
        ordered = sorted(mentions, key=lambda m: (m.first, m.last))
        for prev, nxt in zip(ordered, ordered[1:]):
            if nxt.first <= prev.last:
                raise SpanError(
                    f"{where}: mentions [{prev.first},{prev.last}] and "
                    f"[{nxt.first},{nxt.last}] overlap"
                )
        clusters.append(CharacterCluster(id=cid, name=name, mentions=tuple(mentions)))

    frames = []
    seen_frame_ids: set[int] = set()
    for pos, item in enumerate(raw["frames"]):
        where = f"frames[{pos}]"
        if not isinstance(item, dict):
            raise DocumentSyntaxError(f"{where}: expected object")
        fid = _get(item, "id", int, where)
        if fid in seen_frame_ids:
            raise DuplicateError(f"{where}: duplicate frame id {fid}")
        seen_frame_ids.add(fid)
        verb = _get(item, "verb", int, where)
        if verb < 0 or verb >= n_tokens:
            raise DanglingRefError(f"{where}.verb: token index {verb} outside range 0..{n_tokens - 1}")
        lemma = _get(item, "lemma", str, where)
        raw_args = item.get("args")
        if not isinstance(raw_args, list):
            raise DocumentSyntaxError(f"{where}.args: expected array")
        args = []
        for apos, arg in enumerate(raw_args):
            awhere = f"{where}.args[{apos}]"
            if not isinstance(arg, dict):
                raise DocumentSyntaxError(f"{awhere}: expected object")
            role = _get(arg, "role", str, awhere)
            if role not in ARG_ROLES:
                raise DocumentSyntaxError(f"{awhere}.role: expected one of {ARG_ROLES}, got {role!r}")
            first = _get(arg, "first", int, awhere)
            last = _get(arg, "last", int, awhere)
            _check_span(first, last, n_tokens, awhere)
            args.append(SrlArg(role=role, first=first, last=last))
        frames.append(SrlFrame(id=fid, verb_token=verb, lemma=lemma, args=tuple(args)))

    temporal = []
    seen_pairs: set[frozenset[int]] = set()
    for pos, item in enumerate(raw["temporal"]):
        where = f"temporal[{pos}]"
        if not isinstance(item, dict):
            raise DocumentSyntaxError(f"{where}: expected object")
        e1 = _get(item, "e1", int, where)
        e2 = _get(item, "e2", int, where)
        if e1 == e2:
            raise DocumentSyntaxError(f"{where}: self-relation on frame {e1}")
        for label, eid in (("e1", e1), ("e2", e2)):
            if eid not in seen_frame_ids:
                raise DanglingRefError(f"{where}.{label}: no frame with id {eid}")
        pair = frozenset((e1, e2))
        if pair in seen_pairs:
            raise DuplicateError(f"{where}: duplicate relation for frame pair ({e1}, {e2})")
        seen_pairs.add(pair)
        rel = _get(item, "rel", str, where)
        if rel not in TEMPORAL_RELS:
            raise DocumentSyntaxError(f"{where}.rel: expected one of {TEMPORAL_RELS}, got {rel!r}")
        conf = _get(item, "conf", float, where)
        if not 0.0 <= conf <= 1.0:
            raise DocumentSyntaxError(f"{where}.conf: {conf} outside [0, 1]")
        temporal.append(TemporalRelation(e1=e1, e2=e2, rel=rel, conf=conf))

    return DocumentAnnotation(
        story_id=story_id,
        source=source,
        tokens=tuple(tokens),
        clusters=tuple(clusters),
        frames=tuple(frames),
        temporal=tuple(temporal),
    )


def to_jsonable(doc: DocumentAnnotation) -> dict:
    out: dict = {"story_id": doc.story_id}
    if doc.source is not None:
        out["source"] = doc.source
    out["tokens"] = [
        {
            "i": t.index,
            "sent": t.sentence,
            "text": t.text,
            "lemma": t.lemma,
            "pos": t.pos,
            "start": t.char_start,
            "end": t.char_end,
        }
        for t in doc.tokens
    ]
    out["clusters"] = []
    for c in doc.clusters:
        item: dict = {"id": c.id}
        if c.name is not None:
            item["name"] = c.name
        item["mentions"] = [
            {"first": m.first, "last": m.last, "pronoun": m.pronoun} for m in c.mentions
        ]
        out["clusters"].append(item)
    out["frames"] = [
        {
            "id": f.id,
            "verb": f.verb_token,
            "lemma": f.lemma,
            "args": [{"role": a.role, "first": a.first, "last": a.last} for a in f.args],
        }
        for f in doc.frames
    ]
    out["temporal"] = [
        {"e1": r.e1, "e2": r.e2, "rel": r.rel, "conf": r.conf} for r in doc.temporal
    ]
    return out


def serialize(doc: DocumentAnnotation) -> bytes:
    """Deterministic UTF-8 JSON; `parse_and_validate(serialize(d))` equals `d`."""
    return (json.dumps(to_jsonable(doc), ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def load_document(path: str | Path) -> DocumentAnnotation:
    return parse_and_validate(Path(path).read_bytes())


def iter_corpus_paths(directory: str | Path) -> list[Path]:
    """Document files in a corpus directory, sorted by name for determinism."""
    return sorted(p for p in Path(directory).iterdir() if p.suffix == ".json" and p.is_file())


def load_corpus(directory: str | Path) -> list[DocumentAnnotation]:
    """Load every document in a directory; story_ids must be unique."""
    docs = []
    seen: dict[str, Path] = {}
    for path in iter_corpus_paths(directory):
        doc = load_document(path)
        if doc.story_id in seen:
            raise DuplicateError(
                f"story_id {doc.story_id!r} appears in both {seen[doc.story_id]} and {path}"
            )
        seen[doc.story_id] = path
        docs.append(doc)
    docs.sort(key=lambda d: d.story_id)
    return docs


def schema_path() -> Path:
    """Filesystem path of the shipped JSON schema for this format."""
    return Path(__file__).parent / "schema" / "interchange.schema.json"


def mention_tokens(doc: DocumentAnnotation, span: MentionSpan | SrlArg) -> Iterable[Token]:
    return doc.tokens[span.first : span.last + 1]
