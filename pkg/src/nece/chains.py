"""Temporal ordering, per-character chains, and the three analysis units.

Ordering builds a directed graph from high-confidence `before`/`after`
relations and extracts a total order by repeatedly taking the zero-in-degree
event earliest in the text. Cycles degrade to warnings: the earliest-position
blocked event is forced out and its remaining incoming edges dropped.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .characters import CharacterProfile
from .errors import DocumentSyntaxError, EmptyChainError
from .events import ROLE_AGENT, ROLE_BOTH, ROLE_PATIENT, EventRecord
from .interchange import DocumentAnnotation
from .lexicon import EventTypeKey

DEFAULT_CONF_THRESHOLD = 0.5
DEFAULT_EXCLUDED_CLASSES = frozenset({"communication", "travel", "motion", "other"})

SECTION_LABELS = ("beginning", "middle", "end")


@dataclass
class OrderingResult:
    order: tuple[int, ...]                # frame ids, temporal order
    ranks: dict[int, int]                 # frame id -> rank
    warnings: tuple[str, ...] = ()


@dataclass
class ChainEvent:
    event: EventRecord
    role: str                             # agent | patient | both
    rank: int


@dataclass
class CharacterChain:
    cluster_id: int
    gender: str
    name: Optional[str] = None
    is_main: bool = True
    events: list[ChainEvent] = field(default_factory=list)


@dataclass(frozen=True)
class ChainSection:
    label: str
    events: tuple[ChainEvent, ...]


@dataclass(frozen=True)
class EventBigram:
    prev: EventTypeKey
    next: EventTypeKey


def order_events(
    doc: DocumentAnnotation,
    events: Sequence[EventRecord],
    conf_threshold: float = DEFAULT_CONF_THRESHOLD,
) -> OrderingResult:
    """Total order over `events` honoring thresholded pairwise relations.

    `simultaneous` and `vague` relations are ignored; ties and relation-free
    events fall back to text position. Never fails: cycles are broken at the
    earliest-position node and reported as warnings.
    """
    by_id = {rec.frame_id: rec for rec in events}
    position = {fid: rec.text_position for fid, rec in by_id.items()}

    successors: dict[int, list[int]] = {fid: [] for fid in by_id}
    in_degree = {fid: 0 for fid in by_id}
    for rel in doc.temporal:
        if rel.conf < conf_threshold or rel.rel not in ("before", "after"):
            continue
        src, dst = (rel.e1, rel.e2) if rel.rel == "before" else (rel.e2, rel.e1)
        if src not in by_id or dst not in by_id:
            continue
        successors[src].append(dst)
        in_degree[dst] += 1

    ready = [(position[fid], fid) for fid, deg in in_degree.items() if deg == 0]
    heapq.heapify(ready)
    remaining = set(by_id)
    order: list[int] = []
    warnings: list[str] = []

    while remaining:
        while ready and ready[0][1] not in remaining:
            heapq.heappop(ready)
        if ready:
            _, fid = heapq.heappop(ready)
        else:
            # cycle: force out the blocked node earliest in the passage
            fid = min(remaining, key=lambda f: (position[f], f))
            warnings.append(
                f"cycle broken at frame {fid} (text position {position[fid]})"
            )
        remaining.discard(fid)
        order.append(fid)
        for succ in successors[fid]:
            if succ in remaining:
                in_degree[succ] -= 1
                if in_degree[succ] == 0:
                    heapq.heappush(ready, (position[succ], succ))

    return OrderingResult(
        order=tuple(order),
        ranks={fid: rank for rank, fid in enumerate(order)},
        warnings=tuple(warnings),
    )


def build_chains(
    doc: DocumentAnnotation,
    profiles: Sequence[CharacterProfile],
    events: Sequence[EventRecord],
    ordering: OrderingResult,
) -> list[CharacterChain]:
    """One chain per character profile, in cluster order.

    Main characters get the rank-ordered subsequence of salient events they
    participate in; non-main characters are retained with an empty chain so
    their profile still reaches the chains file.
    """
    salient_by_id = {
        rec.frame_id: rec for rec in events if rec.salient and rec.frame_id in ordering.ranks
    }
    chains = []
    for profile in profiles:
        chain = CharacterChain(
            cluster_id=profile.cluster_id,
            gender=profile.gender,
            name=profile.name,
            is_main=profile.is_main,
        )
        if profile.is_main:
            participated = []
            for rec in salient_by_id.values():
                for cid, role in rec.participants:
                    if cid == profile.cluster_id:
                        participated.append(
                            ChainEvent(event=rec, role=role, rank=ordering.ranks[rec.frame_id])
                        )
                        break
            participated.sort(key=lambda ce: ce.rank)
            chain.events = participated
        chains.append(chain)
    return chains


def event_type_keys(chain_event: ChainEvent) -> tuple[EventTypeKey, ...]:
    """Statistical keys for one chain event; `both` counts as agent and patient."""
    roles = (ROLE_AGENT, ROLE_PATIENT) if chain_event.role == ROLE_BOTH else (chain_event.role,)
    return tuple(
        EventTypeKey(chain_event.event.event_class, chain_event.event.sub_class, role)
        for role in roles
    )


def extract_bigrams(
    chain: CharacterChain,
    excluded_classes: frozenset[str] = DEFAULT_EXCLUDED_CLASSES,
) -> list[EventBigram]:
    """Adjacent typed pairs after dropping excluded event classes.

    Events with role `both` expand into their agent and patient keys, so one
    adjacency can yield several bigrams.
    """
    kept = [ce for ce in chain.events if ce.event.event_class not in excluded_classes]
    bigrams = []
    for prev_ce, next_ce in zip(kept, kept[1:]):
        for prev_key in event_type_keys(prev_ce):
            for next_key in event_type_keys(next_ce):
                bigrams.append(EventBigram(prev=prev_key, next=next_key))
    return bigrams


def split_sections(chain: CharacterChain) -> tuple[ChainSection, ChainSection, ChainSection]:
    """Partition a chain into beginning/middle/end thirds.

    Event at list position i of n goes to section floor(3*i / n), so section
    sizes never differ by more than one and remainders land at the front.
    """
    n = len(chain.events)
    if n == 0:
        raise EmptyChainError(f"cluster {chain.cluster_id}: cannot section an empty chain")
    buckets: tuple[list[ChainEvent], ...] = ([], [], [])
    for i, ce in enumerate(chain.events):
        buckets[3 * i // n].append(ce)
    return tuple(
        ChainSection(label=label, events=tuple(bucket))
        for label, bucket in zip(SECTION_LABELS, buckets)
    )


# ---------------------------------------------------------------------------
# Chains file: the corpus-level JSON artifact produced by `nece extract` and
# consumed by `nece analyze`.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainEntry:
    frame: int
    lemma: str
    event_class: str
    sub_class: Optional[str]
    role: str
    rank: int
    salient: bool

    def keys(self) -> tuple[EventTypeKey, ...]:
        roles = (ROLE_AGENT, ROLE_PATIENT) if self.role == ROLE_BOTH else (self.role,)
        return tuple(EventTypeKey(self.event_class, self.sub_class, role) for role in roles)


@dataclass(frozen=True)
class CharacterChainRecord:
    cluster: int
    name: Optional[str]
    gender: str
    main: bool
    chain: tuple[ChainEntry, ...]


@dataclass(frozen=True)
class StoryChains:
    story_id: str
    characters: tuple[CharacterChainRecord, ...]


def chains_to_story_record(story_id: str, chains: Sequence[CharacterChain]) -> StoryChains:
    characters = []
    for chain in chains:
        entries = tuple(
            ChainEntry(
                frame=ce.event.frame_id,
                lemma=ce.event.lemma,
                event_class=ce.event.event_class,
                sub_class=ce.event.sub_class,
                role=ce.role,
                rank=ce.rank,
                salient=ce.event.salient,
            )
            for ce in chain.events
        )
        characters.append(
            CharacterChainRecord(
                cluster=chain.cluster_id,
                name=chain.name,
                gender=chain.gender,
                main=chain.is_main,
                chain=entries,
            )
        )
    return StoryChains(story_id=story_id, characters=tuple(characters))


def _story_to_jsonable(story: StoryChains) -> dict:
    return {
        "story_id": story.story_id,
        "characters": [
            {
                "cluster": c.cluster,
                "name": c.name,
                "gender": c.gender,
                "main": c.main,
                "chain": [
                    {
                        "frame": e.frame,
                        "lemma": e.lemma,
                        "class": e.event_class,
                        "subclass": e.sub_class,
                        "role": e.role,
                        "rank": e.rank,
                        "salient": e.salient,
                    }
                    for e in c.chain
                ],
            }
            for c in story.characters
        ],
    }


def write_chains_file(path: str | Path, stories: Sequence[StoryChains]) -> bytes:
    """Serialize a corpus of chains, sorted by story_id; returns the bytes written."""
    payload = [_story_to_jsonable(s) for s in sorted(stories, key=lambda s: s.story_id)]
    data = (json.dumps(payload, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    Path(path).write_bytes(data)
    return data


def read_chains_file(path: str | Path) -> list[StoryChains]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(payload, list):
        raise DocumentSyntaxError(f"{path}: chains file root must be an array")
    stories = []
    for item in payload:
        characters = []
        for c in item["characters"]:
            entries = tuple(
                ChainEntry(
                    frame=e["frame"],
                    lemma=e["lemma"],
                    event_class=e["class"],
                    sub_class=e["subclass"],
                    role=e["role"],
                    rank=e["rank"],
                    salient=e["salient"],
                )
                for e in c["chain"]
            )
            characters.append(
                CharacterChainRecord(
                    cluster=c["cluster"],
                    name=c.get("name"),
                    gender=c["gender"],
                    main=c["main"],
                    chain=entries,
                )
            )
        stories.append(StoryChains(story_id=item["story_id"], characters=tuple(characters)))
    return stories
