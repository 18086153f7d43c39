"""Typed character events from semantic-role frames, plus tf-idf salience.

Salience treats event triggers (not tokens) as the unit:
    tf(l, d)  = events with lemma l in story d / total events in d
    idf(l)    = ln((N + 1) / (df(l) + 1)) + 1       N = story count
    salience  = tf * idf
An event is salient iff its lemma is outside the auxiliary stoplist and its
score reaches the story's `quantile` quantile (default 0.3: keep the top 70%).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import log
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from .characters import CharacterProfile, main_cluster_ids
from .errors import EmptyCorpusError
from .interchange import DocumentAnnotation
from .lexicon import OTHER_CLASS, Lexicon

ROLE_AGENT = "agent"
ROLE_PATIENT = "patient"
ROLE_BOTH = "both"

DEFAULT_SALIENCE_QUANTILE = 0.3


@dataclass
class EventRecord:
    frame_id: int
    lemma: str
    event_class: str
    sub_class: Optional[str]
    text_position: int
    participants: tuple[tuple[int, str], ...] = field(default=())
    has_main_participant: bool = False
    salience: float = 0.0
    salient: bool = False


def load_aux_stoplist(path: str | Path | None = None) -> frozenset[str]:
    path = Path(path) if path else Path(__file__).parent / "data" / "aux_stoplist.txt"
    lemmas = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            lemmas.append(line.lower())
    return frozenset(lemmas)


def extract_events(
    doc: DocumentAnnotation,
    profiles: Sequence[CharacterProfile],
    lexicon: Lexicon,
) -> list[EventRecord]:
    """One EventRecord per frame, in frame order.

    A cluster participates as agent/patient when any of its mentions overlaps
    the corresponding argument span; a cluster hitting both spans of one frame
    participates once with role `both`. Unmapped lemmas are typed `other`.
    Events without a main-character participant are kept (they still carry
    ordering constraints) and flagged via `has_main_participant`.
    """
    mains = main_cluster_ids(list(profiles))
    records = []
    for frame in doc.frames:
        agent_hits: set[int] = set()
        patient_hits: set[int] = set()
        for arg in frame.args:
            hits = agent_hits if arg.role == ROLE_AGENT else patient_hits
            for cluster in doc.clusters:
                if cluster.id in hits:
                    continue
                for mention in cluster.mentions:
                    if mention.first <= arg.last and arg.first <= mention.last:
                        hits.add(cluster.id)
                        break
        participants = []
        for cid in sorted(agent_hits | patient_hits):
            if cid in agent_hits and cid in patient_hits:
                role = ROLE_BOTH
            elif cid in agent_hits:
                role = ROLE_AGENT
            else:
                role = ROLE_PATIENT
            participants.append((cid, role))

        lemma = frame.lemma.lower()
        entry = lexicon.lookup(lemma)
        records.append(
            EventRecord(
                frame_id=frame.id,
                lemma=lemma,
                event_class=entry.event_class if entry else OTHER_CLASS,
                sub_class=entry.sub_class if entry else None,
                text_position=frame.verb_token,
                participants=tuple(participants),
                has_main_participant=any(cid in mains for cid, _ in participants),
            )
        )
    return records


def score_salience(
    corpus_events: Mapping[str, Sequence[EventRecord]],
    stoplist: frozenset[str] | None = None,
    quantile: float = DEFAULT_SALIENCE_QUANTILE,
) -> dict[str, dict[int, float]]:
    """Two-pass corpus scoring: aggregate df, then score each story.

    Mutates the records' `salience`/`salient` fields and returns
    {story_id: {frame_id: score}}.
    """
    if not corpus_events:
        raise EmptyCorpusError("salience scoring needs at least one document")
    if not 0.0 <= quantile <= 1.0:
        raise ValueError(f"quantile must be in [0, 1], got {quantile}")
    if stoplist is None:
        stoplist = load_aux_stoplist()

    n_stories = len(corpus_events)
    df: Counter[str] = Counter()
    for events in corpus_events.values():
        df.update({rec.lemma for rec in events})

    idf = {
        lemma: log((n_stories + 1) / (count + 1)) + 1.0 for lemma, count in df.items()
    }

    scores_by_story: dict[str, dict[int, float]] = {}
    for story_id, events in corpus_events.items():
        scores_by_story[story_id] = {}
        total = len(events)
        if total == 0:
            continue
        lemma_counts = Counter(rec.lemma for rec in events)
        scores = []
        for rec in events:
            tf = lemma_counts[rec.lemma] / total
            rec.salience = tf * idf[rec.lemma]
            scores.append(rec.salience)
            scores_by_story[story_id][rec.frame_id] = rec.salience
        threshold = float(np.quantile(scores, quantile))
        for rec in events:
            rec.salient = rec.lemma not in stoplist and rec.salience >= threshold
    return scores_by_story
