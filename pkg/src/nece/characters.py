"""Main-character selection by mention frequency and gender inference.

A character is "main" when its cluster is mentioned at least `ratio` times as
often as the most-mentioned cluster (names and pronouns both count). Gender is
a majority vote over gendered pronoun mentions, falling back to gendered words
in the cluster name; both word lists ship as editable data files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from .interchange import CharacterCluster, DocumentAnnotation, Token

GENDER_FEMALE = "female"
GENDER_MALE = "male"
GENDER_UNKNOWN = "unknown"

# Tolerance for the ratio threshold so that an exactly-67% count qualifies
# even when ratio * max_count picks up float round-off.
_RATIO_EPS = 1e-9

_WORD_RE = re.compile(r"[a-z]+")


@dataclass(frozen=True)
class CharacterProfile:
    cluster_id: int
    name: Optional[str]
    mention_count: int
    is_main: bool
    gender: str


def _load_word_table(path: Path) -> dict[str, str]:
    table: dict[str, str] = {}
    lines = path.read_text(encoding="utf-8").splitlines()
    for line in lines[1:]:  # header row
        if not line.strip():
            continue
        word, gender = line.split("\t")
        table[word.strip().lower()] = gender.strip()
    return table


def load_pronoun_table(path: str | Path | None = None) -> dict[str, str]:
    path = Path(path) if path else Path(__file__).parent / "data" / "pronouns.tsv"
    return _load_word_table(path)


def load_gendered_words(path: str | Path | None = None) -> dict[str, str]:
    path = Path(path) if path else Path(__file__).parent / "data" / "gendered_words.tsv"
    return _load_word_table(path)


def _vote(counts: Mapping[str, int]) -> str:
    female = counts.get(GENDER_FEMALE, 0)
    male = counts.get(GENDER_MALE, 0)
    if female > male:
        return GENDER_FEMALE
    if male > female:
        return GENDER_MALE
    return GENDER_UNKNOWN


def infer_gender(
    cluster: CharacterCluster,
    tokens: tuple[Token, ...],
    pronoun_table: Mapping[str, str] | None = None,
    gendered_words: Mapping[str, str] | None = None,
) -> str:
    """Pronoun majority first; ties and pronoun-less clusters fall back to
    gendered words in the cluster name; otherwise `unknown`.

    Plural "they"/"them" carries no signal and is absent from the shipped
    pronoun table.
    """
    if pronoun_table is None:
        pronoun_table = load_pronoun_table()
    if gendered_words is None:
        gendered_words = load_gendered_words()

    pronoun_votes = {GENDER_FEMALE: 0, GENDER_MALE: 0}
    for mention in cluster.mentions:
        if mention.first != mention.last:
            continue
        gender = pronoun_table.get(tokens[mention.first].text.lower())
        if gender:
            pronoun_votes[gender] += 1
    decided = _vote(pronoun_votes)
    if decided != GENDER_UNKNOWN:
        return decided

    if cluster.name:
        name_votes = {GENDER_FEMALE: 0, GENDER_MALE: 0}
        for word in _WORD_RE.findall(cluster.name.lower()):
            gender = gendered_words.get(word)
            if gender:
                name_votes[gender] += 1
        return _vote(name_votes)
    return GENDER_UNKNOWN


def select_main_characters(
    doc: DocumentAnnotation,
    ratio: float = 0.67,
    pronoun_table: Mapping[str, str] | None = None,
    gendered_words: Mapping[str, str] | None = None,
) -> list[CharacterProfile]:
    """Profile every cluster; `is_main` marks those meeting the mention-ratio
    threshold (>=, so the maximal cluster is always main)."""
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"ratio must be in (0, 1], got {ratio}")
    if not doc.clusters:
        return []
    if pronoun_table is None:
        pronoun_table = load_pronoun_table()
    if gendered_words is None:
        gendered_words = load_gendered_words()

    counts = {c.id: len(c.mentions) for c in doc.clusters}
    max_count = max(counts.values())
    profiles = []
    for cluster in doc.clusters:
        count = counts[cluster.id]
        profiles.append(
            CharacterProfile(
                cluster_id=cluster.id,
                name=cluster.name,
                mention_count=count,
                is_main=count + _RATIO_EPS >= ratio * max_count,
                gender=infer_gender(cluster, doc.tokens, pronoun_table, gendered_words),
            )
        )
    return profiles


def main_cluster_ids(profiles: list[CharacterProfile]) -> set[int]:
    return {p.cluster_id for p in profiles if p.is_main}
