"""Verb-event lexicon: lemma -> (class, sub-class) with gender-stereotype tags.

The shipped table lives at ``data/event_lexicon.tsv`` inside the package
(UTF-8, tab-separated, header row). A lemma has at most one entry
(single-sense policy); lemmas absent from the table are typed as class
``other`` downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .errors import BadRowError, DuplicateLemmaError

STEREOTYPE_FEMALE = "female"
STEREOTYPE_MALE = "male"
PROVENANCES = ("verbnet_retained", "new_class", "resolved_polysemy", "manual")

# Event class assigned to lemmas the lexicon does not cover.
OTHER_CLASS = "other"

_COLUMNS = ("lemma", "class", "sub_class", "stereotype", "provenance")


@dataclass(frozen=True)
class LexiconEntry:
    lemma: str
    event_class: str
    sub_class: Optional[str]
    stereotype: Optional[str]
    provenance: str


@dataclass(frozen=True)
class EventTypeKey:
    """Unit of statistical comparison: a typed event plus the character's role."""

    event_class: str
    sub_class: Optional[str]
    role: str

    def label(self) -> str:
        name = self.event_class if not self.sub_class else f"{self.event_class}, {self.sub_class}"
        return f"{name} ({self.role})"


class Lexicon:
    def __init__(self, entries: dict[str, LexiconEntry]):
        self._entries = entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries.values())

    def lookup(self, lemma: str) -> Optional[LexiconEntry]:
        """Exact match on the lowercase lemma; absence is a value, never an error."""
        return self._entries.get(lemma)

    @property
    def class_count(self) -> int:
        return len({e.event_class for e in self._entries.values()})

    @property
    def subclass_count(self) -> int:
        """Distinct (class, sub-class) pairs, counting a bare class as one type."""
        return len({(e.event_class, e.sub_class) for e in self._entries.values()})

    def stereotype_of(self, event_class: str) -> Optional[str]:
        for entry in self._entries.values():
            if entry.event_class == event_class:
                return entry.stereotype
        return None

    def stereotype_classes(self) -> dict[str, str]:
        return {
            e.event_class: e.stereotype for e in self._entries.values() if e.stereotype
        }


def default_lexicon_path() -> Path:
    return Path(__file__).parent / "data" / "event_lexicon.tsv"


def load_lexicon(path: str | Path | None = None) -> Lexicon:
    """Load a lexicon TSV; duplicate lemmas and malformed rows are rejected.

    An empty file yields an empty lexicon. A non-empty file must start with
    the header row ``lemma<TAB>class<TAB>sub_class<TAB>stereotype<TAB>provenance``.
    """
    path = Path(path) if path is not None else default_lexicon_path()
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        return Lexicon({})
    lines = text.splitlines()
    header = tuple(lines[0].rstrip("\n").split("\t"))
    if header != _COLUMNS:
        raise BadRowError(f"{path}: header {header!r} != expected {_COLUMNS!r}")
    entries: dict[str, LexiconEntry] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != len(_COLUMNS):
            raise BadRowError(f"{path}:{lineno}: expected {len(_COLUMNS)} columns, got {len(cells)}")
        lemma, event_class, sub_class, stereotype, provenance = (c.strip() for c in cells)
        if not lemma:
            raise BadRowError(f"{path}:{lineno}: empty lemma")
        if lemma != lemma.lower():
            raise BadRowError(f"{path}:{lineno}: lemma {lemma!r} is not lowercase")
        if not event_class:
            raise BadRowError(f"{path}:{lineno}: empty class for lemma {lemma!r}")
        if stereotype and stereotype not in (STEREOTYPE_FEMALE, STEREOTYPE_MALE):
            raise BadRowError(f"{path}:{lineno}: bad stereotype {stereotype!r}")
        if provenance not in PROVENANCES:
            raise BadRowError(f"{path}:{lineno}: bad provenance {provenance!r}")
        if lemma in entries:
            raise DuplicateLemmaError(f"{path}:{lineno}: duplicate lemma {lemma!r}")
        entries[lemma] = LexiconEntry(
            lemma=lemma,
            event_class=event_class,
            sub_class=sub_class or None,
            stereotype=stereotype or None,
            provenance=provenance,
        )
    return Lexicon(entries)
