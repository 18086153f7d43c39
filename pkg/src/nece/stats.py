"""Odds ratios, bootstrap confidence intervals, and validation metrics.

All comparisons are male:female. A contingency table for an analysis key
counts, per gender, how often the key occurs (target) versus how often
anything else in the key's comparison pool occurs (complement). Confidence
intervals come from a story-level percentile bootstrap whose replicates are
seeded independently, so thread scheduling can never change the numbers.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from .chains import StoryChains
from .characters import GENDER_FEMALE, GENDER_MALE
from .errors import (
    BadCsvError,
    BelowMinCountError,
    DegenerateTableError,
    LengthMismatchError,
    MismatchedItemsError,
)
from .lexicon import EventTypeKey

UNIT_UNIGRAM = "unigram"
UNIT_BIGRAM_BEFORE = "bigram_before"
UNIT_BIGRAM_AFTER = "bigram_after"
UNIT_SECTION = "section"
ANALYSIS_UNITS = (UNIT_UNIGRAM, UNIT_BIGRAM_BEFORE, UNIT_BIGRAM_AFTER, UNIT_SECTION)

SECTION_LABELS = ("beginning", "middle", "end")

# column order is a stable external contract; do not reorder
RESULTS_COLUMNS = (
    "unit",
    "event_class",
    "sub_class",
    "role",
    "anchor_class",
    "anchor_sub_class",
    "anchor_role",
    "position",
    "n_female",
    "n_male",
    "odds_ratio_m_f",
    "ci_low",
    "ci_high",
    "significant",
)

_POSITION_ORDER = {None: 0, "before": 1, "after": 2, "beginning": 3, "middle": 4, "end": 5}

CORRECTION_ZERO = "zero"
CORRECTION_ALWAYS = "always"
CORRECTION_NEVER = "never"


@dataclass(frozen=True)
class ContingencyTable:
    """a/b male target/complement counts, c/d the female counterparts."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        for cell in (self.a, self.b, self.c, self.d):
            if cell < 0:
                raise ValueError(f"negative contingency cell: {self}")

    def swapped(self) -> "ContingencyTable":
        return ContingencyTable(a=self.c, b=self.d, c=self.a, d=self.b)


@dataclass(frozen=True)
class AnalysisConfig:
    min_count: int = 5
    bootstrap_reps: int = 1000
    confidence: float = 0.95
    rng_seed: int = 42
    main_ratio: float = 0.67
    salience_quantile: float = 0.3
    conf_threshold: float = 0.5
    excluded_classes: frozenset[str] = frozenset({"communication", "travel", "motion", "other"})
    always_correct: bool = False
    exhaustive_bootstrap: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.bootstrap_reps < 1:
            raise ValueError("bootstrap_reps must be >= 1")
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must lie strictly between 0 and 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def correction(self) -> str:
        return CORRECTION_ALWAYS if self.always_correct else CORRECTION_ZERO


@dataclass(frozen=True)
class UnitKey:
    unit: str
    event: EventTypeKey
    anchor: Optional[EventTypeKey] = None
    position: Optional[str] = None

    def sort_tuple(self) -> tuple:
        anchor = self.anchor
        return (
            self.event.event_class,
            self.event.sub_class or "",
            self.event.role,
            anchor.event_class if anchor else "",
            (anchor.sub_class or "") if anchor else "",
            anchor.role if anchor else "",
            _POSITION_ORDER.get(self.position, 99),
        )


@dataclass(frozen=True)
class OddsRatioResult:
    key: UnitKey
    table: ContingencyTable
    or_point: float
    ci_low: float
    ci_high: float
    n_total: int
    significant: bool


@dataclass(frozen=True)
class ResultRow:
    """One results-CSV row; empty strings stand in for inapplicable columns."""

    unit: str
    event_class: str
    sub_class: str
    role: str
    anchor_class: str
    anchor_sub_class: str
    anchor_role: str
    position: str
    n_female: int
    n_male: int
    odds_ratio_m_f: float
    ci_low: float
    ci_high: float
    significant: bool


def odds_ratio(table: ContingencyTable, correction: str = CORRECTION_ZERO) -> float:
    """(a/b)/(c/d), adding 0.5 to every cell when any cell is zero.

    Computed as (a*d)/(b*c) so integer tables stay exact.
    """
    a, b, c, d = float(table.a), float(table.b), float(table.c), float(table.d)
    if correction == CORRECTION_ALWAYS or (
        correction == CORRECTION_ZERO and min(a, b, c, d) == 0.0
    ):
        a, b, c, d = a + 0.5, b + 0.5, c + 0.5, d + 0.5
    if a + b == 0.0 or c + d == 0.0 or b == 0.0 or c == 0.0:
        raise DegenerateTableError(
            f"cannot form odds ratio from table ({table.a}, {table.b}, {table.c}, {table.d}) "
            f"with correction={correction!r}"
        )
    return (a * d) / (b * c)


def _odds_ratio_vector(
    a: np.ndarray, b: np.ndarray, c: np.ndarray, d: np.ndarray, correction: str
) -> np.ndarray:
    a = a.astype(np.float64)
    b = b.astype(np.float64)
    c = c.astype(np.float64)
    d = d.astype(np.float64)
    if correction == CORRECTION_ALWAYS:
        needs = np.ones(a.shape, dtype=bool)
    elif correction == CORRECTION_ZERO:
        needs = (a == 0) | (b == 0) | (c == 0) | (d == 0)
    else:
        needs = np.zeros(a.shape, dtype=bool)
    half = np.where(needs, 0.5, 0.0)
    a, b, c, d = a + half, b + half, c + half, d + half
    denom = b * c
    if np.any(denom == 0):
        raise DegenerateTableError("zero denominator in uncorrected bootstrap replicate")
    return (a * d) / denom


# ---------------------------------------------------------------------------
# Per-story contingency vectors for each analysis unit.
# ---------------------------------------------------------------------------


@dataclass
class _KeyVectors:
    """Per-story target/complement counts, one row per corpus story."""

    t_m: np.ndarray
    u_m: np.ndarray
    t_f: np.ndarray
    u_f: np.ndarray

    def original_table(self) -> ContingencyTable:
        return ContingencyTable(
            a=int(self.t_m.sum()),
            b=int(self.u_m.sum()),
            c=int(self.t_f.sum()),
            d=int(self.u_f.sum()),
        )


def _gendered_chains(story: StoryChains):
    for record in story.characters:
        if record.main and record.gender in (GENDER_MALE, GENDER_FEMALE) and record.chain:
            yield record.gender, record.chain


def collect_unit_vectors(
    stories: Sequence[StoryChains],
    unit: str,
    excluded_classes: Iterable[str],
) -> dict[UnitKey, _KeyVectors]:
    """Build per-story (target, complement) count vectors for every key of `unit`.

    Unknown-gender and non-main characters never contribute. Complements:
    unigram / section keys compare against every other typed occurrence in the
    same pool (whole chain set, or one section); bigram keys compare against
    the other bigrams sharing their anchor.
    """
    if unit not in ANALYSIS_UNITS:
        raise ValueError(f"unknown analysis unit: {unit!r}")
    excluded = frozenset(excluded_classes)
    n = len(stories)

    def zeros() -> np.ndarray:
        return np.zeros(n, dtype=np.int64)

    target: dict[UnitKey, dict[str, np.ndarray]] = defaultdict(
        lambda: {GENDER_MALE: zeros(), GENDER_FEMALE: zeros()}
    )
    pools: dict[object, dict[str, np.ndarray]] = defaultdict(
        lambda: {GENDER_MALE: zeros(), GENDER_FEMALE: zeros()}
    )

    for si, story in enumerate(stories):
        for gender, chain in _gendered_chains(story):
            if unit == UNIT_UNIGRAM:
                for entry in chain:
                    for ek in entry.keys():
                        target[UnitKey(unit, ek)][gender][si] += 1
                        pools[None][gender][si] += 1
            elif unit in (UNIT_BIGRAM_BEFORE, UNIT_BIGRAM_AFTER):
                kept = [e for e in chain if e.event_class not in excluded]
                for prev_entry, next_entry in zip(kept, kept[1:]):
                    for pk in prev_entry.keys():
                        for nk in next_entry.keys():
                            if unit == UNIT_BIGRAM_BEFORE:
                                key = UnitKey(unit, event=pk, anchor=nk, position="before")
                            else:
                                key = UnitKey(unit, event=nk, anchor=pk, position="after")
                            target[key][gender][si] += 1
                            pools[key.anchor][gender][si] += 1
            else:
                size = len(chain)
                for i, entry in enumerate(chain):
                    label = SECTION_LABELS[3 * i // size]
                    for ek in entry.keys():
                        target[UnitKey(unit, ek, position=label)][gender][si] += 1
                        pools[label][gender][si] += 1

    vectors: dict[UnitKey, _KeyVectors] = {}
    for key, per_gender in target.items():
        if unit == UNIT_UNIGRAM:
            pool = pools[None]
        elif unit in (UNIT_BIGRAM_BEFORE, UNIT_BIGRAM_AFTER):
            pool = pools[key.anchor]
        else:
            pool = pools[key.position]
        vectors[key] = _KeyVectors(
            t_m=per_gender[GENDER_MALE],
            u_m=pool[GENDER_MALE] - per_gender[GENDER_MALE],
            t_f=per_gender[GENDER_FEMALE],
            u_f=pool[GENDER_FEMALE] - per_gender[GENDER_FEMALE],
        )
    return vectors


# ---------------------------------------------------------------------------
# Bootstrap.
# ---------------------------------------------------------------------------


def resample_indices(n_stories: int, cfg: AnalysisConfig) -> np.ndarray:
    """Matrix of story indices, one bootstrap replicate per row.

    Replicate r draws from a generator seeded by (rng_seed, r), so replicates
    are independent of execution order and of each other. With
    exhaustive_bootstrap the matrix enumerates all n^n ordered resamples
    instead; that is only tractable for tiny corpora and exists so small
    cases can be checked against full enumeration.
    """
    if n_stories < 1:
        raise ValueError("need at least one story to resample")
    if cfg.exhaustive_bootstrap:
        rows = list(itertools.product(range(n_stories), repeat=n_stories))
        return np.asarray(rows, dtype=np.intp)
    idx = np.empty((cfg.bootstrap_reps, n_stories), dtype=np.intp)
    for r in range(cfg.bootstrap_reps):
        rng = np.random.default_rng([cfg.rng_seed, r])
        idx[r] = rng.integers(0, n_stories, size=n_stories)
    return idx


def _bootstrap_key(key: UnitKey, vec: _KeyVectors, idx: np.ndarray, cfg: AnalysisConfig) -> OddsRatioResult:
    table = vec.original_table()
    point = odds_ratio(table, cfg.correction)
    reps = _odds_ratio_vector(
        vec.t_m[idx].sum(axis=1),
        vec.u_m[idx].sum(axis=1),
        vec.t_f[idx].sum(axis=1),
        vec.u_f[idx].sum(axis=1),
        cfg.correction,
    )
    alpha = 1.0 - cfg.confidence
    ci_low, ci_high = (float(q) for q in np.quantile(reps, [alpha / 2.0, 1.0 - alpha / 2.0]))
    return OddsRatioResult(
        key=key,
        table=table,
        or_point=point,
        ci_low=ci_low,
        ci_high=ci_high,
        n_total=table.a + table.c,
        significant=not (ci_low <= 1.0 <= ci_high),
    )


def bootstrap_ci(
    corpus_chains: Sequence[StoryChains], key: UnitKey, cfg: AnalysisConfig
) -> OddsRatioResult:
    """Percentile bootstrap CI for one key; the corpus must support it."""
    vectors = collect_unit_vectors(corpus_chains, key.unit, cfg.excluded_classes)
    vec = vectors.get(key)
    if vec is None:
        raise BelowMinCountError(f"key {key} never occurs in the corpus")
    table = vec.original_table()
    if table.a + table.c < cfg.min_count:
        raise BelowMinCountError(
            f"key {key} occurs {table.a + table.c} times, below min_count={cfg.min_count}"
        )
    idx = resample_indices(len(corpus_chains), cfg)
    return _bootstrap_key(key, vec, idx, cfg)


def analyze(
    corpus_chains: Sequence[StoryChains], unit: str, cfg: AnalysisConfig
) -> list[OddsRatioResult]:
    """Odds-ratio results for every key of `unit` meeting min_count.

    Results are sorted by key so output order is reproducible. Workers > 1
    fans keys out across threads; each replicate's resample is fixed up front
    by seed, so the numbers cannot depend on scheduling.
    """
    vectors = collect_unit_vectors(corpus_chains, unit, cfg.excluded_classes)
    eligible = [
        (key, vec)
        for key, vec in vectors.items()
        if int(vec.t_m.sum() + vec.t_f.sum()) >= cfg.min_count
    ]
    if not eligible:
        return []
    eligible.sort(key=lambda pair: pair[0].sort_tuple())
    idx = resample_indices(len(corpus_chains), cfg)
    if cfg.workers == 1:
        return [_bootstrap_key(key, vec, idx, cfg) for key, vec in eligible]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(_bootstrap_key, key, vec, idx, cfg) for key, vec in eligible]
        return [f.result() for f in futures]


# ---------------------------------------------------------------------------
# Validation metrics.
# ---------------------------------------------------------------------------


def _count_inversions(seq: list[int]) -> tuple[list[int], int]:
    if len(seq) < 2:
        return seq, 0
    mid = len(seq) // 2
    left, inv_left = _count_inversions(seq[:mid])
    right, inv_right = _count_inversions(seq[mid:])
    merged: list[int] = []
    inversions = inv_left + inv_right
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            inversions += len(left) - i
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, inversions


def kendall_tau(order1: Sequence, order2: Sequence) -> float:
    """Rank correlation between two strict orderings of the same items.

    tau = 1 - 2 * discordant / C(n, 2), counting discordant pairs by
    merge-sort inversion counting. Fewer than two items gives 1.0.
    """
    if len(order1) != len(order2):
        raise MismatchedItemsError(
            f"orderings have different lengths: {len(order1)} vs {len(order2)}"
        )
    if len(set(order1)) != len(order1):
        raise MismatchedItemsError("first ordering contains duplicate items")
    positions = {item: i for i, item in enumerate(order2)}
    if len(positions) != len(order2):
        raise MismatchedItemsError("second ordering contains duplicate items")
    try:
        ranks = [positions[item] for item in order1]
    except KeyError as exc:
        raise MismatchedItemsError(f"item {exc.args[0]!r} missing from second ordering") from exc
    n = len(ranks)
    if n < 2:
        return 1.0
    _, discordant = _count_inversions(ranks)
    return 1.0 - 2.0 * discordant / (n * (n - 1) / 2.0)


def classification_metrics(gold: Sequence, predicted: Sequence) -> tuple[float, float]:
    """(accuracy, macro-F1) over the union of gold and predicted label sets.

    A class never predicted (or never gold) still participates with F1
    contributions of zero where undefined.
    """
    if len(gold) != len(predicted) or len(gold) == 0:
        raise LengthMismatchError(
            f"gold and predicted must be equal-length and non-empty "
            f"(got {len(gold)} and {len(predicted)})"
        )
    correct = sum(1 for g, p in zip(gold, predicted) if g == p)
    accuracy = correct / len(gold)
    classes = sorted(set(gold) | set(predicted), key=repr)
    f1_scores = []
    for cls in classes:
        tp = sum(1 for g, p in zip(gold, predicted) if g == cls and p == cls)
        fp = sum(1 for g, p in zip(gold, predicted) if g != cls and p == cls)
        fn = sum(1 for g, p in zip(gold, predicted) if g == cls and p != cls)
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        f1_scores.append(f1)
    return accuracy, sum(f1_scores) / len(f1_scores)


# ---------------------------------------------------------------------------
# Results CSV.
# ---------------------------------------------------------------------------


def result_to_row(result: OddsRatioResult) -> ResultRow:
    key = result.key
    anchor = key.anchor
    return ResultRow(
        unit=key.unit,
        event_class=key.event.event_class,
        sub_class=key.event.sub_class or "",
        role=key.event.role,
        anchor_class=anchor.event_class if anchor else "",
        anchor_sub_class=(anchor.sub_class or "") if anchor else "",
        anchor_role=anchor.role if anchor else "",
        position=key.position or "",
        n_female=result.table.c,
        n_male=result.table.a,
        odds_ratio_m_f=result.or_point,
        ci_low=result.ci_low,
        ci_high=result.ci_high,
        significant=result.significant,
    )


def write_results_csv(path: str | Path, results: Sequence[OddsRatioResult]) -> bytes:
    """Write results as delimited text; returns the exact bytes written.

    Floats are rendered with repr so values round-trip bit-for-bit.
    """
    lines = [",".join(RESULTS_COLUMNS)]
    for result in results:
        row = result_to_row(result)
        lines.append(
            ",".join(
                (
                    row.unit,
                    row.event_class,
                    row.sub_class,
                    row.role,
                    row.anchor_class,
                    row.anchor_sub_class,
                    row.anchor_role,
                    row.position,
                    str(row.n_female),
                    str(row.n_male),
                    repr(row.odds_ratio_m_f),
                    repr(row.ci_low),
                    repr(row.ci_high),
                    "true" if row.significant else "false",
                )
            )
        )
    data = ("\n".join(lines) + "\n").encode("utf-8")
    Path(path).write_bytes(data)
    return data


def read_results_csv(path: str | Path) -> list[ResultRow]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or tuple(lines[0].split(",")) != RESULTS_COLUMNS:
        raise BadCsvError(f"{path}: missing or wrong results header")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != len(RESULTS_COLUMNS):
            raise BadCsvError(f"{path}:{lineno}: expected {len(RESULTS_COLUMNS)} fields")
        if fields[13] not in ("true", "false"):
            raise BadCsvError(f"{path}:{lineno}: significant must be true or false")
        try:
            rows.append(
                ResultRow(
                    unit=fields[0],
                    event_class=fields[1],
                    sub_class=fields[2],
                    role=fields[3],
                    anchor_class=fields[4],
                    anchor_sub_class=fields[5],
                    anchor_role=fields[6],
                    position=fields[7],
                    n_female=int(fields[8]),
                    n_male=int(fields[9]),
                    odds_ratio_m_f=float(fields[10]),
                    ci_low=float(fields[11]),
                    ci_high=float(fields[12]),
                    significant=fields[13] == "true",
                )
            )
        except ValueError as exc:
            raise BadCsvError(f"{path}:{lineno}: {exc}") from exc
    return rows
