"""Narrative event chain extraction and gender-bias measurement.

The pipeline reads annotated story documents (tokens, character clusters,
semantic-role frames, pairwise temporal relations), builds temporally ordered
per-character event chains for main characters, types each event against a
verb lexicon, and compares how often event types attach to male versus female
characters using odds ratios with bootstrap confidence intervals.
"""

__version__ = "0.1.0"

from .chains import (
    CharacterChain,
    ChainEntry,
    ChainEvent,
    ChainSection,
    CharacterChainRecord,
    EventBigram,
    OrderingResult,
    StoryChains,
    build_chains,
    chains_to_story_record,
    extract_bigrams,
    order_events,
    read_chains_file,
    split_sections,
    write_chains_file,
)
from .characters import (
    GENDER_FEMALE,
    GENDER_MALE,
    GENDER_UNKNOWN,
    CharacterProfile,
    infer_gender,
    select_main_characters,
)
from .errors import NeceError
from .events import EventRecord, extract_events, load_aux_stoplist, score_salience
from .interchange import (
    DocumentAnnotation,
    load_corpus,
    load_document,
    parse_and_validate,
    serialize,
)
from .lexicon import EventTypeKey, Lexicon, LexiconEntry, load_lexicon
from .stats import (
    ANALYSIS_UNITS,
    AnalysisConfig,
    ContingencyTable,
    OddsRatioResult,
    ResultRow,
    UnitKey,
    analyze,
    bootstrap_ci,
    classification_metrics,
    kendall_tau,
    odds_ratio,
    read_results_csv,
    write_results_csv,
)

__all__ = [
    "__version__",
    "ANALYSIS_UNITS",
    "AnalysisConfig",
    "CharacterChain",
    "CharacterChainRecord",
    "CharacterProfile",
    "ChainEntry",
    "ChainEvent",
    "ChainSection",
    "ContingencyTable",
    "DocumentAnnotation",
    "EventBigram",
    "EventRecord",
    "EventTypeKey",
    "GENDER_FEMALE",
    "GENDER_MALE",
    "GENDER_UNKNOWN",
    "Lexicon",
    "LexiconEntry",
    "NeceError",
    "OddsRatioResult",
    "OrderingResult",
    "ResultRow",
    "StoryChains",
    "UnitKey",
    "analyze",
    "bootstrap_ci",
    "build_chains",
    "chains_to_story_record",
    "classification_metrics",
    "extract_bigrams",
    "extract_events",
    "infer_gender",
    "kendall_tau",
    "load_aux_stoplist",
    "load_corpus",
    "load_document",
    "load_lexicon",
    "odds_ratio",
    "order_events",
    "parse_and_validate",
    "read_chains_file",
    "read_results_csv",
    "score_salience",
    "select_main_characters",
    "serialize",
    "split_sections",
    "write_chains_file",
    "write_results_csv",
]
