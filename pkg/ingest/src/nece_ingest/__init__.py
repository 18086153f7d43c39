"""Turn plain-text stories into nece interchange documents.

The annotator is rule based and deterministic: a regex tokenizer, a
name-and-pronoun coreference pass, verb spotting against a fixed
vocabulary, and adjacency-based temporal links.  Every document it emits
round-trips through ``nece.interchange.parse_and_validate`` before being
written, so downstream consumers never see a malformed file.
"""

from nece_ingest.config import AdapterConfig
from nece_ingest.errors import UpstreamError
from nece_ingest.annotate import annotate_story
from nece_ingest.corpus import ExportSummary, export_corpus

__version__ = "0.1.0"

__all__ = [
    "AdapterConfig",
    "UpstreamError",
    "annotate_story",
    "export_corpus",
    "ExportSummary",
    "__version__",
]
