"""Adapter configuration."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class AdapterConfig:
    """Settings for one annotation run.

    The model identifiers name the rule sets used for each stage.  They
    are recorded verbatim in every emitted document's ``source`` field so
    a corpus can always be traced back to the annotator that produced it.
    """

    coref_model: str = "rulecoref-0.3"
    srl_model: str = "rulesrl-0.3"
    temporal_model: str = "ruletime-0.3"
    batch_size: int = 16
    output_dir: Path | None = None

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        for field in ("coref_model", "srl_model", "temporal_model"):
            if not getattr(self, field).strip():
                raise ValueError(f"{field} must be a non-empty identifier")

    def source_string(self, version: str) -> str:
        """Provenance line stored in each document's ``source`` field."""
        return (
            f"nece-ingest {version};"
            f" coref={self.coref_model};"
            f" srl={self.srl_model};"
            f" temporal={self.temporal_model}"
        )
