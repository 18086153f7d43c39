"""Shared fixtures: repo paths, the fixture corpus, and an in-process CLI runner."""

from __future__ import annotations

import contextlib
import io
import json
from dataclasses import dataclass
from pathlib import Path

import pytest

from nece.chains import read_chains_file
from nece.cli import main as cli_main
from nece.interchange import load_corpus
from nece.lexicon import load_lexicon

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"
GOLDEN_DIR = FIXTURES_DIR / "golden"


@dataclass
class CliResult:
    code: int
    stdout: str
    stderr: str


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def fixture_docs():
    return load_corpus(FIXTURES_DIR)


@pytest.fixture(scope="session")
def fixture_doc_dicts():
    docs = {}
    for path in sorted(FIXTURES_DIR.glob("*.json")):
        raw = json.loads(path.read_text(encoding="utf-8"))
        docs[raw["story_id"]] = raw
    return docs


@pytest.fixture(scope="session")
def golden_stories():
    return read_chains_file(GOLDEN_DIR / "chains.json")


@pytest.fixture
def run_cli(monkeypatch):
    """Invoke the CLI in-process; returns (exit code, stdout, stderr)."""

    def invoke(*argv: str, env: dict | None = None) -> CliResult:
        if not env or "NECE_SEED" not in env:
            monkeypatch.delenv("NECE_SEED", raising=False)
        if env:
            for key, value in env.items():
                if value is None:
                    monkeypatch.delenv(key, raising=False)
                else:
                    monkeypatch.setenv(key, value)
        out, err = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = cli_main(list(argv))
        return CliResult(code=code, stdout=out.getvalue(), stderr=err.getvalue())

    return invoke
