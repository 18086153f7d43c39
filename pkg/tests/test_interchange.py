"""Document parsing: structural validation, error codes, and round-tripping."""

from __future__ import annotations

import copy
import json

import pytest

from nece.errors import (
    DanglingRefError,
    DocumentSyntaxError,
    DuplicateError,
    NeceError,
    SpanError,
)
from nece.interchange import (
    iter_corpus_paths,
    load_corpus,
    mention_tokens,
    parse_and_validate,
    schema_path,
    serialize,
)


def minimal_doc() -> dict:
    words = ["Ana", "saw", "him", "."]
    tokens = []
    offset = 0
    for i, word in enumerate(words):
        tokens.append(
            {
                "i": i,
                "sent": 0,
                "text": word,
                "lemma": word.lower(),
                "pos": "NOUN",
                "start": offset,
                "end": offset + len(word),
            }
        )
        offset += len(word) + 1
    return {
        "story_id": "tiny",
        "source": "test/0",
        "tokens": tokens,
        "clusters": [
            {"id": 1, "name": "Ana", "mentions": [{"first": 0, "last": 0, "pronoun": False}]},
            {"id": 2, "mentions": [{"first": 2, "last": 2, "pronoun": True}]},
        ],
        "frames": [
            {
                "id": 1,
                "verb": 1,
                "lemma": "see",
                "args": [
                    {"role": "agent", "first": 0, "last": 0},
                    {"role": "patient", "first": 2, "last": 2},
                ],
            },
            {"id": 2, "verb": 3, "lemma": "end", "args": []},
        ],
        "temporal": [{"e1": 1, "e2": 2, "rel": "before", "conf": 0.9}],
    }


def parse(doc: dict):
    return parse_and_validate(json.dumps(doc))


def expect(doc: dict, exc_type, code: str):
    with pytest.raises(exc_type) as info:
        parse(doc)
    assert info.value.code == code
    return info.value


def mutate(**edits):
    doc = minimal_doc()
    doc.update(edits)
    return doc


class TestSyntax:
    def test_minimal_document_parses(self):
        doc = parse(minimal_doc())
        assert doc.story_id == "tiny"
        assert len(doc.tokens) == 4
        assert doc.clusters[1].name is None

    def test_invalid_json(self):
        with pytest.raises(DocumentSyntaxError) as info:
            parse_and_validate(b"{not json")
        assert info.value.code == "E_SYNTAX"

    def test_invalid_utf8(self):
        with pytest.raises(DocumentSyntaxError):
            parse_and_validate(b"\xff\xfe{}")

    def test_root_must_be_object(self):
        with pytest.raises(DocumentSyntaxError):
            parse_and_validate("[1, 2]")

    def test_missing_story_id(self):
        doc = minimal_doc()
        del doc["story_id"]
        expect(doc, DocumentSyntaxError, "E_SYNTAX")

    def test_empty_story_id(self):
        expect(mutate(story_id=""), DocumentSyntaxError, "E_SYNTAX")

    def test_missing_section_arrays(self):
        for key in ("tokens", "clusters", "frames", "temporal"):
            doc = minimal_doc()
            del doc[key]
            expect(doc, DocumentSyntaxError, "E_SYNTAX")

    def test_token_index_must_be_contiguous(self):
        doc = minimal_doc()
        doc["tokens"][2]["i"] = 5
        expect(doc, DocumentSyntaxError, "E_SYNTAX")

    def test_sentence_index_must_not_decrease(self):
        doc = minimal_doc()
        doc["tokens"][1]["sent"] = 1
        doc["tokens"][2]["sent"] = 0
        expect(doc, DocumentSyntaxError, "E_SYNTAX")

    def test_bool_rejected_for_integer_field(self):
        doc = minimal_doc()
        doc["tokens"][0]["i"] = False
        expect(doc, DocumentSyntaxError, "E_SYNTAX")

    def test_bad_arg_role(self):
        doc = minimal_doc()
        doc["frames"][0]["args"][0]["role"] = "experiencer"
        expect(doc, DocumentSyntaxError, "E_SYNTAX")

    def test_bad_temporal_rel(self):
        doc = minimal_doc()
        doc["temporal"][0]["rel"] = "overlaps"
        expect(doc, DocumentSyntaxError, "E_SYNTAX")

    def test_conf_outside_unit_interval(self):
        doc = minimal_doc()
        doc["temporal"][0]["conf"] = 1.5
        expect(doc, DocumentSyntaxError, "E_SYNTAX")

    def test_self_relation(self):
        doc = minimal_doc()
        doc["temporal"][0]["e2"] = 1
        expect(doc, DocumentSyntaxError, "E_SYNTAX")

    def test_cluster_needs_mentions(self):
        doc = minimal_doc()
        doc["clusters"][0]["mentions"] = []
        expect(doc, DocumentSyntaxError, "E_SYNTAX")


class TestReferences:
    def test_mention_span_out_of_range(self):
        doc = minimal_doc()
        doc["clusters"][0]["mentions"][0]["last"] = 99
        expect(doc, DanglingRefError, "E_DANGLING_REF")

    def test_negative_span_start(self):
        doc = minimal_doc()
        doc["clusters"][0]["mentions"][0] = {"first": -1, "last": 0, "pronoun": False}
        expect(doc, DanglingRefError, "E_DANGLING_REF")

    def test_frame_verb_out_of_range(self):
        doc = minimal_doc()
        doc["frames"][0]["verb"] = 42
        expect(doc, DanglingRefError, "E_DANGLING_REF")

    def test_arg_span_out_of_range(self):
        doc = minimal_doc()
        doc["frames"][0]["args"][0]["last"] = 12
        expect(doc, DanglingRefError, "E_DANGLING_REF")

    def test_temporal_names_unknown_frame(self):
        doc = minimal_doc()
        doc["temporal"][0]["e2"] = 9
        expect(doc, DanglingRefError, "E_DANGLING_REF")


class TestDuplicates:
    def test_duplicate_cluster_id(self):
        doc = minimal_doc()
        doc["clusters"][1]["id"] = 1
        expect(doc, DuplicateError, "E_DUPLICATE")

    def test_duplicate_frame_id(self):
        doc = minimal_doc()
        doc["frames"][1]["id"] = 1
        expect(doc, DuplicateError, "E_DUPLICATE")

    def test_duplicate_temporal_pair(self):
        doc = minimal_doc()
        doc["temporal"].append({"e1": 1, "e2": 2, "rel": "vague", "conf": 0.5})
        expect(doc, DuplicateError, "E_DUPLICATE")

    def test_reversed_temporal_pair_is_also_duplicate(self):
        doc = minimal_doc()
        doc["temporal"].append({"e1": 2, "e2": 1, "rel": "after", "conf": 0.5})
        expect(doc, DuplicateError, "E_DUPLICATE")


class TestSpans:
    def test_inverted_mention_span(self):
        doc = minimal_doc()
        doc["clusters"][0]["mentions"][0] = {"first": 2, "last": 0, "pronoun": False}
        expect(doc, SpanError, "E_SPAN")

    def test_overlapping_mentions_within_cluster(self):
        doc = minimal_doc()
        doc["clusters"][0]["mentions"] = [
            {"first": 0, "last": 1, "pronoun": False},
            {"first": 1, "last": 2, "pronoun": False},
        ]
        expect(doc, SpanError, "E_SPAN")

    def test_bad_char_offsets(self):
        doc = minimal_doc()
        doc["tokens"][0]["end"] = 0
        expect(doc, SpanError, "E_SPAN")


class TestRoundTrip:
    def test_serialize_parse_identity(self):
        doc = parse(minimal_doc())
        assert parse_and_validate(serialize(doc)) == doc

    def test_fixture_corpus_round_trips(self, fixture_docs):
        assert len(fixture_docs) == 6
        for doc in fixture_docs:
            assert parse_and_validate(serialize(doc)) == doc

    def test_fixtures_satisfy_published_schema(self, fixture_doc_dicts):
        jsonschema = pytest.importorskip("jsonschema")
        schema = json.loads(schema_path().read_text(encoding="utf-8"))
        for raw in fixture_doc_dicts.values():
            jsonschema.validate(raw, schema)

    def test_schema_rejects_bad_role(self):
        jsonschema = pytest.importorskip("jsonschema")
        schema = json.loads(schema_path().read_text(encoding="utf-8"))
        doc = minimal_doc()
        doc["frames"][0]["args"][0]["role"] = "instrument"
        with pytest.raises(jsonschema.ValidationError):
            jsonschema.validate(doc, schema)


class TestCorpusLoading:
    def test_paths_sorted_and_filtered(self, tmp_path):
        for name in ("b.json", "a.json", "notes.txt", "c.json"):
            src = minimal_doc()
            src["story_id"] = name
            (tmp_path / name).write_text(json.dumps(src), encoding="utf-8")
        (tmp_path / "subdir").mkdir()
        paths = iter_corpus_paths(tmp_path)
        assert [p.name for p in paths] == ["a.json", "b.json", "c.json"]

    def test_duplicate_story_id_across_files(self, tmp_path):
        doc = minimal_doc()
        for name in ("x.json", "y.json"):
            (tmp_path / name).write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(DuplicateError):
            load_corpus(tmp_path)

    def test_corpus_sorted_by_story_id(self, tmp_path):
        for name, sid in (("z.json", "alpha"), ("a.json", "zulu")):
            src = minimal_doc()
            src["story_id"] = sid
            (tmp_path / name).write_text(json.dumps(src), encoding="utf-8")
        docs = load_corpus(tmp_path)
        assert [d.story_id for d in docs] == ["alpha", "zulu"]


def test_mention_tokens_inclusive():
    doc = parse(minimal_doc())
    cluster = doc.clusters[0]
    tokens = list(mention_tokens(doc, cluster.mentions[0]))
    assert [t.text for t in tokens] == ["Ana"]
    arg = doc.frames[0].args[1]
    assert [t.text for t in mention_tokens(doc, arg)] == ["him"]


def test_error_strings_carry_codes():
    try:
        parse_and_validate("{")
    except NeceError as exc:
        assert str(exc).startswith("E_SYNTAX:")
    else:  # pragma: no cover
        pytest.fail("expected a parse failure")


def test_deep_copy_of_fixture_still_valid(fixture_doc_dicts):
    # guards the mutation helpers: an untouched copy must parse cleanly
    for raw in fixture_doc_dicts.values():
        parse(copy.deepcopy(raw))
