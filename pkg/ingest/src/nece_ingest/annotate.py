"""Rule-based annotation: text in, validated interchange bytes out.

Four passes over each story, all deterministic:

1. tokenize: regex tokens with character offsets, sentences split on
   terminal punctuation, a closed-class table plus a verb vocabulary for
   part-of-speech tags, and suffix rules plus an irregular table for verb
   lemmas.
2. coref: one cluster per distinct proper-name string; gendered personal
   pronouns attach to the most recent cluster whose observed gender does
   not conflict.
3. srl: one frame per verb token; the agent is the nearest mention ending
   before the verb in its sentence, the patient the nearest mention after
   it, falling back to bare noun runs on either side.
4. temporal: consecutive frames are linked, same-sentence pairs with the
   native OVERLAP label and cross-sentence pairs with BEFORE, then the
   native labels collapse to the four interchange relations through the
   shipped mapping table.

``annotate_story`` assembles the result and round-trips it through
``nece.interchange.parse_and_validate`` so only well-formed documents
ever leave this module.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources

from nece.interchange import parse_and_validate, serialize

from nece_ingest.config import AdapterConfig
from nece_ingest.errors import UpstreamError

_TOKEN_RE = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)?|[0-9]+|[^\sA-Za-z0-9]")
_SENTENCE_FINAL = {".", "!", "?"}

_MALE_PRONOUNS = frozenset({"he", "him", "his", "himself"})
_FEMALE_PRONOUNS = frozenset({"she", "her", "hers", "herself"})
_PRONOUNS = _MALE_PRONOUNS | _FEMALE_PRONOUNS | frozenset({
    "it", "its", "itself", "they", "them", "their", "theirs", "themselves",
    "i", "me", "my", "mine", "myself", "we", "us", "our", "ours",
    "ourselves", "you", "your", "yours", "yourself", "yourselves",
})

# Closed-class words; anything here never becomes a name or a verb.
_FUNCTION_TAGS: dict[str, str] = {}
_FUNCTION_TAGS.update(dict.fromkeys(
    ("the", "a", "an", "this", "that", "these", "those", "each", "every",
     "some", "any", "no", "all", "both"), "DET"))
_FUNCTION_TAGS.update(dict.fromkeys(
    ("in", "on", "at", "by", "for", "from", "of", "to", "with", "through",
     "over", "under", "into", "onto", "near", "beside", "between", "behind",
     "during", "until", "upon", "out", "off", "up", "down", "across",
     "along", "around", "within", "toward", "towards", "before", "after",
     "about", "against", "without"), "ADP"))
_FUNCTION_TAGS.update(dict.fromkeys(
    ("and", "or", "but", "nor", "yet"), "CCONJ"))
_FUNCTION_TAGS.update(dict.fromkeys(
    ("because", "while", "when", "if", "than", "as", "though", "although",
     "once", "since"), "SCONJ"))
_FUNCTION_TAGS.update(dict.fromkeys(
    ("then", "there", "here", "now", "soon", "never", "always", "often",
     "again", "also", "just", "only", "very", "too", "not", "quietly",
     "slowly", "away", "back", "still", "already"), "ADV"))


def _load_verb_vocab() -> frozenset[str]:
    text = resources.files("nece_ingest.data").joinpath("verbs.txt").read_text("utf-8")
    return frozenset(
        line.strip() for line in text.splitlines()
        if line.strip() and not line.startswith("#")
    )


def _load_irregulars() -> dict[str, str]:
    text = resources.files("nece_ingest.data").joinpath("irregular_verbs.tsv").read_text("utf-8")
    table: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        form, base = line.split("\t")
        table[form] = base
    return table


def _load_label_map() -> dict[str, str]:
    text = resources.files("nece_ingest.data").joinpath("temporal_label_map.tsv").read_text("utf-8")
    table: dict[str, str] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        native, collapsed = line.split("\t")
        table[native] = collapsed
    return table


_VERB_VOCAB = _load_verb_vocab()
_IRREGULARS = _load_irregulars()
_LABEL_MAP = _load_label_map()

_VOWELS = "aeiou"


def _lemma_candidates(form: str) -> list[str]:
    """Possible base forms for an inflected verb, most specific first."""
    out = [form]
    if form.endswith("ies") and len(form) > 4:
        out.append(form[:-3] + "y")
    if form.endswith("ied") and len(form) > 4:
        out.append(form[:-3] + "y")
    if form.endswith("es") and len(form) > 3:
        out.append(form[:-2])
    if form.endswith("s") and len(form) > 2:
        out.append(form[:-1])
    if form.endswith("ed") and len(form) > 3:
        out.append(form[:-1])          # baked -> bake
        out.append(form[:-2])          # watched -> watch
        if len(form) > 4 and form[-3] == form[-4] and form[-3] not in _VOWELS:
            out.append(form[:-3])      # stopped -> stop
    if form.endswith("ing") and len(form) > 4:
        stem = form[:-3]
        out.append(stem)               # hunting -> hunt
        out.append(stem + "e")         # baking -> bake
        if len(stem) > 1 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS:
            out.append(stem[:-1])      # running -> run
    return out


def verb_lemma(form: str) -> str | None:
    """Base form when the word can be read as a known verb, else None."""
    low = form.lower()
    if low in _IRREGULARS:
        return _IRREGULARS[low]
    for candidate in _lemma_candidates(low):
        if candidate in _VERB_VOCAB:
            return candidate
    return None


def collapse_temporal_label(native: str) -> str:
    """Map a native classifier label onto an interchange relation."""
    try:
        return _LABEL_MAP[native]
    except KeyError:
        raise UpstreamError(
            f"temporal classifier produced unknown label {native!r}"
        ) from None


@dataclass
class _Tok:
    index: int
    sent: int
    text: str
    start: int
    end: int
    pos: str = "NOUN"
    lemma: str = ""


def _noun_lemma(low: str) -> str:
    if len(low) > 3 and low.endswith("s") and not low.endswith("ss"):
        return low[:-1]
    return low


def tokenize(text: str) -> list[_Tok]:
    """Split text into tagged tokens with character offsets."""
    toks: list[_Tok] = []
    sent = 0
    pending_break = False
    for m in _TOKEN_RE.finditer(text):
        word = m.group()
        if pending_break and word not in _SENTENCE_FINAL:
            sent += 1
            pending_break = False
        toks.append(_Tok(len(toks), sent, word, m.start(), m.end()))
        if word in _SENTENCE_FINAL:
            pending_break = True

    seen_sent: set[int] = set()
    for t in toks:
        low = t.text.lower()
        initial = t.sent not in seen_sent
        if any(ch.isalnum() for ch in t.text):
            seen_sent.add(t.sent)
        if not any(ch.isalnum() for ch in t.text):
            t.pos, t.lemma = "PUNCT", t.text
        elif t.text.isdigit():
            t.pos, t.lemma = "NUM", t.text
        elif low in _PRONOUNS:
            t.pos, t.lemma = "PRON", low
        elif low in _FUNCTION_TAGS:
            t.pos, t.lemma = _FUNCTION_TAGS[low], low
        elif t.text[0].isupper() and not initial:
            t.pos, t.lemma = "PROPN", low
        else:
            base = verb_lemma(t.text)
            if base is not None:
                t.pos, t.lemma = "VERB", base
            elif t.text[0].isupper():
                # sentence-initial capitalized word that is neither
                # closed-class nor a known verb: read it as a name
                t.pos, t.lemma = "PROPN", low
            else:
                t.pos, t.lemma = "NOUN", _noun_lemma(low)
    return toks


@dataclass
class _Cluster:
    cid: int
    name: str
    mentions: list[tuple[int, int, bool]] = field(default_factory=list)
    gender: str | None = None
    last_pos: int = -1


def _name_runs(toks: list[_Tok]) -> list[tuple[int, int]]:
    """Maximal runs of adjacent PROPN tokens inside one sentence."""
    runs: list[tuple[int, int]] = []
    i = 0
    while i < len(toks):
        if toks[i].pos != "PROPN":
            i += 1
            continue
        j = i
        while (
            j + 1 < len(toks)
            and toks[j + 1].pos == "PROPN"
            and toks[j + 1].sent == toks[i].sent
        ):
            j += 1
        runs.append((i, j))
        i = j + 1
    return runs


def resolve_clusters(toks: list[_Tok]) -> list[_Cluster]:
    """Group name mentions by surface string and attach gendered pronouns.

    A pronoun picks the most recently mentioned cluster whose gender, as
    established by earlier pronouns, does not conflict with its own.
    Pronouns with no compatible antecedent are dropped.
    """
    by_key: dict[str, _Cluster] = {}
    order: list[_Cluster] = []

    events: list[tuple[int, str, tuple[int, int]]] = []
    for first, last in _name_runs(toks):
        events.append((first, "name", (first, last)))
    for t in toks:
        if t.pos == "PRON" and t.lemma in (_MALE_PRONOUNS | _FEMALE_PRONOUNS):
            events.append((t.index, "pron", (t.index, t.index)))
    events.sort()

    for _, kind, (first, last) in events:
        if kind == "name":
            key = " ".join(toks[k].text for k in range(first, last + 1))
            cluster = by_key.get(key)
            if cluster is None:
                cluster = _Cluster(cid=len(order) + 1, name=key)
                by_key[key] = cluster
                order.append(cluster)
            cluster.mentions.append((first, last, False))
            cluster.last_pos = last
        else:
            gender = "male" if toks[first].lemma in _MALE_PRONOUNS else "female"
            for cluster in sorted(order, key=lambda c: c.last_pos, reverse=True):
                if cluster.gender is None or cluster.gender == gender:
                    cluster.mentions.append((first, last, True))
                    cluster.gender = gender
                    cluster.last_pos = last
                    break
    return order


def _noun_run_spans(toks: list[_Tok], sent: int) -> list[tuple[int, int]]:
    runs: list[tuple[int, int]] = []
    i = 0
    while i < len(toks):
        if toks[i].pos != "NOUN" or toks[i].sent != sent:
            i += 1
            continue
        j = i
        while j + 1 < len(toks) and toks[j + 1].pos == "NOUN" and toks[j + 1].sent == sent:
            j += 1
        runs.append((i, j))
        i = j + 1
    return runs


def build_frames(
    toks: list[_Tok], clusters: list[_Cluster]
) -> list[dict]:
    """One frame per verb token, with nearest-mention agent and patient."""
    mention_spans = sorted(
        (first, last)
        for c in clusters
        for first, last, _ in c.mentions
    )
    frames: list[dict] = []
    for t in toks:
        if t.pos != "VERB":
            continue
        sent = t.sent
        args: list[dict] = []

        agent = None
        for first, last in mention_spans:
            if last < t.index and toks[first].sent == sent:
                if agent is None or last > agent[1]:
                    agent = (first, last)
        if agent is None:
            for first, last in _noun_run_spans(toks, sent):
                if last < t.index:
                    if agent is None or last > agent[1]:
                        agent = (first, last)
        if agent is not None:
            args.append({"role": "agent", "first": agent[0], "last": agent[1]})

        patient = None
        for first, last in mention_spans:
            if first > t.index and toks[first].sent == sent:
                if patient is None or first < patient[0]:
                    patient = (first, last)
        if patient is None:
            for first, last in _noun_run_spans(toks, sent):
                if first > t.index:
                    if patient is None or first < patient[0]:
                        patient = (first, last)
        if patient is not None:
            args.append({"role": "patient", "first": patient[0], "last": patient[1]})

        frames.append({
            "id": len(frames) + 1,
            "verb": t.index,
            "lemma": t.lemma,
            "args": args,
        })
    return frames


def link_temporal(toks: list[_Tok], frames: list[dict]) -> list[dict]:
    """Native labels for consecutive frame pairs, collapsed for interchange.

    Same-sentence neighbours come out of the classifier as OVERLAP at 0.6
    confidence, cross-sentence neighbours as BEFORE at 0.85.
    """
    relations: list[dict] = []
    for prev, nxt in zip(frames, frames[1:]):
        same = toks[prev["verb"]].sent == toks[nxt["verb"]].sent
        native = "OVERLAP" if same else "BEFORE"
        conf = 0.6 if same else 0.85
        relations.append({
            "e1": prev["id"],
            "e2": nxt["id"],
            "rel": collapse_temporal_label(native),
            "conf": conf,
        })
    return relations


def annotate_story(text: str, cfg: AdapterConfig, story_id: str = "story") -> bytes:
    """Annotate one story and return validated interchange bytes.

    Raises UpstreamError when the text is empty or no annotation stage
    can produce output for it.
    """
    if not text or not text.strip():
        raise UpstreamError(f"{story_id}: empty story text")

    toks = tokenize(text)
    if not toks:
        raise UpstreamError(f"{story_id}: tokenizer produced no tokens")

    clusters = resolve_clusters(toks)
    frames = build_frames(toks, clusters)
    if not frames:
        raise UpstreamError(f"{story_id}: no events detected")
    temporal = link_temporal(toks, frames)

    # imported here: the package __init__ imports this module
    from nece_ingest import __version__

    raw = {
        "story_id": story_id,
        "source": cfg.source_string(__version__),
        "tokens": [
            {
                "i": t.index, "sent": t.sent, "text": t.text,
                "lemma": t.lemma, "pos": t.pos,
                "start": t.start, "end": t.end,
            }
            for t in toks
        ],
        "clusters": [
            {
                "id": c.cid,
                "name": c.name,
                "mentions": [
                    {"first": first, "last": last, "pronoun": pronoun}
                    for first, last, pronoun in c.mentions
                ],
            }
            for c in clusters
        ],
        "frames": frames,
        "temporal": temporal,
    }
    doc = parse_and_validate(json.dumps(raw))
    return serialize(doc)
