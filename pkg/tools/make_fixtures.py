#!/usr/bin/env python3
"""Regenerate the hand-authored fixture corpus under fixtures/.

Each story is written out as an interchange document plus a row in
fixtures/manifest.csv. The stories are designed so the whole pipeline is
hand-checkable:

- every story has exactly 11 frames: 8 content events plus the three chaff
  lemmas (see, come, be), each of which appears exactly once in every story,
  so the chaff tf-idf score (1/11) sits strictly below every content score
  and the 0.3-quantile salience threshold lands exactly on the cheapest
  content event;
- "be" additionally exercises the auxiliary stoplist and the
  unmapped-lemma path (it is absent from the lexicon);
- story_a carries a 3-frame temporal cycle over chaff frames, story_b a
  chain-reordering `after` relation, story_f no relations at all;
- story_c's queen is gendered only by her cluster name, story_e's child
  stays ungendered but is a main character.

Run from the repository root: python3 tools/make_fixtures.py
"""

import csv
import json
from pathlib import Path

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"

FEMALE_PRONOUNS = {"she", "her", "hers", "herself"}
MALE_PRONOUNS = {"he", "him", "his", "himself"}
PRONOUNS = FEMALE_PRONOUNS | MALE_PRONOUNS

# sentence := (words, frames, mentions)
#   frames   := [(lemma, verb_rel_idx, {role: (first_rel, last_rel)})]
#   mentions := [(cluster_id, first_rel, last_rel)]
# indices are token positions relative to the sentence start

STORIES = {
    "story_a": {
        "source": "hand/1.0",
        "clusters": {0: "Hans", 1: "Greta", 2: "the innkeeper"},
        "sentences": [
            ("Hans journeyed to the dark forest .",
             [("journey", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("Greta came to the old inn .",
             [("come", 1, {"agent": (0, 0)})], [(1, 0, 0)]),
            ("She washed the supper dishes .",
             [("wash", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("The innkeeper was weary .",
             [("be", 2, {"agent": (0, 1)})], [(2, 0, 1)]),
            ("The innkeeper saw the grey dawn .",
             [("see", 2, {"agent": (0, 1), "patient": (3, 5)})], [(2, 0, 1)]),
            ("She cooked a rich stew .",
             [("cook", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("Greta ate the rich stew .",
             [("eat", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("A fierce giant struck Hans .",
             [("strike", 3, {"agent": (0, 2), "patient": (4, 4)})], [(0, 4, 4)]),
            ("He killed the fierce giant .",
             [("kill", 1, {"agent": (0, 0), "patient": (2, 4)})], [(0, 0, 0)]),
            ("She wept at the gate .",
             [("weep", 1, {"agent": (0, 0)})], [(1, 0, 0)]),
            ("Hans sang by the fire .",
             [("sing", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
        ],
        # frames: 1 journey, 2 come, 3 wash, 4 be, 5 see, 6 cook, 7 eat,
        #         8 strike, 9 kill, 10 weep, 11 sing
        # cycle 4 -> 5 -> 2 -> 4 (chaff frames only); (2,1) below threshold
        "temporal": [
            (1, 3, "before", 0.95),
            (4, 5, "before", 0.9),
            (5, 2, "before", 0.8),
            (2, 4, "before", 0.85),
            (2, 1, "before", 0.3),
            (3, 6, "vague", 0.9),
            (6, 7, "simultaneous", 0.8),
        ],
    },
    "story_b": {
        "source": "hand/1.0",
        "clusters": {0: "Rolf", 1: "Elsa", 2: "the wolf"},
        "sentences": [
            ("Rolf journeyed over the high hills .",
             [("journey", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("Elsa sobbed by the door .",
             [("sob", 1, {"agent": (0, 0)})], [(1, 0, 0)]),
            ("A grey wolf came near .",
             [("come", 3, {"agent": (0, 2)})], [(2, 0, 2)]),
            ("She washed the linen sheets .",
             [("wash", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("Elsa travelled to the market .",
             [("travel", 1, {"agent": (0, 0)})], [(1, 0, 0)]),
            ("She cooked a plain supper .",
             [("cook", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("Elsa ate the plain supper .",
             [("eat", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("He gallivanted across the yard .",
             [("gallivant", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("Rolf killed the grey wolf .",
             [("kill", 1, {"agent": (0, 0), "patient": (2, 4)})],
             [(0, 0, 0), (2, 2, 4)]),
            ("The wolf was dead .",
             [("be", 2, {"agent": (0, 1)})], [(2, 0, 1)]),
            ("He saw the pale moon .",
             [("see", 1, {"agent": (0, 0), "patient": (2, 4)})], [(0, 0, 0)]),
        ],
        # frame 2 (sob) is pushed after frame 5 (travel) by the `after` edge
        "temporal": [
            (2, 5, "after", 0.9),
            (9, 7, "vague", 0.6),
            (1, 4, "before", 0.7),
        ],
    },
    "story_c": {
        "source": "hand/1.0",
        "clusters": {0: "Otto", 1: "the Queen", 2: "the page"},
        "sentences": [
            ("Otto journeyed to the far castle .",
             [("journey", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("He knew the old secret .",
             [("know", 1, {"agent": (0, 0), "patient": (2, 4)})], [(0, 0, 0)]),
            ("The page was idle .",
             [("be", 2, {"agent": (0, 1)})], [(2, 0, 1)]),
            ("The page came to the hall .",
             [("come", 2, {"agent": (0, 1)})], [(2, 0, 1)]),
            ("The Queen cooked the royal broth .",
             [("cook", 2, {"agent": (0, 1), "patient": (3, 5)})], [(1, 0, 1)]),
            ("The Queen ate the royal broth .",
             [("eat", 2, {"agent": (0, 1), "patient": (3, 5)})], [(1, 0, 1)]),
            ("Otto saw the black dragon .",
             [("see", 1, {"agent": (0, 0), "patient": (2, 4)})], [(0, 0, 0)]),
            ("The black dragon struck Otto .",
             [("strike", 3, {"agent": (0, 2), "patient": (4, 4)})], [(0, 4, 4)]),
            ("He killed the black dragon .",
             [("kill", 1, {"agent": (0, 0), "patient": (2, 4)})], [(0, 0, 0)]),
            ("The Queen cried in the hall .",
             [("cry", 2, {"agent": (0, 1)})], [(1, 0, 1)]),
            ("The Queen sang a soft tune .",
             [("sing", 2, {"agent": (0, 1)})], [(1, 0, 1)]),
        ],
        # conf exactly at the 0.5 threshold still counts
        "temporal": [
            (1, 2, "before", 0.5),
            (8, 9, "before", 0.95),
            (5, 6, "vague", 0.7),
        ],
    },
    "story_d": {
        "source": "hand/1.0",
        "clusters": {0: "Franz", 1: "Liesel"},
        "sentences": [
            ("Franz journeyed through the deep snow .",
             [("journey", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("Liesel washed herself at dawn .",
             [("wash", 1, {"agent": (0, 0), "patient": (2, 2)})],
             [(1, 0, 0), (1, 2, 2)]),
            ("She said a quiet prayer .",
             [("say", 1, {"agent": (0, 0)})], [(1, 0, 0)]),
            ("Liesel cooked the thin soup .",
             [("cook", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("She ate the thin soup .",
             [("eat", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("Franz saw the coming storm .",
             [("see", 1, {"agent": (0, 0), "patient": (2, 4)})], [(0, 0, 0)]),
            ("A masked robber hit Liesel .",
             [("hit", 3, {"agent": (0, 2), "patient": (4, 4)})], [(1, 4, 4)]),
            ("Liesel killed the pale spider .",
             [("kill", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("He wept by the cold hearth .",
             [("weep", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("Franz came to the gate .",
             [("come", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("Franz was calm .",
             [("be", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
        ],
        "temporal": [
            (2, 4, "before", 0.9),
            (7, 8, "before", 0.8),
            (1, 9, "vague", 0.9),
        ],
    },
    "story_e": {
        "source": "hand/1.0",
        "clusters": {0: "Jakob", 1: "Marta", 2: "the child"},
        "sentences": [
            ("Jakob journeyed along the river road .",
             [("journey", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("Marta washed the wool clothes .",
             [("wash", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("The child came to the barn .",
             [("come", 2, {"agent": (0, 1)})], [(2, 0, 1)]),
            ("He thought about the long winter .",
             [("think", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("The child slept in the warm hay .",
             [("sleep", 2, {"agent": (0, 1)})], [(2, 0, 1)]),
            ("She cooked the sweet porridge .",
             [("cook", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
            ("Marta ate the porridge with the child .",
             [("eat", 1, {"agent": (0, 0), "patient": (2, 3)})],
             [(1, 0, 0), (2, 5, 6)]),
            ("A rough bandit hit Jakob .",
             [("hit", 3, {"agent": (0, 2), "patient": (4, 4)})], [(0, 4, 4)]),
            ("She cried with the child at the news .",
             [("cry", 1, {"agent": (0, 0)})], [(1, 0, 0), (2, 3, 4)]),
            ("Jakob was silent .",
             [("be", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("Marta saw the first star .",
             [("see", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
        ],
        "temporal": [
            (1, 4, "before", 0.8),
            (8, 9, "before", 0.9),
        ],
    },
    "story_f": {
        "source": "hand/1.0",
        "clusters": {0: "Bruno", 1: "Maya"},
        "sentences": [
            ("Maya travelled to the spring fair .",
             [("travel", 1, {"agent": (0, 0)})], [(1, 0, 0)]),
            ("Bruno learned the smith craft .",
             [("learn", 1, {"agent": (0, 0), "patient": (2, 4)})], [(0, 0, 0)]),
            ("Maya sang and learned the merry song .",
             [("sing", 1, {"agent": (0, 0)}),
              ("learn", 3, {"agent": (0, 0), "patient": (4, 6)})],
             [(1, 0, 0)]),
            ("He came to the broad river .",
             [("come", 1, {"agent": (0, 0)})], [(0, 0, 0)]),
            ("Bruno washed the iron pot .",
             [("wash", 1, {"agent": (0, 0), "patient": (2, 4)})], [(0, 0, 0)]),
            ("A wild boar struck Bruno .",
             [("strike", 3, {"agent": (0, 2), "patient": (4, 4)})], [(0, 4, 4)]),
            ("He killed the wild boar .",
             [("kill", 1, {"agent": (0, 0), "patient": (2, 4)})], [(0, 0, 0)]),
            ("Bruno drank the cold ale with Maya .",
             [("drink", 1, {"agent": (0, 0), "patient": (2, 4)})],
             [(0, 0, 0), (1, 6, 6)]),
            ("Maya was glad .",
             [("be", 1, {"agent": (0, 0)})], [(1, 0, 0)]),
            ("She saw the bright dawn .",
             [("see", 1, {"agent": (0, 0), "patient": (2, 4)})], [(1, 0, 0)]),
        ],
        "temporal": [],
    },
}


def build_story(story_id: str, spec: dict) -> dict:
    tokens = []
    frames = []
    mentions_by_cluster: dict[int, list] = {cid: [] for cid in spec["clusters"]}
    offset = 0
    frame_id = 0
    for sent_idx, (text, sent_frames, sent_mentions) in enumerate(spec["sentences"]):
        words = text.split(" ")
        base = len(tokens)
        verb_rel = {rel: lemma for lemma, rel, _ in sent_frames}
        for rel, word in enumerate(words):
            lower = word.lower().rstrip(".")
            if rel in verb_rel:
                lemma, pos = verb_rel[rel], "VERB"
            elif word == ".":
                lemma, pos = ".", "PUNCT"
            elif lower in PRONOUNS:
                lemma, pos = lower, "PRON"
            elif word[0].isupper() and rel > 0:
                lemma, pos = lower, "PROPN"
            else:
                lemma, pos = lower, "NOUN"
            tokens.append({
                "i": base + rel,
                "sent": sent_idx,
                "text": word,
                "lemma": lemma,
                "pos": pos,
                "start": offset,
                "end": offset + len(word),
            })
            offset += len(word) + 1
        for lemma, vrel, args in sent_frames:
            frame_id += 1
            frames.append({
                "id": frame_id,
                "verb": base + vrel,
                "lemma": lemma,
                "args": [
                    {"role": role, "first": base + f, "last": base + l}
                    for role, (f, l) in sorted(args.items())
                ],
            })
        for cid, f, l in sent_mentions:
            token = tokens[base + f]
            pronoun = f == l and token["text"].lower() in PRONOUNS
            mentions_by_cluster[cid].append(
                {"first": base + f, "last": base + l, "pronoun": pronoun}
            )
    clusters = [
        {"id": cid, "name": name, "mentions": mentions_by_cluster[cid]}
        for cid, name in sorted(spec["clusters"].items())
    ]
    temporal = [
        {"e1": e1, "e2": e2, "rel": rel, "conf": conf}
        for e1, e2, rel, conf in spec["temporal"]
    ]
    return {
        "story_id": story_id,
        "source": spec["source"],
        "tokens": tokens,
        "clusters": clusters,
        "frames": frames,
        "temporal": temporal,
    }


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    rows = []
    for story_id, spec in sorted(STORIES.items()):
        doc = build_story(story_id, spec)
        n_frames = len(doc["frames"])
        assert n_frames == 11, f"{story_id}: expected 11 frames, built {n_frames}"
        path = FIXTURE_DIR / f"{story_id}.nece.json"
        path.write_text(
            json.dumps(doc, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        rows.append({
            "story_id": story_id,
            "tokens": len(doc["tokens"]),
            "clusters": len(doc["clusters"]),
            "frames": n_frames,
            "relations": len(doc["temporal"]),
        })
        print(f"wrote {path.name}: {rows[-1]}")
    with (FIXTURE_DIR / "manifest.csv").open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["story_id", "tokens", "clusters", "frames", "relations"]
        )
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote manifest.csv ({len(rows)} stories)")


if __name__ == "__main__":
    main()
