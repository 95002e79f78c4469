#!/usr/bin/env python3
"""Writes the hand-authored fixture corpus as interchange documents.

Each story is written in a small markup, one clause per line:

    [A Cinderella@1] swept:sweep [P the hearth] .

  word@N        mention of cluster N (pronoun flag set for pronouns)
  The_Prince@2  underscores join a multi-token mention
  surface:lemma the clause's verb (one per line)
  [A ...] [P ...] agent / patient argument spans

Temporal relations default to "frame i before frame i+1" (conf 0.9);
each story may replace or add relations.

Usage: author_fixtures.py [output_dir]   (default: this directory)
"""

import csv
import json
import os
import sys

PRONOUNS = {"he", "him", "his", "himself", "she", "her", "hers", "herself",
            "it", "its", "itself", "they", "them"}

STORIES = [
    {
        "story_id": "story_a",
        "clusters": {1: "Cinderella", 2: "The Prince", 3: "The Raven"},
        "text": """
[A Cinderella@1] swept:sweep [P the hearth] .
[A She@1] scrubbed:scrub [P the floor] .
[A She@1] bathed:bathe [P herself@1] .
[A The_Prince@2] arrived:arrive .
[A He@2] saw:see [P Cinderella@1] .
[A The_Raven@3] cawed:caw .
[A The_Prince@2] kissed:kiss [P her@1] .
[A Cinderella@1] wept:weep .
[A The_Prince@2] slew:slay [P the dragon] .
[A He@2] married:marry [P Cinderella@1] .
[A They] were:be [P happy] .
[A The_Prince@2] wabbled:wabble .
""",
        # (e1, e2, rel, conf); replaces the default relation of the same pair
        "relations": [(7, 8, "after", 0.8), (5, 6, "vague", 0.9),
                      (2, 3, "simultaneous", 0.7), (9, 10, "before", 0.3)],
    },
    {
        "story_id": "story_b",
        "clusters": {1: "Gretel", 2: "The Woodcutter", 3: "The Witch"},
        "text": """
[A The_Woodcutter@2] felled:fell [P a tree] .
[A Gretel@1] cooked:cook [P the porridge] .
[A She@1] washed:wash [P the pots] .
[A The_Witch@3] lured:lure [P Gretel@1] .
[A The_Witch@3] seized:seize [P her@1] .
[A Gretel@1] cried:cry .
[A The_Woodcutter@2] struck:strike [P the Witch@3] .
[A He@2] killed:kill [P the_witch@3] .
[A Gretel@1] swept:sweep [P the cottage] .
[A She@1] helped:help [P the Woodcutter@2] .
[A The_Woodcutter@2] returned:return .
""",
        "relations": [(6, 7, "before", 0.95)],
    },
    {
        "story_id": "story_c",
        "clusters": {1: "King Grumbletone", 2: "Rosamund", 3: "The Frog"},
        "text": """
[A King_Grumbletone@1] ruled:rule [P the land] .
[A Rosamund@2] combed:comb [P the horse] .
[A She@2] baked:bake [P bread] .
[A The_King@1] slaughtered:slaughter [P the giant] .
[A The_Frog@3] hopped:hop .
[A It@3] watched:watch [P Rosamund@2] .
[A Rosamund@2] cleaned:clean [P the hall] .
[A The_King@1] beat:beat [P the thief] .
[A The_King@1] arrived:arrive .
[A Rosamund@2] loved:love [P the_Frog@3] .
""",
        # Cycle 0 -> 1 -> 9 -> 0 among story-unique (salient) lemmas.
        "relations": [(1, 9, "before", 0.9), (0, 9, "after", 0.9)],
    },
    {
        "story_id": "story_d",
        "clusters": {1: "Marigold", 2: "Tom Thumb", 3: "Queen Mab"},
        "text": """
[A Marigold@1] scrubbed:scrub [P the steps] .
[A She@1] wept:weep .
[A Tom_Thumb@2] arrived:arrive .
[A He@2] gave:give [P Marigold@1 a ring] .
[A Marigold@1] brushed:brush [P her@1 hair] .
[A Tom_Thumb@2] murdered:murder [P the wolf] .
[A Queen_Mab@3] blessed:bless [P them] .
[A He@3] told:tell [P a tale] .
[A She@3] saw:see [P Tom_Thumb@2 and Marigold@1] .
[A Marigold@1] swept:sweep [P the yard] .
[A Tom_Thumb@2] killed:kill [P the bear] .
""",
        "relations": [(3, 4, "before", 0.4)],
    },
    {
        "story_id": "story_e",
        "clusters": {1: "Hans", 2: "Lisbet", 3: "The Miller"},
        "text": """
[A Hans@1] struck:strike [P the troll] .
[A He@1] hanged:hang [P the troll] .
[A Lisbet@2] washed:wash [P the linen] .
[A She@2] cooked:cook [P supper] .
[A The_Miller@3] paid:pay [P Hans@1] .
[A Hans@1] arrived:arrive .
[A He@1] married:marry [P Lisbet@2] .
[A Lisbet@2] wept:weep .
[A Hans@1] had:have [P a farm] .
[A Lisbet@2] cleaned:clean [P the farm] .
""",
        "relations": [(0, 5, "after", 0.9)],
    },
    {
        "story_id": "story_f",
        "clusters": {1: "Ilse", 2: "The Huntsman"},
        "text": """
[A Ilse@1] scrubbed:scrub [P the kettle] .
[A The_Huntsman@2] arrived:arrive .
[A He@2] massacred:massacre [P the boars] .
[A Ilse@1] baked:bake [P a pie] .
[A She@1] washed:wash [P herself@1] .
[A The_Huntsman@2] saw:see [P Ilse@1] .
[A He@2] helped:help [P her@1] .
[A Ilse@1] swept:sweep [P the floor] .
[A The_Huntsman@2] killed:kill [P the wolf] .
""",
        "relations": [],
    },
]


def build(story):
    tokens, clusters, frames = [], {}, []
    mentions = {cid: [] for cid in story["clusters"]}
    offset = 0
    lines = [l for l in story["text"].strip().splitlines() if l.strip()]
    for sent, line in enumerate(lines):
        frame = {"id": sent, "verb": None, "lemma": None, "args": []}
        role, arg_start = None, None
        for raw in line.split():
            opens = raw.startswith("[")
            if opens:
                role = {"[A": "agent", "[P": "patient"}[raw]
                arg_start = len(tokens)
                continue
            closes = raw.endswith("]")
            word = raw.rstrip("]")
            cluster = None
            if "@" in word:
                word, cid = word.split("@")
                cluster = int(cid)
            lemma = None
            if ":" in word:
                word, lemma = word.split(":")
            first = len(tokens)
            for part in word.split("_"):
                if not part:
                    continue
                tokens.append({"i": len(tokens), "sent": sent, "text": part,
                               "lemma": (lemma or part).lower(),
                               "pos": "VERB" if lemma else "X",
                               "start": offset, "end": offset + len(part)})
                offset += len(part) + 1
            if lemma:
                frame["verb"], frame["lemma"] = first, lemma
            if cluster is not None:
                mentions[cluster].append({
                    "first": first, "last": len(tokens) - 1,
                    "pronoun": word.lower() in PRONOUNS})
            if closes:
                frame["args"].append({"role": role, "first": arg_start,
                                      "last": len(tokens) - 1})
                role = None
        frames.append(frame)

    rel = {}
    for i in range(len(frames) - 1):
        rel[(i, i + 1)] = (i, i + 1, "before", 0.9)
    for e1, e2, label, conf in story["relations"]:
        key = (min(e1, e2), max(e1, e2))
        rel[key] = (e1, e2, label, conf)
    temporal = [{"e1": a, "e2": b, "rel": r, "conf": c}
                for (a, b, r, c) in sorted(rel.values(),
                                           key=lambda x: (min(x[:2]), max(x[:2])))]
    return {
        "story_id": story["story_id"],
        "source": "hand-authored fixture",
        "tokens": tokens,
        "clusters": [{"id": cid, "name": name, "mentions": mentions[cid]}
                     for cid, name in story["clusters"].items()],
        "frames": frames,
        "temporal": temporal,
    }


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(
        os.path.abspath(__file__))
    rows = []
    for story in STORIES:
        doc = build(story)
        path = os.path.join(out_dir, f"{doc['story_id']}.nece.json")
        with open(path, "w") as f:
            json.dump(doc, f, indent=2)
            f.write("\n")
        rows.append([doc["story_id"], len(doc["tokens"]), len(doc["clusters"]),
                     len(doc["frames"]), len(doc["temporal"])])
    with open(os.path.join(out_dir, "manifest.csv"), "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["story_id", "tokens", "clusters", "frames", "relations"])
        w.writerows(rows)


if __name__ == "__main__":
    main()
