#!/usr/bin/env python3
"""Regenerates data/corpus_constituency.json and data/corpus_embedding.json.

Each pattern fixes the reference trees by hand: `deps` lists (head, dependent,
label) over word positions and `spans` tags every word of the main clause as
subject (s), verb phrase head material (v) or object (o). The parser never
sees these references; the corpus runner compares its readouts against them.
"""
import json
import pathlib

# Constituency patterns: two sentences each, the trees shared by position.
CONSTITUENCY = [
    ("N Vi", ["dogs run", "birds sing"],
     [(1, 0, "SUBJ")], "sv"),
    ("N Vt N", ["dogs chase cats", "kids eat cheese"],
     [(1, 0, "SUBJ"), (1, 2, "OBJ")], "svo"),
    ("D N Vi", ["the dogs bark", "some birds sing"],
     [(2, 1, "SUBJ"), (1, 0, "DET")], "ssv"),
    ("D N Vt N", ["the cats chase mice", "some kids want toys"],
     [(2, 1, "SUBJ"), (1, 0, "DET"), (2, 3, "OBJ")], "ssvo"),
    ("N Vt D N", ["dogs find the bones", "people like a park"],
     [(1, 0, "SUBJ"), (1, 3, "OBJ"), (3, 2, "DET")], "svoo"),
    ("D N Vt D N", ["the dogs chase the cats", "some kids love a ball"],
     [(2, 1, "SUBJ"), (1, 0, "DET"), (2, 4, "OBJ"), (4, 3, "DET")], "ssvoo"),
    ("A N Vi", ["big dogs bark", "young birds sing"],
     [(2, 1, "SUBJ"), (1, 0, "ADJ")], "ssv"),
    ("D A N Vi", ["the old dogs sleep", "some happy kids play"],
     [(3, 2, "SUBJ"), (2, 0, "DET"), (2, 1, "ADJ")], "sssv"),
    ("D A N Vt D N", ["the big dogs chase the cats", "some young kids find the toys"],
     [(3, 2, "SUBJ"), (2, 0, "DET"), (2, 1, "ADJ"), (3, 5, "OBJ"), (5, 4, "DET")], "sssvoo"),
    ("D N Vt D A N", ["the cats see the small birds", "some people want a red ball"],
     [(2, 1, "SUBJ"), (1, 0, "DET"), (2, 5, "OBJ"), (5, 3, "DET"), (5, 4, "ADJ")], "ssvooo"),
    ("D A N Vt D A N", ["the big dogs chase the small cats",
                        "some angry birds bite the old fish"],
     [(3, 2, "SUBJ"), (2, 0, "DET"), (2, 1, "ADJ"), (3, 6, "OBJ"), (6, 4, "DET"),
      (6, 5, "ADJ")], "sssvooo"),
    ("N Vi Adv", ["dogs bark loudly", "fish swim quickly"],
     [(1, 0, "SUBJ"), (1, 2, "ADV")], "svv"),
    ("N Adv Vt N", ["cats often chase mice", "kids rarely eat fish"],
     [(2, 0, "SUBJ"), (2, 1, "ADV"), (2, 3, "OBJ")], "svvo"),
    ("D N Vt N Adv", ["the kids eat cheese quickly", "some dogs find bones often"],
     [(2, 1, "SUBJ"), (1, 0, "DET"), (2, 3, "OBJ"), (2, 4, "ADV")], "ssvov"),
    ("Pron Vt Pron", ["they see them", "they want it"],
     [(1, 0, "SUBJ"), (1, 2, "OBJ")], "svo"),
    ("N Vi P N", ["birds sing in trees", "dogs sleep near people"],
     [(1, 0, "SUBJ"), (1, 2, "PREP"), (2, 3, "PREP_P")], "svvv"),
    ("N Vi P D N", ["dogs play in the park", "mice hide under a tree"],
     [(1, 0, "SUBJ"), (1, 2, "PREP"), (2, 4, "PREP_P"), (4, 3, "DET")], "svvvv"),
    ("D N P D N Vi", ["the kids in the park sleep", "some birds near the house sing"],
     [(5, 1, "SUBJ"), (1, 0, "DET"), (1, 2, "PREP"), (2, 4, "PREP_P"), (4, 3, "DET")],
     "sssssv"),
    ("D N P D N Vt N Adv", ["the kids in the garden eat cheese quickly",
                            "the cats from the house chase birds often"],
     [(5, 1, "SUBJ"), (1, 0, "DET"), (1, 2, "PREP"), (2, 4, "PREP_P"), (4, 3, "DET"),
      (5, 6, "OBJ"), (5, 7, "ADV")], "sssssvov"),
    ("D N Adv Vi P D N", ["the dogs often play in the park",
                          "some fish rarely swim under the tree"],
     [(3, 1, "SUBJ"), (1, 0, "DET"), (3, 2, "ADV"), (3, 4, "PREP"), (4, 6, "PREP_P"),
      (6, 5, "DET")], "ssvvvvv"),
]

# Embedding structures: four sentences each. Word positions skip commas.
EMBEDDING = [
    ("center, complement clause", 1,
     ["dogs , when they run , chase cats",
      "cats , if they sleep , see mice",
      "kids , because they play , love toys",
      "birds , while they sing , eat food"],
     [(4, 0, "SUBJ"), (4, 5, "OBJ"), (0, 3, "DS"), (3, 1, "ADV"), (3, 2, "SUBJ")]),
    ("subject relative", 1,
     ["dogs , which chase cats , run",
      "kids , who love toys , play",
      "birds , that eat fish , sing",
      "mice , which see cats , hide"],
     [(4, 0, "SUBJ"), (0, 2, "DS"), (2, 1, "SUBJ"), (2, 3, "OBJ")]),
    ("object relative, edge", 1,
     ["dogs chase cats , which eat mice",
      "cats see birds , that like trees",
      "people love kids , who want toys",
      "kids find dogs , which bite bones"],
     [(1, 0, "SUBJ"), (1, 2, "OBJ"), (2, 4, "DS"), (4, 3, "SUBJ"), (4, 5, "OBJ")]),
    ("center with nested relative", 2,
     ["dogs , when they see cats , which sleep , run",
      "kids , if they find mice , that hide , sing",
      "birds , because they see fish , which swim , sing",
      "cats , while they chase mice , which hide , jump"],
     [(7, 0, "SUBJ"), (0, 3, "DS"), (3, 1, "ADV"), (3, 2, "SUBJ"), (3, 4, "OBJ"),
      (4, 6, "DS"), (6, 5, "SUBJ")]),
    ("edge with nested relative", 2,
     ["dogs chase cats , which see mice , that sleep",
      "kids like dogs , which chase birds , that sing",
      "people see birds , which eat fish , that swim",
      "kids want dogs , which love toys , that jump"],
     [(1, 0, "SUBJ"), (1, 2, "OBJ"), (2, 4, "DS"), (4, 3, "SUBJ"), (4, 5, "OBJ"),
      (5, 7, "DS"), (7, 6, "SUBJ")]),
]


def words_of(sentence):
    return [t for t in sentence.split() if t != ","]


def dependency(deps, words):
    heads = {d for _, d, _ in deps}
    roots = [i for i in range(len(words)) if i not in heads]
    assert len(roots) == 1, (words, roots)
    return {"root": roots[0], "edges": [list(e) for e in sorted(deps)]}


def constituency(spans):
    return {role: [i for i, c in enumerate(spans) if c == tag]
            for role, tag in (("subject", "s"), ("verb", "v"), ("object", "o"))}


def main():
    data = pathlib.Path(__file__).resolve().parent.parent / "data"
    vocabulary = {e["surface"] for e in json.loads((data / "lexicon_en.json").read_text())}
    for table in (CONSTITUENCY, EMBEDDING):
        for row in table:
            sentences = row[1] if table is CONSTITUENCY else row[2]
            for sentence in sentences:
                missing = set(words_of(sentence)) - vocabulary
                assert not missing, (sentence, missing)
    cases = []
    for p, (pattern, sentences, deps, spans) in enumerate(CONSTITUENCY, 1):
        for sentence in sentences:
            words = words_of(sentence)
            assert len(words) == len(spans) == len(deps) + 1, sentence
            cases.append({
                "sentence": sentence,
                "expected_dependency": dependency(deps, words),
                "expected_constituency": constituency(spans),
                "tags": {"pattern": p, "shape": pattern, "depth": 0},
            })
    (data / "corpus_constituency.json").write_text(
        json.dumps({"mode": {"constituency": True, "embedding": False}, "cases": cases},
                   indent=1) + "\n")

    cases = []
    for s, (structure, depth, sentences, deps) in enumerate(EMBEDDING, 1):
        for sentence in sentences:
            words = words_of(sentence)
            assert len(words) == len(deps) + 1, sentence
            cases.append({
                "sentence": sentence,
                "expected_dependency": dependency(deps, words),
                "tags": {"pattern": s, "shape": structure, "depth": depth},
            })
    (data / "corpus_embedding.json").write_text(
        json.dumps({"mode": {"constituency": False, "embedding": True}, "cases": cases},
                   indent=1) + "\n")


if __name__ == "__main__":
    main()
