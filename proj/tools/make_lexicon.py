#!/usr/bin/env python3
"""Regenerates data/lexicon_en.json from the per-POS rule templates below.

The JSON file is the source of truth at runtime; edit it directly or change
the templates here and rerun.
"""
import json
import pathlib


def fiber(op, a, b, channel=0):
    r = {"op": op + "_fiber", "a": a, "b": b}
    if channel:
        r["channel"] = channel
    return r


def area(op, name, channel=0):
    r = {"op": op + "_area", "area": name}
    if channel:
        r["channel"] = channel
    return r


NOUN_FIBERS = [("LEX", "SUBJ"), ("LEX", "OBJ"), ("LEX", "PREP_P"),
               ("DET", "SUBJ"), ("DET", "OBJ"), ("DET", "PREP_P"),
               ("ADJ", "SUBJ"), ("ADJ", "OBJ"), ("ADJ", "PREP_P"),
               ("VERB", "OBJ"), ("PREP", "PREP_P")]


def noun():
    pre = [fiber("disinhibit", a, b) for a, b in NOUN_FIBERS]
    post = [fiber("inhibit", a, b) for a, b in NOUN_FIBERS]
    post += [area("inhibit", "DET"), area("inhibit", "ADJ"), area("inhibit", "PREP"),
             area("inhibit", "PREP_P"),
             area("disinhibit", "SUBJ", 1), area("disinhibit", "OBJ", 1),
             # a verb that already has its object takes no later PP or adverb
             # unless an adverb reopens it
             area("inhibit", "VERB", 2)]
    return pre, post


def verb():
    fibers = [("LEX", "VERB"), ("VERB", "SUBJ"), ("VERB", "ADV")]
    pre = [area("disinhibit", "VERB"), area("disinhibit", "VERB", 2)]
    pre += [fiber("disinhibit", a, b) for a, b in fibers]
    post = [fiber("inhibit", a, b) for a, b in fibers]
    post += [area("inhibit", "SUBJ"), area("disinhibit", "OBJ"), area("inhibit", "ADV")]
    return pre, post


def simple(role):
    pre = [area("disinhibit", role), fiber("disinhibit", "LEX", role)]
    post = [fiber("inhibit", "LEX", role)]
    return pre, post


def adverb():
    pre = [area("disinhibit", "ADV"), fiber("disinhibit", "LEX", "ADV"),
           fiber("disinhibit", "VERB", "ADV"), area("disinhibit", "VERB", 2)]
    post = [fiber("inhibit", "LEX", "ADV"), fiber("inhibit", "VERB", "ADV")]
    return pre, post


def preposition():
    fibers = [("LEX", "PREP"), ("PREP", "SUBJ"), ("PREP", "OBJ"), ("VERB", "PREP")]
    pre = [area("disinhibit", "PREP")] + [fiber("disinhibit", a, b) for a, b in fibers]
    post = [fiber("inhibit", a, b) for a, b in fibers]
    post += [area("inhibit", "SUBJ", 1), area("inhibit", "OBJ", 1),
             area("disinhibit", "PREP_P")]
    return pre, post


WORDS = {
    "noun": (noun, "dogs cats mice birds kids house park garden tree food teeth ball toys "
                   "bones fish people cheese milk trees"),
    "pronoun": (noun, "they them it"),
    "transitive-verb": (verb, "chase see eat like love bite find want"),
    "intransitive-verb": (verb, "run sleep bark play jump swim hide sing"),
    "determiner": (lambda: simple("DET"), "the a some"),
    "adjective": (lambda: simple("ADJ"), "big small angry happy old young red"),
    "adverb": (adverb, "quickly often rarely loudly quietly"),
    "preposition": (preposition, "in near with under from"),
}

# Complementizers open a dependent clause. Relative pronouns behave like
# nouns (they are the subject of their clause); subordinators attach to the
# clause's verb like adverbs.
MARKERS = {
    "relative-pronoun": (noun, "which who that"),
    "complementizer": (lambda: simple("ADV"), "when if because while"),
}


def main():
    entries = []
    for table, marker in ((WORDS, "none"), (MARKERS, "opens_dependent_clause")):
        for pos, (template, words) in table.items():
            for w in words.split():
                pre, post = template()
                entries.append({"surface": w, "pos": pos, "pre_rules": pre,
                                "post_rules": post, "clause_marker": marker})
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "lexicon_en.json"
    out.write_text(json.dumps(entries, indent=1) + "\n")
    print(f"wrote {len(entries)} entries to {out}")


if __name__ == "__main__":
    main()
