#!/usr/bin/env python3
"""Generate the synthetic dependency-tree corpus used by the semparse tests.

Six passages of five sentences. Sentence i uses sentence shape i % 12, so
every mapping rule in data/semparse/rules.txt fires at least twice. Output
is deterministic for a given seed.

    python3 tools/gen_corpus.py [--seed 7] [--out data/semparse/synthetic]
"""
import argparse
import json
import pathlib
import random

NOUNS = ["gas", "piston", "water", "pipe", "tank", "valve", "pump", "heater",
         "engine", "fuel", "air", "wheel", "wing", "cabin", "door", "seal",
         "pressure", "temperature", "volume", "gizmo"]
AGENTS = ["worker", "pilot", "engine", "pump", "gizmo"]
PLACES = ["tank", "pipe", "cabin", "engine", "valve"]
ADJS = ["hot", "cold", "heavy", "full", "small", "shiny"]
VERBS = {  # lemma: (3rd person singular, past participle)
    "increase": ("increases", "increased"), "decrease": ("decreases", "decreased"),
    "heat": ("heats", "heated"), "cool": ("cools", "cooled"),
    "push": ("pushes", "pushed"), "fill": ("fills", "filled"),
    "open": ("opens", "opened"), "turn": ("turns", "turned"),
}
INTRANS = {"move": "moves", "rise": "rises", "flow": "flows", "leak": "leaks",
           "expand": "expands", "increase": "increases", "enter": "enters"}
DETS = ["the", "the", "the", "a", "another"]


class Builder:
    def __init__(self):
        self.toks = []

    def add(self, text, lemma, pos, dep, head=None):
        self.toks.append({"index": len(self.toks), "text": text, "lemma": lemma,
                          "pos": pos, "head": head, "dep": dep})
        return len(self.toks) - 1

    def set_head(self, i, head):
        self.toks[i]["head"] = head

    def noun_phrase(self, det, noun, adj=None):
        """Returns (first token index, noun index); heads fixed later."""
        d = self.add(det.capitalize() if not self.toks else det, det, "DET", "det")
        a = self.add(adj, adj, "ADJ", "amod") if adj else None
        n = self.add(noun, noun, "NOUN", "?")
        self.set_head(d, n)
        if a is not None:
            self.set_head(a, n)
        return n

    def finish(self, root):
        self.set_head(root, -1)
        self.toks[root]["dep"] = "ROOT"
        p = self.add(".", ".", "PUNCT", "punct", root)
        assert all(t["head"] is not None for t in self.toks), self.toks
        return self.toks


def attach(b, i, head, dep):
    b.set_head(i, head)
    b.toks[i]["dep"] = dep


def shape(kind, r):
    b = Builder()
    det = lambda: r.choice(DETS)
    if kind == 0:  # transitive
        s = b.noun_phrase(det(), r.choice(AGENTS))
        lemma = r.choice(sorted(VERBS))
        v = b.add(VERBS[lemma][0], lemma, "VERB", "?")
        o = b.noun_phrase("the", r.choice(NOUNS))
        attach(b, s, v, "nsubj"); attach(b, o, v, "dobj")
        return b.finish(v)
    if kind in (1, 3, 4, 5, 6):  # subject + verb + preposition + object
        prep = {1: "with", 3: "into", 4: "from", 5: "through", 6: "in"}[kind]
        s = b.noun_phrase(det(), r.choice(NOUNS))
        lemma = r.choice(sorted(INTRANS))
        v = b.add(INTRANS[lemma], lemma, "VERB", "?")
        p = b.add(prep, prep, "ADP", "prep", v)
        o = b.noun_phrase("the", r.choice(PLACES if kind != 1 else NOUNS))
        attach(b, s, v, "nsubj"); attach(b, o, p, "pobj")
        return b.finish(v)
    if kind == 2:  # possession
        s = b.noun_phrase(det(), r.choice(PLACES))
        v = b.add("has", "have", "VERB", "?")
        o = b.noun_phrase(r.choice(["a", "another"]), r.choice(NOUNS))
        attach(b, s, v, "nsubj"); attach(b, o, v, "dobj")
        return b.finish(v)
    if kind == 7:  # intransitive
        s = b.noun_phrase(det(), r.choice(NOUNS))
        lemma = r.choice(sorted(INTRANS))
        v = b.add(INTRANS[lemma], lemma, "VERB", "?")
        attach(b, s, v, "nsubj")
        return b.finish(v)
    if kind == 8:  # adjective modifier on an intransitive subject
        s = b.noun_phrase(det(), r.choice(NOUNS), adj=r.choice(ADJS))
        lemma = r.choice(sorted(INTRANS))
        v = b.add(INTRANS[lemma], lemma, "VERB", "?")
        attach(b, s, v, "nsubj")
        return b.finish(v)
    if kind == 9:  # copula with adjective complement
        s = b.noun_phrase(det(), r.choice(NOUNS))
        v = b.add("is", "be", "VERB", "?")
        a = b.add(r.choice(ADJS), None, "ADJ", "acomp", v)
        b.toks[a]["lemma"] = b.toks[a]["text"]
        attach(b, s, v, "nsubj")
        return b.finish(v)
    if kind == 10:  # possessive noun phrase as subject
        owner = r.choice(PLACES)
        d = b.add("The", "the", "DET", "det")
        o = b.add(owner, owner, "NOUN", "poss")
        c = b.add("'s", "'s", "PART", "case", o)
        n = b.add(r.choice(["valve", "seal", "door", "wheel"]), None, "NOUN", "?")
        b.toks[n]["lemma"] = b.toks[n]["text"]
        b.set_head(d, o); b.set_head(o, n)
        lemma = r.choice(sorted(INTRANS))
        v = b.add(INTRANS[lemma], lemma, "VERB", "?")
        attach(b, n, v, "nsubj")
        return b.finish(v)
    if kind == 11:  # passive with by-phrase
        s = b.noun_phrase(det(), r.choice(NOUNS))
        aux = b.add("is", "be", "AUX", "auxpass")
        lemma = r.choice(sorted(VERBS))
        v = b.add(VERBS[lemma][1], lemma, "VERB", "?")
        p = b.add("by", "by", "ADP", "prep", v)
        o = b.noun_phrase("the", r.choice(AGENTS))
        attach(b, s, v, "nsubjpass"); b.set_head(aux, v); attach(b, o, p, "pobj")
        return b.finish(v)
    raise ValueError(kind)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="data/semparse/synthetic")
    ap.add_argument("--passages", type=int, default=6)
    ap.add_argument("--per-passage", type=int, default=5)
    args = ap.parse_args()
    r = random.Random(args.seed)
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    i = 0
    for p in range(args.passages):
        sentences = []
        for _ in range(args.per_passage):
            sentences.append(shape(i % 12, r))
            i += 1
        doc = {"name": f"synthetic_{p + 1}", "sentences": sentences}
        path = out / f"passage_{p + 1}.json"
        path.write_text(json.dumps(doc, indent=1) + "\n")
    print(f"wrote {args.passages} passages, {i} sentences to {out}")


if __name__ == "__main__":
    main()
