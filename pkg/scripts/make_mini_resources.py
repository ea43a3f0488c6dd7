#!/usr/bin/env python3
"""Regenerate the bundled mini benchmark resources under data/mini/.

Everything is derived from a fixed seed, so reruns are byte-identical.
The mini bundle exercises every resource type the harness knows about:
a small taxonomy, a corpus for LSA/SGNS training, a pretrained vector
file, norms/frequency/sonority/ap lexicons, a reference word list, and a
60-pair rating file with planted structure (taxonomy path similarity plus
pretrained cosine plus noise).
"""

import csv
import os
import sys

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from wordsim.lexicons import DEFAULT_SONORITY  # noqa: E402
from wordsim.qna import count_syllables  # noqa: E402

OUT_DIR = os.path.join(os.path.dirname(__file__), "..", "data", "mini")
SEED = 20240517

NOUN_BRANCHES = {
    "animal": ["dog", "cat", "horse", "cow", "sheep", "bird", "fish", "lion", "bear", "wolf"],
    "vehicle": ["car", "truck", "bus", "bicycle", "train", "boat", "ship", "plane"],
    "building": ["house", "factory", "school", "church", "tower", "bridge", "barn", "hotel"],
    "tool": ["hammer", "knife", "spoon", "fork", "shovel", "saw", "drill", "brush"],
    "nature": ["tree", "flower", "river", "mountain", "lake", "stone", "cloud", "rain"],
    "body": ["hand", "arm", "leg", "foot", "head", "eye", "ear", "nose"],
}
VERB_BRANCHES = {
    "motion": ["run", "walk", "jump", "swim", "fly", "climb", "crawl", "dance"],
    "consumption": ["eat", "drink", "chew", "swallow", "taste", "bite"],
    "communication": ["talk", "sing", "shout", "whisper", "read", "write"],
    "creation": ["build", "make", "paint", "carve", "cook", "knit"],
}

# Extra same-length neighbors so orthographic neighborhood counts are not
# all zero.
NEIGHBOR_WORDS = [
    "bar", "tar", "can", "cap", "cot", "bat", "rat", "mat", "dot", "dog",
    "log", "fog", "hog", "bog", "pig", "fig", "dig", "wig", "ran", "tan",
    "van", "man", "pan", "fan", "hat", "hut", "but", "cut", "gut", "nut",
    "house", "mouse", "horse", "goose", "loose", "stone", "shone", "phone",
    "stove", "store", "shore", "score", "spore", "snore", "plane", "plate",
    "place", "brain", "train", "trail", "braid", "beard", "heard", "hound",
]


def noun_parent(branch):
    return f"n-{branch}"


def build_taxonomy_rows():
    rows = []
    rows.append(("n-entity", "n", ["entity"], []))
    rows.append(("n-living", "n", ["living-thing"], ["n-entity"]))
    rows.append(("n-artifact", "n", ["artifact"], ["n-entity"]))
    rows.append(("n-natural", "n", ["natural-object"], ["n-entity"]))
    branch_parent = {
        "animal": "n-living",
        "vehicle": "n-artifact",
        "building": "n-artifact",
        "tool": "n-artifact",
        "nature": "n-natural",
        "body": "n-living",
    }
    for branch, words in NOUN_BRANCHES.items():
        rows.append((noun_parent(branch), "n", [branch], [branch_parent[branch]]))
        for word in words:
            rows.append((f"n-{word}", "n", [word], [noun_parent(branch)]))
    rows.append(("v-act", "v", ["act"], []))
    for branch, words in VERB_BRANCHES.items():
        rows.append((f"v-{branch}", "v", [branch], ["v-act"]))
        for word in words:
            rows.append((f"v-{word}", "v", [word], [f"v-{branch}"]))
    return rows


def write_taxonomy(rows, path):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("# mini taxonomy (generated by scripts/make_mini_resources.py)\n")
        for sid, pos, lemmas, parents in rows:
            handle.write(
                f"{sid}\t{pos}\t{','.join(lemmas)}\t{','.join(parents)}\n"
            )


def branch_of(word):
    for branch, words in NOUN_BRANCHES.items():
        if word in words:
            return "n", branch
    for branch, words in VERB_BRANCHES.items():
        if word in words:
            return "v", branch
    raise KeyError(word)


def make_vectors(rng, words, dim=12):
    branches = sorted({branch_of(w) for w in words})
    centers = {b: rng.normal(0.0, 1.0, dim) for b in branches}
    vectors = {}
    for word in words:
        center = centers[branch_of(word)]
        vectors[word] = 2.0 * center + rng.normal(0.0, 0.6, dim)
    return vectors


def path_similarity(word_a, word_b):
    pos_a, br_a = branch_of(word_a)
    pos_b, br_b = branch_of(word_b)
    assert pos_a == pos_b
    if word_a == word_b:
        return 1.0
    if br_a == br_b:
        return 1.0 / 3.0  # siblings: two edges apart
    if pos_a == "v":
        return 1.0 / 5.0  # through v-act
    parent = {
        "animal": "living", "body": "living",
        "vehicle": "artifact", "building": "artifact", "tool": "artifact",
        "nature": "natural",
    }
    if parent[br_a] == parent[br_b]:
        return 1.0 / 5.0
    return 1.0 / 7.0


def cosine(u, v):
    return float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))


def make_pairs(rng, nouns, verbs, vectors):
    pairs = []
    seen = set()

    def add(w1, w2, pos):
        key = (w1, w2, pos)
        if w1 == w2 or key in seen or (w2, w1, pos) in seen:
            return False
        seen.add(key)
        sim = path_similarity(w1, w2)
        cos = cosine(vectors[w1], vectors[w2])
        raw = 6.5 * sim + 2.0 * cos + rng.normal(0.0, 0.45)
        rating = float(np.clip(1.0 + raw, 0.0, 10.0))
        pairs.append((w1, w2, pos, round(rating, 2)))
        return True

    n_list = sorted(nouns)
    v_list = sorted(verbs)
    while sum(1 for p in pairs if p[2] == "N") < 44:
        w1, w2 = rng.choice(n_list, size=2, replace=False)
        add(str(w1), str(w2), "N")
    while sum(1 for p in pairs if p[2] == "V") < 16:
        w1, w2 = rng.choice(v_list, size=2, replace=False)
        add(str(w1), str(w2), "V")
    return pairs


def make_corpus(rng, dim_words, path):
    """Blank-line-separated blocks; each block mixes one branch's words."""
    fillers = ["the", "a", "of", "and", "with", "near", "very", "old", "new"]
    blocks = []
    branches = []
    for branch, words in sorted(NOUN_BRANCHES.items()):
        branches.append(words)
    for branch, words in sorted(VERB_BRANCHES.items()):
        branches.append(words)
    for rep in range(14):
        for words in branches:
            k = int(rng.integers(6, 10))
            chosen = [str(w) for w in rng.choice(words, size=k)]
            mixed = []
            for w in chosen:
                mixed.append(w)
                if rng.random() < 0.5:
                    mixed.append(str(rng.choice(fillers)))
            blocks.append(" ".join(mixed))
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n\n".join(blocks) + "\n")


def main():
    os.makedirs(OUT_DIR, exist_ok=True)
    rng = np.random.default_rng(SEED)

    rows = build_taxonomy_rows()
    write_taxonomy(rows, os.path.join(OUT_DIR, "mini_taxonomy.tsv"))

    nouns = sorted(w for ws in NOUN_BRANCHES.values() for w in ws)
    verbs = sorted(w for ws in VERB_BRANCHES.values() for w in ws)
    words = nouns + verbs

    vectors = make_vectors(rng, words)
    with open(os.path.join(OUT_DIR, "pretrained.vec"), "w", encoding="utf-8") as fh:
        fh.write(f"{len(words)} 12\n")
        for word in words:
            fh.write(word + " " + " ".join(repr(round(float(x), 5)) for x in vectors[word]) + "\n")

    pairs = make_pairs(rng, nouns, verbs, vectors)
    with open(os.path.join(OUT_DIR, "mini_pairs.tsv"), "w", encoding="utf-8") as fh:
        fh.write("word1\tword2\tPOS\tSimLex999\n")
        for w1, w2, pos, rating in pairs:
            fh.write(f"{w1}\t{w2}\t{pos}\t{rating}\n")
        # adjective rows the loader must filter out
        fh.write("happy\tglad\tA\t9.1\n")
        fh.write("dark\tbright\tA\t0.8\n")

    make_corpus(rng, words, os.path.join(OUT_DIR, "corpus.txt"))

    # Norms cover everything except two nouns, to exercise masking.
    uncovered = {"barn", "drill"}
    with open(os.path.join(OUT_DIR, "norms.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["word", "valence", "arousal", "imageability", "dominance", "concreteness"]
        )
        for word in words:
            if word in uncovered:
                continue
            writer.writerow(
                [
                    word,
                    round(float(rng.uniform(1, 9)), 2),
                    round(float(rng.uniform(1, 9)), 2),
                    round(float(rng.uniform(1, 7)), 2),
                    round(float(rng.uniform(1, 9)), 2),
                    round(float(rng.uniform(1, 5)), 2),
                ]
            )

    with open(os.path.join(OUT_DIR, "frequency.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["word", "count"])
        total = 0
        for word in words + NEIGHBOR_WORDS:
            count = int(rng.integers(5, 4000))
            total += count
            writer.writerow([word, count])
        writer.writerow(["__total__", total * 25])

    with open(os.path.join(OUT_DIR, "sonority.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["letter", "class"])
        for letter in sorted(DEFAULT_SONORITY.classes):
            writer.writerow([letter, DEFAULT_SONORITY.classes[letter]])

    # AP lexicon for roughly half the words; the rest fall back to |val|.
    with open(os.path.join(OUT_DIR, "ap.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["word", "ap"])
        for word in words[::2]:
            writer.writerow([word, round(float(rng.uniform(0, 5)), 2)])

    with open(os.path.join(OUT_DIR, "reference_words.txt"), "w", encoding="utf-8") as fh:
        for word in sorted(set(words + NEIGHBOR_WORDS)):
            fh.write(word + "\n")

    config = {
        "dataset": "mini_pairs.tsv",
        "resources": {
            "taxonomy": {"path": "mini_taxonomy.tsv", "format": "tsv"},
            "counts": "frequency.csv",
            "corpus": "corpus.txt",
            "corpus_unit": "blocks",
            "lsa": {"small_dim": 4, "large_dim": 12, "seed": 11, "min_count": 1},
            "sgns": {
                "dim": 16,
                "seed": 11,
                "window": 3,
                "negatives": 4,
                "epochs": 3,
                "learning_rate": 0.05,
                "min_count": 1,
            },
            "pretrained": "pretrained.vec",
            "frequency": "frequency.csv",
            "norms": "norms.csv",
            "sonority": "sonority.csv",
            "ap": "ap.csv",
            "reference": "reference_words.txt",
        },
        "experiment": {
            "train_size": 40,
            "test_size": 15,
            "iterations": 10,
            "master_seed": 7,
            "missing_policy": "drop-row",
            "standardize_before_split": True,
        },
        "models": "all",
    }
    import json

    with open(os.path.join(OUT_DIR, "experiment.json"), "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")

    n_syll = {w: count_syllables(w) for w in words[:3]}
    print(f"wrote mini bundle to {OUT_DIR} ({len(pairs)} pairs; sample nsyl {n_syll})")


if __name__ == "__main__":
    main()
