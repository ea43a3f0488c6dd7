"""Loaders for the lexical resource files feeding feature extraction.

All lookups are case-insensitive: keys are lowercased on load.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .errors import ParseError

NORM_NAMES = ("val", "aro", "ima", "dom", "conc")
_NORM_COLUMNS = ("valence", "arousal", "imageability", "dominance", "concreteness")


@dataclass
class FrequencyLexicon:
    counts: dict
    total_tokens: int
    vocab_size: int

    def count(self, word):
        return self.counts.get(word.lower(), 0)

    def __contains__(self, word):
        return word.lower() in self.counts


@dataclass
class NormLexicon:
    """word -> {val, aro, ima, dom, conc}, all five present per entry."""

    norms: dict

    def get(self, word):
        return self.norms.get(word.lower())

    def __contains__(self, word):
        return word.lower() in self.norms


@dataclass
class SonorityTable:
    """letter -> sonority class; full a-z coverage, vowels on top."""

    classes: dict

    def __post_init__(self):
        letters = set("abcdefghijklmnopqrstuvwxyz")
        missing = letters - set(self.classes)
        if missing:
            raise ParseError(
                f"sonority table misses letters: {sorted(missing)}"
            )
        vowels = {"a", "e", "i", "o", "u"}
        vmin = min(self.classes[v] for v in vowels)
        cmax = max(self.classes[c] for c in letters - vowels)
        if vmin <= cmax:
            raise ParseError(
                "sonority table must rank every vowel above every consonant"
            )

    def __getitem__(self, letter):
        return self.classes[letter]


# Six-class letter table: stops 1, fricatives 2, nasals 3, liquids 4,
# glides 5, vowels 6.
DEFAULT_SONORITY = SonorityTable(
    classes={
        **{c: 1.0 for c in "bcdgkpqt"},
        **{c: 2.0 for c in "fhjsvxz"},
        **{c: 3.0 for c in "mn"},
        **{c: 4.0 for c in "lr"},
        **{c: 5.0 for c in "wy"},
        **{c: 6.0 for c in "aeiou"},
    }
)


def _read_csv(path, required):
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        header = reader.fieldnames or []
        missing = [col for col in required if col not in header]
        if missing:
            raise ParseError(
                f"missing column(s) {missing}; header is {header}", path=path
            )
        rows = []
        for lineno, row in enumerate(reader, start=2):
            rows.append((lineno, row))
    return rows


def _parse_float(value, path, lineno, what):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ParseError(
            f"bad {what} value {value!r}", path=path, line=lineno
        ) from None


def load_frequency_csv(path):
    """Frequency CSV ``word,count``; an optional ``__total__`` row sets the
    corpus token total, otherwise the counts are summed."""
    counts = {}
    total = None
    for lineno, row in _read_csv(path, ("word", "count")):
        word = (row["word"] or "").strip().lower()
        value = _parse_float(row["count"], path, lineno, "count")
        if value < 0:
            raise ParseError("negative count", path=path, line=lineno)
        if word == "__total__":
            total = value
        elif word:
            counts[word] = counts.get(word, 0) + value
    if total is None:
        total = sum(counts.values())
    if total <= 0:
        raise ParseError("frequency lexicon has a non-positive total", path=path)
    return FrequencyLexicon(
        counts=counts, total_tokens=int(total), vocab_size=len(counts)
    )


def load_norms_csv(path):
    norms = {}
    for lineno, row in _read_csv(path, ("word",) + _NORM_COLUMNS):
        word = (row["word"] or "").strip().lower()
        if not word:
            continue
        entry = {
            short: _parse_float(row[col], path, lineno, col)
            for short, col in zip(NORM_NAMES, _NORM_COLUMNS)
        }
        norms[word] = entry
    return NormLexicon(norms=norms)


def load_sonority_csv(path):
    classes = {}
    for lineno, row in _read_csv(path, ("letter", "class")):
        letter = (row["letter"] or "").strip().lower()
        if len(letter) != 1:
            raise ParseError(
                f"bad letter {letter!r}", path=path, line=lineno
            )
        classes[letter] = _parse_float(row["class"], path, lineno, "class")
    return SonorityTable(classes=classes)


def load_ap_csv(path):
    """Aesthetic-potential lexicon CSV ``word,ap``."""
    table = {}
    for lineno, row in _read_csv(path, ("word", "ap")):
        word = (row["word"] or "").strip().lower()
        if word:
            table[word] = _parse_float(row["ap"], path, lineno, "ap")
    return table


def load_word_list(path):
    """One word per line, lowercased; blank lines and ``#`` comments skipped."""
    words = []
    with open(path, encoding="utf-8") as handle:
        for raw in handle:
            word = raw.strip().lower()
            if word and not word.startswith("#"):
                words.append(word)
    return words


def load_counts_csv(path):
    """Lemma counts for information content, as a plain dict."""
    lex = load_frequency_csv(path)
    return dict(lex.counts)
