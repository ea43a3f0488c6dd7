"""Per-word lexical features and pair-difference assembly.

Thirteen word descriptors in three groups:

* surface: nlet, nsyl, on, logfZ, cvq
* affective-semantic: val, aro, ima, dom, conc, dist
* aesthetic: sc, ap (sharing logfZ and val with the groups above)

Extractors are pure; a feature that cannot be computed from the supplied
resources is masked, never imputed. Pair features are absolute differences
by default, which makes them symmetric in the word order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfVocabularyError, WordsimError
from .lexicons import DEFAULT_SONORITY, NORM_NAMES

SURFACE_FEATURES = ("nlet", "logfZ", "cvq", "on", "nsyl")
AFFECTIVE_FEATURES = ("val", "aro", "ima", "dom", "conc", "dist")
AESTHETIC_FEATURES = ("logfZ", "val", "sc", "ap")
ALL_FEATURES = (
    "nlet", "nsyl", "on", "logfZ", "cvq",
    "val", "aro", "ima", "dom", "conc", "dist",
    "sc", "ap",
)

_VOWELS = set("aeiou")
_SYLLABLE_VOWELS = set("aeiouy")


@dataclass
class WordFeatures:
    """Computed features for one word; absent keys are masked."""

    word: str
    values: dict = field(default_factory=dict)

    def available(self, name):
        return name in self.values

    def get(self, name):
        return self.values.get(name)


@dataclass
class PairFeatureVector:
    """Named feature values for a word pair plus an availability mask."""

    pair_id: str
    values: dict
    mask: dict


def _check_alphabetic(word):
    w = word.lower()
    if not w or not w.isalpha():
        raise WordsimError(f"word {word!r} is not purely alphabetic")
    return w


def count_syllables(word):
    """Maximal vowel-group count (vowels include y), with a terminal silent
    'e' dropped unless the word ends in consonant + 'le'; floored at 1."""
    w = _check_alphabetic(word)
    groups = 0
    prev = False
    for ch in w:
        is_vowel = ch in _SYLLABLE_VOWELS
        if is_vowel and not prev:
            groups += 1
        prev = is_vowel
    keeps_final_e = (
        len(w) >= 3 and w.endswith("le") and w[-3] not in _SYLLABLE_VOWELS
    )
    if w.endswith("e") and not keeps_final_e:
        groups -= 1
    return max(groups, 1)


def zipf_frequency(count, total_tokens, vocab_size):
    """Add-1 smoothed log10 frequency per billion tokens."""
    return math.log10((count + 1.0) * 1e9 / (total_tokens + vocab_size))


def neighborhood_density(word, reference):
    """Coltheart's N: same-length words differing in exactly one letter."""
    w = word.lower()
    n = 0
    for other in reference:
        o = other.lower()
        if len(o) != len(w):
            continue
        if sum(1 for a, b in zip(w, o) if a != b) == 1:
            n += 1
    return n


def surface_features(word, freq=None, reference=None):
    """Letter count, consonant-vowel quotient, syllables, and, resource
    permitting, neighborhood density and Zipf frequency."""
    w = _check_alphabetic(word)
    vowels = sum(1 for c in w if c in _VOWELS)
    consonants = len(w) - vowels
    values = {
        "nlet": float(len(w)),
        "cvq": consonants / max(vowels, 1),
        "nsyl": float(count_syllables(w)),
    }
    if reference is not None:
        values["on"] = float(neighborhood_density(w, reference))
    if freq is not None:
        values["logfZ"] = zipf_frequency(
            freq.count(w), freq.total_tokens, freq.vocab_size
        )
    return WordFeatures(word=w, values=values)


def norm_features(word, norms):
    """The five affective norms, copied when the word is listed."""
    entry = norms.get(word) if norms is not None else None
    values = dict(entry) if entry else {}
    return WordFeatures(word=word.lower(), values=values)


def distinctiveness(word, space, vocab_sample):
    """1 minus the word's mean cosine against a vocabulary sample."""
    u = space[word]
    norm_u = np.linalg.norm(u)
    if norm_u == 0:
        raise WordsimError(f"zero vector for {word!r}")
    sims = []
    for other in vocab_sample:
        if other == word:
            continue
        v = space[other]
        norm_v = np.linalg.norm(v)
        if norm_v == 0:
            continue
        sims.append(float(np.dot(u, v) / (norm_u * norm_v)))
    if not sims:
        raise WordsimError("empty vocabulary sample for distinctiveness")
    return 1.0 - sum(sims) / len(sims)


def aesthetic_features(
    word, sonority=None, ap_lexicon=None, freq=None, norms=None
):
    """Sonority score plus aesthetic potential (lexicon value, else the
    |valence| proxy); logfZ and val are shared with the other groups."""
    w = _check_alphabetic(word)
    table = sonority if sonority is not None else DEFAULT_SONORITY
    values = {"sc": sum(table[c] for c in w) / len(w)}
    val = None
    if norms is not None:
        entry = norms.get(w)
        if entry:
            val = entry["val"]
            values["val"] = val
    if freq is not None:
        values["logfZ"] = zipf_frequency(
            freq.count(w), freq.total_tokens, freq.vocab_size
        )
    if ap_lexicon is not None and w in ap_lexicon:
        values["ap"] = ap_lexicon[w]
    elif val is not None:
        values["ap"] = abs(val)
    return WordFeatures(word=w, values=values)


class WordFeatureExtractor:
    """Bundles the lexical resources and computes full per-word features.

    Missing resources mask the features they back. Results are cached, so
    one extractor can serve a whole dataset cheaply.
    """

    def __init__(
        self,
        freq=None,
        norms=None,
        sonority=None,
        ap_lexicon=None,
        reference=None,
        space=None,
        dist_sample=None,
    ):
        self.freq = freq
        self.norms = norms
        self.sonority = sonority if sonority is not None else DEFAULT_SONORITY
        self.ap_lexicon = ap_lexicon
        self.reference = reference
        self.space = space
        self._cache = {}
        self._sample_matrix = None
        self._sample_words = None
        if space is not None:
            sample = list(dist_sample) if dist_sample is not None else space.words()
            rows = []
            kept = []
            for w in sample:
                if w not in space:
                    continue
                v = space[w]
                norm = np.linalg.norm(v)
                if norm > 0:
                    rows.append(v / norm)
                    kept.append(w)
            if rows:
                self._sample_matrix = np.vstack(rows)
                self._sample_words = kept

    def _dist(self, word):
        if self.space is None or self._sample_matrix is None:
            return None
        if word not in self.space:
            return None
        u = self.space[word]
        norm = np.linalg.norm(u)
        if norm == 0:
            return None
        sims = self._sample_matrix @ (u / norm)
        keep = [i for i, w in enumerate(self._sample_words) if w != word]
        if not keep:
            return None
        return 1.0 - float(np.mean(sims[keep]))

    def features(self, word):
        w = word.lower()
        cached = self._cache.get(w)
        if cached is not None:
            return cached

        values = {}
        try:
            surf = surface_features(w, freq=self.freq, reference=self.reference)
            values.update(surf.values)
            aest = aesthetic_features(
                w,
                sonority=self.sonority,
                ap_lexicon=self.ap_lexicon,
                freq=self.freq,
                norms=self.norms,
            )
            values.update(aest.values)
        except WordsimError:
            pass  # non-alphabetic input: surface/aesthetic stay masked
        if self.norms is not None:
            values.update(norm_features(w, self.norms).values)
        dist = self._dist(w)
        if dist is not None:
            values["dist"] = dist

        result = WordFeatures(word=w, values=values)
        self._cache[w] = result
        return result


def pair_features(
    w1, w2, feature_names, word_features, pair_scores=None, signed=False
):
    """Assemble one pair's feature vector.

    ``word_features`` maps a word to its :class:`WordFeatures`; names found
    in ``pair_scores`` are pair-level callables (taxonomy metrics, cosines)
    whose value enters unchanged and which may return None to mask. Word
    features enter as |f(w1) - f(w2)| (or the signed difference when
    ``signed``, which breaks order symmetry).
    """
    pair_scores = pair_scores or {}
    lo, hi = sorted((w1.lower(), w2.lower()))
    f1 = word_features(w1)
    f2 = word_features(w2)
    values = {}
    mask = {}
    for name in feature_names:
        value = None
        if name in pair_scores:
            value = pair_scores[name](w1, w2)
        elif f1.available(name) and f2.available(name):
            diff = f1.get(name) - f2.get(name)
            value = diff if signed else abs(diff)
        if value is None:
            values[name] = math.nan
            mask[name] = False
        else:
            values[name] = float(value)
            mask[name] = True
    return PairFeatureVector(pair_id=f"{lo}:{hi}", values=values, mask=mask)
