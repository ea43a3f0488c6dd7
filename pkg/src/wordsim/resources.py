"""Resource loading and per-feature value providers for the harness.

A JSON experiment config names the input files; :func:`load_resources`
turns them into in-memory objects (training the LSA/SGNS spaces from the
corpus on the way), and :class:`FeatureProviders` serves cached pair-level
scores and word features to the design-matrix assembler.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from . import taxonomy as tx
from .corpus import read_documents
from .errors import WordsimError
from .lexicons import (
    DEFAULT_SONORITY,
    load_ap_csv,
    load_counts_csv,
    load_frequency_csv,
    load_norms_csv,
    load_sonority_csv,
    load_word_list,
)
from .qna import WordFeatureExtractor
from .sgns import SgnsConfig, train_sgns
from .vsm import build_dtm, load_vec_file, pair_cosine, train_lsa

EMBEDDING_SLOTS = ("lsa-small", "lsa-large", "sgns", "pretrained")


@dataclass
class ResourceBundle:
    taxonomy: object = None
    ic: object = None
    spaces: dict = field(default_factory=dict)  # slot -> EmbeddingSpace
    freq: object = None
    norms: object = None
    sonority: object = DEFAULT_SONORITY
    ap_lexicon: dict = None
    reference: list = None
    dist_sample_top_n: int = None

    def available(self):
        """Resource keys usable by the registry's requirement check."""
        keys = set()
        if self.taxonomy is not None:
            keys.add("taxonomy")
        if self.ic is not None:
            keys.add("counts")
        if all(
            slot in self.spaces for slot in ("lsa-small", "lsa-large", "sgns")
        ):
            keys.add("corpus")
        if "pretrained" in self.spaces:
            keys.add("pretrained")
        if self.freq is not None:
            keys.add("frequency")
        if self.norms is not None:
            keys.add("norms")
        if self.reference is not None:
            keys.add("reference")
        return keys


def _resolve(path, base_dir):
    if path is None:
        return None
    path = os.fspath(path)
    if not os.path.isabs(path) and base_dir:
        path = os.path.join(base_dir, path)
    return path


def load_resources(spec, base_dir=""):
    """Build a :class:`ResourceBundle` from a resource config mapping.

    Every key is optional; whatever is present gets loaded. Relative paths
    resolve against ``base_dir``.
    """
    bundle = ResourceBundle()

    tax_cfg = spec.get("taxonomy")
    if tax_cfg:
        if isinstance(tax_cfg, str):
            tax_cfg = {"path": tax_cfg, "format": "tsv"}
        bundle.taxonomy = tx.load_taxonomy(
            _resolve(tax_cfg["path"], base_dir),
            format=tax_cfg.get("format", "tsv"),
        )

    counts_path = _resolve(spec.get("counts"), base_dir)
    if counts_path:
        if bundle.taxonomy is None:
            raise WordsimError("counts file given without a taxonomy")
        counts = load_counts_csv(counts_path)
        bundle.ic = tx.compute_ic(bundle.taxonomy, counts)

    corpus_path = _resolve(spec.get("corpus"), base_dir)
    if corpus_path:
        unit = spec.get("corpus_unit", "blocks")
        docs = read_documents(corpus_path, unit=unit)
        lsa_cfg = spec.get("lsa", {})
        dtm = build_dtm(docs, min_count=int(lsa_cfg.get("min_count", 1)))
        rank_cap = min(dtm.n_words, dtm.doc_count)
        small = min(int(lsa_cfg.get("small_dim", 10)), rank_cap)
        large = min(int(lsa_cfg.get("large_dim", 100)), rank_cap)
        seed = int(lsa_cfg.get("seed", 0))
        bundle.spaces["lsa-small"] = train_lsa(dtm, k=small, seed=seed)
        bundle.spaces["lsa-large"] = train_lsa(dtm, k=large, seed=seed)
        sgns_cfg = dict(spec.get("sgns", {}))
        sgns_cfg.setdefault("dim", 200)
        sgns_cfg.setdefault("seed", 0)
        bundle.spaces["sgns"] = train_sgns(docs, SgnsConfig(**sgns_cfg))

    pretrained_path = _resolve(spec.get("pretrained"), base_dir)
    if pretrained_path:
        bundle.spaces["pretrained"] = load_vec_file(pretrained_path)

    freq_path = _resolve(spec.get("frequency"), base_dir)
    if freq_path:
        bundle.freq = load_frequency_csv(freq_path)
    norms_path = _resolve(spec.get("norms"), base_dir)
    if norms_path:
        bundle.norms = load_norms_csv(norms_path)
    sonority_path = _resolve(spec.get("sonority"), base_dir)
    if sonority_path:
        bundle.sonority = load_sonority_csv(sonority_path)
    ap_path = _resolve(spec.get("ap"), base_dir)
    if ap_path:
        bundle.ap_lexicon = load_ap_csv(ap_path)
    reference_path = _resolve(spec.get("reference"), base_dir)
    if reference_path:
        bundle.reference = load_word_list(reference_path)
    if spec.get("dist_sample_top_n") is not None:
        bundle.dist_sample_top_n = int(spec["dist_sample_top_n"])
    return bundle


def _dist_space(bundle):
    """The embedding space distinctiveness is measured in: the biggest
    general-purpose one available."""
    for slot in ("pretrained", "sgns", "lsa-large", "lsa-small"):
        if slot in bundle.spaces:
            return bundle.spaces[slot]
    return None


def _dist_sample(bundle, space):
    if space is None:
        return None
    words = space.words()
    top_n = bundle.dist_sample_top_n
    if top_n is not None and bundle.freq is not None and top_n < len(words):
        words = sorted(words, key=lambda w: (-bundle.freq.count(w), w))[:top_n]
    return words


class FeatureProviders:
    """Cached access to every feature a model spec can name."""

    def __init__(self, bundle):
        self.bundle = bundle
        space = _dist_space(bundle)
        self.extractor = WordFeatureExtractor(
            freq=bundle.freq,
            norms=bundle.norms,
            sonority=bundle.sonority,
            ap_lexicon=bundle.ap_lexicon,
            reference=bundle.reference,
            space=space,
            dist_sample=_dist_sample(bundle, space),
        )
        self._metric_cache = {}
        self._cosine_cache = {}

    def metric_scores(self, w1, w2, pos):
        """All computable taxonomy metrics for a word pair, or None each."""
        key = (w1, w2, pos)
        hit = self._metric_cache.get(key)
        if hit is not None:
            return hit
        metrics = (
            tx.METRICS
            if self.bundle.ic is not None
            else tuple(m for m in tx.METRICS if m not in tx.IC_METRICS)
        )
        scores = {m: None for m in tx.METRICS}
        if self.bundle.taxonomy is not None:
            try:
                profile = tx.word_metric_profile(
                    self.bundle.taxonomy,
                    w1,
                    w2,
                    pos,
                    metrics=metrics,
                    ic=self.bundle.ic,
                )
                for m, score in profile.items():
                    scores[m] = score.value
            except (tx.OutOfVocabularyError, tx.PosMismatchError):
                pass
        self._metric_cache[key] = scores
        return scores

    def cosine(self, slot, w1, w2):
        key = (slot, w1, w2)
        if key in self._cosine_cache:
            return self._cosine_cache[key]
        space = self.bundle.spaces.get(slot)
        value = None
        if space is not None and w1 in space and w2 in space:
            try:
                value = pair_cosine(space, w1, w2)
            except WordsimError:
                value = None
        self._cosine_cache[key] = value
        return value

    def pair_scorers(self, pos):
        """Callables for every pair-level feature, bound to one POS tag."""
        scorers = {}
        metric_names = {
            "wn-path": "path",
            "wn-lch": "lch",
            "wn-wup": "wup",
            "wn-res": "res",
            "wn-jcn": "jcn",
            "wn-lin": "lin",
        }
        for column, metric in metric_names.items():
            scorers[column] = (
                lambda w1, w2, m=metric: self.metric_scores(w1, w2, pos)[m]
            )
        for slot in EMBEDDING_SLOTS:
            scorers[f"cos-{slot}"] = (
                lambda w1, w2, s=slot: self.cosine(s, w1, w2)
            )
        return scorers


def load_config_file(path):
    """Read an experiment config JSON file."""
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise WordsimError(f"{path}: invalid JSON: {exc}") from exc
