"""Skip-gram (and CBOW) training with negative sampling, from scratch.

Single-threaded SGD over (target, context) pairs drawn from a sliding
window, with negatives sampled from the unigram^0.75 distribution by
default. Training is bit-deterministic for a given config and seed: the
update order is corpus order and the RNG is a seeded PCG64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import tokenize
from .errors import NumericError, WordsimError
from .vsm import EmbeddingSpace

LR_FLOOR = 1e-4  # fraction of the initial rate the linear decay stops at


@dataclass
class SgnsConfig:
    dim: int
    seed: int
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_count: int = 1
    mode: str = "skipgram"
    negative_distribution: str = "unigram75"

    def __post_init__(self):
        for name in ("dim", "window", "negatives", "epochs", "min_count"):
            if getattr(self, name) < 1:
                raise WordsimError(f"{name} must be a positive integer")
        if self.learning_rate <= 0:
            raise WordsimError("learning_rate must be positive")
        if self.mode not in ("skipgram", "cbow"):
            raise WordsimError(f"unknown mode {self.mode!r}")
        if self.negative_distribution not in ("unigram75", "uniform"):
            raise WordsimError(
                f"unknown negative distribution {self.negative_distribution!r}"
            )
        if self.seed is None:
            raise WordsimError("seed is mandatory")


def _as_token_docs(corpus):
    return [tokenize(doc) if isinstance(doc, str) else list(doc) for doc in corpus]


def build_vocab(corpus, min_count):
    """Vocabulary (word -> index) ordered by count desc, then word."""
    counts = {}
    for doc in _as_token_docs(corpus):
        for tok in doc:
            counts[tok] = counts.get(tok, 0) + 1
    kept = [(w, c) for w, c in counts.items() if c >= min_count]
    kept.sort(key=lambda wc: (-wc[1], wc[0]))
    vocab = {w: i for i, (w, _c) in enumerate(kept)}
    return vocab, dict(kept)


def generate_training_pairs(corpus, config):
    """Yield (target, context) word pairs from a fixed ±window sweep.

    Tokens below ``min_count`` are removed before windowing, so they appear
    neither as targets nor as contexts. The order is deterministic:
    document order, position order, contexts left to right.
    """
    vocab, _counts = build_vocab(corpus, config.min_count)
    for doc in _as_token_docs(corpus):
        sent = [tok for tok in doc if tok in vocab]
        for t, target in enumerate(sent):
            lo = max(0, t - config.window)
            hi = min(len(sent), t + config.window + 1)
            for c in range(lo, hi):
                if c != t:
                    yield (target, sent[c])


def pair_loss_and_grads(u, v_pos, v_negs):
    """Loss and gradients for one positive pair plus its negatives.

    loss = -log s(u.v_pos) - sum_i log s(-u.v_neg_i)

    Returns ``(loss, grad_u, grad_v_pos, grad_v_negs)``.
    """
    u = np.asarray(u, dtype=float)
    v_pos = np.asarray(v_pos, dtype=float)
    v_negs = np.asarray(v_negs, dtype=float)

    pos_score = _sigmoid(np.dot(u, v_pos))
    neg_scores = _sigmoid(v_negs @ u) if len(v_negs) else np.zeros(0)

    loss = -_safe_log(pos_score) - float(np.sum(_safe_log(1.0 - neg_scores)))
    g_pos = pos_score - 1.0
    grad_v_pos = g_pos * u
    grad_u = g_pos * v_pos
    grad_v_negs = np.zeros_like(v_negs)
    if len(v_negs):
        grad_v_negs = neg_scores[:, None] * u[None, :]
        grad_u = grad_u + neg_scores @ v_negs
    return loss, grad_u, grad_v_pos, grad_v_negs


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=float)))


def _safe_log(x):
    return np.log(np.maximum(x, 1e-300))


class _NoiseSampler:
    """Seedable sampler over the vocabulary noise distribution."""

    def __init__(self, counts_by_index, kind, rng):
        weights = np.asarray(counts_by_index, dtype=float)
        if kind == "unigram75":
            weights = weights**0.75
        else:
            weights = np.ones_like(weights)
        self._cum = np.cumsum(weights / weights.sum())
        self._rng = rng

    def draw(self, k, exclude):
        out = np.searchsorted(self._cum, self._rng.random(k))
        for i in range(k):
            tries = 0
            while out[i] == exclude and tries < 16:
                out[i] = np.searchsorted(self._cum, self._rng.random())
                tries += 1
        return out


def train_sgns(corpus, config, return_history=False):
    """Train word vectors; returns the input-side :class:`EmbeddingSpace`.

    ``return_history=True`` additionally returns the per-epoch mean loss.
    """
    docs = _as_token_docs(corpus)
    vocab, counts = build_vocab(docs, config.min_count)
    if not vocab:
        raise WordsimError("empty vocabulary after min_count filtering")
    words = list(vocab)
    counts_by_index = [counts[w] for w in words]

    sents = [[vocab[t] for t in doc if t in vocab] for doc in docs]
    sents = [s for s in sents if s]

    rng = np.random.default_rng(config.seed)
    dim = config.dim
    w_in = (rng.random((len(vocab), dim)) - 0.5) / dim
    w_out = np.zeros((len(vocab), dim))
    sampler = _NoiseSampler(counts_by_index, config.negative_distribution, rng)

    positions_per_epoch = sum(len(s) for s in sents)
    total_positions = max(1, positions_per_epoch * config.epochs)
    lr0 = config.learning_rate

    history = []
    processed = 0
    for _epoch in range(config.epochs):
        epoch_loss = 0.0
        epoch_pairs = 0
        for sent in sents:
            for t, target in enumerate(sent):
                lr = lr0 * max(1.0 - processed / total_positions, LR_FLOOR)
                processed += 1
                lo = max(0, t - config.window)
                hi = min(len(sent), t + config.window + 1)
                context = [sent[c] for c in range(lo, hi) if c != t]
                if not context:
                    continue
                if config.mode == "skipgram":
                    for ctx in context:
                        loss = _sgd_step(
                            w_in, w_out, target, ctx, sampler, config, lr
                        )
                        epoch_loss += loss
                        epoch_pairs += 1
                else:
                    loss = _cbow_step(
                        w_in, w_out, target, context, sampler, config, lr
                    )
                    epoch_loss += loss
                    epoch_pairs += 1
        mean_loss = epoch_loss / max(1, epoch_pairs)
        if not np.isfinite(mean_loss):
            raise NumericError("skip-gram training diverged: non-finite loss")
        history.append(mean_loss)

    vectors = {w: w_in[i].copy() for w, i in vocab.items()}
    space = EmbeddingSpace(dim=dim, vectors=vectors, provenance="sgns")
    return (space, history) if return_history else space


def _sgd_step(w_in, w_out, target, ctx, sampler, config, lr):
    # Predict the context from the target: u is the target's input vector.
    u = w_in[target]
    negs = sampler.draw(config.negatives, exclude=ctx)
    loss, grad_u, grad_v_pos, grad_v_negs = pair_loss_and_grads(
        u, w_out[ctx], w_out[negs]
    )
    w_out[ctx] -= lr * grad_v_pos
    for j, n in enumerate(negs):
        w_out[n] -= lr * grad_v_negs[j]
    w_in[target] = u - lr * grad_u
    return loss


def _cbow_step(w_in, w_out, target, context, sampler, config, lr):
    # Predict the target from the mean of the context input vectors.
    h = w_in[context].mean(axis=0)
    negs = sampler.draw(config.negatives, exclude=target)
    loss, grad_h, grad_v_pos, grad_v_negs = pair_loss_and_grads(
        h, w_out[target], w_out[negs]
    )
    w_out[target] -= lr * grad_v_pos
    for j, n in enumerate(negs):
        w_out[n] -= lr * grad_v_negs[j]
    for idx in context:
        w_in[idx] -= lr * grad_h
    return loss
