import math

import numpy as np
import pytest

from wordsim.errors import WordsimError
from wordsim.sgns import (
    SgnsConfig,
    build_vocab,
    generate_training_pairs,
    pair_loss_and_grads,
    train_sgns,
)


def cfg(**kwargs):
    kwargs.setdefault("dim", 8)
    kwargs.setdefault("seed", 1)
    return SgnsConfig(**kwargs)


class TestConfig:
    def test_defaults(self):
        c = cfg()
        assert (c.window, c.negatives, c.mode) == (5, 5, "skipgram")

    def test_validation(self):
        with pytest.raises(WordsimError):
            cfg(window=0)
        with pytest.raises(WordsimError):
            cfg(mode="glove")
        with pytest.raises(WordsimError):
            cfg(learning_rate=-1)
        with pytest.raises(WordsimError):
            cfg(seed=None)


class TestPairGeneration:
    def test_window_one_enumeration(self):
        pairs = list(generate_training_pairs([["a", "b", "c"]], cfg(window=1)))
        assert pairs == [("a", "b"), ("b", "a"), ("b", "c"), ("c", "b")]

    def test_window_saturation_gives_all_ordered_pairs(self):
        sent = ["a", "b", "c", "d"]
        pairs = list(generate_training_pairs([sent], cfg(window=10)))
        expected = [
            (sent[t], sent[c])
            for t in range(4)
            for c in range(4)
            if c != t
        ]
        assert sorted(pairs) == sorted(expected)
        assert len(pairs) == 12

    def test_min_count_filters_both_roles(self):
        corpus = [["a", "x", "b"], ["a", "b"]]
        pairs = list(
            generate_training_pairs(corpus, cfg(window=1, min_count=2))
        )
        flat = {w for p in pairs for w in p}
        assert "x" not in flat
        # x removed before windowing, so a and b become adjacent
        assert ("a", "b") in pairs

    def test_pair_count_formula(self):
        corpus = [["a", "b", "c", "d", "e"], ["a", "b"]]
        window = 2
        pairs = list(generate_training_pairs(corpus, cfg(window=window)))
        expected = 0
        for sent in corpus:
            for t in range(len(sent)):
                expected += min(t, window) + min(len(sent) - 1 - t, window)
        assert len(pairs) == expected

    def test_empty_corpus_empty_output(self):
        assert list(generate_training_pairs([], cfg())) == []


class TestLoss:
    def test_zero_init_loss_anchor(self):
        for k in (1, 5, 17):
            u = np.random.default_rng(0).standard_normal(12)
            loss, *_ = pair_loss_and_grads(u, np.zeros(12), np.zeros((k, 12)))
            assert loss == pytest.approx((1 + k) * math.log(2), abs=1e-12)

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(42)
        for _ in range(5):
            dim, k = 6, 4
            u = rng.standard_normal(dim) * 0.5
            v_pos = rng.standard_normal(dim) * 0.5
            v_negs = rng.standard_normal((k, dim)) * 0.5
            _, gu, gp, gn = pair_loss_and_grads(u, v_pos, v_negs)

            def loss_at(u=u, v_pos=v_pos, v_negs=v_negs):
                return pair_loss_and_grads(u, v_pos, v_negs)[0]

            h = 1e-6
            for vec, grad in ((u, gu), (v_pos, gp)):
                for i in range(dim):
                    bump = np.zeros(dim)
                    bump[i] = h
                    if vec is u:
                        num = (loss_at(u=u + bump) - loss_at(u=u - bump)) / (2 * h)
                    else:
                        num = (
                            loss_at(v_pos=v_pos + bump)
                            - loss_at(v_pos=v_pos - bump)
                        ) / (2 * h)
                    denom = max(abs(num), abs(grad[i]), 1e-8)
                    assert abs(num - grad[i]) / denom < 1e-5
            for j in range(k):
                for i in range(dim):
                    bumped = v_negs.copy()
                    bumped[j, i] += h
                    up = loss_at(v_negs=bumped)
                    bumped[j, i] -= 2 * h
                    down = loss_at(v_negs=bumped)
                    num = (up - down) / (2 * h)
                    denom = max(abs(num), abs(gn[j, i]), 1e-8)
                    assert abs(num - gn[j, i]) / denom < 1e-5

    def test_no_negatives_degenerates_to_positive_term(self):
        u = np.array([1.0, 0.0])
        loss, gu, gp, gn = pair_loss_and_grads(u, np.array([2.0, 0.0]), np.zeros((0, 2)))
        assert loss == pytest.approx(-math.log(1 / (1 + math.exp(-2.0))))
        assert gn.shape == (0, 2)


def two_cluster_corpus():
    a_words = [f"a{i}" for i in range(6)]
    b_words = [f"b{i}" for i in range(6)]
    rng = np.random.default_rng(5)
    docs = []
    for _ in range(120):
        docs.append([str(w) for w in rng.choice(a_words, size=8)])
        docs.append([str(w) for w in rng.choice(b_words, size=8)])
    return a_words, b_words, docs


class TestTraining:
    def test_build_vocab_order(self):
        vocab, counts = build_vocab([["b", "a", "b", "c", "a", "b"]], 1)
        assert list(vocab) == ["b", "a", "c"]
        assert counts == {"a": 2, "b": 3, "c": 1}

    def test_empty_vocab_error(self):
        with pytest.raises(WordsimError):
            train_sgns([["a"]], cfg(min_count=5))

    def test_bit_determinism(self):
        corpus = [["a", "b", "c", "d"], ["b", "c", "d", "e"], ["a", "e"]]
        s1 = train_sgns(corpus, cfg(epochs=3))
        s2 = train_sgns(corpus, cfg(epochs=3))
        assert set(s1.vectors) == set(s2.vectors)
        for w in s1.vectors:
            assert np.array_equal(s1[w], s2[w])

    def test_seed_changes_vectors(self):
        corpus = [["a", "b", "c", "d"], ["b", "c", "d", "e"]]
        s1 = train_sgns(corpus, cfg(seed=1))
        s2 = train_sgns(corpus, cfg(seed=2))
        assert any(not np.array_equal(s1[w], s2[w]) for w in s1.vectors)

    def test_loss_decreases(self):
        _, _, docs = two_cluster_corpus()
        _, history = train_sgns(
            docs, cfg(dim=8, epochs=5, window=2, learning_rate=0.05),
            return_history=True,
        )
        assert history[-1] < history[0]

    def test_two_cluster_separation(self):
        a_words, b_words, docs = two_cluster_corpus()
        space = train_sgns(
            docs,
            cfg(dim=16, epochs=20, window=2, negatives=5, learning_rate=0.05),
        )

        def mean_cos(ws1, ws2):
            vals = []
            for w1 in ws1:
                for w2 in ws2:
                    if w1 == w2:
                        continue
                    u, v = space[w1], space[w2]
                    vals.append(
                        float(np.dot(u, v))
                        / (np.linalg.norm(u) * np.linalg.norm(v))
                    )
            return sum(vals) / len(vals)

        within = (mean_cos(a_words, a_words) + mean_cos(b_words, b_words)) / 2
        between = mean_cos(a_words, b_words)
        assert within - between >= 0.2

    def test_provenance_and_dim(self):
        space = train_sgns([["a", "b"]], cfg(dim=4, epochs=1))
        assert space.provenance == "sgns"
        assert space.dim == 4

    def test_cbow_mode_trains(self):
        _, _, docs = two_cluster_corpus()
        space = train_sgns(
            docs, cfg(dim=8, epochs=2, window=2, mode="cbow")
        )
        assert len(space.vectors) == 12

    def test_uniform_negative_distribution_supported(self):
        corpus = [["a", "b", "c", "a", "b", "a"]]
        space = train_sgns(
            corpus, cfg(epochs=2, negative_distribution="uniform")
        )
        assert len(space.vectors) == 3
