import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wordsim.corpus import count_tokens, read_documents, tokenize
from wordsim.errors import NumericError, OutOfVocabularyError, ParseError, WordsimError
from wordsim.vsm import (
    EmbeddingSpace,
    build_dtm,
    cosine,
    load_vec_file,
    pair_cosine,
    save_vec_file,
    train_lsa,
)


class TestTokenizer:
    def test_lowercase_and_split(self):
        assert tokenize("The cat, the CAT!") == ["the", "cat", "the", "cat"]

    def test_numbers_kept(self):
        assert tokenize("route 66") == ["route", "66"]

    def test_empty_dropped(self):
        assert tokenize("--- ") == []

    def test_document_units(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("a b\n\nc d\ne f\n")
        assert read_documents(path, unit="blocks") == [["a", "b"], ["c", "d", "e", "f"]]
        assert read_documents(path, unit="file") == [["a", "b", "c", "d", "e", "f"]]
        assert read_documents(path, unit="lines") == [["a", "b"], ["c", "d"], ["e", "f"]]

    def test_count_tokens(self):
        assert count_tokens([["a", "b", "a"], ["b"]]) == {"a": 2, "b": 2}


class TestBuildDtm:
    def test_enumeration(self):
        dtm = build_dtm([["a", "b", "a"], ["b", "c"]], min_count=1)
        dense = dtm.to_dense()
        a, b, c = dtm.vocab["a"], dtm.vocab["b"], dtm.vocab["c"]
        assert dense[a].tolist() == [2, 0]
        assert dense[b].tolist() == [1, 1]
        assert dense[c].tolist() == [0, 1]

    def test_min_count_drops(self):
        dtm = build_dtm([["a", "b", "a"], ["b", "c"]], min_count=2)
        assert set(dtm.vocab) == {"a", "b"}

    def test_empty_corpus_error(self):
        with pytest.raises(WordsimError):
            build_dtm([], min_count=1)

    def test_no_all_zero_rows(self):
        dtm = build_dtm([["a", "a"], ["b"]], min_count=1)
        assert (dtm.to_dense().sum(axis=1) > 0).all()

    def test_accepts_raw_strings(self):
        dtm = build_dtm(["a b a", "b c"], min_count=1)
        assert dtm.to_dense().sum() == 5


class TestLsa:
    def test_orthogonal_rows_stay_orthogonal(self):
        dtm = build_dtm([["a"], ["b"]], min_count=1)
        space = train_lsa(dtm, k=2, seed=0)
        assert abs(cosine(space["a"], space["b"])) < 1e-12

    def test_rank_one_rows_collapse(self):
        dtm = build_dtm([["a", "a", "b"], ["a", "a", "b"]], min_count=1)
        space = train_lsa(dtm, k=1, seed=0)
        assert cosine(space["a"], space["b"]) == pytest.approx(1.0, abs=1e-12)

    def test_full_rank_reconstruction(self):
        rng = np.random.default_rng(4)
        docs = [
            [w for w in "abcdef" for _ in range(int(rng.integers(0, 5)))]
            for _ in range(6)
        ]
        docs = [d for d in docs if d]
        dtm = build_dtm(docs, min_count=1)
        k = min(dtm.n_words, dtm.doc_count)
        space = train_lsa(dtm, k=k, seed=0)
        dense = dtm.to_dense()
        u_sigma = np.vstack([space[w] for w in dtm.row_words()])
        # A = U S V^T and U S is the word matrix, so U S (U S)^+ A == A
        recon = u_sigma @ np.linalg.pinv(u_sigma) @ dense
        assert np.linalg.norm(recon - dense) < 1e-8

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 9999))
    def test_cosines_match_dense_svd_oracle(self, seed):
        rng = np.random.default_rng(seed)
        n_words = int(rng.integers(3, 20))
        n_docs = int(rng.integers(3, 20))
        r = int(rng.integers(1, min(n_words, n_docs) + 1))
        base = rng.random((n_words, r)) @ rng.random((r, n_docs))
        base = np.round(base * 10)
        words = [f"w{i:02d}" for i in range(n_words)]
        dtm = build_dtm(
            [
                [w for i, w in enumerate(words) for _ in range(int(base[i, d]))]
                for d in range(n_docs)
            ],
            min_count=1,
        )
        dense = dtm.to_dense()
        k = min(r, *dense.shape)
        space = train_lsa(dtm, k=k, seed=seed)

        u, s, _vt = np.linalg.svd(dense, full_matrices=False)
        oracle_vecs = u[:, :k] * s[:k]
        idx = {w: i for i, w in enumerate(dtm.row_words())}
        for w1 in dtm.vocab:
            for w2 in dtm.vocab:
                mine = cosine(space[w1], space[w2])
                v1, v2 = oracle_vecs[idx[w1]], oracle_vecs[idx[w2]]
                if np.linalg.norm(v1) == 0 or np.linalg.norm(v2) == 0:
                    continue
                oracle = float(
                    np.dot(v1, v2) / (np.linalg.norm(v1) * np.linalg.norm(v2))
                )
                assert mine == pytest.approx(oracle, abs=1e-6)

    def test_reconstruction_error_small_for_true_rank(self):
        rng = np.random.default_rng(11)
        left = np.round(rng.random((12, 3)) * 5)
        right = np.round(rng.random((3, 9)) * 5)
        counts = left @ right
        docs = [
            [f"w{i:02d}" for i in range(12) for _ in range(int(counts[i, d]))]
            for d in range(9)
        ]
        dtm = build_dtm(docs, min_count=1)
        space = train_lsa(dtm, k=3, seed=0)
        dense = dtm.to_dense()
        mat = np.vstack([space[w] for w in dtm.row_words()])
        recon = mat @ np.linalg.pinv(mat) @ dense
        assert np.linalg.norm(recon - dense) < 1e-6

    def test_k_out_of_range(self):
        dtm = build_dtm([["a"], ["b"]], min_count=1)
        with pytest.raises(WordsimError):
            train_lsa(dtm, k=3, seed=0)
        with pytest.raises(WordsimError):
            train_lsa(dtm, k=0, seed=0)

    def test_deterministic(self):
        dtm = build_dtm([["a", "b", "c"], ["b", "c", "d"], ["a", "d"]], min_count=1)
        s1 = train_lsa(dtm, k=2, seed=3)
        s2 = train_lsa(dtm, k=2, seed=3)
        for w in dtm.vocab:
            assert np.array_equal(s1[w], s2[w])

    def test_sparse_path_matches_dense(self):
        rng = np.random.default_rng(7)
        docs = [
            [f"w{int(i):03d}" for i in rng.integers(0, 60, size=30)]
            for _ in range(40)
        ]
        dtm = build_dtm(docs, min_count=1)
        dense_space = train_lsa(dtm, k=5, seed=2)
        from wordsim import vsm as vsm_mod

        # force the iterative branch by shrinking the dense-size threshold
        original = vsm_mod.train_lsa.__defaults__
        dense = dtm.to_dense()
        from scipy.sparse import csr_matrix
        from scipy.sparse.linalg import svds

        v0 = np.random.default_rng(2).standard_normal(min(dense.shape))
        u, s, _ = svds(csr_matrix(dense), k=5, v0=v0)
        order = np.argsort(s)[::-1]
        u, s = u[:, order], s[order]
        words = dtm.row_words()
        for j in range(5):
            pivot = np.argmax(np.abs(u[:, j]))
            if u[pivot, j] < 0:
                u[:, j] = -u[:, j]
        iterative = u * s
        for i, w in enumerate(words):
            a = dense_space[w] / np.linalg.norm(dense_space[w])
            b = iterative[i] / np.linalg.norm(iterative[i])
            assert np.allclose(np.abs(a @ b), 1.0, atol=1e-6)


class TestVecFile:
    def test_round_trip(self, tmp_path):
        space = EmbeddingSpace(
            dim=3,
            vectors={"cat": np.array([0.1, 0.2, 0.3]), "dog": np.array([1.0, 0.0, 0.0])},
        )
        path = tmp_path / "v.vec"
        save_vec_file(space, path)
        loaded = load_vec_file(path)
        assert loaded.dim == 3
        assert loaded.provenance == "loaded"
        for w in space.vectors:
            assert np.array_equal(loaded[w], space[w])

    def test_format_anchor(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 3\ncat 0.1 0.2 0.3\ndog 1 0 0\n")
        space = load_vec_file(path)
        assert space.dim == 3 and len(space.vectors) == 2

    def test_dimension_mismatch_line_number(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 3\ncat 0.1 0.2 0.3\ndog 1 0\n")
        with pytest.raises(ParseError) as err:
            load_vec_file(path)
        assert err.value.line == 3

    def test_count_mismatch(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("5 3\ncat 0.1 0.2 0.3\ndog 1 0 0\n")
        with pytest.raises(ParseError):
            load_vec_file(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("three 3\n")
        with pytest.raises(ParseError) as err:
            load_vec_file(path)
        assert err.value.line == 1

    def test_duplicate_word_last_wins_with_warning(self, tmp_path):
        path = tmp_path / "v.vec"
        path.write_text("2 2\ncat 1 0\ncat 0 1\n")
        with pytest.warns(UserWarning):
            space = load_vec_file(path)
        assert space["cat"].tolist() == [0, 1]

    def test_non_finite_rejected(self):
        with pytest.raises(WordsimError):
            EmbeddingSpace(dim=2, vectors={"x": np.array([np.nan, 1.0])})


class TestCosine:
    def test_identical(self):
        assert cosine(np.array([1.0, 2.0]), np.array([1.0, 2.0])) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0

    def test_hand_value(self):
        got = cosine(np.array([1.0, 0.0]), np.array([1.0, 1.0]))
        assert got == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_oov_and_zero_vector_errors(self):
        space = EmbeddingSpace(
            dim=2, vectors={"a": np.array([1.0, 0.0]), "z": np.array([0.0, 0.0])}
        )
        with pytest.raises(OutOfVocabularyError):
            pair_cosine(space, "a", "missing")
        with pytest.raises(NumericError):
            pair_cosine(space, "a", "z")

    @settings(max_examples=60)
    @given(
        u=st.lists(st.floats(-10, 10), min_size=3, max_size=3),
        v=st.lists(st.floats(-10, 10), min_size=3, max_size=3),
        a=st.floats(0.01, 100),
        b=st.floats(0.01, 100),
    )
    def test_symmetry_and_scale_invariance(self, u, v, a, b):
        u, v = np.array(u), np.array(v)
        if np.linalg.norm(u) < 1e-6 or np.linalg.norm(v) < 1e-6:
            return
        assert cosine(u, v) == cosine(v, u)
        assert cosine(a * u, b * v) == pytest.approx(cosine(u, v), abs=1e-12)
        assert -1.0 <= cosine(u, v) <= 1.0
