"""Distributional models: term-document counts, LSA, and vector-file I/O.

Word vectors live in an :class:`EmbeddingSpace` regardless of where they
came from (LSA factorization, skip-gram training, or a pretrained text
file); similarity between words is always the cosine of their vectors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .corpus import tokenize
from .errors import NumericError, OutOfVocabularyError, ParseError, WordsimError


@dataclass
class TermDocMatrix:
    """Sparse word-by-document count matrix with a dense vocab index."""

    vocab: dict
    doc_count: int
    cells: dict  # (row, doc) -> count

    @property
    def n_words(self):
        return len(self.vocab)

    def to_dense(self):
        dense = np.zeros((self.n_words, self.doc_count))
        for (row, doc), count in self.cells.items():
            dense[row, doc] = count
        return dense

    def row_words(self):
        """Words ordered by their row index."""
        ordered = [None] * len(self.vocab)
        for word, idx in self.vocab.items():
            ordered[idx] = word
        return ordered


@dataclass
class EmbeddingSpace:
    """Fixed-dimension word vectors plus where they came from."""

    dim: int
    vectors: dict
    provenance: str = "loaded"

    def __post_init__(self):
        for word, vec in self.vectors.items():
            vec = np.asarray(vec, dtype=float)
            if vec.shape != (self.dim,):
                raise WordsimError(
                    f"vector for {word!r} has length {vec.shape}, "
                    f"expected ({self.dim},)"
                )
            if not np.all(np.isfinite(vec)):
                raise WordsimError(f"non-finite vector for {word!r}")
            self.vectors[word] = vec

    def __contains__(self, word):
        return word in self.vectors

    def __getitem__(self, word):
        try:
            return self.vectors[word]
        except KeyError:
            raise OutOfVocabularyError(word, where="embedding space") from None

    def words(self):
        return list(self.vectors)


def build_dtm(corpus, min_count=1):
    """Count occurrences of each word per document.

    ``corpus`` is a sequence of documents; each document is either a token
    list or a raw string (tokenized with the standard tokenizer). Words
    whose total count falls below ``min_count`` are dropped.
    """
    docs = [tokenize(doc) if isinstance(doc, str) else list(doc) for doc in corpus]
    if not docs:
        raise WordsimError("empty corpus: no documents")

    totals = {}
    for doc in docs:
        for tok in doc:
            totals[tok] = totals.get(tok, 0) + 1
    kept = sorted(w for w, c in totals.items() if c >= min_count)
    vocab = {w: i for i, w in enumerate(kept)}

    cells = {}
    for d, doc in enumerate(docs):
        for tok in doc:
            row = vocab.get(tok)
            if row is not None:
                key = (row, d)
                cells[key] = cells.get(key, 0) + 1
    return TermDocMatrix(vocab=vocab, doc_count=len(docs), cells=cells)


def train_lsa(dtm, k, seed=0, scale_by_singular=True):
    """Truncated SVD of the raw count matrix; word vectors are U_k Σ_k rows.

    Uses a dense LAPACK SVD for small problems and seeded ARPACK otherwise;
    either way the result is deterministic given the seed, singular values
    are non-increasing, and each component's sign is fixed so the entry of
    largest magnitude in U is positive. With ``scale_by_singular=False``
    the rows of U_k alone are returned.
    """
    n_words, n_docs = dtm.n_words, dtm.doc_count
    rank_cap = min(n_words, n_docs)
    if not 1 <= k <= rank_cap:
        raise WordsimError(
            f"k={k} out of range: need 1 <= k <= min(words, docs) = {rank_cap}"
        )

    use_dense = k == rank_cap or n_words * n_docs <= 4_000_000
    if use_dense:
        u, s, _vt = np.linalg.svd(dtm.to_dense(), full_matrices=False)
        u, s = u[:, :k], s[:k]
    else:
        from scipy.sparse import csr_matrix
        from scipy.sparse.linalg import ArpackNoConvergence, svds

        rows, cols, vals = [], [], []
        for (r, c), v in dtm.cells.items():
            rows.append(r)
            cols.append(c)
            vals.append(float(v))
        matrix = csr_matrix((vals, (rows, cols)), shape=(n_words, n_docs))
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(min(matrix.shape))
        try:
            u, s, _vt = svds(matrix, k=k, v0=v0)
        except ArpackNoConvergence as exc:
            raise NumericError(
                f"LSA solver failed to converge for k={k}"
            ) from exc
        order = np.argsort(s)[::-1]
        u, s = u[:, order], s[order]

    # Deterministic sign: largest-|.| entry of each column positive.
    for j in range(u.shape[1]):
        pivot = np.argmax(np.abs(u[:, j]))
        if u[pivot, j] < 0:
            u[:, j] = -u[:, j]

    mat = u * s if scale_by_singular else u
    words = dtm.row_words()
    vectors = {w: mat[i].copy() for i, w in enumerate(words)}
    return EmbeddingSpace(dim=k, vectors=vectors, provenance="lsa")


def load_vec_file(path):
    """Load word vectors from text: ``count dim`` header then one word per line."""
    vectors = {}
    with open(path, encoding="utf-8") as handle:
        header = handle.readline()
        parts = header.split()
        if len(parts) != 2:
            raise ParseError(
                f"bad header {header.strip()!r}: expected '<count> <dim>'",
                path=path,
                line=1,
            )
        try:
            count, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(
                f"bad header {header.strip()!r}: expected two integers",
                path=path,
                line=1,
            ) from None
        if count < 0 or dim < 1:
            raise ParseError("header counts must be positive", path=path, line=1)

        n_lines = 0
        for lineno, raw in enumerate(handle, start=2):
            if not raw.strip():
                continue
            n_lines += 1
            parts = raw.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            word = parts[0]
            values = parts[1:]
            if len(values) != dim:
                raise ParseError(
                    f"word {word!r} has {len(values)} values, expected {dim}",
                    path=path,
                    line=lineno,
                )
            try:
                vec = np.array([float(v) for v in values])
            except ValueError:
                raise ParseError(
                    f"non-numeric vector component for {word!r}",
                    path=path,
                    line=lineno,
                ) from None
            if word in vectors:
                warnings.warn(
                    f"duplicate word {word!r} in {path}; keeping the last",
                    stacklevel=2,
                )
            vectors[word] = vec
        if n_lines != count:
            raise ParseError(
                f"header promised {count} words, file has {n_lines}",
                path=path,
            )
    return EmbeddingSpace(dim=dim, vectors=vectors, provenance="loaded")


def save_vec_file(space, path):
    """Write an :class:`EmbeddingSpace` in the text vector format."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(f"{len(space.vectors)} {space.dim}\n")
        for word, vec in space.vectors.items():
            values = " ".join(repr(float(v)) for v in vec)
            handle.write(f"{word} {values}\n")


def cosine(u, v):
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise NumericError("cosine undefined for zero vectors")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def pair_cosine(space, w1, w2):
    """Cosine between two words' vectors; errors on OOV or zero vectors."""
    return cosine(space[w1], space[w2])
