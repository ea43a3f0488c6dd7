"""Plain-text corpus ingestion: tokenizing, document splitting, counting."""

from __future__ import annotations

import re
from collections import Counter

from .errors import WordsimError

_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")


def tokenize(text):
    """Lowercase, split on non-alphanumeric runs, drop empty tokens."""
    return [tok for tok in _TOKEN_SPLIT.split(text.lower()) if tok]


def read_documents(path, unit="blocks"):
    """Read a UTF-8 text file into a list of token lists.

    ``unit='blocks'`` treats each blank-line-separated block as one
    document; ``unit='file'`` yields a single document for the whole file;
    ``unit='lines'`` yields one document per non-empty line.
    """
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    if unit == "file":
        chunks = [text]
    elif unit == "blocks":
        chunks = re.split(r"\n\s*\n", text)
    elif unit == "lines":
        chunks = text.splitlines()
    else:
        raise WordsimError(f"unknown document unit {unit!r}")
    docs = [tokenize(chunk) for chunk in chunks]
    return [doc for doc in docs if doc]


def count_tokens(documents):
    """Token frequency over a list of token lists."""
    counts = Counter()
    for doc in documents:
        counts.update(doc)
    return dict(counts)


def counts_from_corpus(path, unit="blocks"):
    """Lemma counts derived directly from a raw text file."""
    return count_tokens(read_documents(path, unit=unit))
