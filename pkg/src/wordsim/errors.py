"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, data and parse
problems exit 2, numeric failures exit 3.
"""


class WordsimError(Exception):
    """Base class for all package-specific errors."""


class ParseError(WordsimError):
    """Malformed input file. Carries the path and 1-based line number."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        super().__init__(prefix + message)


class CycleError(WordsimError):
    """The hypernym graph contains a cycle."""

    def __init__(self, synset_id):
        self.synset_id = synset_id
        super().__init__(f"hypernym cycle detected at synset {synset_id!r}")


class PosMismatchError(WordsimError):
    """Two synsets or words from different part-of-speech hierarchies."""


class OutOfVocabularyError(WordsimError):
    """A queried word is missing from a lexicon, taxonomy, or embedding."""

    def __init__(self, word, where=""):
        self.word = word
        suffix = f" in {where}" if where else ""
        super().__init__(f"word {word!r} not found{suffix}")


class MissingResourceError(WordsimError):
    """A feature source named by a model spec cannot be resolved."""


class NumericError(WordsimError):
    """Numeric failure: divergence, zero variance, convergence cap hit."""
