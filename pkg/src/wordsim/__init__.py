"""wordsim: a word-similarity modeling workbench.

Taxonomy-based metrics, distributional models, lexical pair features, and
a cross-validated regression harness for comparing them on rating data.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    CycleError,
    MissingResourceError,
    NumericError,
    OutOfVocabularyError,
    ParseError,
    PosMismatchError,
    WordsimError,
)
