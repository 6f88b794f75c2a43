"""askman: answer extraction for small technical-manual collections.

Documents are indexed offline into flat logical facts; questions become
proof goals over the same shapes; answers are the sentences whose facts
prove the goals, with the supporting phrases highlighted.
"""

from .engine import EXTERNAL, INTERNAL, AnswerEngine
from .lingua import Lexicon, Pipeline
from .logform import ConceptLexicon, QueryForm, UnparseableQuery
from .rank import Answer
from .store import CorpusStore, DuplicateDoc, StoreCorrupt, StoreError

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "AnswerEngine",
    "ConceptLexicon",
    "CorpusStore",
    "DuplicateDoc",
    "EXTERNAL",
    "INTERNAL",
    "Lexicon",
    "Pipeline",
    "QueryForm",
    "StoreCorrupt",
    "StoreError",
    "UnparseableQuery",
]
