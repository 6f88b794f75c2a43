"""High-level question answering over an indexed store."""

from __future__ import annotations

from pathlib import Path

from .logform import QueryForm, UnparseableQuery, build_query_goals
from .rank import Answer, rank_answers
from .store import EXTERNAL, INTERNAL, CorpusStore


class AnswerEngine:
    """Parses questions and proves them against one corpus store."""

    def __init__(self, store: CorpusStore):
        self.store = store

    @classmethod
    def open(cls, root: str | Path) -> "AnswerEngine":
        return cls(CorpusStore.open(root))

    def parse_question(self, question: str) -> QueryForm:
        """Raises UnparseableQuery when the question has no usable clause."""
        return build_query_goals(question, self.store.pipeline, self.store.concepts)

    def answer(self, question: str, mode: str = EXTERNAL) -> list[Answer]:
        form = self.parse_question(question)
        return self.answer_form(form, mode)

    def answer_form(self, form: QueryForm, mode: str) -> list[Answer]:
        return rank_answers(self.store.query(form, mode), self.store)

    def doc_count(self) -> int:
        return len(self.store.doc_ids())


__all__ = ["AnswerEngine", "UnparseableQuery", "INTERNAL", "EXTERNAL"]
