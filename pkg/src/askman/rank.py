"""Turning proofs into ranked, highlighted answers.

An answer is a sentence plus the character spans that made it match.  The
score is the reciprocal of the sentence's reading count: a sentence the
tagger found unambiguous outranks one that kept two readings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .logform import HornFact, QueryForm, render_term
from .prover import Proof
from .store import CorpusStore, QueryHit, SentenceMeta


@dataclass(frozen=True)
class Answer:
    doc_id: str
    sent_id: int
    sentence_text: str
    spans: tuple[tuple[int, int], ...]  # sorted, non-overlapping, in bounds
    score: float
    bindings: tuple[tuple[str, str], ...]  # query variable -> rendered term


def score_for(reading_count: int) -> float:
    """Relevance of a sentence: 1 over its residual ambiguity."""
    if reading_count < 1:
        raise ValueError("reading count must be >= 1")
    return 1.0 / reading_count


def highlight_spans(
    facts: list[HornFact], meta: SentenceMeta
) -> tuple[tuple[int, int], ...]:
    """Character spans for the tokens that support the matched facts.

    Token spans are merged when only whitespace separates them, so "rm
    removes" becomes one span while "removes ... files" stays two.
    """
    token_ids = sorted({i for fact in facts for i in fact.source_tokens})
    spans = [meta.spans[i] for i in token_ids if 0 <= i < len(meta.spans)]
    spans.sort()
    merged: list[list[int]] = []
    for start, end in spans:
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        elif merged and meta.raw_text[merged[-1][1]:start].strip() == "":
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return tuple((s, e) for s, e in merged)


def _answers_for_hit(hit: QueryHit, store: CorpusStore) -> list[Answer]:
    """One answer per sentence involved in the proof (normally just one)."""
    doc = store.document(hit.doc_id)
    by_sent: dict[int, list[HornFact]] = {}
    for ref in hit.proof.matched:
        fact = doc.facts[ref.ordinal]
        by_sent.setdefault(ref.sent_id, []).append(fact)
    bindings = tuple(
        (name, render_term(term)) for name, term in hit.proof.bindings
    )
    answers = []
    for sent_id in sorted(by_sent):
        meta = doc.sentences[sent_id]
        answers.append(
            Answer(
                doc_id=hit.doc_id,
                sent_id=sent_id,
                sentence_text=meta.raw_text,
                spans=highlight_spans(by_sent[sent_id], meta),
                score=score_for(meta.reading_count),
                bindings=bindings,
            )
        )
    return answers


def rank_answers(hits: list[QueryHit], store: CorpusStore) -> list[Answer]:
    """Deduplicate per sentence and order by score, then document, then id.

    When several proofs land on the same sentence the one highlighting the
    most text wins; ties keep the earliest proof.
    """
    best: dict[tuple[str, int], tuple[int, int, Answer]] = {}
    for order, hit in enumerate(hits):
        for answer in _answers_for_hit(hit, store):
            key = (answer.doc_id, answer.sent_id)
            coverage = sum(e - s for s, e in answer.spans)
            if key not in best:
                best[key] = (coverage, order, answer)
            else:
                old_cov, old_order, _ = best[key]
                if coverage > old_cov:
                    best[key] = (coverage, old_order, answer)
    ranked = [entry[2] for entry in best.values()]
    ranked.sort(key=lambda a: (-a.score, a.doc_id, a.sent_id))
    return ranked


def answer_query(form: QueryForm, store: CorpusStore, mode: str) -> list[Answer]:
    """Prove the query in the requested mode and rank the results."""
    return rank_answers(store.query(form, mode), store)
