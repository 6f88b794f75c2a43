"""Per-document clause stores and the corpus index.

On disk a store root looks like::

    <root>/index.tsv          symbol<TAB>docId lines, sorted, duplicate free
    <root>/docs/<docId>.facts #sent headers + one canonical fact line each
    <root>/docs/<docId>.meta  doc/sent/tok/src lines (sizes, spans, sources)
    <root>/lexicon.tsv        word lexicon the corpus was indexed with
    <root>/concepts.tsv       concept lexicon the corpus was indexed with

Everything is UTF-8 with LF endings and written in canonical order, so
re-indexing the same corpus is byte-for-byte reproducible.

Queries run in one of two modes: ``internal`` proves against every document
store preloaded in memory, ``external`` first narrows candidates through the
symbol index and then loads only those stores from disk.  Both must return
the same answers; external mode just opens fewer files.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .lingua import Lexicon, Pipeline
from .logform import (
    EVT,
    HOLDS,
    ConceptLexicon,
    Const,
    HornFact,
    QueryForm,
    facts_for_sentence,
    parse_fact_line,
    render_fact_line,
)
from .prover import Proof, solve

logger = logging.getLogger(__name__)

INTERNAL = "internal"
EXTERNAL = "external"


class StoreError(Exception):
    pass


class DuplicateDoc(StoreError):
    pass


class StoreCorrupt(StoreError):
    """Malformed store file; the message names the file and line."""


@dataclass(frozen=True)
class SentenceMeta:
    raw_text: str
    reading_count: int
    spans: tuple[tuple[int, int], ...]


@dataclass
class DocClauseStore:
    doc_id: str
    source_bytes: int
    sentences: dict[int, SentenceMeta]
    facts: tuple[HornFact, ...]  # canonical order: sent id, then emission order


@dataclass(frozen=True)
class QueryHit:
    doc_id: str
    sent_id: int
    proof: Proof


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def serialize_facts(doc: DocClauseStore) -> str:
    lines = []
    by_sent: dict[int, list[HornFact]] = {s: [] for s in doc.sentences}
    for fact in doc.facts:
        by_sent.setdefault(fact.sent_id, []).append(fact)
    for sent_id in sorted(by_sent):
        meta = doc.sentences[sent_id]
        lines.append(f"#sent {sent_id} {meta.reading_count} {meta.raw_text}")
        for fact in by_sent[sent_id]:
            lines.append(render_fact_line(fact))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_facts(text: str, doc_id: str, origin: str) -> tuple[dict[int, tuple[int, str]], list]:
    """Parse a .facts file into sentence headers and (sent_id, literal) pairs."""
    headers: dict[int, tuple[int, str]] = {}
    literals: list[tuple[int, object]] = []
    current: int | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#sent "):
            parts = line.split(" ", 3)
            try:
                sent_id = int(parts[1])
                reading_count = int(parts[2])
            except (IndexError, ValueError) as exc:
                raise StoreCorrupt(f"{origin}:{lineno}: bad sentence header") from exc
            raw_text = parts[3] if len(parts) > 3 else ""
            if sent_id in headers:
                raise StoreCorrupt(f"{origin}:{lineno}: duplicate sentence {sent_id}")
            headers[sent_id] = (reading_count, raw_text)
            current = sent_id
            continue
        if current is None:
            raise StoreCorrupt(f"{origin}:{lineno}: fact before any #sent header")
        try:
            literals.append((current, parse_fact_line(line, current)))
        except ValueError as exc:
            raise StoreCorrupt(f"{origin}:{lineno}: {exc}") from exc
    return headers, literals


def serialize_meta(doc: DocClauseStore) -> str:
    lines = [f"doc\t{doc.doc_id}\t{doc.source_bytes}"]
    for sent_id in sorted(doc.sentences):
        meta = doc.sentences[sent_id]
        lines.append(f"sent\t{sent_id}\t{meta.reading_count}\t{meta.raw_text}")
        for i, (start, end) in enumerate(meta.spans):
            lines.append(f"tok\t{sent_id}\t{i}\t{start}\t{end}")
    for ordinal, fact in enumerate(doc.facts):
        sources = ",".join(str(i) for i in sorted(fact.source_tokens))
        lines.append(f"src\t{ordinal}\t{sources}")
    return "\n".join(lines) + "\n"


def parse_meta(text: str, origin: str):
    """Parse a .meta file into (doc_id, size, sentence metas, fact sources)."""
    doc_id = None
    size = 0
    sent_rows: dict[int, tuple[int, str]] = {}
    spans: dict[int, list[tuple[int, int]]] = {}
    sources: dict[int, frozenset[int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        kind, _, rest = line.partition("\t")
        try:
            if kind == "doc":
                name, _, nbytes = rest.partition("\t")
                doc_id, size = name, int(nbytes)
            elif kind == "sent":
                parts = rest.split("\t", 2)
                sent_rows[int(parts[0])] = (int(parts[1]), parts[2] if len(parts) > 2 else "")
            elif kind == "tok":
                sent_id, idx, start, end = (int(p) for p in rest.split("\t"))
                spans.setdefault(sent_id, []).append((start, end))
                if idx != len(spans[sent_id]) - 1:
                    raise StoreCorrupt(f"{origin}:{lineno}: token index out of order")
            elif kind == "src":
                ordinal, _, toks = rest.partition("\t")
                sources[int(ordinal)] = frozenset(
                    int(t) for t in toks.split(",") if t != ""
                )
            else:
                raise StoreCorrupt(f"{origin}:{lineno}: unknown record {kind!r}")
        except StoreCorrupt:
            raise
        except (ValueError, IndexError) as exc:
            raise StoreCorrupt(f"{origin}:{lineno}: malformed {kind} record") from exc
    if doc_id is None:
        raise StoreCorrupt(f"{origin}:1: missing doc record")
    metas = {
        s: SentenceMeta(raw, rc, tuple(spans.get(s, ())))
        for s, (rc, raw) in sent_rows.items()
    }
    return doc_id, size, metas, sources


# ---------------------------------------------------------------------------
# Corpus store
# ---------------------------------------------------------------------------


class CorpusStore:
    """A directory of per-document clause stores plus the symbol index."""

    def __init__(self, root: str | Path, lexicon: Lexicon, concepts: ConceptLexicon):
        self.root = Path(root)
        self.lexicon = lexicon
        self.concepts = concepts
        self.pipeline = Pipeline(lexicon)
        self.index: dict[str, set[str]] = {}
        self.doc_sizes: dict[str, int] = {}
        self.fact_files_opened = 0  # observability for the preselection claim
        self._preloaded: dict[str, DocClauseStore] | None = None
        self._doc_cache: dict[str, DocClauseStore] = {}

    # -- construction -------------------------------------------------------

    @classmethod
    def create(
        cls, root: str | Path, lexicon_path: str | Path, concepts_path: str | Path
    ) -> "CorpusStore":
        """Initialize an empty store root, keeping copies of both lexicons."""
        root = Path(root)
        try:
            (root / "docs").mkdir(parents=True, exist_ok=True)
            lexicon = Lexicon.load(lexicon_path)
            concepts = ConceptLexicon.load(concepts_path)
            (root / "lexicon.tsv").write_text(
                Path(lexicon_path).read_text(encoding="utf-8"), encoding="utf-8", newline="\n"
            )
            (root / "concepts.tsv").write_text(
                Path(concepts_path).read_text(encoding="utf-8"), encoding="utf-8", newline="\n"
            )
        except OSError as exc:
            raise StoreError(f"cannot initialize store at {root}: {exc}") from exc
        store = cls(root, lexicon, concepts)
        store.save_index()
        return store

    @classmethod
    def open(cls, root: str | Path) -> "CorpusStore":
        root = Path(root)
        lex_path = root / "lexicon.tsv"
        con_path = root / "concepts.tsv"
        if not lex_path.is_file() or not con_path.is_file():
            raise StoreError(f"{root} is not a store root (missing lexicon files)")
        store = cls(root, Lexicon.load(lex_path), ConceptLexicon.load(con_path))
        store.load_index()
        return store

    # -- indexing -----------------------------------------------------------

    def ingest_document(self, doc_id: str, body: str) -> DocClauseStore:
        """Analyze a document body (one sentence per line) and persist it."""
        facts_path = self._facts_path(doc_id)
        if facts_path.exists():
            raise DuplicateDoc(f"document {doc_id!r} is already indexed")

        sentences: dict[int, SentenceMeta] = {}
        facts: list[HornFact] = []
        sent_id = 0
        for line in body.splitlines():
            raw = line.rstrip("\n")
            if not raw.strip():
                continue
            tagged, structures = self.pipeline.analyze(doc_id, sent_id, raw)
            if not structures:
                logger.debug("no parse for %s sentence %d: %r", doc_id, sent_id, raw)
            sentences[sent_id] = SentenceMeta(
                raw_text=raw,
                reading_count=tagged.reading_count,
                spans=tuple((t.start, t.end) for t in tagged.tokens),
            )
            facts.extend(facts_for_sentence(tagged, structures, self.concepts, self.lexicon))
            sent_id += 1

        doc = DocClauseStore(
            doc_id=doc_id,
            source_bytes=len(body.encode("utf-8")),
            sentences=sentences,
            facts=tuple(facts),
        )
        try:
            self._write(facts_path, serialize_facts(doc))
            self._write(self._meta_path(doc_id), serialize_meta(doc))
        except OSError as exc:
            raise StoreError(f"cannot write store files for {doc_id!r}: {exc}") from exc
        for symbol in self._symbols_of(doc):
            self.index.setdefault(symbol, set()).add(doc_id)
        self.doc_sizes[doc_id] = doc.source_bytes
        if self._preloaded is not None:
            self._preloaded[doc_id] = doc
        return doc

    @staticmethod
    def _symbols_of(doc: DocClauseStore) -> set[str]:
        out = set()
        for fact in doc.facts:
            if fact.literal.predicate in ("object", "evt"):
                arg0 = fact.literal.args[0]
                if isinstance(arg0, Const):
                    out.add(arg0.name)
        return out

    def save_index(self) -> None:
        lines = []
        for symbol in sorted(self.index):
            for doc_id in sorted(self.index[symbol]):
                lines.append(f"{symbol}\t{doc_id}")
        self._write(self.root / "index.tsv", "\n".join(lines) + ("\n" if lines else ""))

    def load_index(self) -> None:
        path = self.root / "index.tsv"
        self.index = {}
        if not path.is_file():
            return
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            if not line.strip():
                continue
            symbol, sep, doc_id = line.partition("\t")
            if not sep or not symbol or not doc_id:
                raise StoreCorrupt(f"{path}:{lineno}: expected symbol<TAB>docId")
            self.index.setdefault(symbol, set()).add(doc_id)

    def rebuild_index(self) -> dict[str, set[str]]:
        """Recompute the symbol index by scanning every fact file."""
        fresh: dict[str, set[str]] = {}
        for doc_id in self.doc_ids():
            doc = self._parse_doc(doc_id)
            for symbol in self._symbols_of(doc):
                fresh.setdefault(symbol, set()).add(doc_id)
        return fresh

    # -- access -------------------------------------------------------------

    def doc_ids(self) -> list[str]:
        docs_dir = self.root / "docs"
        if not docs_dir.is_dir():
            return []
        return sorted(p.stem for p in docs_dir.glob("*.facts"))

    def _facts_path(self, doc_id: str) -> Path:
        return self.root / "docs" / f"{doc_id}.facts"

    def _meta_path(self, doc_id: str) -> Path:
        return self.root / "docs" / f"{doc_id}.meta"

    def _parse_doc(self, doc_id: str) -> DocClauseStore:
        facts_path = self._facts_path(doc_id)
        meta_path = self._meta_path(doc_id)
        self.fact_files_opened += 1
        try:
            facts_text = facts_path.read_text(encoding="utf-8")
            meta_text = meta_path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StoreError(f"cannot read store files for {doc_id!r}: {exc}") from exc
        headers, literals = parse_facts(facts_text, doc_id, str(facts_path))
        meta_doc_id, size, metas, sources = parse_meta(meta_text, str(meta_path))
        if meta_doc_id != doc_id:
            raise StoreCorrupt(f"{meta_path}:1: doc record names {meta_doc_id!r}")
        for sent_id, (reading_count, raw_text) in headers.items():
            if sent_id not in metas:
                raise StoreCorrupt(f"{meta_path}:1: missing sent record for {sent_id}")
        facts = []
        for ordinal, (sent_id, literal) in enumerate(literals):
            if ordinal not in sources or not sources[ordinal]:
                raise StoreCorrupt(
                    f"{meta_path}:1: missing src record for fact {ordinal}"
                )
            facts.append(HornFact(literal, doc_id, sent_id, sources[ordinal]))
        return DocClauseStore(doc_id, size, metas, tuple(facts))

    def load_doc(self, doc_id: str) -> DocClauseStore:
        """Read one document store from disk (counted; external mode path)."""
        doc = self._parse_doc(doc_id)
        self._doc_cache[doc_id] = doc
        return doc

    def preload_all(self) -> dict[str, DocClauseStore]:
        if self._preloaded is None:
            self._preloaded = {d: self._parse_doc(d) for d in self.doc_ids()}
        return self._preloaded

    def document(self, doc_id: str) -> DocClauseStore:
        """Document metadata for ranking; served from memory when possible."""
        if self._preloaded is not None and doc_id in self._preloaded:
            return self._preloaded[doc_id]
        if doc_id in self._doc_cache:
            return self._doc_cache[doc_id]
        return self.load_doc(doc_id)

    def sentence_meta(self, doc_id: str, sent_id: int) -> SentenceMeta:
        return self.document(doc_id).sentences[sent_id]

    # -- querying -----------------------------------------------------------

    def preselect(self, symbols: Iterable[str]) -> set[str]:
        """Documents that contain every requested symbol.

        No symbols means no constraint: all documents.  A symbol absent from
        the index yields the empty set, so such queries touch no stores.
        """
        symbols = list(symbols)
        if not symbols:
            return set(self.doc_ids())
        out: set[str] | None = None
        for symbol in symbols:
            docs = self.index.get(symbol, set())
            out = set(docs) if out is None else out & docs
            if not out:
                return set()
        return out or set()

    def query(self, form: QueryForm, mode: str) -> list[QueryHit]:
        """Prove the query against the corpus and return every hit.

        Hits are ordered by document id, then sentence id, then proof order,
        in both modes.  Proofs whose matched events were never asserted
        (negated clauses have no ``holds`` fact) are dropped.
        """
        if mode not in (INTERNAL, EXTERNAL):
            raise ValueError(f"unknown mode {mode!r}")
        hits: list[QueryHit] = []
        if mode == INTERNAL:
            docs = self.preload_all()
            for doc_id in sorted(docs):
                hits.extend(self._hits_for_doc(docs[doc_id], form))
        else:
            for doc_id in sorted(self.preselect(form.concept_symbols)):
                hits.extend(self._hits_for_doc(self.load_doc(doc_id), form))
        return hits

    def _hits_for_doc(self, doc: DocClauseStore, form: QueryForm) -> list[QueryHit]:
        asserted = {
            fact.literal.args[0]
            for fact in doc.facts
            if fact.literal.predicate == HOLDS
        }
        rows = []
        for order, proof in enumerate(solve(form.goals, doc.facts)):
            if not self._proof_asserted(proof, doc, asserted):
                continue
            sent_id = proof.matched[0].sent_id if proof.matched else 0
            rows.append((sent_id, order, proof))
        rows.sort(key=lambda r: (r[0], r[1]))
        return [QueryHit(doc.doc_id, sent_id, proof) for sent_id, _, proof in rows]

    @staticmethod
    def _proof_asserted(proof: Proof, doc: DocClauseStore, asserted: set) -> bool:
        for ref in proof.matched:
            fact = doc.facts[ref.ordinal]
            if fact.literal.predicate == EVT and fact.literal.args[1] not in asserted:
                return False
        return True

    # -- helpers ------------------------------------------------------------

    @staticmethod
    def _write(path: Path, text: str) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
