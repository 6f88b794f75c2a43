"""Flat logical forms for indexed sentences and questions.

A clause becomes a handful of ground facts over three predicates:

* ``object(concept, witness, entity)`` — the entity is an instance of the
  concept; the witness constant records the assertion itself.
* ``evt(concept, event, [participants...])`` — an event of the concept with
  its participant entities, deep subject first.
* ``holds(event)`` — the event is asserted to be true.  Omitted for negated
  clauses, so they can never be proven as positive answers.

Constants introduced for entities, witnesses and events are written ``v_x1``,
``v_o_a1`` and ``v_e1``; numbering restarts at 1 for every sentence, so in
memory each constant carries the sentence it belongs to.  Questions produce
the same shapes with variables (``A``, ``B``, ...) in place of the fresh
constants and no ``holds`` goal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from . import lingua
from .lingua import Lexicon, Pipeline, PredArgStructure, TaggedSentence

OBJECT = "object"
EVT = "evt"
HOLDS = "holds"

SKOLEM_RE = re.compile(r"^v_(?:x|o_a|e)\d+$")

_KIND_PREFIX = {"entity": "v_x", "witness": "v_o_a", "event": "v_e"}


class UnparseableQuery(Exception):
    """The question produced no usable goals."""


# ---------------------------------------------------------------------------
# Terms and literals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str
    # Sentence the constant was minted for; None for lexical symbols.  Two
    # sentences both use v_x1, so identity must include the scope.
    scope: int | None = None


@dataclass(frozen=True)
class ListTerm:
    items: tuple[Union[Var, Const], ...]


Term = Union[Var, Const, ListTerm]


@dataclass(frozen=True)
class Literal:
    predicate: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class HornFact:
    literal: Literal
    doc_id: str
    sent_id: int
    source_tokens: frozenset[int]


@dataclass(frozen=True)
class QueryForm:
    goals: tuple[Literal, ...]
    concept_symbols: frozenset[str]


def skolem(kind: str, ordinal: int, sent_id: int) -> Const:
    """Fresh constant name for a sentence-scoped entity/witness/event."""
    return Const(f"{_KIND_PREFIX[kind]}{ordinal}", scope=sent_id)


def concept_symbols_of(goals: Iterable[Literal]) -> frozenset[str]:
    """First-argument constants of the goals; drives store preselection."""
    out = set()
    for g in goals:
        if g.predicate in (OBJECT, EVT) and isinstance(g.args[0], Const):
            out.add(g.args[0].name)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Concept lexicon
# ---------------------------------------------------------------------------


class ConceptLexicon:
    """Synonym and hypernym tables over lemmas and concept symbols.

    File format, tab separated::

        SYN<TAB>lemma<TAB>concept      (concept must carry the s_ prefix)
        HYP<TAB>concept<TAB>hypernym

    Lemmas missing from the synonym table are their own concept.  The
    hypernym graph must be acyclic; it is compiled into extra object facts
    at indexing time so queries never need inference rules.
    """

    def __init__(self) -> None:
        self.synonyms: dict[str, str] = {}
        self.hypernyms: dict[str, tuple[str, ...]] = {}

    @classmethod
    def empty(cls) -> "ConceptLexicon":
        return cls()

    @classmethod
    def from_lines(cls, lines: Iterable[str], origin: str = "<memory>") -> "ConceptLexicon":
        lex = cls()
        for lineno, line in enumerate(lines, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[0] not in ("SYN", "HYP"):
                raise ValueError(f"{origin}:{lineno}: bad concept line: {line!r}")
            if parts[0] == "SYN":
                if not parts[2].startswith("s_"):
                    raise ValueError(
                        f"{origin}:{lineno}: synonym target {parts[2]!r} lacks s_ prefix"
                    )
                lex.synonyms[parts[1]] = parts[2]
            else:
                lex.hypernyms.setdefault(parts[1], ())
                lex.hypernyms[parts[1]] = lex.hypernyms[parts[1]] + (parts[2],)
        lex._check_acyclic(origin)
        return lex

    @classmethod
    def load(cls, path: str | Path) -> "ConceptLexicon":
        path = Path(path)
        return cls.from_lines(path.read_text(encoding="utf-8").splitlines(), origin=str(path))

    def _check_acyclic(self, origin: str) -> None:
        state: dict[str, int] = {}  # 1 visiting, 2 done

        def visit(node: str, trail: tuple[str, ...]) -> None:
            if state.get(node) == 2:
                return
            if state.get(node) == 1:
                raise ValueError(f"{origin}: hypernym cycle through {' -> '.join(trail + (node,))}")
            state[node] = 1
            for parent in self.hypernyms.get(node, ()):
                visit(parent, trail + (node,))
            state[node] = 2

        for start in list(self.hypernyms):
            visit(start, ())

    def concept_of(self, lemma: str) -> str:
        return self.synonyms.get(lemma, lemma)

    def hypernyms_of(self, concept: str) -> tuple[str, ...]:
        return self.hypernyms.get(concept, ())


# ---------------------------------------------------------------------------
# Clause building
# ---------------------------------------------------------------------------


class _Numbering:
    def __init__(self) -> None:
        self.counts = {"entity": 0, "witness": 0, "event": 0}

    def next(self, kind: str) -> int:
        self.counts[kind] += 1
        return self.counts[kind]


class _FactTerms:
    """Mints sentence-scoped constants for document clauses."""

    def __init__(self, sent_id: int) -> None:
        self.sent_id = sent_id
        self.numbering = _Numbering()

    def fresh(self, kind: str) -> Const:
        return skolem(kind, self.numbering.next(kind), self.sent_id)


class _QueryTerms:
    """Mints placeholder variables, renamed to A, B, C... afterwards."""

    def __init__(self) -> None:
        self.numbering = _Numbering()
        self.serial = 0

    def fresh(self, kind: str) -> Var:
        self.serial += 1
        return Var(f"_q{self.serial}")


class ClauseBuilder:
    """Builds the fact (or goal) literals for one sentence.

    Structures of the same sentence share entity constants through their
    tokens: a pronoun resolved to "file" reuses the entity minted when
    "file" itself was an argument, instead of inventing a second one.
    """

    def __init__(
        self,
        sentence: TaggedSentence,
        concepts: ConceptLexicon,
        lexicon: Lexicon,
        query_mode: bool = False,
    ) -> None:
        self.sentence = sentence
        self.concepts = concepts
        self.lexicon = lexicon
        self.query_mode = query_mode
        self.terms = _QueryTerms() if query_mode else _FactTerms(sentence.sent_id)
        self.entity_by_token: dict[int, Term] = {}
        # (literal, source tokens) in emission order
        self.emitted: list[tuple[Literal, frozenset[int]]] = []

    # -- helpers ------------------------------------------------------------

    def _is_unconstrained(self, idx: int) -> bool:
        tok = self.sentence.tokens[idx]
        if tok.tag == lingua.WH:
            return True
        if tok.tag == lingua.PRON and idx not in self.sentence.antecedents:
            return True
        return False

    def _entity_for(self, idx: int | None) -> tuple[Term, list[tuple[Literal, frozenset[int]]]]:
        """Entity term for an argument token plus any new object literals."""
        if idx is None:
            return self.terms.fresh("entity"), []
        idx = self.sentence.antecedents.get(idx, idx)
        if idx in self.entity_by_token:
            return self.entity_by_token[idx], []
        entity = self.terms.fresh("entity")
        self.entity_by_token[idx] = entity
        if self._is_unconstrained(idx):
            return entity, []
        tok = self.sentence.tokens[idx]
        concept = self.concepts.concept_of(tok.lemma)
        literals = [
            (Literal(OBJECT, (Const(concept), self.terms.fresh("witness"), entity)),
             frozenset({idx}))
        ]
        if not self.query_mode:
            # Hypernyms become extra stored facts so the prover stays rule-free.
            for parent in self.concepts.hypernyms_of(concept):
                literals.append(
                    (Literal(OBJECT, (Const(parent), self.terms.fresh("witness"), entity)),
                     frozenset({idx}))
                )
        return entity, literals

    # -- main entry ---------------------------------------------------------

    def add_structure(self, pa: PredArgStructure) -> None:
        group = frozenset(pa.verb_group) if pa.verb_group else frozenset({pa.verb_token})

        if self.query_mode and pa.verb_lemma == "be":
            # Identification question: object goals only, no event goal.
            for idx in (pa.subject, *pa.objects):
                if idx is None or self._is_unconstrained(idx):
                    continue
                _, literals = self._entity_for(idx)
                self.emitted.extend(literals)
            return

        subject_entity, subject_literals = self._entity_for(pa.subject)
        object_entities = []
        object_literals: list[tuple[Literal, frozenset[int]]] = []
        for idx in pa.objects:
            ent, lits = self._entity_for(idx)
            object_entities.append(ent)
            object_literals.extend(lits)

        event = self.terms.fresh("event")
        participants = ListTerm((subject_entity, *object_entities))
        evt_literal = (
            Literal(EVT, (Const(self.concepts.concept_of(pa.verb_lemma)), event, participants)),
            group,
        )

        if not self.query_mode and not pa.negated:
            self.emitted.append((Literal(HOLDS, (event,)), group))
        self.emitted.extend(subject_literals)
        self.emitted.append(evt_literal)
        self.emitted.extend(object_literals)


def facts_for_sentence(
    sentence: TaggedSentence,
    structures: Iterable[PredArgStructure],
    concepts: ConceptLexicon,
    lexicon: Lexicon,
) -> list[HornFact]:
    """All stored facts for one analyzed sentence, in canonical order."""
    builder = ClauseBuilder(sentence, concepts, lexicon, query_mode=False)
    for pa in structures:
        builder.add_structure(pa)
    return [
        HornFact(lit, sentence.doc_id, sentence.sent_id, sources)
        for lit, sources in builder.emitted
    ]


def build_fact_clauses(
    pa: PredArgStructure,
    sentence: TaggedSentence,
    concepts: ConceptLexicon,
    lexicon: Lexicon,
) -> list[HornFact]:
    """Facts for a single structure (fresh numbering; see facts_for_sentence)."""
    return facts_for_sentence(sentence, [pa], concepts, lexicon)


# ---------------------------------------------------------------------------
# Query building
# ---------------------------------------------------------------------------


def _letter_name(i: int) -> str:
    return chr(ord("A") + i) if i < 26 else f"V{i + 1}"


def _rename_vars(goals: list[tuple[Literal, frozenset[int]]]) -> tuple[Literal, ...]:
    """Rename placeholder variables to A, B, C... by first appearance."""
    mapping: dict[str, Var] = {}

    def sub(term: Term) -> Term:
        if isinstance(term, Var):
            if term.name not in mapping:
                mapping[term.name] = Var(_letter_name(len(mapping)))
            return mapping[term.name]
        if isinstance(term, ListTerm):
            return ListTerm(tuple(sub(t) for t in term.items))
        return term

    return tuple(
        Literal(lit.predicate, tuple(sub(a) for a in lit.args)) for lit, _ in goals
    )


def build_query_goals(
    question: str, pipeline: Pipeline, concepts: ConceptLexicon
) -> QueryForm:
    """Turn a question into proof goals.

    Same derivation as for stored sentences except that fresh constants
    become variables, no ``holds`` goal is emitted, hypernyms are not
    expanded (they are compiled on the fact side), and wh-words or
    unresolved pronouns leave their argument slot unconstrained.

    Raises UnparseableQuery when no goals can be derived.
    """
    tagged, structures = pipeline.analyze("", 0, question)
    if not structures:
        raise UnparseableQuery(f"no clause structure found in {question!r}")
    builder = ClauseBuilder(tagged, concepts, pipeline.lexicon, query_mode=True)
    for pa in structures:
        builder.add_structure(pa)
    goals = _rename_vars(builder.emitted)
    if not goals:
        raise UnparseableQuery(f"question yields no provable goals: {question!r}")
    return QueryForm(goals=goals, concept_symbols=concept_symbols_of(goals))


# ---------------------------------------------------------------------------
# Canonical text form
# ---------------------------------------------------------------------------


def render_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Const):
        return term.name
    return "[" + ",".join(render_term(t) for t in term.items) + "]"


def render_literal(lit: Literal) -> str:
    return f"{lit.predicate}(" + ",".join(render_term(a) for a in lit.args) + ")"


def render_fact_line(fact: HornFact) -> str:
    return render_literal(fact.literal) + "."


_FACT_LINE_RE = re.compile(r"^([a-z_][a-z0-9_]*)\((.*)\)\.$")


def _split_args(body: str) -> list[str]:
    args = []
    depth = 0
    cur = ""
    for ch in body:
        if ch == "," and depth == 0:
            args.append(cur)
            cur = ""
            continue
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced ']'")
        cur += ch
    if depth != 0:
        raise ValueError("unbalanced '['")
    if cur or args:
        args.append(cur)
    return args


def _parse_const(text: str, sent_id: int) -> Const:
    if not re.fullmatch(r"[A-Za-z0-9_-]+", text):
        raise ValueError(f"bad constant {text!r}")
    if SKOLEM_RE.match(text):
        return Const(text, scope=sent_id)
    return Const(text)


def parse_fact_line(line: str, sent_id: int) -> Literal:
    """Parse one canonical fact line, re-attaching the sentence scope.

    Raises ValueError on any malformed input.
    """
    m = _FACT_LINE_RE.match(line)
    if not m:
        raise ValueError(f"not a fact line: {line!r}")
    predicate, body = m.group(1), m.group(2)
    if predicate not in (OBJECT, EVT, HOLDS):
        raise ValueError(f"unknown predicate {predicate!r}")
    args: list[Term] = []
    for raw in _split_args(body):
        if raw.startswith("[") and raw.endswith("]"):
            inner = raw[1:-1]
            items = tuple(
                _parse_const(p, sent_id) for p in (inner.split(",") if inner else [])
            )
            args.append(ListTerm(items))
        else:
            args.append(_parse_const(raw, sent_id))
    lit = Literal(predicate, tuple(args))
    _check_shape(lit)
    return lit


def _check_shape(lit: Literal) -> None:
    if lit.predicate == OBJECT and len(lit.args) != 3:
        raise ValueError("object/3 expected")
    if lit.predicate == EVT and (len(lit.args) != 3 or not isinstance(lit.args[2], ListTerm)):
        raise ValueError("evt/3 with participant list expected")
    if lit.predicate == HOLDS and len(lit.args) != 1:
        raise ValueError("holds/1 expected")
