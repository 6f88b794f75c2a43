"""Shallow linguistic analysis for manual-page sentences.

The pipeline is deliberately rule-based and deterministic: tokenize, assign
part-of-speech tags from a small lexicon (recording how many readings survive),
lemmatize with suffix rules, resolve intra-sentential pronouns by salience, and
extract one predicate-argument structure per finite verb group.  Everything
here is pure; the same input always yields the same output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping

# Tag inventory. Multi-tag ambiguity is only ever kept for open-class words;
# the reading count of a sentence is the product of the surviving tag counts.
NOUN = "NOUN"
VERB = "VERB"
AUX = "AUX"
DET = "DET"
PRON = "PRON"
PREP = "PREP"
CONJ = "CONJ"
WH = "WH"
ADJ = "ADJ"
NUM = "NUM"
OTHER = "OTHER"

ALL_TAGS = frozenset({NOUN, VERB, AUX, DET, PRON, PREP, CONJ, WH, ADJ, NUM, OTHER})

# Preference used to pick the canonical tag out of a surviving ambiguity set.
_TAG_PREFERENCE = (NOUN, VERB, ADJ, NUM, DET, PRON, PREP, CONJ, WH, AUX, OTHER)

MODALS = frozenset({"can", "could", "may", "might", "must", "shall", "should", "will", "would"})
BE_FORMS = frozenset({"be", "is", "are", "was", "were", "been", "being", "am"})
DO_FORMS = frozenset({"do", "does", "did"})
NEGATORS = frozenset({"not", "never"})

# wh words that stand for a clause argument, unlike adjuncts (how, when, why)
ARGUMENT_WH = frozenset({"what", "which", "who", "whom", "whose"})
PERSONAL_PRONOUNS = frozenset({"it", "they", "them", "he", "she", "him", "her"})
POSSESSIVE_PRONOUNS = frozenset({"its", "their", "his", "her"})

# Words and digit runs are maximal; every other non-space character stands alone.
_TOKEN_RE = re.compile(r"[A-Za-z0-9-]+|[^\sA-Za-z0-9-]")


class ParseFailure(Exception):
    """Raised when a sentence contains no usable verb group."""


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    tag: str
    start: int
    end: int
    # Tags that survived pruning; len(alt_tags) readings remain for this token.
    alt_tags: tuple[str, ...] = ()


@dataclass(frozen=True)
class TaggedSentence:
    doc_id: str
    sent_id: int
    raw_text: str
    tokens: tuple[Token, ...]
    reading_count: int
    # Pronoun token index -> antecedent token index, for pronouns we could bind.
    antecedents: Mapping[int, int] = field(default_factory=dict)
    unresolved_pronouns: tuple[int, ...] = ()


@dataclass(frozen=True)
class PredArgStructure:
    """One clause: finite verb plus its argument token indices.

    ``subject is None`` means the deep subject is unbound (imperatives,
    agentless passives).  ``objects`` holds the head token of each object
    noun phrase in surface order.
    """

    verb_token: int
    verb_lemma: str
    voice: str  # "active" | "passive"
    subject: int | None
    objects: tuple[int, ...]
    negated: bool
    source_tokens: frozenset[int]
    # All tokens of the verb group (auxiliaries, negators, main verb).
    verb_group: tuple[int, ...] = ()


# ---------------------------------------------------------------------------
# Lexicon
# ---------------------------------------------------------------------------


class Lexicon:
    """Word list mapping surfaces to tag sets and irregular base forms.

    File format, one entry per line, tab separated::

        surface<TAB>TAG[,TAG...]
        surface<TAB>LEMMA<TAB>base

    A surface may have both a tag line and a LEMMA line.  Lines starting with
    ``#`` and blank lines are ignored.
    """

    def __init__(self) -> None:
        self.tags: dict[str, tuple[str, ...]] = {}
        self.lemmas: dict[str, str] = {}

    @classmethod
    def from_lines(cls, lines: Iterable[str], origin: str = "<memory>") -> "Lexicon":
        lex = cls()
        for lineno, line in enumerate(lines, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) == 3 and parts[1] == "LEMMA":
                lex.lemmas[parts[0].lower()] = parts[2].lower()
                continue
            if len(parts) != 2:
                raise ValueError(f"{origin}:{lineno}: bad lexicon line: {line!r}")
            tags = tuple(t.strip() for t in parts[1].split(","))
            bad = [t for t in tags if t not in ALL_TAGS]
            if bad:
                raise ValueError(f"{origin}:{lineno}: unknown tag(s) {bad} in {line!r}")
            lex.tags[parts[0].lower()] = tags
        return lex

    @classmethod
    def load(cls, path: str | Path) -> "Lexicon":
        path = Path(path)
        return cls.from_lines(path.read_text(encoding="utf-8").splitlines(), origin=str(path))


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------


def tokenize(text: str) -> tuple[Token, ...]:
    """Split raw text into tokens with character spans.

    Words are maximal runs of letters, digits and hyphens; every other
    non-space character becomes a one-character token.  Lemma and tag are
    filled in by later stages.
    """
    out = []
    for m in _TOKEN_RE.finditer(text):
        out.append(Token(surface=m.group(0), lemma="", tag="", start=m.start(), end=m.end()))
    return tuple(out)


# ---------------------------------------------------------------------------
# Lemmatizer
# ---------------------------------------------------------------------------


_VOWELS = "aeiou"


def _verb_candidates(s: str) -> list[str]:
    """Base-form candidates for a verb surface, in rule order."""
    cands = []
    if s.endswith("ies") and len(s) > 3:
        cands.append(s[:-3] + "y")
    if s.endswith("ied") and len(s) > 3:
        cands.append(s[:-3] + "y")
    if s.endswith("es") and len(s) > 3 and s[:-2].endswith(("ss", "x", "z", "sh", "ch")):
        cands.append(s[:-2])
    if s.endswith("s") and not s.endswith("ss") and len(s) > 2:
        cands.append(s[:-1])
    if s.endswith("ed") and len(s) > 3:
        cands.append(s[:-2])
        cands.append(s[:-2] + "e")  # e-restoration: remov+ed -> remove
        if len(s) > 4 and s[-3] == s[-4] and s[-3] not in _VOWELS:
            cands.append(s[:-3])  # undoubling: scann+ed -> scan
    if s.endswith("ing") and len(s) > 4:
        cands.append(s[:-3])
        cands.append(s[:-3] + "e")
        if len(s) > 5 and s[-4] == s[-5] and s[-4] not in _VOWELS:
            cands.append(s[:-4])
    return cands


def _noun_candidates(s: str) -> list[str]:
    cands = []
    if s.endswith("ies") and len(s) > 3:
        cands.append(s[:-3] + "y")
    if s.endswith("es") and len(s) > 3 and s[:-2].endswith(("ss", "x", "z", "sh", "ch")):
        cands.append(s[:-2])
    if s.endswith("s") and not s.endswith("ss") and len(s) > 2:
        cands.append(s[:-1])
    return cands


def lemmatize(surface: str, tag: str, lexicon: Lexicon) -> str:
    """Reduce an inflected surface to its base form.

    Irregular forms listed in the lexicon win; otherwise suffix rules apply
    for nouns and verbs, preferring the first candidate the lexicon confirms
    with a compatible tag.  Other tags pass through lowercased.  Idempotent.
    """
    s = surface.lower()
    if s in lexicon.lemmas:
        return lexicon.lemmas[s]
    if tag not in (NOUN, VERB):
        return s
    known = lexicon.tags.get(s)
    if known and tag in known:
        return s  # already a listed base form
    cands = _verb_candidates(s) if tag == VERB else _noun_candidates(s)
    for cand in cands:
        entry = lexicon.tags.get(cand)
        if entry and tag in entry:
            return cand
    # Unvalidated stripping is only safe on stems long enough to be real
    # words; short opaque names like "ipcs" must survive untouched.  The
    # recursion keeps the result a fixed point ("Xsed" -> "Xs" -> "X").
    for cand in cands:
        if len(cand) >= 4:
            return lemmatize(cand, tag, lexicon)
    return s


# ---------------------------------------------------------------------------
# Tagger
# ---------------------------------------------------------------------------


def _candidate_tags(surface: str, lexicon: Lexicon) -> tuple[str, ...]:
    s = surface.lower()
    if not any(c.isalnum() for c in s):
        return (OTHER,)
    if s in lexicon.tags:
        return lexicon.tags[s]
    if s.isdigit():
        return (NUM,)
    # Unknown word: guess from morphology before falling back to NOUN.
    found: list[str] = []
    for cand in _verb_candidates(s):
        entry = lexicon.tags.get(cand)
        if entry and VERB in entry and VERB not in found:
            found.append(VERB)
    for cand in _noun_candidates(s):
        entry = lexicon.tags.get(cand)
        if entry and NOUN in entry and NOUN not in found:
            found.append(NOUN)
    if found:
        # Keep the canonical preference order stable regardless of discovery order.
        return tuple(t for t in _TAG_PREFERENCE if t in found)
    if s.endswith("ly") and len(s) > 3:
        return (OTHER,)  # adverb guess
    return (NOUN,)


def tag_and_filter(
    tokens: tuple[Token, ...],
    lexicon: Lexicon,
    doc_id: str = "",
    sent_id: int = 0,
    raw_text: str = "",
) -> TaggedSentence:
    """Assign tags, prune impossible readings, and count what survives.

    Pruning rules, applied in order:

    1. a sentence-initial wh-word keeps only WH;
    2. a determiner forces the next noun/verb-ambiguous token to NOUN when
       only adjectives or numerals intervene;
    3. ``to`` followed by a possible verb forces that token to VERB;
    4. a modal forces the next token to VERB when VERB is among its tags.

    The sentence reading count is the product over tokens of the number of
    surviving tags.  Unknown words get NOUN with one reading.
    """
    surviving: list[tuple[str, ...]] = [_candidate_tags(t.surface, lexicon) for t in tokens]

    if surviving and WH in surviving[0]:
        surviving[0] = (WH,)

    for i, cands in enumerate(surviving):
        if DET in cands and len(cands) == 1:
            for j in range(i + 1, len(tokens)):
                between_ok = all(
                    set(surviving[k]) <= {ADJ, NUM} for k in range(i + 1, j)
                )
                if not between_ok:
                    break
                if NOUN in surviving[j] and VERB in surviving[j]:
                    surviving[j] = tuple(t for t in surviving[j] if t != VERB)
                    break
                if set(surviving[j]) <= {ADJ, NUM}:
                    continue
                break

    for i in range(len(tokens) - 1):
        if tokens[i].surface.lower() == "to" and VERB in surviving[i + 1]:
            surviving[i + 1] = (VERB,)

    for i in range(1, len(tokens)):
        if tokens[i - 1].surface.lower() in MODALS and VERB in surviving[i]:
            surviving[i] = (VERB,)

    reading_count = 1
    tagged = []
    for tok, cands in zip(tokens, surviving):
        reading_count *= len(cands)
        canonical = next(t for t in _TAG_PREFERENCE if t in cands)
        lemma = lemmatize(tok.surface, canonical, lexicon)
        tagged.append(
            Token(tok.surface, lemma, canonical, tok.start, tok.end, alt_tags=tuple(cands))
        )
    return TaggedSentence(
        doc_id=doc_id,
        sent_id=sent_id,
        raw_text=raw_text,
        tokens=tuple(tagged),
        reading_count=reading_count,
    )


# ---------------------------------------------------------------------------
# Pronoun resolution
# ---------------------------------------------------------------------------


def resolve_pronouns(sentence: TaggedSentence) -> TaggedSentence:
    """Bind third-person pronouns to preceding noun tokens within the sentence.

    Candidates are ranked subject > direct object > other, most recent first
    within a class, with one extra constraint: when a direct-object candidate
    exists the clause's own subject is skipped ("cp copies a file and renames
    it" binds "it" to "file", not "cp").  Pronouns with no candidate are
    reported as unresolved; that is never an error.
    """
    toks = sentence.tokens
    first_verb = next(
        (i for i, t in enumerate(toks) if t.tag in (VERB, AUX)), len(toks)
    )
    classes: dict[int, int] = {}  # noun idx -> 2 subject, 1 object, 0 other
    seen_verb = False
    for i, t in enumerate(toks):
        if t.tag in (VERB, AUX):
            seen_verb = True
        if t.tag != NOUN:
            continue
        if i < first_verb:
            classes[i] = 2
        elif seen_verb:
            classes[i] = 1
        else:
            classes[i] = 0

    antecedents: dict[int, int] = {}
    unresolved = []
    for i, t in enumerate(toks):
        low = t.surface.lower()
        if t.tag != PRON or low in POSSESSIVE_PRONOUNS:
            continue
        if low not in PERSONAL_PRONOUNS:
            unresolved.append(i)  # first/second person never bind in-sentence
            continue
        cands = [(j, classes[j]) for j in classes if j < i]
        if not cands:
            unresolved.append(i)
            continue
        if any(cls == 1 for _, cls in cands):
            cands = [(j, cls) for j, cls in cands if cls != 2]
        best = max(cands, key=lambda jc: (jc[1], jc[0]))
        antecedents[i] = best[0]

    return TaggedSentence(
        doc_id=sentence.doc_id,
        sent_id=sentence.sent_id,
        raw_text=sentence.raw_text,
        tokens=toks,
        reading_count=sentence.reading_count,
        antecedents=antecedents,
        unresolved_pronouns=tuple(unresolved),
    )


# ---------------------------------------------------------------------------
# Clause parser
# ---------------------------------------------------------------------------

# Object collection walks over these without closing the current noun phrase.
_NP_SKIP = {DET, ADJ, NUM}
_COORDINATORS = {"and", "or", ","}


def _is_group_token(tok: Token) -> bool:
    if tok.tag in (VERB, AUX):
        return True
    return tok.tag == OTHER and tok.surface.lower() in NEGATORS


def _find_runs(tags: list[str], toks: tuple[Token, ...]) -> list[tuple[int, int]]:
    """Maximal runs of verb-group material (aux, verbs, negators)."""
    runs = []
    i = 0
    while i < len(toks):
        if tags[i] in (VERB, AUX) or (
            tags[i] == OTHER and toks[i].surface.lower() in NEGATORS
        ):
            j = i
            while j + 1 < len(toks) and (
                tags[j + 1] in (VERB, AUX)
                or (tags[j + 1] == OTHER and toks[j + 1].surface.lower() in NEGATORS)
            ):
                j += 1
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    return runs


def _np_between(tags: list[str], lo: int, hi: int) -> bool:
    """True when tokens in (lo, hi) look like a bare noun phrase."""
    if hi - lo <= 1:
        return False
    return all(tags[k] in (DET, ADJ, NUM, NOUN, PRON, WH) for k in range(lo + 1, hi))


def _collect_np_heads(
    toks: tuple[Token, ...], tags: list[str], start: int, stop_at: set[int]
) -> list[int]:
    """Head tokens of coordinated noun phrases starting at ``start``.

    Walks forward collecting contiguous noun runs (head = last noun of the
    run), continuing through "and", "or" and commas, and stops at anything
    else: prepositions drop their whole adjunct, subordinators end the
    clause's argument field.
    """
    heads = []
    run: list[int] = []
    i = start
    while i < len(toks):
        if i in stop_at:
            break
        t = toks[i]
        tag = tags[i]
        low = t.surface.lower()
        if tag == NOUN:
            run.append(i)
        elif tag == PRON and low in POSSESSIVE_PRONOUNS:
            pass  # determiner-like, e.g. "its contents"
        elif tag == PRON:
            if run:
                heads.append(run[-1])
                run = []
            heads.append(i)
        elif tag in _NP_SKIP:
            pass
        elif (tag == CONJ or tag == OTHER) and low in _COORDINATORS:
            if run:
                heads.append(run[-1])
                run = []
        else:
            break
        i += 1
    if run:
        heads.append(run[-1])
    return heads


def _subject_head(toks: tuple[Token, ...], tags: list[str], before: int) -> int | None:
    for j in range(before - 1, -1, -1):
        if tags[j] in (NOUN, WH):
            return j
        if tags[j] == PRON and toks[j].surface.lower() not in POSSESSIVE_PRONOUNS:
            return j
    return None


def _parse_with_tags(
    sentence: TaggedSentence, tags: list[str], lexicon: Lexicon
) -> list[PredArgStructure]:
    toks = sentence.tokens
    runs = _find_runs(tags, toks)

    # Merge a fronted bare auxiliary with the following group when only a noun
    # phrase intervenes ("can a file be removed", "can I remove columns").
    groups: list[dict] = []
    skip_next_merge_from: int | None = None
    idx = 0
    while idx < len(runs):
        a, b = runs[idx]
        has_verb = any(tags[k] == VERB for k in range(a, b + 1))
        is_bare_aux = not has_verb and all(tags[k] == AUX for k in range(a, b + 1))
        if (
            is_bare_aux
            and idx + 1 < len(runs)
            and _np_between(tags, b, runs[idx + 1][0])
        ):
            na, nb = runs[idx + 1]
            groups.append({"aux": list(range(a, b + 1)), "span": (na, nb), "subj_between": (b, na)})
            idx += 2
            continue
        groups.append({"aux": [], "span": (a, b), "subj_between": None})
        idx += 1

    structures: list[PredArgStructure] = []
    prev_subject: int | None = None
    prev_subject_known = False
    for g in groups:
        a, b = g["span"]
        members = g["aux"] + list(range(a, b + 1))
        verb_positions = [k for k in range(a, b + 1) if tags[k] == VERB]
        be_positions = [k for k in members if toks[k].surface.lower() in BE_FORMS]
        if verb_positions:
            main = verb_positions[-1]
        elif be_positions:
            main = be_positions[-1]  # bare copula
        else:
            continue  # e.g. a stranded "does" with nothing to govern

        negated = any(toks[k].surface.lower() in NEGATORS for k in members)
        is_copula = main in be_positions
        passive = (
            not is_copula
            and any(k < main for k in be_positions)
            and not toks[main].surface.lower().endswith("ing")
        )

        # Surface subject.
        if g["subj_between"] is not None:
            lo, hi = g["subj_between"]
            sub_heads = _collect_np_heads(toks, tags, lo + 1, stop_at=set(range(hi, len(toks))))
            surface_subj = sub_heads[-1] if sub_heads else None
        else:
            first = g["aux"][0] if g["aux"] else a
            if first > 0 and tags[first - 1] == CONJ and prev_subject_known:
                surface_subj = prev_subject
            else:
                surface_subj = _subject_head(toks, tags, first)

        # Arguments.
        stop_at: set[int] = set()
        objects: list[int] = []
        subject: int | None
        if passive:
            subject = None
            if surface_subj is not None:
                objects.append(surface_subj)
            # agent by-phrase
            for k in range(b + 1, len(toks)):
                if tags[k] in (VERB, AUX):
                    break
                if tags[k] == PREP and toks[k].surface.lower() == "by":
                    heads = _collect_np_heads(toks, tags, k + 1, stop_at)
                    if heads:
                        subject = heads[0]
                    break
        else:
            subject = surface_subj
            objects.extend(_collect_np_heads(toks, tags, b + 1, stop_at))

        source = set(members)
        if subject is not None:
            source.add(subject)
        source.update(objects)

        verb_lemma = lemmatize(toks[main].surface, VERB, lexicon)
        if is_copula:
            verb_lemma = "be"

        structures.append(
            PredArgStructure(
                verb_token=main,
                verb_lemma=verb_lemma,
                voice="passive" if passive else "active",
                subject=subject,
                objects=tuple(objects),
                negated=negated,
                source_tokens=frozenset(source),
                verb_group=tuple(sorted(members)),
            )
        )
        prev_subject = subject
        prev_subject_known = True

    # A fronted wh-object ("what does rm remove") sits before the auxiliary,
    # where object collection never looks; attach it to the matrix clause.
    if (
        structures
        and tags
        and tags[0] == WH
        and toks[0].surface.lower() in ARGUMENT_WH
        and structures[0].subject != 0
        and not structures[0].objects
        and structures[0].voice == "active"
    ):
        first = structures[0]
        structures[0] = replace(first, objects=(0,), source_tokens=first.source_tokens | {0})
    return structures


def parse_sentence(sentence: TaggedSentence, lexicon: Lexicon) -> list[PredArgStructure]:
    """Extract predicate-argument structures, one per finite verb group.

    Works on the canonical tags first.  If that yields no verb group, each
    token whose surviving readings include VERB is retried as the verb, in
    surface order; the first reading that produces a parse wins.  Returns an
    empty list when nothing parses (the caller decides whether that matters).
    """
    tags = [t.tag for t in sentence.tokens]
    structures = _parse_with_tags(sentence, tags, lexicon)
    if structures:
        return structures
    for i, tok in enumerate(sentence.tokens):
        if tok.tag != VERB and VERB in tok.alt_tags:
            retry = list(tags)
            retry[i] = VERB
            structures = _parse_with_tags(sentence, retry, lexicon)
            if structures:
                return structures
    return []


# ---------------------------------------------------------------------------
# Convenience wrapper used by indexing and query building
# ---------------------------------------------------------------------------


class Pipeline:
    """Full analysis of one sentence with a fixed lexicon."""

    def __init__(self, lexicon: Lexicon) -> None:
        self.lexicon = lexicon

    def analyze(
        self, doc_id: str, sent_id: int, raw_text: str
    ) -> tuple[TaggedSentence, list[PredArgStructure]]:
        tokens = tokenize(raw_text)
        tagged = tag_and_filter(tokens, self.lexicon, doc_id, sent_id, raw_text)
        tagged = resolve_pronouns(tagged)
        return tagged, parse_sentence(tagged, self.lexicon)
