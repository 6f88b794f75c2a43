"""Unification and proof search over stored facts.

The stored side is always ground, so this is deliberately plain Robinson
unification with an occurs check, plus an exhaustive depth-first search that
matches goals left to right against facts in store order.  No inference
rules: everything a query can prove is literally in the store.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple, Optional, Sequence

from .logform import Const, HornFact, ListTerm, Literal, Term, Var

Substitution = Mapping[str, Term]


class FactRef(NamedTuple):
    doc_id: str
    sent_id: int
    ordinal: int


@dataclass(frozen=True)
class Proof:
    """One complete way of matching every goal against stored facts."""

    bindings: tuple[tuple[str, Term], ...]  # sorted by variable name
    matched: tuple[FactRef, ...]  # one entry per goal, in goal order

    def binding_map(self) -> dict[str, Term]:
        return dict(self.bindings)


def walk(term: Term, subst: Substitution) -> Term:
    """Follow variable bindings until a non-variable or free variable."""
    while isinstance(term, Var) and term.name in subst:
        term = subst[term.name]
    return term


def apply_subst(term: Term, subst: Substitution) -> Term:
    """Substitute bindings everywhere in a term (idempotent on the result)."""
    term = walk(term, subst)
    if isinstance(term, ListTerm):
        return ListTerm(tuple(apply_subst(t, subst) for t in term.items))
    return term


def occurs(var: Var, term: Term, subst: Substitution) -> bool:
    term = walk(term, subst)
    if isinstance(term, Var):
        return term.name == var.name
    if isinstance(term, ListTerm):
        return any(occurs(var, t, subst) for t in term.items)
    return False


def unify_terms(a: Term, b: Term, subst: Substitution) -> Optional[dict[str, Term]]:
    a = walk(a, subst)
    b = walk(b, subst)
    if a == b:
        return dict(subst)
    if isinstance(a, Var):
        if occurs(a, b, subst):
            return None
        out = dict(subst)
        out[a.name] = apply_subst(b, subst)
        return out
    if isinstance(b, Var):
        if occurs(b, a, subst):
            return None
        out = dict(subst)
        out[b.name] = apply_subst(a, subst)
        return out
    if isinstance(a, Const) and isinstance(b, Const):
        return None  # unequal constants (name or sentence scope differ)
    if isinstance(a, ListTerm) and isinstance(b, ListTerm):
        if len(a.items) != len(b.items):
            return None
        cur: Optional[dict[str, Term]] = dict(subst)
        for x, y in zip(a.items, b.items):
            cur = unify_terms(x, y, cur)
            if cur is None:
                return None
        return cur
    return None


def unify(goal: Literal, fact: Literal, subst: Substitution) -> Optional[dict[str, Term]]:
    """Extend ``subst`` so the goal equals the fact, or fail with None.

    A variable already bound to a conflicting constant fails; bindings are
    never mutated in place.
    """
    if goal.predicate != fact.predicate or len(goal.args) != len(fact.args):
        return None
    cur: Optional[dict[str, Term]] = dict(subst)
    for a, b in zip(goal.args, fact.args):
        cur = unify_terms(a, b, cur)
        if cur is None:
            return None
    return cur


def solve(goals: Sequence[Literal], facts: Sequence[HornFact]) -> list[Proof]:
    """Every way of proving the whole conjunction against the facts.

    Depth-first over goals in the given order, trying facts in store order,
    so the proof list is deterministic.  An empty goal list has exactly one
    proof (the empty one).
    """
    proofs: list[Proof] = []

    def dfs(i: int, subst: dict[str, Term], matched: list[FactRef]) -> None:
        if i == len(goals):
            bindings = tuple(sorted(subst.items()))
            proofs.append(Proof(bindings=bindings, matched=tuple(matched)))
            return
        for ordinal, fact in enumerate(facts):
            nxt = unify(goals[i], fact.literal, subst)
            if nxt is None:
                continue
            matched.append(FactRef(fact.doc_id, fact.sent_id, ordinal))
            dfs(i + 1, nxt, matched)
            matched.pop()

    dfs(0, {}, [])
    return proofs
