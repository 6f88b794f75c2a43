"""Shared test utilities.

The logical-form comparisons here are deliberately independent of the
production renderer: equivalence up to renaming is checked by searching for
a consistent bijection over variable and skolem names, so tests can freeze
expected forms without caring which counter values the pipeline happened to
assign.
"""

from __future__ import annotations

from itertools import permutations

from askman.logform import SKOLEM_RE, Const, ListTerm, Literal, Var


def _terms_match(a, b, fwd: dict, back: dict) -> bool:
    """Extend the bijection so a maps to b, or report a clash."""
    if isinstance(a, Var) and isinstance(b, Var):
        pass
    elif isinstance(a, Const) and isinstance(b, Const):
        a_skolem = bool(SKOLEM_RE.match(a.name))
        b_skolem = bool(SKOLEM_RE.match(b.name))
        if a_skolem != b_skolem:
            return False
        if not a_skolem:
            return a.name == b.name
    elif isinstance(a, ListTerm) and isinstance(b, ListTerm):
        if len(a.items) != len(b.items):
            return False
        return all(_terms_match(x, y, fwd, back) for x, y in zip(a.items, b.items))
    else:
        return False
    ka, kb = _key(a), _key(b)
    if fwd.get(ka, kb) != kb or back.get(kb, ka) != ka:
        return False
    fwd[ka] = kb
    back[kb] = ka
    return True


def _key(term):
    if isinstance(term, Var):
        return ("var", term.name)
    return ("const", term.name, term.scope)


def _literals_match(a: Literal, b: Literal, fwd: dict, back: dict) -> bool:
    if a.predicate != b.predicate or len(a.args) != len(b.args):
        return False
    return all(_terms_match(x, y, fwd, back) for x, y in zip(a.args, b.args))


def alpha_equal(seq_a, seq_b) -> bool:
    """Ordered literal sequences equal up to renaming of vars and skolems."""
    if len(seq_a) != len(seq_b):
        return False
    fwd: dict = {}
    back: dict = {}
    return all(_literals_match(a, b, fwd, back) for a, b in zip(seq_a, seq_b))


def alpha_equal_unordered(seq_a, seq_b) -> bool:
    """Set-like version: some ordering of seq_b matches seq_a.

    Only suitable for the small literal sets used in tests; the search tries
    permutations with a single shared bijection.
    """
    if len(seq_a) != len(seq_b):
        return False
    for perm in permutations(seq_b):
        fwd: dict = {}
        back: dict = {}
        if all(_literals_match(a, b, fwd, back) for a, b in zip(seq_a, perm)):
            return True
    return False


def lit(spec: str) -> Literal:
    """Shorthand literal builder: "object(s_file,A,x1@0)".

    Uppercase-initial names become variables; ``name@scope`` becomes a
    scoped constant; everything else is an unscoped constant.  A single
    ``[a,b]`` argument group becomes a list term.
    """
    head, _, rest = spec.partition("(")
    args_text = rest.rstrip(")").strip()
    args = []
    depth = 0
    current = ""
    parts = []
    for ch in args_text:
        if ch == "," and depth == 0:
            parts.append(current)
            current = ""
            continue
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        current += ch
    if current:
        parts.append(current)
    for part in parts:
        part = part.strip()
        if part.startswith("["):
            inner = [p.strip() for p in part[1:-1].split(",") if p.strip()]
            args.append(ListTerm(tuple(_atom(p) for p in inner)))
        else:
            args.append(_atom(part))
    return Literal(head.strip(), tuple(args))


def _atom(text: str):
    if text[0].isupper():
        return Var(text)
    if "@" in text:
        name, scope = text.rsplit("@", 1)
        return Const(name, scope=int(scope))
    return Const(text)


# ---------------------------------------------------------------------------
# Brute-force proof oracle
# ---------------------------------------------------------------------------

def _ground_match(goal_term, fact_term, env: dict) -> bool:
    """Match one goal term against a ground term, binding by var name."""
    if isinstance(goal_term, Var):
        if goal_term.name in env:
            return env[goal_term.name] == fact_term
        env[goal_term.name] = fact_term
        return True
    if isinstance(goal_term, Const):
        return goal_term == fact_term
    if isinstance(goal_term, ListTerm):
        if not isinstance(fact_term, ListTerm):
            return False
        if len(goal_term.items) != len(fact_term.items):
            return False
        return all(
            _ground_match(g, f, env)
            for g, f in zip(goal_term.items, fact_term.items)
        )
    return False


def brute_force_solve(goals, facts):
    """All proofs by exhaustive assignment of facts to goals.

    Deliberately independent of the production unifier: stored facts are
    ground, so matching is a plain walk with a name-to-term environment.
    Enumerates every |facts|^|goals| assignment; returns a list of
    (matched_ordinals, sorted_binding_items) in enumeration order, which
    coincides with the production solver's depth-first order.
    """
    from itertools import product

    out = []
    for assignment in product(range(len(facts)), repeat=len(goals)):
        env: dict = {}
        ok = True
        for goal, ordinal in zip(goals, assignment):
            fact = facts[ordinal].literal
            if goal.predicate != fact.predicate or len(goal.args) != len(fact.args):
                ok = False
                break
            if not all(
                _ground_match(g, f, env) for g, f in zip(goal.args, fact.args)
            ):
                ok = False
                break
        if ok:
            out.append((assignment, tuple(sorted(env.items()))))
    return out


# ---------------------------------------------------------------------------
# Random ground stores and queries for equivalence checks
# ---------------------------------------------------------------------------

_SYMBOLS = ("s_file", "s_directory", "s_command", "s_remove", "s_copy", "rm", "cp")


def random_ground_fact(rng, doc_id: str, sent_id: int):
    """One shape-valid ground fact with skolems drawn from a small pool."""
    from askman.logform import HornFact, skolem

    kind = rng.choice(("object", "evt", "holds"))
    ent = lambda: skolem("entity", rng.randrange(1, 4), sent_id)
    if kind == "object":
        literal = Literal(
            "object",
            (Const(rng.choice(_SYMBOLS)), skolem("witness", rng.randrange(1, 4), sent_id), ent()),
        )
    elif kind == "evt":
        parts = ListTerm(tuple(ent() for _ in range(rng.randrange(1, 4))))
        literal = Literal(
            "evt",
            (Const(rng.choice(_SYMBOLS)), skolem("event", rng.randrange(1, 3), sent_id), parts),
        )
    else:
        literal = Literal("holds", (skolem("event", rng.randrange(1, 3), sent_id),))
    return HornFact(
        literal=literal,
        doc_id=doc_id,
        sent_id=sent_id,
        source_tokens=frozenset({0}),
    )


def random_goals(rng, max_goals: int = 4):
    """A random conjunction mixing shared variables and concrete symbols."""
    names = ["A", "B", "C", "D", "E", "F"]
    goals = []
    for _ in range(rng.randrange(1, max_goals + 1)):
        kind = rng.choice(("object", "evt", "holds"))
        var = lambda: Var(rng.choice(names))
        if kind == "object":
            goals.append(Literal("object", (Const(rng.choice(_SYMBOLS)), var(), var())))
        elif kind == "evt":
            parts = ListTerm(tuple(var() for _ in range(rng.randrange(1, 4))))
            goals.append(Literal("evt", (Const(rng.choice(_SYMBOLS)), var(), parts)))
        else:
            goals.append(Literal("holds", (var(),)))
    return goals
