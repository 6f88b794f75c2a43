"""Logical forms: fact compilation, query goals, concept lexicon, serialization."""

import pytest

from askman.logform import (
    ConceptLexicon,
    Const,
    ListTerm,
    Literal,
    UnparseableQuery,
    Var,
    build_query_goals,
    concept_symbols_of,
    facts_for_sentence,
    parse_fact_line,
    render_fact_line,
    render_literal,
    skolem,
)
from askman.lingua import Pipeline

from helpers import alpha_equal, alpha_equal_unordered, lit


def analyze(pipeline, text, doc_id="d", sent_id=0):
    return pipeline.analyze(doc_id, sent_id, text)


def facts_of(pipeline, concepts, text, sent_id=0):
    sent, structs = analyze(pipeline, text, sent_id=sent_id)
    return facts_for_sentence(sent, structs, concepts, pipeline.lexicon)


def literals(facts):
    return [f.literal for f in facts]


# ---------------------------------------------------------------------------
# Fact compilation
# ---------------------------------------------------------------------------


def test_worked_example_sentence_facts(pipeline, concepts):
    """The five facts for the running example, up to skolem renaming.

    The expected side deliberately uses different counter values (v_e2,
    v_x6) to prove the comparison really is renaming-insensitive.
    """
    facts = facts_of(pipeline, concepts, "rm removes one or more files")
    expected = [
        lit("holds(v_e2@0)"),
        lit("object(rm,v_o_a1@0,v_x1@0)"),
        lit("object(s_command,v_o_a2@0,v_x1@0)"),
        lit("evt(s_remove,v_e2@0,[v_x1@0,v_x6@0])"),
        lit("object(s_file,v_o_a3@0,v_x6@0)"),
    ]
    assert alpha_equal(literals(facts), expected)


def test_skolem_names_follow_kind_prefixes(pipeline, concepts):
    facts = facts_of(pipeline, concepts, "rm removes one or more files")
    rendered = [render_fact_line(f) for f in facts]
    assert rendered == [
        "holds(v_e1).",
        "object(rm,v_o_a1,v_x1).",
        "object(s_command,v_o_a2,v_x1).",
        "evt(s_remove,v_e1,[v_x1,v_x2]).",
        "object(s_file,v_o_a3,v_x2).",
    ]


def test_skolem_counters_restart_per_sentence(pipeline, concepts):
    first = facts_of(pipeline, concepts, "rm removes one or more files", sent_id=0)
    second = facts_of(pipeline, concepts, "cp copies one or more files", sent_id=1)
    assert render_fact_line(first[0]) == render_fact_line(second[0]) == "holds(v_e1)."
    # Same printed name, different identity: the scope keeps them apart.
    assert first[0].literal.args[0] != second[0].literal.args[0]


def test_negated_clause_emits_no_holds(pipeline, concepts):
    facts = facts_of(pipeline, concepts, "rm does not remove directories by default")
    preds = [f.literal.predicate for f in facts]
    assert "holds" not in preds
    assert "evt" in preds


def test_hypernym_facts_share_the_entity(pipeline, concepts):
    facts = facts_of(pipeline, concepts, "rm removes one or more files")
    rm_fact = next(f.literal for f in facts if f.literal.args[0] == Const("rm"))
    hyper = next(f.literal for f in facts if f.literal.args[0] == Const("s_command"))
    assert rm_fact.args[2] == hyper.args[2]


def test_synonyms_compile_to_one_concept(pipeline, concepts):
    erase = facts_of(pipeline, concepts, "rm erases files")
    delete = facts_of(pipeline, concepts, "rm deletes files")
    assert alpha_equal(literals(erase), literals(delete))


def test_copula_links_subject_and_complement_entities(pipeline, concepts):
    facts = facts_of(pipeline, concepts, "ipcrm is a shell utility")
    lits = literals(facts)
    be = next(l for l in lits if l.predicate == "evt")
    assert be.args[0] == Const("be")
    subj_ent, compl_ent = be.args[2].items
    assert subj_ent != compl_ent
    ipcrm = next(l for l in lits if l.args[0] == Const("ipcrm"))
    commands = [l for l in lits if l.args[0] == Const("s_command")]
    # Subject carries its surface fact plus the hypernym; the complement
    # noun predicates over the linked entity on the other side of "be".
    assert ipcrm.args[2] == subj_ent
    assert {l.args[2] for l in commands} == {subj_ent, compl_ent}
    assert len(commands) == 2


def test_pronoun_object_reuses_antecedent_entity(pipeline, concepts):
    facts = facts_of(pipeline, concepts, "cp copies a file and renames it")
    evts = [f.literal for f in facts if f.literal.predicate == "evt"]
    assert len(evts) == 2
    copy_args = evts[0].args[2].items
    rename_args = evts[1].args[2].items
    assert copy_args[0] == rename_args[0]  # shared subject entity
    assert copy_args[1] == rename_args[1]  # "it" resolves to the file
    # No duplicate object facts for the reused entity.
    file_facts = [f.literal for f in facts if f.literal.args[0] == Const("s_file")]
    assert len(file_facts) == 1


def test_passive_with_agent_orders_participants(pipeline, concepts):
    facts = facts_of(pipeline, concepts, "an occupied directory is never removed by rmdir")
    evt = next(f.literal for f in facts if f.literal.predicate == "evt")
    agent, patient = evt.args[2].items
    rmdir_fact = next(f.literal for f in facts if f.literal.args[0] == Const("rmdir"))
    dir_fact = next(f.literal for f in facts if f.literal.args[0] == Const("s_directory"))
    assert rmdir_fact.args[2] == agent
    assert dir_fact.args[2] == patient


def test_fact_sources_point_at_generating_tokens(pipeline, concepts):
    sent, structs = analyze(pipeline, "rm removes one or more files")
    facts = facts_for_sentence(sent, structs, concepts, pipeline.lexicon)
    by_pred = {}
    for f in facts:
        by_pred.setdefault(f.literal.predicate, []).append(f)
    assert by_pred["holds"][0].source_tokens == frozenset({1})
    assert by_pred["evt"][0].source_tokens == frozenset({1})
    object_sources = {f.literal.args[0].name: f.source_tokens for f in by_pred["object"]}
    assert object_sources["rm"] == frozenset({0})
    assert object_sources["s_command"] == frozenset({0})
    assert object_sources["s_file"] == frozenset({5})


# ---------------------------------------------------------------------------
# Query building
# ---------------------------------------------------------------------------


def test_worked_example_query_goals(pipeline, concepts):
    form = build_query_goals("which command erases files?", pipeline, concepts)
    expected = [
        lit("object(s_command,A,B)"),
        lit("evt(s_remove,C,[B,D])"),
        lit("object(s_file,E,D)"),
    ]
    assert alpha_equal(form.goals, expected)
    assert form.concept_symbols == {"s_command", "s_remove", "s_file"}


def test_query_vars_named_by_first_appearance(pipeline, concepts):
    form = build_query_goals("which command erases files?", pipeline, concepts)
    seen = []
    for goal in form.goals:
        for arg in goal.args:
            items = arg.items if hasattr(arg, "items") else (arg,)
            for term in items:
                if isinstance(term, Var) and term.name not in seen:
                    seen.append(term.name)
    assert seen == sorted(seen) == ["A", "B", "C", "D", "E"]


def test_query_has_no_holds_goal(pipeline, concepts):
    form = build_query_goals("which command removes directories?", pipeline, concepts)
    assert all(g.predicate != "holds" for g in form.goals)


def test_query_side_skips_hypernym_goals(pipeline, concepts):
    # "rm" has hypernym s_command; compiling it into the query would demand
    # documents restate the hypernymy, so only the base goal is emitted.
    form = build_query_goals("what does rm remove?", pipeline, concepts)
    assert sum(1 for g in form.goals if g.args[0] == Const("s_command")) == 0
    assert sum(1 for g in form.goals if g.args[0] == Const("rm")) == 1


def test_wh_argument_is_unconstrained(pipeline, concepts):
    form = build_query_goals("what does rm remove?", pipeline, concepts)
    evt = next(g for g in form.goals if g.predicate == "evt")
    patient = evt.args[2].items[1]
    assert isinstance(patient, Var)
    constrained = {g.args[2] for g in form.goals if g.predicate == "object"}
    assert patient not in constrained


def test_unresolved_pronoun_is_unconstrained(pipeline, concepts):
    form = build_query_goals("can I remove some columns from a text file?", pipeline, concepts)
    expected = [
        lit("evt(s_remove,A,[B,C])"),
        lit("object(column,D,C)"),
    ]
    assert alpha_equal(form.goals, expected)


def test_passive_question_goals(pipeline, concepts):
    form = build_query_goals("how can a file be removed?", pipeline, concepts)
    expected = [
        lit("evt(s_remove,A,[B,C])"),
        lit("object(s_file,D,C)"),
    ]
    assert alpha_equal(form.goals, expected)


def test_copula_question_builds_object_goal_only(pipeline, concepts):
    form = build_query_goals("what is ipcrm?", pipeline, concepts)
    assert alpha_equal(form.goals, [lit("object(ipcrm,A,B)")])
    assert form.concept_symbols == {"ipcrm"}


def test_gibberish_raises(pipeline, concepts):
    with pytest.raises(UnparseableQuery):
        build_query_goals("asdf qwer", pipeline, concepts)


def test_empty_question_raises(pipeline, concepts):
    with pytest.raises(UnparseableQuery):
        build_query_goals("", pipeline, concepts)


def test_query_matches_own_sentence_facts(pipeline, concepts):
    """Declarative reading of a question proves against the facts of the
    matching statement; the core symmetry the whole system rests on."""
    from askman.prover import solve
    from askman.store import DocClauseStore  # noqa: F401  (import cycle guard)

    facts = facts_of(pipeline, concepts, "rm removes one or more files")
    form = build_query_goals("which command erases files?", pipeline, concepts)
    proofs = solve(form.goals, facts)
    assert len(proofs) == 1


# ---------------------------------------------------------------------------
# Concept lexicon
# ---------------------------------------------------------------------------


def test_concept_lookup_and_hypernyms(concepts):
    assert concepts.concept_of("erase") == "s_remove"
    assert concepts.concept_of("remove") == "s_remove"
    assert concepts.concept_of("widget") == "widget"  # unmapped lemma is its own concept
    assert concepts.hypernyms_of("rm") == ("s_command",)
    assert concepts.hypernyms_of("s_remove") == ()


def test_concept_lexicon_rejects_cycles(tmp_path):
    bad = tmp_path / "concepts.tsv"
    bad.write_text("HYP\ta\tb\nHYP\tb\ta\n", encoding="utf-8")
    with pytest.raises(ValueError):
        ConceptLexicon.load(str(bad))


def test_concept_symbols_skip_variables():
    goals = [lit("object(s_file,A,B)"), lit("evt(s_remove,C,[B,D])")]
    assert concept_symbols_of(goals) == {"s_file", "s_remove"}


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def test_render_parse_round_trip(pipeline, concepts):
    facts = facts_of(pipeline, concepts, "rm removes one or more files", sent_id=3)
    for fact in facts:
        line = render_fact_line(fact)
        back = parse_fact_line(line, sent_id=3)
        assert back == fact.literal
        assert render_literal(back) + "." == line


def test_parse_fact_line_scopes_skolems_only():
    parsed = parse_fact_line("object(s_command,v_o_a2,v_x1).", sent_id=9)
    concept, witness, entity = parsed.args
    assert concept == Const("s_command")
    assert witness == Const("v_o_a2", scope=9)
    assert entity == Const("v_x1", scope=9)


def test_parse_fact_line_rejects_malformed():
    for line in ["object(a,b).", "evt(a,b,c).", "holds(x,y).", "nonsense", "object(a,b,c"]:
        with pytest.raises(ValueError):
            parse_fact_line(line, sent_id=0)


def test_skolem_helper_is_scoped():
    const = skolem("entity", 4, sent_id=2)
    assert const == Const("v_x4", scope=2)
    assert const != Const("v_x4", scope=3)


def test_alpha_helpers_reject_mismatches():
    a = [lit("object(s_file,A,B)")]
    assert not alpha_equal(a, [lit("object(s_file,A,A)")])
    assert not alpha_equal(a, [lit("object(s_dir,A,B)")])
    assert alpha_equal_unordered(
        [lit("object(x,A,B)"), lit("evt(y,C,[B])")],
        [lit("evt(y,Q,[R])"), lit("object(x,S,R)")],
    )
