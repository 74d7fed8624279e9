"""Formula evaluation: environments, arithmetic, refusals."""

from __future__ import annotations

import random

import pytest

from helpers import cd_symbol, close_enough, ex, oracle_outcome, random_bindings, random_tree
from parx_verify.evaluation import (
    AmbiguousBindingError,
    BindingEntry,
    EvaluationError,
    MissingValueError,
    NonEvaluableError,
    build_environment,
    evaluate,
    evaluate_operator,
)
from parx_verify.model import Application, Constant, Variable, model_from_graph
from parx_verify.turtle import parse_turtle
from parx_verify.vocab import UNECE


def _fill_time(model, operator):
    return next(
        dep for dep in model.operators[operator].interdependencies if dep.root == ex("Time")
    )


def eq(target, rhs):
    return Application(cd_symbol("relation1", "eq"), (target, rhs))


def div(a, b):
    return Application(cd_symbol("arith1", "divide"), (a, b))


def plus(*args):
    return Application(cd_symbol("arith1", "plus"), tuple(args))


# --- build_environment ------------------------------------------------------


def test_environment_loads_fixture_values(consistent_model):
    dep = _fill_time(consistent_model, ex("Injection"))
    env = build_environment(consistent_model, ex("Injection"), dep.expression)
    # oracle: the values authored in the fixture file itself
    assert env[ex("VCavity")] == BindingEntry(1000.0, UNECE.term("CMQ").value, ex("CavityVolume-A"))
    assert env[ex("Q")] == BindingEntry(50.0, UNECE.term("2J").value, ex("FlowOfMass-A"))
    assert set(env) == {ex("VCavity"), ex("Q")}  # target stays unbound


def test_environment_missing_value_names_element(rtm_model):
    dep = _fill_time(rtm_model, ex("Injection"))
    with pytest.raises(MissingValueError) as err:
        build_environment(rtm_model, ex("Injection"), dep.expression)
    assert "CavityVolume-A" in str(err.value) or "FlowOfMass-A" in str(err.value)


AMBIGUOUS_MODEL = """
@prefix VDI3682: <http://www.w3id.org/hsu-aut/VDI3682#> .
@prefix DINEN61360: <http://www.w3id.org/hsu-aut/DINEN61360#> .
@prefix ParX: <http://www.hsu-hh.de/aut/ParX#> .
@prefix OM: <http://openmath.org/vocab/math#> .
@prefix ex: <http://example.org/rtm#> .
ex:Op a VDI3682:ProcessOperator ;
    VDI3682:hasInput ex:In ;
    ParX:hasInterdependency ex:F .
ex:In a VDI3682:Information ; DINEN61360:has_Data_Element ex:DE1, ex:DE2 .
ex:DE1 a DINEN61360:Data_Element ; DINEN61360:Value 1.0 ; ParX:isDataFor ex:q .
ex:DE2 a DINEN61360:Data_Element ; DINEN61360:Value 2.0 ; ParX:isDataFor ex:q .
ex:F a OM:Application ;
    OM:operator <http://www.openmath.org/cd/relation1#eq> ;
    OM:arguments ( ex:r ex:q ) .
ex:r a OM:Variable . ex:q a OM:Variable .
"""


def test_environment_ambiguous_binding_lists_both():
    model = model_from_graph(parse_turtle(AMBIGUOUS_MODEL))
    dep = model.operators[ex("Op")].interdependencies[0]
    with pytest.raises(AmbiguousBindingError) as err:
        build_environment(model, ex("Op"), dep.expression)
    assert "DE1" in str(err.value) and "DE2" in str(err.value)


def test_environment_non_numeric_value():
    model = model_from_graph(
        parse_turtle(
            AMBIGUOUS_MODEL.replace(
                'ex:DE2 a DINEN61360:Data_Element ; DINEN61360:Value 2.0 ; ParX:isDataFor ex:q .',
                "",
            ).replace("DINEN61360:Value 1.0", 'DINEN61360:Value "lots"')
        )
    )
    dep = model.operators[ex("Op")].interdependencies[0]
    with pytest.raises(EvaluationError) as err:
        build_environment(model, ex("Op"), dep.expression)
    assert "non-numeric" in str(err.value)


# --- evaluate ---------------------------------------------------------------


def test_fill_time_is_twenty():
    formula = eq(Variable(ex("t"), UNECE.term("SEC").value), div(Variable(ex("VCavity")), Variable(ex("Q"))))
    env = {
        ex("VCavity"): BindingEntry(1000.0, UNECE.term("CMQ").value, ex("CavityVolume-A")),
        ex("Q"): BindingEntry(50.0, UNECE.term("2J").value, ex("FlowOfMass-A")),
    }
    result = evaluate(formula, env)
    assert result.value == 20.0
    assert result.target == ex("t")
    assert result.unit == UNECE.term("SEC").value
    assert dict(result.inputs) == env


def test_identity_equation():
    formula = eq(Variable("urn:x"), Variable("urn:y"))
    result = evaluate(formula, {"urn:y": BindingEntry(7.0, None, "urn:de")})
    assert result.value == 7.0
    assert result.unit is None


def test_nested_sum_matches_hand_arithmetic():
    formula = eq(
        Variable("urn:t"),
        div(plus(Variable("urn:V1"), Variable("urn:V2")), Variable("urn:Q")),
    )
    env = {
        "urn:V1": BindingEntry(300.0, None, "urn:d1"),
        "urn:V2": BindingEntry(700.0, None, "urn:d2"),
        "urn:Q": BindingEntry(50.0, None, "urn:d3"),
    }
    assert evaluate(formula, env).value == (300.0 + 700.0) / 50.0 == 20.0


def test_division_by_zero_is_error():
    formula = eq(Variable("urn:x"), div(Constant(1.0), Variable("urn:q")))
    with pytest.raises(EvaluationError):
        evaluate(formula, {"urn:q": BindingEntry(0.0, None, "urn:d")})


def test_unbound_variable_is_error():
    formula = eq(Variable("urn:x"), Variable("urn:y"))
    with pytest.raises(EvaluationError):
        evaluate(formula, {})


def test_unknown_symbol_is_error():
    formula = eq(
        Variable("urn:x"),
        Application(cd_symbol("transc1", "sin"), (Constant(1.0),)),
    )
    with pytest.raises(NonEvaluableError):
        evaluate(formula, {})


def test_non_equation_root_is_error():
    with pytest.raises(NonEvaluableError):
        evaluate(div(Constant(1.0), Constant(2.0)), {})


def test_equation_of_two_expressions_not_evaluable():
    formula = eq(plus(Constant(1.0), Constant(1.0)), Constant(2.0))  # type: ignore[arg-type]
    with pytest.raises(NonEvaluableError):
        evaluate(formula, {})


def test_overflow_to_non_finite_is_error():
    big = Constant(1e308)
    formula = eq(Variable("urn:x"), plus(Application(cd_symbol("arith1", "times"), (big, big)), Constant(0.0)))
    with pytest.raises(EvaluationError):
        evaluate(formula, {})


def test_evaluator_matches_oracle_on_random_trees():
    rng = random.Random(20260809)
    agreements = 0
    for _ in range(300):
        variables = [f"urn:v{i}" for i in range(rng.randint(0, 4))]
        rhs = random_tree(rng, rng.randint(0, 5), variables)
        formula = eq(Variable("urn:target"), rhs)
        values = random_bindings(rng, variables)
        env = {v: BindingEntry(x, None, f"urn:de-{v}") for v, x in values.items()}
        expected = oracle_outcome(rhs, values)
        try:
            got = ("ok", evaluate(formula, env).value)
        except EvaluationError as exc:
            got = ("fail", str(exc))
        assert got[0] == expected[0], (rhs, expected, got)
        if got[0] == "ok":
            assert close_enough(got[1], expected[1])
            agreements += 1
    assert agreements > 50  # the generator must exercise the happy path too


# --- evaluate_operator ---------------------------------------------------------


def test_consistent_injection_evaluates_to_twenty_sec(consistent_model):
    outcome = evaluate_operator(consistent_model, ex("Injection"))
    assert outcome.ok
    assert [(r.target, r.value, r.unit) for r in outcome.results] == [
        (ex("t"), 20.0, UNECE.term("SEC").value)
    ]
    inputs = dict(outcome.results[0].inputs)
    assert inputs[ex("VCavity")].data_element == ex("CavityVolume-A")


def test_probe_process_refused_with_availability_finding(rtm_model):
    outcome = evaluate_operator(rtm_model, ex("InjectionT"))
    assert outcome.results == []
    assert len(outcome.refusals) == 1
    refusal = outcome.refusals[0]
    assert refusal.formula == ex("Time")
    assert [f.missing_variable for f in refusal.availability] == [ex("VCavity")]


def test_operator_without_interdependencies():
    model = model_from_graph(
        parse_turtle(
            """
            @prefix VDI3682: <http://www.w3id.org/hsu-aut/VDI3682#> .
            @prefix ex: <http://example.org/rtm#> .
            ex:Op a VDI3682:ProcessOperator .
            """
        )
    )
    outcome = evaluate_operator(model, ex("Op"))
    assert outcome.results == [] and outcome.notices == [] and outcome.ok


def test_unit_mismatch_blocks_evaluation():
    text = """
    @prefix VDI3682: <http://www.w3id.org/hsu-aut/VDI3682#> .
    @prefix DINEN61360: <http://www.w3id.org/hsu-aut/DINEN61360#> .
    @prefix UNECE: <http://www.w3id.org/hsu-aut/UNECE#> .
    @prefix ParX: <http://www.hsu-hh.de/aut/ParX#> .
    @prefix OM: <http://openmath.org/vocab/math#> .
    @prefix ex: <http://example.org/rtm#> .
    ex:Op a VDI3682:ProcessOperator ;
        VDI3682:hasOutput ex:Out ; VDI3682:hasInput ex:In ;
        ParX:hasInterdependency ex:F .
    ex:Out a VDI3682:Information ; DINEN61360:has_Data_Element ex:RDE .
    ex:In a VDI3682:Information ; DINEN61360:has_Data_Element ex:DE .
    ex:RDE a DINEN61360:Data_Element ; ParX:isDataFor ex:r .
    ex:DE a DINEN61360:Data_Element ; DINEN61360:has_Type_Description ex:TD ;
        DINEN61360:Value 5.0 ; ParX:isDataFor ex:q .
    ex:TD a DINEN61360:Type_Description, UNECE:LTR .
    ex:F a OM:Application ;
        OM:operator <http://www.openmath.org/cd/relation1#eq> ;
        OM:arguments ( ex:r ex:q ) .
    ex:r a OM:Variable . ex:q a OM:Variable ; ParX:expectsUnit UNECE:CMQ .
    """
    model = model_from_graph(parse_turtle(text))
    outcome = evaluate_operator(model, ex("Op"))
    assert outcome.results == []
    assert len(outcome.refusals) == 1
    assert [f.variable for f in outcome.refusals[0].unit_mismatches] == [ex("q")]


def test_non_equation_interdependency_noticed():
    # swap in a formula whose root is a bare division (no equation)
    text = """
    @prefix VDI3682: <http://www.w3id.org/hsu-aut/VDI3682#> .
    @prefix ParX: <http://www.hsu-hh.de/aut/ParX#> .
    @prefix OM: <http://openmath.org/vocab/math#> .
    @prefix ex: <http://example.org/rtm#> .
    ex:Op a VDI3682:ProcessOperator ;
        ParX:hasInterdependency ex:F .
    ex:F a OM:Application ;
        OM:operator <http://www.openmath.org/cd/arith1#divide> ;
        OM:arguments ( ex:a ex:b ) .
    ex:a a OM:Variable . ex:b a OM:Variable .
    """
    model = model_from_graph(parse_turtle(text))
    outcome = evaluate_operator(model, ex("Op"))
    assert outcome.results == []
    assert outcome.refusals == []
    assert len(outcome.notices) == 1 and "skipped" in outcome.notices[0]


def test_refusal_soundness_on_fixture_models(rtm_model, consistent_model):
    from parx_verify.model import collect_variables
    from parx_verify.verification import MISMATCH, check_data_availability, check_units

    for model in (rtm_model, consistent_model):
        for operator, view in model.operators.items():
            outcome = evaluate_operator(model, operator)
            availability = check_data_availability(model, operator).findings
            mismatches = [f for f in check_units(model, scope=operator) if f.kind == MISMATCH]
            for result in outcome.results:
                assert not any(f.formula == result.formula for f in availability)
                dep = next(d for d in view.interdependencies if d.root == result.formula)
                variables = collect_variables(dep.expression)
                assert not any(f.variable in variables for f in mismatches)


def test_result_unit_is_exactly_the_declared_expectation(consistent_model):
    outcome = evaluate_operator(consistent_model, ex("InjectionHP"))
    assert [(r.value, r.unit) for r in outcome.results] == [
        (30.0, UNECE.term("SEC").value)
    ]
