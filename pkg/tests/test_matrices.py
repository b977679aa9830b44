"""Matrix evaluation, entailment, file round-trips, and homomorphism checks."""

from __future__ import annotations

import pytest
from hypothesis import given, settings

from vilogic.formulas import FragmentSpec, app, parse_formula, var
from vilogic.matrices import (
    NONE_PROVEN,
    WITNESS,
    FiniteAlgebra,
    FiniteMatrix,
    MatrixError,
    MatrixFormatError,
    MatrixOracle,
    all_valuations,
    check_homomorphism,
    entails,
    evaluate,
    find_countermodel,
    format_matrix,
    has_theorem_in_fragment,
    homomorphism_counterexample,
    is_theorem,
    load_matrix_file,
    parse_matrix_text,
)
from vilogic.presets import (
    FULL_SIGNATURE,
    b2_and_or_matrix,
    b2_matrix,
    b3_matrix,
    pwk_matrix,
    wk_algebra,
)

from conftest import formula_strategy


def P(text):
    return parse_formula(text, FULL_SIGNATURE)


def test_evaluate_classical_tables():
    algebra = b2_matrix().algebra
    assert evaluate(algebra, P("and(x, y)"), {"x": "1", "y": "0"}) == "0"
    assert evaluate(algebra, P("or(x, y)"), {"x": "1", "y": "0"}) == "1"
    assert evaluate(algebra, P("not(x)"), {"x": "0"}) == "1"


def test_evaluate_contagious_middle_value():
    algebra = wk_algebra()
    assert evaluate(algebra, P("and(x, y)"), {"x": "1", "y": "n"}) == "n"
    assert evaluate(algebra, P("or(x, y)"), {"x": "1", "y": "n"}) == "n"
    assert evaluate(algebra, P("or(x, not(x))"), {"x": "n"}) == "n"


def test_evaluate_rejects_unbound_variable():
    algebra = b2_matrix().algebra
    with pytest.raises(MatrixError):
        evaluate(algebra, P("and(x, y)"), {"x": "1"})


def test_all_valuations_count_and_order():
    algebra = b2_matrix().algebra
    vals = list(all_valuations(algebra, ("x", "y")))
    assert len(vals) == 4
    assert vals[0] == {"x": "0", "y": "0"}
    assert vals[-1] == {"x": "1", "y": "1"}


def test_entails_classical_basics():
    matrix = b2_matrix()
    assert entails([matrix], (P("x"), P("or(not(x), y)")), P("y"))
    assert not entails([matrix], (P("or(x, y)"),), P("x"))
    assert entails([matrix], (), P("or(x, not(x))"))


def test_entails_explosion_differs_across_matrices():
    explosive = (P("x"), P("not(x)"))
    assert entails([b2_matrix()], explosive, P("y"))
    assert not entails([pwk_matrix()], explosive, P("y"))


def test_find_countermodel_reports_first_valuation():
    counter = find_countermodel([pwk_matrix()], (P("x"), P("not(x)")), P("y"))
    assert counter is not None
    index, valuation = counter
    assert index == 0
    assert valuation == {"x": "n", "y": "0"}


def test_find_countermodel_none_for_valid_inference():
    assert find_countermodel([b2_matrix()], (P("and(x, y)"),), P("x")) is None


def test_matrix_constrains_flag():
    assert b2_matrix().constrains
    trivial = FiniteMatrix(b2_matrix().algebra, frozenset({"0", "1"}))
    assert not trivial.constrains


def test_evaluate_rejects_foreign_connective():
    matrix = b2_and_or_matrix()
    with pytest.raises(MatrixError):
        evaluate(matrix.algebra, P("not(x)"), {"x": "1"})


def test_format_parse_round_trip_is_exact():
    for matrix in (b2_matrix(), b2_and_or_matrix(), pwk_matrix(), b3_matrix()):
        text = format_matrix(matrix)
        again = parse_matrix_text(text)
        assert again == matrix
        assert format_matrix(again) == text


def test_load_matrix_file(tmp_path):
    path = tmp_path / "m.mat"
    path.write_text(format_matrix(b3_matrix()), encoding="utf-8")
    assert load_matrix_file(path) == b3_matrix()


def test_parse_matrix_reports_line_of_error():
    text = "signature: and/2\nelements: 0, 1\ntable and: 0,0->2\ndesignated: 1\n"
    with pytest.raises(MatrixFormatError) as exc:
        parse_matrix_text(text)
    assert exc.value.line == 3


def test_parse_matrix_requires_total_tables():
    text = "signature: not/1\nelements: 0, 1\ntable not: 0->1\ndesignated: 1\n"
    with pytest.raises(MatrixFormatError):
        parse_matrix_text(text)


def test_empty_designated_round_trips():
    matrix = FiniteMatrix(b2_matrix().algebra, frozenset())
    assert parse_matrix_text(format_matrix(matrix)) == matrix


def test_homomorphism_identity_passes():
    algebra = b2_matrix().algebra
    mapping = {e: e for e in algebra.elements}
    assert homomorphism_counterexample(algebra, algebra, mapping) is None
    assert check_homomorphism(algebra, algebra, mapping)


def test_homomorphism_collapse_into_trap_element():
    """Sending both classical values onto the contagious element is a hom."""
    wk = wk_algebra()
    b2 = b2_matrix().algebra
    mapping = {"0": "n", "1": "n"}
    assert homomorphism_counterexample(b2, wk, mapping) is None


def test_homomorphism_counterexample_names_operation():
    wk = wk_algebra()
    b2 = b2_matrix().algebra
    counter = homomorphism_counterexample(b2, wk, {"0": "0", "1": "n"})
    assert counter is not None
    name, args = counter
    assert name in {"and", "or", "not"}
    assert all(a in ("0", "1") for a in args)


def test_homomorphism_rejects_partial_mapping():
    algebra = b2_matrix().algebra
    with pytest.raises(MatrixError):
        homomorphism_counterexample(algebra, algebra, {"0": "0"})


def test_oracle_label_and_memoization():
    oracle = MatrixOracle((b2_matrix(),), label="CL")
    assert oracle.label == "CL"
    inference = ((P("x"),), P("x"))
    assert oracle.entails(*inference)
    assert oracle.entails(*inference)


def test_oracle_antitheorem_status_per_matrix():
    assert MatrixOracle((b2_matrix(),)).antitheorem_info.status == WITNESS
    assert MatrixOracle((pwk_matrix(),)).antitheorem_info.status == NONE_PROVEN
    assert MatrixOracle((b3_matrix(),)).antitheorem_info.status == WITNESS
    assert MatrixOracle((b2_and_or_matrix(),)).antitheorem_info.status == NONE_PROVEN


def test_is_theorem_and_fragment_search():
    oracle = MatrixOracle((b2_matrix(),))
    assert is_theorem(oracle, P("or(x, not(x))"))
    spec = FragmentSpec(variables=("x",), max_depth=2, max_premises=1)
    assert has_theorem_in_fragment(oracle, spec) == P("or(x, not(x))")
    and_or = MatrixOracle((b2_and_or_matrix(),))
    assert has_theorem_in_fragment(and_or, spec) is None


@settings(max_examples=60)
@given(formula_strategy(max_leaves=5))
def test_reflexivity_of_matrix_consequence(f):
    assert entails([b2_matrix()], (f,), f)
    assert entails([pwk_matrix()], (f,), f)


@settings(max_examples=60)
@given(formula_strategy(max_leaves=4), formula_strategy(max_leaves=4))
def test_monotonicity_of_matrix_consequence(f, extra):
    matrix = pwk_matrix()
    if entails([matrix], (f,), f):
        assert entails([matrix], (f, extra), f)


def test_multi_matrix_oracle_intersects_consequences():
    oracle = MatrixOracle((b2_matrix(), pwk_matrix()), label="both")
    assert oracle.entails((P("x"),), P("or(x, y)"))
    assert not oracle.entails((P("x"), P("not(x)")), P("y"))
    assert not oracle.entails((P("and(x, y)"),), P("x"))
