"""Direct systems, sums, partition terms, decomposition, and chain matrices."""

from __future__ import annotations

import pytest

from vilogic.formulas import parse_formula
from vilogic.matrices import (
    FiniteAlgebra,
    FiniteMatrix,
    MatrixOracle,
    Signature,
    evaluate,
    format_matrix,
)
from vilogic.plonka import (
    DecompositionError,
    DirectSystem,
    FiniteSemilattice,
    SemilatticeError,
    canonical_chain_matrix,
    chain_extension_system,
    check_partition_function,
    check_regular_identity,
    decompose,
    decomposition_renaming,
    dump_system_files,
    load_system_file,
    partition_variables,
    plonka_sum,
    trivial_matrix,
    validate_system,
)
from vilogic.presets import (
    FULL_SIGNATURE,
    b2_matrix,
    b3_matrix,
    pi_term,
    pwk_matrix,
    wk_algebra,
)


def P(text):
    return parse_formula(text, FULL_SIGNATURE)


TWO_CHAIN = FiniteSemilattice(
    ("0", "1"),
    {
        ("0", "0"): "0",
        ("0", "1"): "1",
        ("1", "0"): "1",
        ("1", "1"): "1",
    },
)


def _two_component_system(kind, top_designated):
    top = trivial_matrix(FULL_SIGNATURE, "n", top_designated)
    return DirectSystem(
        semilattice=TWO_CHAIN,
        components={"0": b2_matrix(), "1": top},
        homs={("0", "1"): {"0": "n", "1": "n"}},
        kind=kind,
    )


def test_semilattice_validates_axioms():
    with pytest.raises(SemilatticeError):
        FiniteSemilattice(
            ("a", "b"),
            {
                ("a", "a"): "b",  # not idempotent
                ("a", "b"): "b",
                ("b", "a"): "b",
                ("b", "b"): "b",
            },
        )


def test_semilattice_join_and_order():
    assert TWO_CHAIN.join("0", "1") == "1"
    assert TWO_CHAIN.leq("0", "1")
    assert not TWO_CHAIN.leq("1", "0")


def test_validate_accepts_good_system():
    report = validate_system(_two_component_system("l", True))
    assert report.ok, report.render()


def test_validate_flags_bad_hom():
    system = DirectSystem(
        semilattice=TWO_CHAIN,
        components={"0": b2_matrix(), "1": trivial_matrix(FULL_SIGNATURE, "n", True)},
        homs={("0", "1"): {"0": "n", "1": "n"}, ("0", "0"): {"0": "1", "1": "0"}},
        kind="l",
    )
    report = validate_system(system)
    assert not report.ok
    assert any(v.code == "identity" for v in report.violations)


def test_validate_flags_missing_hom():
    system = DirectSystem(
        semilattice=TWO_CHAIN,
        components={"0": b2_matrix(), "1": trivial_matrix(FULL_SIGNATURE, "n", True)},
        homs={},
        kind="l",
    )
    report = validate_system(system)
    assert any(v.code == "missing-hom" for v in report.violations)


def test_validate_flags_kind_mismatches():
    undesignated_top = validate_system(_two_component_system("l", False))
    assert any(v.code == "l-designated" for v in undesignated_top.violations)
    designated_top = validate_system(_two_component_system("r", True))
    assert any(v.code == "r-reflection" for v in designated_top.violations)


def test_sum_of_l_kind_system_is_paraconsistent_matrix():
    total = plonka_sum(_two_component_system("l", True))
    renaming = {"0.0": "0", "0.1": "1", "1.n": "n"}
    expected = pwk_matrix()
    assert {renaming[e] for e in total.algebra.elements} == set(
        expected.algebra.elements
    )
    for name, table in total.algebra.tables.items():
        for args, value in table.items():
            mapped = tuple(renaming[a] for a in args)
            assert expected.algebra.tables[name][mapped] == renaming[value]
    assert {renaming[e] for e in total.designated} == set(expected.designated)


def test_sum_of_r_kind_system_matches_strict_matrix():
    total = plonka_sum(_two_component_system("r", False))
    renaming = {"0.0": "0", "0.1": "1", "1.n": "n"}
    expected = b3_matrix()
    assert {renaming[e] for e in total.designated} == set(expected.designated)
    for name, table in total.algebra.tables.items():
        for args, value in table.items():
            mapped = tuple(renaming[a] for a in args)
            assert expected.algebra.tables[name][mapped] == renaming[value]


def test_sum_rejects_invalid_system():
    bad = DirectSystem(
        semilattice=TWO_CHAIN,
        components={"0": b2_matrix(), "1": trivial_matrix(FULL_SIGNATURE, "n", True)},
        homs={("0", "1"): {"0": "n"}},
        kind="l",
    )
    with pytest.raises(Exception):
        plonka_sum(bad)


def test_sum_rejects_nullary_operations():
    sig = Signature.of(("top", 0))
    algebra = FiniteAlgebra(sig, ("1",), {"top": {(): "1"}})
    single = FiniteSemilattice(("0",), {("0", "0"): "0"})
    system = DirectSystem(
        semilattice=single,
        components={"0": FiniteMatrix(algebra, frozenset({"1"}))},
        homs={},
        kind="algebraic",
    )
    with pytest.raises(Exception):
        plonka_sum(system)


def test_partition_variables_by_first_occurrence():
    assert partition_variables(pi_term()) == ("x", "y")
    with pytest.raises(Exception):
        partition_variables(P("and(x, x)"))


def test_partition_function_passes_on_bundled_algebras():
    term = pi_term()
    for algebra in (b2_matrix().algebra, wk_algebra()):
        report = check_partition_function(algebra, term)
        assert report.passed, report.render()


def test_partition_function_oracle_modes():
    term = pi_term()
    matrix = b2_matrix()
    oracle = MatrixOracle((matrix,), label="CL")
    for mode in ("l", "r"):
        report = check_partition_function(
            matrix.algebra, term, oracle=oracle, mode=mode
        )
        assert report.passed, report.render()


def test_partition_function_failure_names_axioms():
    report = check_partition_function(b2_matrix().algebra, P("or(x, y)"))
    assert not report.passed
    failed = {r.name for r in report.results if not r.passed}
    assert failed == {
        "P5 absorption over and",
        "P4 distribution over not",
        "P5 absorption over not",
    }
    for result in report.results:
        if not result.passed:
            assert result.counterexample is not None


def test_decompose_contagious_algebra():
    system = decompose(wk_algebra(), pi_term())
    indices = system.semilattice.indices
    assert len(indices) == 2
    assert set(system.components["0"].algebra.elements) == {"0", "1"}
    assert set(system.components["1"].algebra.elements) == {"n"}
    assert system.hom("0", "1") == {"0": "n", "1": "n"}
    assert TWO_CHAIN.leq("0", "1")


def test_decompose_classical_algebra_is_single_component():
    system = decompose(b2_matrix().algebra, pi_term())
    assert len(system.semilattice.indices) == 1


def test_decompose_rejects_non_partition_term():
    with pytest.raises(DecompositionError):
        decompose(b2_matrix().algebra, P("or(x, y)"))


def test_sum_after_decompose_is_identity_up_to_renaming():
    for algebra in (
        wk_algebra(),
        b2_matrix().algebra,
        canonical_chain_matrix(b2_matrix(), "rlr").algebra,
        canonical_chain_matrix(b2_matrix(), "lrl").algebra,
    ):
        system = decompose(algebra, pi_term())
        total = plonka_sum(system)
        if isinstance(total, FiniteMatrix):
            total = total.algebra
        renaming = decomposition_renaming(system)
        assert set(renaming) == set(algebra.elements)
        for name, table in algebra.tables.items():
            for args, value in table.items():
                mapped = tuple(renaming[a] for a in args)
                assert total.tables[name][mapped] == renaming[value]


def test_regular_identity_checker():
    left = P("and(x, y)")
    right = P("and(y, x)")
    report = check_regular_identity(left, right, wk_algebra())
    assert report.regular
    assert report.holds


def test_irregular_identity_detected_and_fails_on_contagious_algebra():
    left = P("and(x, or(y, not(y)))")
    right = P("x")
    report_classical = check_regular_identity(left, right, b2_matrix().algebra)
    assert not report_classical.regular
    assert report_classical.holds
    report_wk = check_regular_identity(left, right, wk_algebra())
    assert not report_wk.holds
    assert report_wk.counterexample is not None
    lhs = evaluate(wk_algebra(), left, report_wk.counterexample)
    rhs = evaluate(wk_algebra(), right, report_wk.counterexample)
    assert lhs != rhs


CHAIN_SHAPES = {
    "": (2, {"1"}),
    "l": (3, {"1", "n"}),
    "r": (3, {"1"}),
    "lr": (4, {"1", "n"}),
    "rl": (4, {"1", "m"}),
    "rlr": (5, {"1", "m"}),
    "lrl": (5, {"1", "n", "p"}),
}


@pytest.mark.parametrize("sequence", sorted(CHAIN_SHAPES))
def test_canonical_chain_shapes(sequence):
    chain = canonical_chain_matrix(b2_matrix(), sequence)
    size, designated = CHAIN_SHAPES[sequence]
    assert len(chain.algebra.elements) == size
    assert set(chain.designated) == designated


def test_chain_l_step_matches_bundled_contagious_matrix():
    chain = canonical_chain_matrix(b2_matrix(), "l")
    expected = pwk_matrix()
    assert set(chain.algebra.elements) == set(expected.algebra.elements)
    assert chain.algebra.tables == expected.algebra.tables
    assert chain.designated == expected.designated


def test_chain_r_step_matches_bundled_strict_matrix():
    chain = canonical_chain_matrix(b2_matrix(), "r")
    expected = b3_matrix()
    assert set(chain.algebra.elements) == set(expected.algebra.elements)
    assert chain.algebra.tables == expected.algebra.tables
    assert chain.designated == expected.designated


def test_chain_partition_function_passes_everywhere():
    term = pi_term()
    for sequence in sorted(CHAIN_SHAPES):
        chain = canonical_chain_matrix(b2_matrix(), sequence)
        report = check_partition_function(chain.algebra, term)
        assert report.passed, (sequence, report.render())


def test_chain_extension_system_round_trip():
    system = chain_extension_system(b2_matrix(), "n", True, "l")
    assert validate_system(system).ok
    total = plonka_sum(system)
    assert isinstance(total, FiniteMatrix)
    assert len(total.algebra.elements) == 3


def test_system_files_round_trip(tmp_path):
    system = decompose(wk_algebra(), pi_term())
    path = dump_system_files(system, tmp_path, "wk")
    loaded = load_system_file(path)
    assert plonka_sum(loaded) == plonka_sum(system)
    assert validate_system(loaded).ok


def test_system_file_parser_rejects_bad_join_table(tmp_path):
    path = tmp_path / "bad.dsys"
    path.write_text(
        "kind: algebraic\nsemilattice: 0,1->2\n", encoding="utf-8"
    )
    with pytest.raises(Exception):
        load_system_file(path)


def test_format_matrix_of_chain_is_stable():
    chain = canonical_chain_matrix(b2_matrix(), "rl")
    text = format_matrix(chain)
    assert "designated: 1, m" in text or "designated: m, 1" in text
