"""Sums and decompositions of algebras over a semilattice of indices.

A direct system consists of component algebras indexed by a finite join
semilattice and homomorphisms along the order, identity at each index and
closed under composition.  Its sum interprets an operation by pushing all
arguments into the join of their component indices and applying the table
there.  Matrix-level systems come in two kinds: ``l`` systems require the
homomorphisms to preserve designation, ``r`` systems require the indices
with nonempty filters to form a sub-semilattice and designation to be
reflected exactly along homomorphisms into them.  ``algebraic`` systems
ignore designation.

A binary term is a partition function for an algebra when the derived
product ``a*b`` is idempotent, associative, right-commuting, and commutes
with every operation in the two ways checked here.  Such a term induces a
decomposition: elements with ``a*b = a`` and ``b*a = b`` share a component,
the component order is read off the product, and ``x -> x*b`` gives the
homomorphisms.  Summing the decomposition reproduces the algebra up to the
canonical renaming, which :func:`decompose` verifies before returning.

Signatures with 0-ary connectives are rejected by the sum and the
decomposition: a constant would need a home component below all others,
which the plain construction does not provide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .formulas import Formula, Signature, var
from .matrices import (
    FiniteAlgebra,
    FiniteMatrix,
    LogicOracle,
    MatrixError,
    MatrixFormatError,
    evaluate,
    format_matrix,
    homomorphism_counterexample,
    load_matrix_file,
)
from .transforms import check_sequence

__all__ = [
    "AxiomResult",
    "DirectSystem",
    "FiniteSemilattice",
    "InvalidSystemError",
    "PartitionReport",
    "RegularIdentityReport",
    "SemilatticeError",
    "SystemReport",
    "Violation",
    "canonical_chain_matrix",
    "chain_extension_system",
    "check_partition_function",
    "check_regular_identity",
    "decompose",
    "decomposition_renaming",
    "dump_system_files",
    "load_system_file",
    "plonka_sum",
    "trivial_matrix",
    "validate_system",
]


class SemilatticeError(MatrixError):
    """The join table breaks a semilattice law."""


class InvalidSystemError(MatrixError):
    """A direct system failed validation; carries the report."""

    def __init__(self, report: "SystemReport"):
        super().__init__("invalid direct system:\n" + report.render())
        self.report = report


@dataclass(frozen=True)
class FiniteSemilattice:
    """A finite join semilattice given by its total join table."""

    indices: tuple[str, ...]
    join_table: Mapping[tuple[str, str], str]

    def __post_init__(self):
        if not self.indices:
            raise SemilatticeError("a semilattice needs at least one index")
        if len(set(self.indices)) != len(self.indices):
            raise SemilatticeError("duplicate semilattice indices")
        universe = set(self.indices)
        for pair, out in self.join_table.items():
            if len(pair) != 2 or set(pair) - universe or out not in universe:
                raise SemilatticeError(f"bad join entry {pair} -> {out}")
        for i, j in itertools.product(self.indices, repeat=2):
            if (i, j) not in self.join_table:
                raise SemilatticeError(f"missing join entry for ({i}, {j})")
        for i in self.indices:
            if self.join_table[(i, i)] != i:
                raise SemilatticeError(f"join not idempotent at {i}")
        for i, j in itertools.product(self.indices, repeat=2):
            if self.join_table[(i, j)] != self.join_table[(j, i)]:
                raise SemilatticeError(f"join not commutative at ({i}, {j})")
        for i, j, k in itertools.product(self.indices, repeat=3):
            left = self.join_table[(self.join_table[(i, j)], k)]
            right = self.join_table[(i, self.join_table[(j, k)])]
            if left != right:
                raise SemilatticeError(f"join not associative at ({i}, {j}, {k})")

    def join(self, i: str, j: str) -> str:
        return self.join_table[(i, j)]

    def join_all(self, items: Iterable[str]) -> str:
        result = None
        for item in items:
            result = item if result is None else self.join(result, item)
        if result is None:
            raise SemilatticeError("join of no indices is undefined")
        return result

    def leq(self, i: str, j: str) -> bool:
        return self.join(i, j) == j


@dataclass(frozen=True)
class DirectSystem:
    """Component matrices over a semilattice with connecting homomorphisms.

    ``homs`` maps pairs ``(i, j)`` with ``i`` strictly below ``j`` to element
    maps; identities are implied.  ``kind`` is ``l``, ``r``, or
    ``algebraic`` (designated sets ignored).
    """

    semilattice: FiniteSemilattice
    components: Mapping[str, FiniteMatrix]
    homs: Mapping[tuple[str, str], Mapping[str, str]]
    kind: str = "algebraic"

    def __post_init__(self):
        if self.kind not in ("l", "r", "algebraic"):
            raise MatrixError(f"unknown system kind {self.kind!r}")

    def hom(self, i: str, j: str) -> Mapping[str, str]:
        if i == j:
            return {e: e for e in self.components[i].algebra.elements}
        return self.homs[(i, j)]

    @property
    def signature(self) -> Signature:
        first = next(iter(self.components.values()))
        return first.signature


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass
class SystemReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str):
        self.violations.append(Violation(code, message))

    def render(self) -> str:
        if self.ok:
            return "system valid"
        return "\n".join(f"[{v.code}] {v.message}" for v in self.violations)


def validate_system(system: DirectSystem) -> SystemReport:
    """Check every structural requirement; report all violations found."""
    report = SystemReport()
    lattice = system.semilattice
    indices = lattice.indices
    if set(system.components) != set(indices):
        report.add("components", "component keys do not match the semilattice indices")
        return report

    signature = system.signature
    for i in indices:
        if system.components[i].signature != signature:
            report.add("signature", f"component {i} uses a different signature")
    if not report.ok:
        return report
    seen: dict[str, str] = {}
    for i in indices:
        for e in system.components[i].algebra.elements:
            if e in seen:
                report.add("disjoint", f"element {e!r} appears in components {seen[e]} and {i}")
            else:
                seen[e] = i

    ordered_pairs = [(i, j) for i in indices for j in indices if i != j and lattice.leq(i, j)]
    for key in system.homs:
        i, j = key
        if i not in set(indices) or j not in set(indices):
            report.add("order", f"hom given for unknown index pair ({i}, {j})")
        elif i == j:
            ident = {e: e for e in system.components[i].algebra.elements}
            if dict(system.homs[key]) != ident:
                report.add("identity", f"explicit hom at ({i}, {i}) is not the identity")
        elif key not in ordered_pairs:
            report.add("order", f"hom given for unrelated pair ({i}, {j})")
    for i, j in ordered_pairs:
        if (i, j) not in system.homs:
            report.add("missing-hom", f"no homomorphism for {i} <= {j}")

    if not report.ok:
        return report

    for i, j in ordered_pairs:
        mapping = system.homs[(i, j)]
        source = system.components[i].algebra
        target = system.components[j].algebra
        if set(mapping) != set(source.elements):
            report.add("hom-domain", f"hom {i}->{j} is not total on component {i}")
            continue
        if any(v not in set(target.elements) for v in mapping.values()):
            report.add("hom-codomain", f"hom {i}->{j} leaves component {j}")
            continue
        failure = homomorphism_counterexample(source, target, mapping)
        if failure is not None:
            name, args = failure
            report.add("hom-property", f"hom {i}->{j} fails to commute with {name} at {args}")

    for i, j, k in itertools.product(indices, repeat=3):
        if i == j or j == k:
            continue
        if lattice.leq(i, j) and lattice.leq(j, k):
            left = system.hom(i, k)
            via = system.hom(j, k)
            first = system.hom(i, j)
            for e in system.components[i].algebra.elements:
                if e in first and first[e] in via and left.get(e) != via[first[e]]:
                    report.add(
                        "composition",
                        f"hom {i}->{k} disagrees with {j}-composite at element {e!r}",
                    )
                    break

    if system.kind == "l":
        for i, j in ordered_pairs:
            mapping = system.homs[(i, j)]
            for e in system.components[i].designated:
                if mapping[e] not in system.components[j].designated:
                    report.add(
                        "l-designated",
                        f"hom {i}->{j} sends designated {e!r} outside the designated set",
                    )
    elif system.kind == "r":
        nonempty = [i for i in indices if system.components[i].designated]
        for i, j in itertools.product(nonempty, repeat=2):
            if lattice.join(i, j) not in nonempty:
                report.add(
                    "r-subsemilattice",
                    f"indices with designated elements are not join-closed at ({i}, {j})",
                )
        for i, j in ordered_pairs:
            if not system.components[j].designated:
                continue
            mapping = system.homs[(i, j)]
            pulled = {e for e in system.components[i].algebra.elements
                      if mapping[e] in system.components[j].designated}
            if pulled != set(system.components[i].designated):
                report.add(
                    "r-reflection",
                    f"hom {i}->{j} does not reflect designation exactly "
                    f"(preimage {sorted(pulled)} vs designated "
                    f"{sorted(system.components[i].designated)})",
                )
    return report


def _reject_constants(signature: Signature, what: str):
    for name, arity in signature.connectives:
        if arity == 0:
            raise MatrixError(f"{what} does not support 0-ary connective {name!r}")


def plonka_sum(system: DirectSystem) -> FiniteMatrix | FiniteAlgebra:
    """Sum a validated direct system over its semilattice.

    Elements are tagged ``"i.a"``.  Returns a matrix whose designated set is
    the union of the component filters, or a bare algebra for ``algebraic``
    systems.
    """
    report = validate_system(system)
    if not report.ok:
        raise InvalidSystemError(report)
    signature = system.signature
    _reject_constants(signature, "the sum construction")
    lattice = system.semilattice

    tag = {}
    component_of = {}
    elements = []
    for i in lattice.indices:
        for a in system.components[i].algebra.elements:
            tag[(i, a)] = f"{i}.{a}"
            component_of[f"{i}.{a}"] = (i, a)
            elements.append(f"{i}.{a}")

    tables: dict[str, dict[tuple[str, ...], str]] = {}
    for name, arity in signature.connectives:
        table: dict[tuple[str, ...], str] = {}
        for combo in itertools.product(elements, repeat=arity):
            pieces = [component_of[c] for c in combo]
            target = lattice.join_all(i for i, _ in pieces)
            pushed = tuple(system.hom(i, target)[a] for i, a in pieces)
            value = system.components[target].algebra.tables[name][pushed]
            table[combo] = tag[(target, value)]
        tables[name] = table
    algebra = FiniteAlgebra(signature, tuple(elements), tables)
    if system.kind == "algebraic":
        return algebra
    designated = frozenset(
        tag[(i, a)] for i in lattice.indices for a in system.components[i].designated
    )
    return FiniteMatrix(algebra, designated)


# ---------------------------------------------------------------------------
# Partition functions and decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomResult:
    name: str
    passed: bool
    counterexample: tuple | None = None


@dataclass
class PartitionReport:
    term: Formula
    mode: str
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def render(self) -> str:
        lines = [f"partition term {self.term} (mode {self.mode})"]
        for r in self.results:
            mark = "ok  " if r.passed else "FAIL"
            extra = "" if r.counterexample is None else f"  at {r.counterexample}"
            lines.append(f"  {mark} {r.name}{extra}")
        return "\n".join(lines)


def partition_variables(term: Formula) -> tuple[str, str]:
    """The two variables of a partition term, in order of first occurrence."""
    order: list[str] = []

    def walk(f: Formula):
        if f.is_variable:
            if f.head not in order:
                order.append(f.head)
        else:
            for a in f.args:
                walk(a)

    walk(term)
    if len(order) != 2:
        raise MatrixError(f"partition term must use exactly two variables, got {order}")
    return order[0], order[1]


def _product_table(algebra: FiniteAlgebra, term: Formula):
    left, right = partition_variables(term)
    table = {}
    for a, b in itertools.product(algebra.elements, repeat=2):
        table[(a, b)] = evaluate(algebra, term, {left: a, right: b})
    return table


def check_partition_function(
    algebra: FiniteAlgebra,
    term: Formula,
    oracle: LogicOracle | None = None,
    mode: str = "algebraic",
) -> PartitionReport:
    """Check the partition-function axioms of ``term`` over ``algebra``.

    Always checks the five equational axioms (0-ary connectives are outside
    their scope and are skipped).  In mode ``l`` the oracle must accept
    ``x`` entails ``x*y``; in mode ``r`` it must accept ``x, y`` entails
    ``x*y`` and ``x*y`` entails ``x``.
    """
    if mode not in ("algebraic", "l", "r"):
        raise MatrixError(f"unknown partition check mode {mode!r}")
    if mode != "algebraic" and oracle is None:
        raise MatrixError(f"mode {mode!r} needs an oracle")
    dot = _product_table(algebra, term)
    report = PartitionReport(term=term, mode=mode)
    elements = algebra.elements

    bad = next((a for a in elements if dot[(a, a)] != a), None)
    report.results.append(AxiomResult("P1 idempotence", bad is None, None if bad is None else (bad,)))

    bad3 = next(
        (
            (a, b, c)
            for a, b, c in itertools.product(elements, repeat=3)
            if dot[(a, dot[(b, c)])] != dot[(dot[(a, b)], c)]
        ),
        None,
    )
    report.results.append(AxiomResult("P2 associativity", bad3 is None, bad3))

    bad3 = next(
        (
            (a, b, c)
            for a, b, c in itertools.product(elements, repeat=3)
            if dot[(a, dot[(b, c)])] != dot[(a, dot[(c, b)])]
        ),
        None,
    )
    report.results.append(AxiomResult("P3 right commutation", bad3 is None, bad3))

    for name, arity in algebra.signature.connectives:
        if arity == 0:
            continue
        table = algebra.tables[name]
        failure = None
        for args in itertools.product(elements, repeat=arity):
            for b in elements:
                pushed = tuple(dot[(a, b)] for a in args)
                if dot[(table[args], b)] != table[pushed]:
                    failure = (name, args, b)
                    break
            if failure:
                break
        report.results.append(AxiomResult(f"P4 distribution over {name}", failure is None, failure))

        failure = None
        for args in itertools.product(elements, repeat=arity):
            for b in elements:
                folded = b
                for a in args:
                    folded = dot[(folded, a)]
                if dot[(b, table[args])] != folded:
                    failure = (name, args, b)
                    break
            if failure:
                break
        report.results.append(AxiomResult(f"P5 absorption over {name}", failure is None, failure))

    if mode == "l":
        left, right = partition_variables(term)
        ok = oracle.entails((var(left),), term)
        report.results.append(AxiomResult("oracle: x entails x*y", ok))
    elif mode == "r":
        left, right = partition_variables(term)
        ok = oracle.entails((var(left), var(right)), term)
        report.results.append(AxiomResult("oracle: x, y entail x*y", ok))
        ok = oracle.entails((term,), var(left))
        report.results.append(AxiomResult("oracle: x*y entails x", ok))
    return report


class DecompositionError(MatrixError):
    """The algebra does not decompose along the given term."""


def decompose(algebra: FiniteAlgebra, term: Formula) -> DirectSystem:
    """Split ``algebra`` along a partition term into a direct system.

    Components are the classes of ``a ~ b`` iff ``a*b = a`` and ``b*a = b``,
    ordered by existence of an absorbed pair and indexed "0", "1", ... by
    their smallest element's position in the input element order.  The
    result always sums back to an algebra identical to the input up to the
    ``"i.a"`` renaming; this is verified before returning.
    """
    _reject_constants(algebra.signature, "decomposition")
    report = check_partition_function(algebra, term)
    if not report.passed:
        raise DecompositionError(
            "term fails the partition axioms:\n" + report.render()
        )
    dot = _product_table(algebra, term)
    elements = algebra.elements

    def related(a: str, b: str) -> bool:
        return dot[(a, b)] == a and dot[(b, a)] == b

    for a, b, c in itertools.product(elements, repeat=3):
        if related(a, b) and related(b, c) and not related(a, c):
            raise DecompositionError(f"component relation is not transitive at ({a}, {b}, {c})")

    classes: list[list[str]] = []
    for e in elements:
        for cls in classes:
            if related(cls[0], e):
                cls.append(e)
                break
        else:
            classes.append([e])
    index_of_element = {}
    names = [str(k) for k in range(len(classes))]
    for name, cls in zip(names, classes):
        for e in cls:
            index_of_element[e] = name
    members = dict(zip(names, classes))

    def below(i: str, j: str) -> bool:
        return any(dot[(b, a)] == b for a in members[i] for b in members[j])

    for i, j in itertools.combinations(names, 2):
        if below(i, j) and below(j, i):
            raise DecompositionError(f"component order is not antisymmetric at ({i}, {j})")
    for i, j, k in itertools.product(names, repeat=3):
        if below(i, j) and below(j, k) and not below(i, k):
            raise DecompositionError(f"component order is not transitive at ({i}, {j}, {k})")

    join_table: dict[tuple[str, str], str] = {}
    for i, j in itertools.product(names, repeat=2):
        uppers = [k for k in names if below(i, k) and below(j, k)]
        least = [u for u in uppers if all(below(u, other) for other in uppers)]
        if len(least) != 1:
            raise DecompositionError(f"components have no unique join at ({i}, {j})")
        join_table[(i, j)] = least[0]
    lattice = FiniteSemilattice(tuple(names), join_table)

    for name, arity in algebra.signature.connectives:
        for cls_name in names:
            for args in itertools.product(members[cls_name], repeat=arity):
                out = algebra.tables[name][args]
                if index_of_element[out] != cls_name:
                    raise DecompositionError(
                        f"component {cls_name} is not closed under {name} at {args}"
                    )

    homs: dict[tuple[str, str], dict[str, str]] = {}
    for i, j in itertools.product(names, repeat=2):
        if i == j or not lattice.leq(i, j):
            continue
        anchor = members[j][0]
        mapping = {e: dot[(e, anchor)] for e in members[i]}
        for b in members[j][1:]:
            for e in members[i]:
                if dot[(e, b)] != mapping[e]:
                    raise DecompositionError(
                        f"hom {i}->{j} depends on the anchor choice at element {e!r}"
                    )
        for e, image in mapping.items():
            if index_of_element[image] != j:
                raise DecompositionError(f"hom {i}->{j} leaves component {j} at {e!r}")
        homs[(i, j)] = mapping

    component_matrices = {
        cls_name: FiniteMatrix(_subalgebra(algebra, members[cls_name]), frozenset())
        for cls_name in names
    }
    system = DirectSystem(lattice, component_matrices, homs, kind="algebraic")
    system_report = validate_system(system)
    if not system_report.ok:
        raise DecompositionError("decomposition produced an invalid system:\n" + system_report.render())

    rebuilt = plonka_sum(system)
    renaming = decomposition_renaming(system)
    for name, arity in algebra.signature.connectives:
        for args in itertools.product(algebra.elements, repeat=arity):
            tagged = tuple(renaming[a] for a in args)
            if renaming[algebra.tables[name][args]] != rebuilt.tables[name][tagged]:
                raise DecompositionError(f"sum of the decomposition disagrees at {name}{args}")
    return system


def decomposition_renaming(system: DirectSystem) -> dict[str, str]:
    """Original element -> tagged sum element, for decompositions."""
    renaming = {}
    for i, matrix in system.components.items():
        for e in matrix.algebra.elements:
            renaming[e] = f"{i}.{e}"
    return renaming


def _subalgebra(algebra: FiniteAlgebra, keep: Sequence[str]) -> FiniteAlgebra:
    keep_set = set(keep)
    tables = {}
    for name, arity in algebra.signature.connectives:
        tables[name] = {
            args: out
            for args, out in algebra.tables[name].items()
            if set(args) <= keep_set and out in keep_set
        }
    return FiniteAlgebra(algebra.signature, tuple(keep), tables)


@dataclass(frozen=True)
class RegularIdentityReport:
    left: Formula
    right: Formula
    regular: bool
    holds: bool
    counterexample: Mapping[str, str] | None = None


def check_regular_identity(
    left: Formula, right: Formula, algebra: FiniteAlgebra
) -> RegularIdentityReport:
    """Evaluate an identity: regular means both sides use the same variables."""
    regular = left.variables == right.variables
    names = sorted(left.variables | right.variables)
    for values in itertools.product(algebra.elements, repeat=len(names)):
        valuation = dict(zip(names, values))
        if evaluate(algebra, left, valuation) != evaluate(algebra, right, valuation):
            return RegularIdentityReport(left, right, regular, False, valuation)
    return RegularIdentityReport(left, right, regular, True, None)


# ---------------------------------------------------------------------------
# Chain matrices
# ---------------------------------------------------------------------------

_PREFERRED_TOPS = ("n", "m", "p", "q")


def _fresh_element(taken: set[str], count: int) -> str:
    if count < len(_PREFERRED_TOPS) and _PREFERRED_TOPS[count] not in taken:
        return _PREFERRED_TOPS[count]
    k = 1
    while f"t{k}" in taken:
        k += 1
    return f"t{k}"


def trivial_matrix(signature: Signature, element: str, designated: bool) -> FiniteMatrix:
    """A one-element matrix; every operation returns the element."""
    tables = {
        name: {(element,) * arity: element}
        for name, arity in signature.connectives
    }
    algebra = FiniteAlgebra(signature, (element,), tables)
    return FiniteMatrix(algebra, frozenset({element}) if designated else frozenset())


def _append_top(matrix: FiniteMatrix, element: str, designated: bool) -> FiniteMatrix:
    """One more element strictly above everything; it absorbs every operation."""
    algebra = matrix.algebra
    elements = algebra.elements + (element,)
    tables = {}
    for name, arity in algebra.signature.connectives:
        table = {}
        for args in itertools.product(elements, repeat=arity):
            if element in args:
                table[args] = element
            else:
                table[args] = algebra.tables[name][args]
        tables[name] = table
    marked = matrix.designated | ({element} if designated else frozenset())
    return FiniteMatrix(FiniteAlgebra(algebra.signature, elements, tables), marked)


def canonical_chain_matrix(base: FiniteMatrix, sequence: str) -> FiniteMatrix:
    """Fold a transform sequence into a chain of one-point extensions.

    Each step stacks a fresh trivial component strictly above everything
    built so far; the new element is designated exactly for an ``l`` step.
    The result is the sum of the corresponding chain system, built directly
    so element names stay short.
    """
    check_sequence(sequence)
    _reject_constants(base.signature, "the chain construction")
    matrix = base
    taken = set(base.algebra.elements)
    for count, step in enumerate(sequence):
        element = _fresh_element(taken, count)
        taken.add(element)
        matrix = _append_top(matrix, element, designated=(step == "l"))
    return matrix


def chain_extension_system(
    bottom: FiniteMatrix,
    top_element: str,
    top_designated: bool,
    kind: str,
) -> DirectSystem:
    """The two-component system: ``bottom`` below a one-point component."""
    top = trivial_matrix(bottom.signature, top_element, top_designated)
    lattice = FiniteSemilattice(
        ("0", "1"),
        {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "1"},
    )
    homs = {("0", "1"): {e: top_element for e in bottom.algebra.elements}}
    return DirectSystem(lattice, {"0": bottom, "1": top}, homs, kind=kind)


# ---------------------------------------------------------------------------
# Direct system files
#
#   kind: l
#   semilattice: 0,0->0  0,1->1  1,0->1  1,1->1
#   component 0: b2.mat
#   component 1: top.mat
#   hom 0 1: 0->n, 1->n
# ---------------------------------------------------------------------------


def load_system_file(path) -> DirectSystem:
    path = Path(path)
    kind: str | None = None
    join_entries: dict[tuple[str, str], str] | None = None
    component_files: dict[str, str] = {}
    hom_entries: dict[tuple[str, str], dict[str, str]] = {}

    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise MatrixFormatError(f"expected 'key: value', got {line!r}", lineno)
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key == "kind":
            if kind is not None:
                raise MatrixFormatError("duplicate kind line", lineno)
            kind = value
        elif key == "semilattice":
            if join_entries is not None:
                raise MatrixFormatError("duplicate semilattice line", lineno)
            join_entries = {}
            for chunk in value.split():
                lhs, arrow, rhs = chunk.partition("->")
                pair = tuple(p.strip() for p in lhs.split(","))
                if not arrow or len(pair) != 2 or not rhs:
                    raise MatrixFormatError(f"bad join entry {chunk!r}", lineno)
                join_entries[pair] = rhs.strip()
        elif key.startswith("component "):
            name = key[len("component "):].strip()
            if name in component_files:
                raise MatrixFormatError(f"duplicate component {name!r}", lineno)
            component_files[name] = value
        elif key.startswith("hom "):
            parts = key.split()
            if len(parts) != 3:
                raise MatrixFormatError("hom lines look like 'hom i j: a->b, ...'", lineno)
            pair = (parts[1], parts[2])
            if pair in hom_entries:
                raise MatrixFormatError(f"duplicate hom {pair}", lineno)
            mapping = {}
            for item in value.split(","):
                item = item.strip()
                if not item:
                    continue
                lhs, arrow, rhs = item.partition("->")
                if not arrow:
                    raise MatrixFormatError(f"bad hom entry {item!r}", lineno)
                mapping[lhs.strip()] = rhs.strip()
            hom_entries[pair] = mapping
        else:
            raise MatrixFormatError(f"unknown section {key!r}", lineno)

    if kind is None:
        raise MatrixFormatError(f"{path}: missing kind line")
    if join_entries is None:
        raise MatrixFormatError(f"{path}: missing semilattice line")
    if not component_files:
        raise MatrixFormatError(f"{path}: no components")
    indices = sorted({i for pair in join_entries for i in pair} | set(component_files))
    try:
        lattice = FiniteSemilattice(tuple(indices), join_entries)
    except SemilatticeError as exc:
        raise MatrixFormatError(f"{path}: {exc}") from exc
    components = {}
    for name, rel in component_files.items():
        components[name] = load_matrix_file(path.parent / rel)
    return DirectSystem(lattice, components, hom_entries, kind=kind)


def dump_system_files(system: DirectSystem, directory, basename: str) -> Path:
    """Write a system and its component matrices; returns the system path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lines = [f"kind: {system.kind}"]
    entries = []
    for i, j in itertools.product(system.semilattice.indices, repeat=2):
        entries.append(f"{i},{j}->{system.semilattice.join(i, j)}")
    lines.append("semilattice: " + "  ".join(entries))
    for i in system.semilattice.indices:
        filename = f"{basename}_c{i}.mat"
        (directory / filename).write_text(
            format_matrix(system.components[i]), encoding="utf-8"
        )
        lines.append(f"component {i}: {filename}")
    for (i, j), mapping in sorted(system.homs.items()):
        body = ", ".join(f"{a}->{b}" for a, b in sorted(mapping.items()))
        lines.append(f"hom {i} {j}: {body}")
    out = directory / f"{basename}.dsys"
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out
