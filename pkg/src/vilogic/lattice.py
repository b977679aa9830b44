"""Fragment-exhaustive comparison of consequence oracles and lattice reports.

Everything here is fragment-relative: an "equal" verdict means no inference
inside the finite fragment separates the two oracles, never that the full
relations coincide.  Reports say "equal on fragment" throughout.

Three comparison engines produce identical verdicts and witnesses:

``exhaustive``
    Queries both oracles on every premise subset and conclusion.  Simple and
    obviously correct, but only usable on tiny fragments.

``classes``
    Groups formulas that no oracle built from the given matrices can tell
    apart (same variable set, same designation pattern in every matrix under
    every valuation of the fragment variables), then queries the real
    oracles once per group representative.  Two premise sets hitting the
    same groups get identical answers from every transform tower, so the
    first disagreement over representatives is the first disagreement
    overall.

``vector``
    The same class reduction, evaluated with numpy bit-set arithmetic
    instead of per-query oracle calls.  Transform towers are interpreted
    structurally: a left step intersects the premise projection mask with
    the conclusion's variable mask, a right step adds the variable-coverage
    test and the fresh-variable (explosive premise set) branch, and matrix
    leaves reduce to bit tests against per-valuation designation sets.

Witness selection is deterministic: premise subsets are enumerated by
ascending size then combination order, conclusions in fragment enumeration
order, and the reduced engines report the first structurally distinct
disagreements in exactly that order.  Every witness leaving this module is
re-validated against the real oracles before it is reported.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formulas import (
    Formula,
    FragmentSpec,
    Signature,
    enumerate_fragment,
    fragment_subsets,
    var,
    vars_of_set,
)
from .matrices import (
    NONE_PROVEN,
    UNKNOWN,
    WITNESS,
    FiniteMatrix,
    LogicOracle,
    MatrixError,
    MatrixOracle,
    all_valuations,
    evaluate,
    has_theorem_in_fragment,
)
from .plonka import canonical_chain_matrix, check_partition_function
from .transforms import (
    AntitheoremWitness,
    LeftVIOracle,
    MeetOracle,
    RightVIOracle,
    canonicalize_sequence,
    derive_sequence,
    intersect,
)

__all__ = [
    "DEFAULT_FRAGMENT",
    "ClaimResult",
    "ComparisonVerdict",
    "Inference",
    "LatticeError",
    "LatticeNode",
    "LatticeReport",
    "ReproductionReport",
    "SuiteReport",
    "build_lattice",
    "compare",
    "no_verdict_cycles",
    "reproduce_figure",
    "witness_suite",
]

DEFAULT_FRAGMENT = FragmentSpec()


class LatticeError(MatrixError):
    """A comparison or report request is invalid or internally inconsistent."""


@dataclass(frozen=True)
class Inference:
    """A premise set and a conclusion, in display order."""

    premises: tuple[Formula, ...]
    conclusion: Formula

    def __post_init__(self):
        deduped = tuple(dict.fromkeys(self.premises))
        object.__setattr__(self, "premises", deduped)

    def __str__(self) -> str:
        left = ", ".join(str(p) for p in self.premises)
        return f"{left} |- {self.conclusion}" if left else f"|- {self.conclusion}"


@dataclass(frozen=True)
class ComparisonVerdict:
    """Outcome of one fragment comparison.

    ``relation`` reads left to right: ``strictly-below`` means every
    inference of the first oracle holds in the second but not conversely.
    ``witnesses_ab`` hold in the first oracle only, ``witnesses_ba`` in the
    second only; both are capped lists of the earliest structurally distinct
    disagreements.  ``disagreements`` counts (ab, ba) at the granularity the
    engine works at: raw inferences for ``exhaustive``, class patterns for
    the reduced engines.
    """

    label_a: str
    label_b: str
    relation: str
    witnesses_ab: tuple[Inference, ...]
    witnesses_ba: tuple[Inference, ...]
    fragment: FragmentSpec
    engine: str
    disagreements: tuple[int, int]
    checked_premise_sets: int
    checked_conclusions: int

    @property
    def relation_display(self) -> str:
        if self.relation == "equal":
            return "equal on fragment"
        return f"{self.relation} (fragment-relative)"

    def render(self) -> str:
        lines = [f"compare {self.label_a} vs {self.label_b}"]
        lines.append(f"  fragment: {_fragment_display(self.fragment)}")
        lines.append(f"  engine: {self.engine}")
        lines.append(
            f"  grid: {self.checked_premise_sets} premise sets x "
            f"{self.checked_conclusions} conclusions"
        )
        lines.append(f"  relation: {self.relation_display}")
        for label, witnesses, count in (
            (self.label_a, self.witnesses_ab, self.disagreements[0]),
            (self.label_b, self.witnesses_ba, self.disagreements[1]),
        ):
            if witnesses:
                lines.append(f"  only in {label} ({count} distinct, first shown):")
                for w in witnesses:
                    lines.append(f"    {w}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "a": self.label_a,
            "b": self.label_b,
            "relation": self.relation,
            "engine": self.engine,
            "witnesses_only_in_a": [str(w) for w in self.witnesses_ab],
            "witnesses_only_in_b": [str(w) for w in self.witnesses_ba],
            "disagreements": list(self.disagreements),
            "fragment": _fragment_display(self.fragment),
        }


def _fragment_display(spec: FragmentSpec) -> str:
    return (
        f"vars={','.join(spec.variables)};depth={spec.max_depth};"
        f"premises={spec.max_premises}"
    )


# ---------------------------------------------------------------------------
# Oracle structure extraction
# ---------------------------------------------------------------------------


def _intern_matrix(matrix: FiniteMatrix, table: list[FiniteMatrix]) -> int:
    for i, known in enumerate(table):
        if known == matrix:
            return i
    table.append(matrix)
    return len(table) - 1


def _oracle_tree(oracle: LogicOracle, table: list[FiniteMatrix]):
    """Nested structural key for a transform tower, or None if unrecognized."""
    if isinstance(oracle, MatrixOracle):
        return ("leaf", tuple(_intern_matrix(m, table) for m in oracle.matrices))
    if isinstance(oracle, LeftVIOracle):
        child = _oracle_tree(oracle.base, table)
        return None if child is None else ("l", child)
    if isinstance(oracle, RightVIOracle):
        child = _oracle_tree(oracle.base, table)
        return None if child is None else ("r", child)
    if isinstance(oracle, MeetOracle):
        first = _oracle_tree(oracle.first, table)
        second = _oracle_tree(oracle.second, table)
        if first is None or second is None:
            return None
        return ("meet", tuple(sorted((first, second), key=repr)))
    return None


# ---------------------------------------------------------------------------
# Shared class reduction
# ---------------------------------------------------------------------------


def _variable_masks(formulas: Sequence[Formula], variables: Sequence[str]):
    position = {v: i for i, v in enumerate(variables)}
    out = []
    for f in formulas:
        mask = 0
        for v in f.variables:
            if v not in position:
                raise LatticeError(f"formula {f} uses variables outside the fragment")
            mask |= 1 << position[v]
        out.append(mask)
    return out


def _python_formula_classes(
    formulas: Sequence[Formula],
    matrices: Sequence[FiniteMatrix],
    variables: Sequence[str],
) -> list[int]:
    """Class ids (first-occurrence order) via direct evaluation."""
    masks = _variable_masks(formulas, variables)
    keys: dict[tuple, int] = {}
    out = []
    for f, mask in zip(formulas, masks):
        rows = []
        for matrix in matrices:
            row = tuple(
                evaluate(matrix.algebra, f, valuation) in matrix.designated
                for valuation in all_valuations(matrix.algebra, tuple(variables))
            )
            rows.append(row)
        key = (mask, tuple(rows))
        out.append(keys.setdefault(key, len(keys)))
    return out


# ---------------------------------------------------------------------------
# Vectorized engine
# ---------------------------------------------------------------------------


def _designation_bools(
    matrix: FiniteMatrix, formulas: Sequence[Formula], variables: Sequence[str]
) -> np.ndarray:
    """(n_formulas, n_valuations) designation table, valuations in product order."""
    algebra = matrix.algebra
    n = len(algebra.elements)
    k = len(variables)
    element_index = {e: i for i, e in enumerate(algebra.elements)}
    coords = np.indices((n,) * k).reshape(k, -1) if k else np.zeros((0, 1), dtype=np.int64)
    values: dict[Formula, np.ndarray] = {}
    tables = {
        name: np.array(
            [
                element_index[algebra.tables[name][args]]
                for args in itertools.product(algebra.elements, repeat=arity)
            ],
            dtype=np.int64,
        ).reshape((n,) * arity)
        for name, arity in algebra.signature.connectives
    }
    for position, v in enumerate(variables):
        values[var(v)] = coords[position]
    designated = np.zeros(n, dtype=bool)
    for e in matrix.designated:
        designated[element_index[e]] = True
    out = np.empty((len(formulas), coords.shape[1] if k else 1), dtype=bool)
    for row, formula in enumerate(formulas):
        if formula not in values:
            args = tuple(values[a] for a in formula.args)
            values[formula] = tables[formula.head][args]
        out[row] = designated[values[formula]]
    return out


class _VectorContext:
    """Shared numpy state for comparing towers over one matrix collection."""

    def __init__(
        self,
        signature: Signature,
        fragment: FragmentSpec,
        matrices: Sequence[FiniteMatrix],
    ):
        self.signature = signature
        self.fragment = fragment
        self.matrices = list(matrices)
        self.variables = fragment.variables
        self.k = len(self.variables)
        self.full_mask = (1 << self.k) - 1
        self.formulas = enumerate_fragment(signature, fragment)
        n = len(self.formulas)
        self.fmask = np.array(
            _variable_masks(self.formulas, self.variables), dtype=np.int64
        )
        self.des_bool = [
            _designation_bools(m, self.formulas, self.variables) for m in self.matrices
        ]
        packed = [np.packbits(db, axis=1) for db in self.des_bool]

        keys: dict[tuple, int] = {}
        class_of = np.empty(n, dtype=np.int64)
        for t in range(n):
            key = (int(self.fmask[t]),) + tuple(p[t].tobytes() for p in packed)
            class_of[t] = keys.setdefault(key, len(keys))
        self.class_of = class_of
        self.n_classes = len(keys)
        reps = np.full(self.n_classes, -1, dtype=np.int64)
        for t in range(n - 1, -1, -1):
            reps[class_of[t]] = t
        self.rep_index = reps
        self.rep_mask = self.fmask[reps]
        self.rep_des_packed = [p[reps] for p in packed]
        self.rep_not_packed = [
            np.packbits(~db[reps], axis=1) for db in self.des_bool
        ]
        self.all_designated = [
            frozenset(m.algebra.elements) == m.designated for m in self.matrices
        ]

        blocks = []
        offset = 0
        for size in range(0, fragment.max_premises + 1):
            if size > self.n_classes:
                break
            if size == 0:
                combos = np.zeros((1, 0), dtype=np.int64)
            else:
                combos = np.array(
                    list(itertools.combinations(range(self.n_classes), size)),
                    dtype=np.int64,
                )
            blocks.append((offset, size, combos))
            offset += len(combos)
        self.blocks = blocks
        self.n_premise_rows = offset
        self._projections: dict[int, tuple] = {}
        self._leaf_conjunctions: dict[tuple[int, int], np.ndarray] = {}
        self._fresh_cache: dict[tuple, np.ndarray] = {}
        self._premise_masks: dict[int, np.ndarray] = {}

    # -- projections --------------------------------------------------------

    def _projection(self, vmask: int):
        """Dedup of premise rows restricted to formulas with vars inside vmask.

        Returns (slot id arrays for the distinct projected rows, inverse map
        from full rows to distinct rows).
        """
        cached = self._projections.get(vmask)
        if cached is not None:
            return cached
        base = self.n_classes + 1
        parts = []
        for _, size, combos in self.blocks:
            if size == 0:
                parts.append(np.zeros(1, dtype=np.int64))
                continue
            included = (self.rep_mask[combos] & ~vmask) == 0
            encoded = np.where(included, combos + 1, 0)
            encoded = -np.sort(-encoded, axis=1)
            key = np.zeros(len(combos), dtype=np.int64)
            for slot in range(size):
                key = key * base + encoded[:, slot]
            parts.append(key)
        keys = np.concatenate(parts)
        distinct, inverse = np.unique(keys, return_inverse=True)
        slots = []
        remaining = distinct.copy()
        for _ in range(self.fragment.max_premises):
            slots.append(remaining % base)
            remaining = remaining // base
        slots.reverse()
        result = (slots, inverse.astype(np.int64))
        self._projections[vmask] = result
        return result

    def _premise_mask(self, vmask: int) -> np.ndarray:
        """Variable mask of each projected premise row, expanded to full rows."""
        cached = self._premise_masks.get(vmask)
        if cached is not None:
            return cached
        slots, inverse = self._projection(vmask)
        compact = np.zeros(len(slots[0]), dtype=np.int64)
        for slot in slots:
            present = slot > 0
            compact |= np.where(present, self.rep_mask[slot - 1], 0)
        expanded = compact[inverse]
        self._premise_masks[vmask] = expanded
        return expanded

    def _leaf_conjunction(self, matrix_id: int, vmask: int) -> np.ndarray:
        """Per distinct projected row: valuations designating every member."""
        key = (matrix_id, vmask)
        cached = self._leaf_conjunctions.get(key)
        if cached is not None:
            return cached
        slots, _ = self._projection(vmask)
        words = self.rep_des_packed[matrix_id].shape[1]
        out = np.full((len(slots[0]), words), 0xFF, dtype=np.uint8)
        for slot in slots:
            present = slot > 0
            rows = np.where(
                present[:, None],
                self.rep_des_packed[matrix_id][np.where(present, slot - 1, 0)],
                np.uint8(0xFF),
            )
            out &= rows
        self._leaf_conjunctions[key] = out
        return out

    # -- tree evaluation -----------------------------------------------------

    def _leaf_real(self, matrix_ids: tuple[int, ...], vmask: int, target: int):
        result = None
        for matrix_id in matrix_ids:
            conj = self._leaf_conjunction(matrix_id, vmask)
            _, inverse = self._projection(vmask)
            bad = (conj & self.rep_not_packed[matrix_id][target]).any(axis=1)
            ok = (~bad)[inverse]
            result = ok if result is None else (result & ok)
        return result

    def _leaf_fresh(self, matrix_ids: tuple[int, ...], vmask: int):
        result = None
        for matrix_id in matrix_ids:
            if self.all_designated[matrix_id]:
                ok = np.ones(self.n_premise_rows, dtype=bool)
            else:
                conj = self._leaf_conjunction(matrix_id, vmask)
                _, inverse = self._projection(vmask)
                satisfiable = (conj != 0).any(axis=1)
                ok = (~satisfiable)[inverse]
            result = ok if result is None else (result & ok)
        return result

    def fresh_answers(self, tree, vmask: int) -> np.ndarray:
        """Answers for a conclusion variable foreign to the whole fragment."""
        key = (tree, vmask)
        cached = self._fresh_cache.get(key)
        if cached is not None:
            return cached
        tag = tree[0]
        if tag == "leaf":
            out = self._leaf_fresh(tree[1], vmask)
        elif tag == "l":
            out = self.fresh_answers(tree[1], 0)
        elif tag == "r":
            out = self.fresh_answers(tree[1], vmask)
        else:
            out = self.fresh_answers(tree[1][0], vmask) & self.fresh_answers(
                tree[1][1], vmask
            )
        self._fresh_cache[key] = out
        return out

    def target_answers(self, tree, target: int, memo: dict) -> np.ndarray:
        """Answers of ``tree`` for conclusion class ``target`` on all premise rows."""
        tmask = int(self.rep_mask[target])

        def walk(node, vmask: int) -> np.ndarray:
            key = (node, vmask)
            hit = memo.get(key)
            if hit is not None:
                return hit
            tag = node[0]
            if tag == "leaf":
                out = self._leaf_real(node[1], vmask, target)
            elif tag == "l":
                out = walk(node[1], vmask & tmask)
            elif tag == "r":
                covered = (tmask & ~self._premise_mask(vmask)) == 0
                out = (covered & walk(node[1], vmask)) | self.fresh_answers(
                    node[1], vmask
                )
            else:
                out = walk(node[1][0], vmask) & walk(node[1][1], vmask)
            memo[key] = out
            return out

        return walk(tree, self.full_mask)

    # -- decoding ------------------------------------------------------------

    def premise_formulas(self, row: int) -> tuple[Formula, ...]:
        for offset, size, combos in self.blocks:
            if row < offset + len(combos):
                ids = combos[row - offset]
                return tuple(
                    self.formulas[int(self.rep_index[c])] for c in ids
                )
        raise LatticeError(f"premise row {row} out of range")

    def conclusion_formula(self, target: int) -> Formula:
        return self.formulas[int(self.rep_index[target])]


# ---------------------------------------------------------------------------
# Engines
# ---------------------------------------------------------------------------


def _run_vector_engine(
    a: LogicOracle,
    b: LogicOracle,
    fragment: FragmentSpec,
    max_witnesses: int,
    context: _VectorContext | None = None,
    trees: tuple | None = None,
):
    if trees is None or context is None:
        table: list[FiniteMatrix] = []
        tree_a = _oracle_tree(a, table)
        tree_b = _oracle_tree(b, table)
        if tree_a is None or tree_b is None:
            raise LatticeError(
                "the vector engine needs oracles built from matrix, left, "
                "right, and meet constructors"
            )
        context = _VectorContext(a.signature, fragment, table)
    else:
        tree_a, tree_b = trees
    count_ab = 0
    count_ba = 0
    found_ab: list[tuple[int, int]] = []
    found_ba: list[tuple[int, int]] = []
    for target in range(context.n_classes):
        memo: dict = {}
        ans_a = context.target_answers(tree_a, target, memo)
        ans_b = context.target_answers(tree_b, target, memo)
        only_a = ans_a & ~ans_b
        only_b = ans_b & ~ans_a
        n_a = int(np.count_nonzero(only_a))
        n_b = int(np.count_nonzero(only_b))
        count_ab += n_a
        count_ba += n_b
        if n_a:
            for row in np.flatnonzero(only_a)[:max_witnesses]:
                found_ab.append((int(row), target))
        if n_b:
            for row in np.flatnonzero(only_b)[:max_witnesses]:
                found_ba.append((int(row), target))
    witnesses_ab = _decode_witnesses(context, found_ab, max_witnesses)
    witnesses_ba = _decode_witnesses(context, found_ba, max_witnesses)
    return witnesses_ab, witnesses_ba, (count_ab, count_ba), context


def _decode_witnesses(
    context: _VectorContext, found: list[tuple[int, int]], cap: int
) -> list[Inference]:
    found.sort()
    out = []
    for row, target in found[:cap]:
        out.append(
            Inference(
                context.premise_formulas(row), context.conclusion_formula(target)
            )
        )
    return out


def _run_classes_engine(
    a: LogicOracle, b: LogicOracle, fragment: FragmentSpec, max_witnesses: int
):
    formulas = enumerate_fragment(a.signature, fragment)
    table: list[FiniteMatrix] = []
    if _oracle_tree(a, table) is None or _oracle_tree(b, table) is None:
        raise LatticeError(
            "the class engine needs oracles built from matrix, left, "
            "right, and meet constructors"
        )
    class_ids = _python_formula_classes(formulas, table, fragment.variables)
    reps: list[Formula] = []
    seen: set[int] = set()
    for f, cid in zip(formulas, class_ids):
        if cid not in seen:
            seen.add(cid)
            reps.append(f)
    witnesses_ab: list[Inference] = []
    witnesses_ba: list[Inference] = []
    count_ab = 0
    count_ba = 0
    for premises in fragment_subsets(tuple(reps), fragment.max_premises):
        for conclusion in reps:
            in_a = a.entails(premises, conclusion)
            in_b = b.entails(premises, conclusion)
            if in_a == in_b:
                continue
            inference = Inference(premises, conclusion)
            if in_a:
                count_ab += 1
                if len(witnesses_ab) < max_witnesses:
                    witnesses_ab.append(inference)
            else:
                count_ba += 1
                if len(witnesses_ba) < max_witnesses:
                    witnesses_ba.append(inference)
    return witnesses_ab, witnesses_ba, (count_ab, count_ba)


def _run_exhaustive_engine(
    a: LogicOracle, b: LogicOracle, fragment: FragmentSpec, max_witnesses: int
):
    formulas = enumerate_fragment(a.signature, fragment)
    witnesses_ab: list[Inference] = []
    witnesses_ba: list[Inference] = []
    count_ab = 0
    count_ba = 0
    for premises in fragment_subsets(formulas, fragment.max_premises):
        for conclusion in formulas:
            in_a = a.entails(premises, conclusion)
            in_b = b.entails(premises, conclusion)
            if in_a == in_b:
                continue
            inference = Inference(premises, conclusion)
            if in_a:
                count_ab += 1
                if len(witnesses_ab) < max_witnesses:
                    witnesses_ab.append(inference)
            else:
                count_ba += 1
                if len(witnesses_ba) < max_witnesses:
                    witnesses_ba.append(inference)
    return witnesses_ab, witnesses_ba, (count_ab, count_ba)


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def _revalidate(
    a: LogicOracle,
    b: LogicOracle,
    witnesses_ab: Sequence[Inference],
    witnesses_ba: Sequence[Inference],
):
    for w in witnesses_ab:
        if not a.entails(w.premises, w.conclusion) or b.entails(w.premises, w.conclusion):
            raise LatticeError(f"witness failed re-validation: {w}")
    for w in witnesses_ba:
        if a.entails(w.premises, w.conclusion) or not b.entails(w.premises, w.conclusion):
            raise LatticeError(f"witness failed re-validation: {w}")


def _relation(n_ab: int, n_ba: int) -> str:
    if n_ab and n_ba:
        return "incomparable"
    if n_ab:
        return "strictly-above"
    if n_ba:
        return "strictly-below"
    return "equal"


def compare(
    a: LogicOracle,
    b: LogicOracle,
    fragment: FragmentSpec = DEFAULT_FRAGMENT,
    extra_witnesses: Iterable[Inference] = (),
    engine: str = "auto",
    max_witnesses: int = 5,
    _context: _VectorContext | None = None,
    _trees: tuple | None = None,
) -> ComparisonVerdict:
    """Classify two oracles over every fragment inference plus extras.

    The relation reads ``a <relation> b``; see :class:`ComparisonVerdict`.
    ``extra_witnesses`` are checked against the real oracles and merged into
    the classification, so a strict gap witnessed only outside the fragment
    still shows up.  Every reported witness is re-validated with direct
    oracle calls before the verdict is returned.
    """
    if a.signature != b.signature:
        raise LatticeError("compared oracles must share a signature")
    if engine == "auto":
        table: list[FiniteMatrix] = []
        known = (
            _oracle_tree(a, table) is not None and _oracle_tree(b, table) is not None
        )
        engine = "vector" if known else "exhaustive"
    if engine == "vector":
        witnesses_ab, witnesses_ba, counts, _ = _run_vector_engine(
            a, b, fragment, max_witnesses, _context, _trees
        )
    elif engine == "classes":
        witnesses_ab, witnesses_ba, counts = _run_classes_engine(
            a, b, fragment, max_witnesses
        )
    elif engine == "exhaustive":
        witnesses_ab, witnesses_ba, counts = _run_exhaustive_engine(
            a, b, fragment, max_witnesses
        )
    else:
        raise LatticeError(f"unknown engine {engine!r}")

    count_ab, count_ba = counts
    for inference in extra_witnesses:
        in_a = a.entails(inference.premises, inference.conclusion)
        in_b = b.entails(inference.premises, inference.conclusion)
        if in_a == in_b:
            continue
        bucket = witnesses_ab if in_a else witnesses_ba
        if inference not in bucket:
            bucket.append(inference)
        if in_a:
            count_ab += 1
        else:
            count_ba += 1

    _revalidate(a, b, witnesses_ab, witnesses_ba)
    n = len(enumerate_fragment(a.signature, fragment))
    raw_sets = sum(
        math.comb(n, size) for size in range(0, fragment.max_premises + 1)
    )
    return ComparisonVerdict(
        label_a=a.label,
        label_b=b.label,
        relation=_relation(count_ab, count_ba),
        witnesses_ab=tuple(witnesses_ab),
        witnesses_ba=tuple(witnesses_ba),
        fragment=fragment,
        engine=engine,
        disagreements=(count_ab, count_ba),
        checked_premise_sets=raw_sets,
        checked_conclusions=n,
    )


def no_verdict_cycles(verdicts: Iterable[ComparisonVerdict]) -> bool:
    """True when the strict parts of the verdicts form no directed cycle."""
    edges: dict[str, set[str]] = {}
    for v in verdicts:
        if v.relation == "strictly-below":
            edges.setdefault(v.label_a, set()).add(v.label_b)
        elif v.relation == "strictly-above":
            edges.setdefault(v.label_b, set()).add(v.label_a)
    state: dict[str, int] = {}

    def visit(node: str) -> bool:
        state[node] = 1
        for nxt in edges.get(node, ()):
            mark = state.get(nxt, 0)
            if mark == 1 or (mark == 0 and not visit(nxt)):
                return False
        state[node] = 2
        return True

    return all(visit(node) for node in list(edges) if state.get(node, 0) == 0)


# ---------------------------------------------------------------------------
# Lattice reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeNode:
    node_id: str
    label: str
    kind: str  # "tower" | "meet" | "join"
    sequence: str | None
    parts: tuple[str, ...]
    canonical: str | None
    computed: bool
    antitheorem_status: str | None
    expected_equal: str | None = None


@dataclass
class LatticeReport:
    base_label: str
    fragment: FragmentSpec
    trivial_base: bool
    base_antitheorems: str
    nodes: tuple[LatticeNode, ...] = ()
    verdicts: tuple[ComparisonVerdict, ...] = ()
    pair_index: Mapping[tuple[str, str], int] = field(default_factory=dict)
    equal_groups: tuple[tuple[str, ...], ...] = ()
    hasse_edges: tuple[tuple[str, str], ...] = ()
    formal_edges: tuple[tuple[str, str], ...] = ()
    unresolved: tuple[tuple[str, str, str], ...] = ()

    def verdict(self, id_a: str, id_b: str) -> ComparisonVerdict:
        """Verdict for the ordered pair; flips a stored reversed verdict."""
        index = self.pair_index.get((id_a, id_b))
        if index is not None:
            return self.verdicts[index]
        index = self.pair_index.get((id_b, id_a))
        if index is None:
            raise LatticeError(f"no verdict stored for {id_a} vs {id_b}")
        return _flip(self.verdicts[index])

    def render(self) -> str:
        lines = [f"lattice over {self.base_label}"]
        lines.append(f"  fragment: {_fragment_display(self.fragment)}")
        lines.append(f"  base antitheorems: {self.base_antitheorems}")
        if self.trivial_base:
            lines.append("  base designates every value; no lattice claims made")
            return "\n".join(lines)
        lines.append("  nodes:")
        for node in self.nodes:
            bits = [f"    {node.node_id}: {node.label} [{node.kind}]"]
            if node.canonical is not None:
                bits.append(f"canonical={node.canonical or 'base'}")
            if not node.computed:
                bits.append("not computed (no construction available)")
            if node.antitheorem_status is not None:
                bits.append(f"antitheorems={node.antitheorem_status}")
            lines.append(" ".join(bits))
        lines.append("  equal on fragment:")
        for group in self.equal_groups:
            if len(group) > 1:
                lines.append("    " + " = ".join(group))
        lines.append("  strict covers (lower < upper):")
        for lo, hi in self.hasse_edges:
            lines.append(f"    {lo} < {hi}")
        if self.formal_edges:
            lines.append("  formal edges (join nodes, not computed):")
            for lo, hi in self.formal_edges:
                lines.append(f"    {lo} < {hi}")
        if self.unresolved:
            lines.append("  unresolved at this fragment scale:")
            for id_a, id_b, note in self.unresolved:
                lines.append(f"    {id_a} vs {id_b}: {note}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "base": self.base_label,
            "fragment": _fragment_display(self.fragment),
            "trivial_base": self.trivial_base,
            "base_antitheorems": self.base_antitheorems,
            "nodes": [
                {
                    "id": n.node_id,
                    "label": n.label,
                    "kind": n.kind,
                    "sequence": n.sequence,
                    "canonical": n.canonical,
                    "computed": n.computed,
                    "antitheorems": n.antitheorem_status,
                }
                for n in self.nodes
            ],
            "verdicts": [v.to_json() for v in self.verdicts],
            "equal_groups": [list(g) for g in self.equal_groups],
            "hasse_edges": [list(e) for e in self.hasse_edges],
            "formal_edges": [list(e) for e in self.formal_edges],
            "unresolved": [list(u) for u in self.unresolved],
        }


def _flip(verdict: ComparisonVerdict) -> ComparisonVerdict:
    flipped = {
        "strictly-below": "strictly-above",
        "strictly-above": "strictly-below",
    }.get(verdict.relation, verdict.relation)
    return ComparisonVerdict(
        label_a=verdict.label_b,
        label_b=verdict.label_a,
        relation=flipped,
        witnesses_ab=verdict.witnesses_ba,
        witnesses_ba=verdict.witnesses_ab,
        fragment=verdict.fragment,
        engine=verdict.engine,
        disagreements=(verdict.disagreements[1], verdict.disagreements[0]),
        checked_premise_sets=verdict.checked_premise_sets,
        checked_conclusions=verdict.checked_conclusions,
    )


def build_lattice(
    base: Sequence[FiniteMatrix] | FiniteMatrix,
    partition_term: Formula,
    fragment: FragmentSpec = DEFAULT_FRAGMENT,
    base_label: str = "base",
    max_witnesses: int = 3,
) -> LatticeReport:
    """Survey the transform towers over a base matrix collection.

    Requires ``partition_term`` to pass the partition axioms on every base
    algebra.  Detects whether the base has an explosive premise set; that
    choice fixes the node inventory: five towers without one, seven with,
    plus computed meet nodes and rendered-but-uncomputed join nodes.  All
    computed pairs are compared exhaustively on the fragment.
    """
    matrices = (base,) if isinstance(base, FiniteMatrix) else tuple(base)
    if not matrices:
        raise LatticeError("need at least one base matrix")
    for matrix in matrices:
        report = check_partition_function(matrix.algebra, partition_term)
        if not report.passed:
            raise LatticeError(
                "partition term fails on a base algebra:\n" + report.render()
            )
    if all(frozenset(m.algebra.elements) == m.designated for m in matrices):
        return LatticeReport(
            base_label=base_label,
            fragment=fragment,
            trivial_base=True,
            base_antitheorems=NONE_PROVEN,
        )

    base_oracle = MatrixOracle(matrices, label=base_label)
    info = base_oracle.antitheorem_info
    has_antitheorems = info.status == WITNESS
    if has_antitheorems:
        sequences = ["", "l", "r", "lr", "rl", "rlr", "lrl"]
        meets = [("l", "r"), ("lr", "rl")]
        joins = [("l", "r"), ("rl", "lr")]
    else:
        sequences = ["", "l", "r", "lr", "rl"]
        meets = [("l", "r")]
        joins = [("l", "r")]

    oracles: dict[str, LogicOracle] = {}
    nodes: list[LatticeNode] = []
    for seq in sequences:
        node_id = seq or "base"
        oracle = derive_sequence(base_oracle, seq)
        oracles[node_id] = oracle
        nodes.append(
            LatticeNode(
                node_id=node_id,
                label=oracle.label,
                kind="tower",
                sequence=seq,
                parts=(),
                canonical=canonicalize_sequence(seq, has_antitheorems),
                computed=True,
                antitheorem_status=oracle.antitheorem_info.status,
            )
        )
    for left_id, right_id in meets:
        node_id = f"meet({left_id},{right_id})"
        oracle = intersect(oracles[left_id], oracles[right_id])
        oracles[node_id] = oracle
        expected = None
        if (left_id, right_id) == ("l", "r") and not has_antitheorems:
            expected = "lr"
        nodes.append(
            LatticeNode(
                node_id=node_id,
                label=oracle.label,
                kind="meet",
                sequence=None,
                parts=(left_id, right_id),
                canonical=None,
                computed=True,
                antitheorem_status=oracle.antitheorem_info.status,
                expected_equal=expected,
            )
        )
    formal_edges: list[tuple[str, str]] = []
    for left_id, right_id in joins:
        node_id = f"join({left_id},{right_id})"
        nodes.append(
            LatticeNode(
                node_id=node_id,
                label=f"join of {left_id} and {right_id}",
                kind="join",
                sequence=None,
                parts=(left_id, right_id),
                canonical=None,
                computed=False,
                antitheorem_status=None,
            )
        )
        formal_edges.append((left_id, node_id))
        formal_edges.append((right_id, node_id))

    computed_ids = [n.node_id for n in nodes if n.computed]
    table: list[FiniteMatrix] = []
    trees = {
        node_id: _oracle_tree(oracles[node_id], table) for node_id in computed_ids
    }
    context = (
        _VectorContext(base_oracle.signature, fragment, table)
        if all(t is not None for t in trees.values())
        else None
    )
    verdicts: list[ComparisonVerdict] = []
    pair_index: dict[tuple[str, str], int] = {}
    for pos, id_a in enumerate(computed_ids):
        for id_b in computed_ids[pos + 1:]:
            if context is not None:
                verdict = compare(
                    oracles[id_a],
                    oracles[id_b],
                    fragment,
                    max_witnesses=max_witnesses,
                    engine="vector",
                    _context=context,
                    _trees=(trees[id_a], trees[id_b]),
                )
            else:
                verdict = compare(
                    oracles[id_a],
                    oracles[id_b],
                    fragment,
                    max_witnesses=max_witnesses,
                )
            pair_index[(id_a, id_b)] = len(verdicts)
            verdicts.append(verdict)
    if not no_verdict_cycles(verdicts):
        raise LatticeError("pairwise verdicts form a cycle; engine inconsistency")

    parent: dict[str, str] = {node_id: node_id for node_id in computed_ids}

    def find(node_id: str) -> str:
        while parent[node_id] != node_id:
            parent[node_id] = parent[parent[node_id]]
            node_id = parent[node_id]
        return node_id

    for (id_a, id_b), index in pair_index.items():
        if verdicts[index].relation == "equal":
            root_a, root_b = find(id_a), find(id_b)
            if root_a != root_b:
                keep, drop = sorted(
                    (root_a, root_b), key=computed_ids.index
                )
                parent[drop] = keep
    groups: dict[str, list[str]] = {}
    for node_id in computed_ids:
        groups.setdefault(find(node_id), []).append(node_id)
    equal_groups = tuple(tuple(groups[root]) for root in groups)
    representatives = list(groups)

    def strictly_below(id_a: str, id_b: str) -> bool:
        index = pair_index.get((id_a, id_b))
        if index is not None:
            return verdicts[index].relation == "strictly-below"
        index = pair_index.get((id_b, id_a))
        return index is not None and verdicts[index].relation == "strictly-above"

    hasse: list[tuple[str, str]] = []
    for lo in representatives:
        for hi in representatives:
            if lo == hi or not strictly_below(lo, hi):
                continue
            if any(
                strictly_below(lo, mid) and strictly_below(mid, hi)
                for mid in representatives
                if mid not in (lo, hi)
            ):
                continue
            hasse.append((lo, hi))

    node_by_id = {n.node_id: n for n in nodes}
    unresolved: list[tuple[str, str, str]] = []
    for (id_a, id_b), index in pair_index.items():
        if verdicts[index].relation != "equal":
            continue
        node_a, node_b = node_by_id[id_a], node_by_id[id_b]
        expected = (
            node_a.canonical is not None
            and node_a.canonical == node_b.canonical
        ) or (
            node_b.expected_equal is not None
            and find(node_b.expected_equal) == find(id_a)
        ) or (
            node_a.expected_equal is not None
            and find(node_a.expected_equal) == find(id_b)
        )
        if not expected:
            unresolved.append(
                (id_a, id_b, "equal on fragment; not forced by the rewrite rules")
            )

    return LatticeReport(
        base_label=base_label,
        fragment=fragment,
        trivial_base=False,
        base_antitheorems=info.status,
        nodes=tuple(nodes),
        verdicts=tuple(verdicts),
        pair_index=pair_index,
        equal_groups=equal_groups,
        hasse_edges=tuple(hasse),
        formal_edges=tuple(formal_edges),
        unresolved=tuple(unresolved),
    )


# ---------------------------------------------------------------------------
# Witness suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClaimResult:
    label: str
    passed: bool
    detail: str = ""

    def render(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        suffix = f" ({self.detail})" if self.detail else ""
        return f"  {mark} {self.label}{suffix}"


@dataclass
class SuiteReport:
    base_label: str
    claims: tuple[ClaimResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.claims)

    def render(self) -> str:
        lines = [f"witness suite over {self.base_label}"]
        lines.extend(c.render() for c in self.claims)
        lines.append(f"  result: {'all claims hold' if self.ok else 'FAILURES present'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "base": self.base_label,
            "claims": [
                {"label": c.label, "passed": c.passed, "detail": c.detail}
                for c in self.claims
            ],
            "ok": self.ok,
        }


def _apply_term(term: Formula, first: Formula, second: Formula) -> Formula:
    """Instantiate a two-variable term at the given arguments."""
    from .formulas import substitute
    from .plonka import partition_variables

    left_name, right_name = partition_variables(term)
    return substitute(term, {left_name: first, right_name: second})


def _claim(
    label: str,
    inference: Inference,
    checks: Sequence[tuple[LogicOracle, bool]],
) -> ClaimResult:
    details = []
    passed = True
    for oracle, expected in checks:
        got = oracle.entails(inference.premises, inference.conclusion)
        if got != expected:
            passed = False
        details.append(f"{oracle.label}: {'yes' if got else 'no'}")
    return ClaimResult(
        label=f"{label}: {inference}",
        passed=passed,
        detail="; ".join(details),
    )


def witness_suite(
    base: Sequence[FiniteMatrix] | FiniteMatrix,
    partition_term: Formula,
    sigma: AntitheoremWitness | Iterable[Formula] | None = None,
    base_label: str = "base",
) -> SuiteReport:
    """Evaluate the exact proof inferences against the towers they separate.

    ``sigma`` must be given exactly when the base logic has an explosive
    premise set; it is verified before use.  The suite instantiates every
    separation claim with the concrete partition term and sigma, queries the
    real oracles, and reports pass/fail per claim.
    """
    matrices = (base,) if isinstance(base, FiniteMatrix) else tuple(base)
    base_oracle = MatrixOracle(matrices, label=base_label)
    info = base_oracle.antitheorem_info
    if sigma is None and info.status == WITNESS:
        raise LatticeError(
            "base has an explosive premise set; pass it as sigma"
        )
    if sigma is not None:
        witness = (
            sigma
            if isinstance(sigma, AntitheoremWitness)
            else AntitheoremWitness(frozenset(sigma))
        )
        if info.status == NONE_PROVEN:
            raise LatticeError("base provably has no explosive premise sets")
        if not witness.verify(base_oracle):
            raise LatticeError("sigma fails the explosive-premise-set check")
    else:
        witness = None

    term = partition_term
    x, y = var("x"), var("y")
    z = var("z")
    pi_xy = _apply_term(term, x, y)
    towers = {
        seq: derive_sequence(base_oracle, seq)
        for seq in ("l", "r", "lr", "rl", "rlr", "rlrl")
    }
    claims: list[ClaimResult] = []

    claims.append(
        _claim(
            "bundled premise flows right, not left",
            Inference((pi_xy,), x),
            [(towers["r"], True), (towers["l"], False)],
        )
    )
    claims.append(
        _claim(
            "bare variable flows left, not right",
            Inference((x,), pi_xy),
            [(towers["l"], True), (towers["r"], False)],
        )
    )

    one_var = FragmentSpec(variables=("x",), max_depth=2, max_premises=1)
    theorem = has_theorem_in_fragment(base_oracle, one_var)
    if theorem is not None:
        claims.append(
            _claim(
                "theorems force the depth-2 towers apart",
                Inference((pi_xy,), theorem),
                [(towers["lr"], True), (towers["rl"], False)],
            )
        )

    if witness is not None:
        sigma_sorted = tuple(sorted(witness.formulas, key=str))
        forward = Inference(sigma_sorted, pi_xy)
        claims.append(
            _claim(
                "explosive set flows right-then-left only",
                forward,
                [(towers["rl"], True), (towers["lr"], False)],
            )
        )
        backward_premises = (y,) + tuple(
            _apply_term(term, member, z) for member in sigma_sorted
        )
        backward = Inference(backward_premises, _apply_term(term, y, z))
        claims.append(
            _claim(
                "bundled explosive instances flow left-then-right only",
                backward,
                [(towers["lr"], True), (towers["rl"], False)],
            )
        )
        meet = intersect(towers["l"], towers["r"])
        claims.append(
            _claim(
                "meet of the one-step towers exceeds left-then-right",
                forward,
                [(meet, True), (towers["lr"], False)],
            )
        )
        claims.append(
            _claim(
                "meet of the one-step towers exceeds right-then-left",
                backward,
                [(meet, True), (towers["rl"], False)],
            )
        )
        deep_premises = (_apply_term(term, y, z),) + sigma_sorted
        deep = Inference(deep_premises, _apply_term(term, y, x))
        claims.append(
            _claim(
                "three-step tower strictly exceeds the four-step tower",
                deep,
                [(towers["rlr"], True), (towers["rlrl"], False)],
            )
        )

    return SuiteReport(base_label=base_label, claims=tuple(claims))


# ---------------------------------------------------------------------------
# Bundled reproduction reports
# ---------------------------------------------------------------------------


@dataclass
class ReproductionReport:
    figure: int
    claims: tuple[ClaimResult, ...]
    lattice: LatticeReport
    suite: SuiteReport | None = None

    @property
    def ok(self) -> bool:
        suite_ok = self.suite.ok if self.suite is not None else True
        return suite_ok and all(c.passed for c in self.claims)

    def render(self) -> str:
        lines = [f"reproduction report, figure {self.figure}"]
        lines.append(self.lattice.render())
        if self.suite is not None:
            lines.append(self.suite.render())
        lines.append("claims:")
        lines.extend(c.render() for c in self.claims)
        lines.append(f"overall: {'CONFIRMED' if self.ok else 'FAILED'}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "figure": self.figure,
            "lattice": self.lattice.to_json(),
            "suite": self.suite.to_json() if self.suite is not None else None,
            "claims": [
                {"label": c.label, "passed": c.passed, "detail": c.detail}
                for c in self.claims
            ],
            "ok": self.ok,
        }


def _verdict_claim(
    report: LatticeReport, id_a: str, id_b: str, expected: str, label: str
) -> ClaimResult:
    verdict = report.verdict(id_a, id_b)
    return ClaimResult(
        label=label,
        passed=verdict.relation == expected,
        detail=f"{id_a} vs {id_b}: {verdict.relation_display}",
    )


def reproduce_figure(
    figure: int,
    fragment: FragmentSpec = DEFAULT_FRAGMENT,
) -> ReproductionReport:
    """Run one of the three bundled lattice reports.

    1: the two-connective base without explosive premise sets.
    2: the full three-connective base; separation claims for every tower
       pair, including the claimed strict gap between the three-step tower
       and the meet of the depth-2 towers.
    3: the full base again, with each tower cross-checked against its chain
       matrix counterpart on the whole fragment.
    """
    from .presets import b2_and_or_matrix, b2_matrix, pi_term, sigma_set

    term = pi_term()
    if figure == 1:
        base = b2_and_or_matrix()
        report = build_lattice(base, term, fragment, base_label="CL[and,or]")
        suite = witness_suite(base, term, base_label="CL[and,or]")
        claims = [
            ClaimResult(
                "base has no explosive premise sets",
                report.base_antitheorems == NONE_PROVEN,
                f"status: {report.base_antitheorems}",
            ),
            _verdict_claim(
                report, "l", "r", "incomparable",
                "one-step towers are incomparable",
            ),
            _verdict_claim(
                report, "lr", "meet(l,r)", "equal",
                "left-then-right equals the meet of the one-step towers",
            ),
            _verdict_claim(
                report, "lr", "l", "strictly-below",
                "left-then-right sits strictly below left",
            ),
            _verdict_claim(
                report, "lr", "r", "strictly-below",
                "left-then-right sits strictly below right",
            ),
            _verdict_claim(
                report, "rl", "lr", "strictly-below",
                "right-then-left sits strictly below left-then-right",
            ),
        ]
        for upper in ("base", "l", "r", "lr", "meet(l,r)"):
            verdict = report.verdict("rl", upper)
            claims.append(
                ClaimResult(
                    f"right-then-left below every tower: vs {upper}",
                    verdict.relation in ("strictly-below", "equal"),
                    verdict.relation_display,
                )
            )
        for node in report.nodes:
            if node.computed and node.antitheorem_status != NONE_PROVEN:
                claims.append(
                    ClaimResult(
                        f"node {node.node_id} free of explosive premise sets",
                        False,
                        f"status: {node.antitheorem_status}",
                    )
                )
        return ReproductionReport(1, tuple(claims), report, suite)

    if figure in (2, 3):
        base = b2_matrix()
        report = build_lattice(base, term, fragment, base_label="CL")
        suite = witness_suite(base, term, sigma=sigma_set(), base_label="CL")
        claims = [
            ClaimResult(
                "base has an explosive premise set",
                report.base_antitheorems == WITNESS,
                f"status: {report.base_antitheorems}",
            ),
            _verdict_claim(
                report, "lr", "rl", "incomparable",
                "depth-2 towers are incomparable",
            ),
            _verdict_claim(
                report, "lr", "meet(l,r)", "strictly-below",
                "left-then-right strictly below the meet of the one-step towers",
            ),
            _verdict_claim(
                report, "rl", "meet(l,r)", "strictly-below",
                "right-then-left strictly below the meet of the one-step towers",
            ),
            _verdict_claim(
                report, "rlr", "lr", "strictly-below",
                "three-step tower strictly below left-then-right",
            ),
            _verdict_claim(
                report, "rlr", "rl", "strictly-below",
                "three-step tower strictly below right-then-left",
            ),
            _verdict_claim(
                report, "rlr", "meet(lr,rl)", "strictly-below",
                "three-step tower strictly below the meet of the depth-2 towers",
            ),
            _verdict_claim(
                report, "lrl", "rlr", "strictly-below",
                "four-step tower strictly below the three-step tower",
            ),
        ]
        base_oracle = MatrixOracle((base,), label="CL")
        for left_seq, right_seq, label in (
            ("rlrl", "lrl", "four-step towers coincide"),
            ("rlrll", "lrll", "four-step towers coincide after a left step"),
            ("rlrlr", "lrlr", "four-step towers coincide after a right step"),
            ("lrlr", "lrl", "extra right step is absorbed after four steps"),
        ):
            verdict = compare(
                derive_sequence(base_oracle, left_seq),
                derive_sequence(base_oracle, right_seq),
                fragment,
            )
            claims.append(
                ClaimResult(
                    label,
                    verdict.relation == "equal",
                    f"{left_seq} vs {right_seq}: {verdict.relation_display}",
                )
            )
        if figure == 3:
            for seq in ("", "l", "r", "lr", "rl", "rlr", "lrl"):
                chain = canonical_chain_matrix(base, seq)
                chain_oracle = MatrixOracle((chain,), label=f"chain[{seq or 'base'}]")
                verdict = compare(
                    derive_sequence(base_oracle, seq), chain_oracle, fragment
                )
                claims.append(
                    ClaimResult(
                        f"tower {seq or 'base'} matches its chain matrix",
                        verdict.relation == "equal",
                        verdict.relation_display,
                    )
                )
        return ReproductionReport(figure, tuple(claims), report, suite)

    raise LatticeError(f"no bundled report numbered {figure}")
