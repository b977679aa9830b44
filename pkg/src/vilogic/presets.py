"""Bundled signatures, algebras, and matrices used by tests and the CLI.

The two-element Boolean matrix and its conjunction-disjunction reduct are
generated from Python's own boolean operations.  The three-element tables
with the infectious middle value are entered by hand on purpose; the test
suite cross-checks them against the sum construction, so a typo here cannot
survive.
"""

from __future__ import annotations

import itertools
from pathlib import Path

from .formulas import Signature, app, var
from .matrices import FiniteAlgebra, FiniteMatrix, format_matrix

__all__ = [
    "AND_OR_SIGNATURE",
    "FULL_SIGNATURE",
    "b2_algebra",
    "b2_and_or_matrix",
    "b2_matrix",
    "b3_matrix",
    "data_dir",
    "pi_term",
    "pwk_matrix",
    "sigma_set",
    "wk_algebra",
    "write_data_files",
]

FULL_SIGNATURE = Signature.of(("and", 2), ("or", 2), ("not", 1))
AND_OR_SIGNATURE = Signature.of(("and", 2), ("or", 2))

_BOOL = {"0": False, "1": True}
_NAME = {False: "0", True: "1"}
_OPS = {
    "and": lambda a, b: a and b,
    "or": lambda a, b: a or b,
    "not": lambda a: not a,
}


def _boolean_algebra(signature: Signature) -> FiniteAlgebra:
    elements = ("0", "1")
    tables = {}
    for name, arity in signature.connectives:
        op = _OPS[name]
        table = {}
        for args in itertools.product(elements, repeat=arity):
            table[args] = _NAME[op(*(_BOOL[a] for a in args))]
        tables[name] = table
    return FiniteAlgebra(signature, elements, tables)


def b2_algebra() -> FiniteAlgebra:
    return _boolean_algebra(FULL_SIGNATURE)


def b2_matrix() -> FiniteMatrix:
    return FiniteMatrix(b2_algebra(), frozenset({"1"}))


def b2_and_or_matrix() -> FiniteMatrix:
    return FiniteMatrix(_boolean_algebra(AND_OR_SIGNATURE), frozenset({"1"}))


def wk_algebra() -> FiniteAlgebra:
    """Three elements 0, n, 1 where n is infectious; hand-entered tables."""
    elements = ("0", "n", "1")
    tables = {
        "and": {
            ("0", "0"): "0", ("0", "n"): "n", ("0", "1"): "0",
            ("n", "0"): "n", ("n", "n"): "n", ("n", "1"): "n",
            ("1", "0"): "0", ("1", "n"): "n", ("1", "1"): "1",
        },
        "or": {
            ("0", "0"): "0", ("0", "n"): "n", ("0", "1"): "1",
            ("n", "0"): "n", ("n", "n"): "n", ("n", "1"): "n",
            ("1", "0"): "1", ("1", "n"): "n", ("1", "1"): "1",
        },
        "not": {("0",): "1", ("n",): "n", ("1",): "0"},
    }
    return FiniteAlgebra(FULL_SIGNATURE, elements, tables)


def pwk_matrix() -> FiniteMatrix:
    """The three-element matrix designating 1 and the infectious value."""
    return FiniteMatrix(wk_algebra(), frozenset({"1", "n"}))


def b3_matrix() -> FiniteMatrix:
    """The three-element matrix designating 1 only."""
    return FiniteMatrix(wk_algebra(), frozenset({"1"}))


def pi_term():
    """The default partition term x and (x or y)."""
    x, y = var("x"), var("y")
    return app("and", x, app("or", x, y))


def sigma_set():
    """The default explosive premise set {x, not x} for the full signature."""
    x = var("x")
    return frozenset({x, app("not", x)})


def data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"


def write_data_files(target: Path | str | None = None) -> list[Path]:
    """Write the bundled matrices as files; returns the written paths."""
    base = Path(target) if target is not None else data_dir()
    base.mkdir(parents=True, exist_ok=True)
    written = []
    for name, matrix in (
        ("b2", b2_matrix()),
        ("b2_and_or", b2_and_or_matrix()),
        ("wk_pwk", pwk_matrix()),
        ("wk_b3", b3_matrix()),
    ):
        path = base / f"{name}.mat"
        path.write_text(format_matrix(matrix), encoding="utf-8")
        written.append(path)
    return written


if __name__ == "__main__":
    for p in write_data_files():
        print(p)
