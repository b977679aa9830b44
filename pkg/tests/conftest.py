"""Shared fixtures and strategies for the test suite."""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from vilogic.formulas import app, var
from vilogic.matrices import MatrixOracle
from vilogic.presets import (
    b2_and_or_matrix,
    b2_matrix,
    b3_matrix,
    pwk_matrix,
)


_acceptance_lines: list[str] = []


def record_acceptance(line: str) -> None:
    """Collect an acceptance verdict for the end-of-run summary."""
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.line(line)


def formula_strategy(variables=("x", "y", "z"), max_leaves=6):
    """Random formulas over the and/or/not signature."""
    leaves = st.sampled_from([var(v) for v in variables])

    def extend(children):
        return st.one_of(
            st.builds(lambda a, b: app("and", a, b), children, children),
            st.builds(lambda a, b: app("or", a, b), children, children),
            st.builds(lambda a: app("not", a), children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@pytest.fixture(scope="session")
def cl_oracle():
    return MatrixOracle((b2_matrix(),), label="CL")


@pytest.fixture(scope="session")
def and_or_oracle():
    return MatrixOracle((b2_and_or_matrix(),), label="CL[and,or]")


@pytest.fixture(scope="session")
def pwk_oracle():
    return MatrixOracle((pwk_matrix(),), label="PWK")


@pytest.fixture(scope="session")
def b3_oracle():
    return MatrixOracle((b3_matrix(),), label="B3")
