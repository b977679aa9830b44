"""Workbench for finite-matrix consequence relations.

The package builds logics from finite matrices, applies variable-inclusion
transforms (left: a premise subset inside the conclusion's variables must
already entail it; right: the conclusion's variables must be covered by the
premises, with explosive premise sets passing unconditionally), sums and
splits matrices along direct systems of algebras, and compares the derived
relations exhaustively over finite formula fragments.
"""

from .formulas import (
    ArityError,
    Formula,
    FormulaError,
    FragmentSpec,
    ParseError,
    Signature,
    app,
    enumerate_fragment,
    fragment_subsets,
    fresh_variable,
    parse_formula,
    substitute,
    var,
    vars_of_set,
)
from .lattice import (
    DEFAULT_FRAGMENT,
    ComparisonVerdict,
    Inference,
    LatticeError,
    LatticeReport,
    build_lattice,
    compare,
    reproduce_figure,
    witness_suite,
)
from .matrices import (
    AntitheoremInfo,
    FiniteAlgebra,
    FiniteMatrix,
    LogicOracle,
    MatrixError,
    MatrixFormatError,
    MatrixOracle,
    NONE_PROVEN,
    UNKNOWN,
    WITNESS,
    all_valuations,
    entails,
    evaluate,
    find_countermodel,
    format_matrix,
    load_matrix_file,
    parse_matrix_text,
)
from .plonka import (
    DirectSystem,
    FiniteSemilattice,
    InvalidSystemError,
    PartitionReport,
    SemilatticeError,
    SystemReport,
    canonical_chain_matrix,
    check_partition_function,
    check_regular_identity,
    decompose,
    dump_system_files,
    load_system_file,
    plonka_sum,
    validate_system,
)
from .transforms import (
    AntitheoremWitness,
    DerivedLogicSpec,
    LeftVIOracle,
    MeetOracle,
    RightVIOracle,
    canonicalize_sequence,
    derive,
    derive_sequence,
    find_antitheorem,
    intersect,
    is_antitheorem,
    left_transform,
    right_transform,
)

__version__ = "0.1.0"

__all__ = [
    "AntitheoremInfo",
    "AntitheoremWitness",
    "ArityError",
    "ComparisonVerdict",
    "DEFAULT_FRAGMENT",
    "DerivedLogicSpec",
    "DirectSystem",
    "FiniteAlgebra",
    "FiniteMatrix",
    "FiniteSemilattice",
    "Formula",
    "FormulaError",
    "FragmentSpec",
    "Inference",
    "InvalidSystemError",
    "LatticeError",
    "LatticeReport",
    "LeftVIOracle",
    "LogicOracle",
    "MatrixError",
    "MatrixFormatError",
    "MatrixOracle",
    "MeetOracle",
    "NONE_PROVEN",
    "ParseError",
    "PartitionReport",
    "RightVIOracle",
    "SemilatticeError",
    "Signature",
    "SystemReport",
    "UNKNOWN",
    "WITNESS",
    "all_valuations",
    "app",
    "build_lattice",
    "canonical_chain_matrix",
    "canonicalize_sequence",
    "check_partition_function",
    "check_regular_identity",
    "compare",
    "decompose",
    "derive",
    "derive_sequence",
    "dump_system_files",
    "entails",
    "enumerate_fragment",
    "evaluate",
    "find_antitheorem",
    "find_countermodel",
    "format_matrix",
    "fragment_subsets",
    "fresh_variable",
    "intersect",
    "is_antitheorem",
    "left_transform",
    "load_matrix_file",
    "load_system_file",
    "parse_formula",
    "parse_matrix_text",
    "plonka_sum",
    "reproduce_figure",
    "right_transform",
    "substitute",
    "validate_system",
    "var",
    "vars_of_set",
    "witness_suite",
]
