"""Nonzero nonnegative vectors in subspaces of R^n.

Every subspace either contains a nonzero nonnegative vector (a witness,
scaled onto the standard simplex) or its orthogonal complement contains a
strictly positive vector (a certificate, scaled to min component 1) -- never
both, never neither.  This package decides which, re-verifies the returned
vector independently of the solver, and applies the machinery to symmetric
matrices: those with at most two distinct eigenvalues always have a
nonnegative eigenvector, while for every dimension n >= 3 it can construct
symmetric matrices with three or more eigenvalues that have none.
"""

from .alternative import (
    AlternativeVerdict,
    CertificateVector,
    PairClassification,
    PairKind,
    WitnessVector,
    classify_pair,
    decide_alternative,
    find_nonneg_witness,
    find_positive_certificate,
    verify_certificate,
    verify_witness,
)
from .analyzer import (
    AnalysisReport,
    EigenspaceVerdict,
    NoNonnegCheck,
    analyze,
    build_counterexample,
    counterexample_vectors,
    random_two_eigenvalue_matrix,
    verify_no_nonneg_eigenvector,
)
from .eigen import (
    EigenDecomposition,
    EigenspaceCluster,
    SymmetricMatrix,
    cluster_eigenvalues,
    eigenspaces,
    jacobi_eigendecomposition,
)
from .errors import NumericalFailure, ParseError, PropositionViolation, UsageError
from .feasibility import (
    FeasibilityOutcome,
    FeasibilityProblem,
    brute_force_feasibility,
    solve_feasibility,
)
from .linalg import (
    Backend,
    Subspace,
    exact_array,
    orthogonal_complement,
    orthonormalize,
    project,
)

__all__ = [
    "AlternativeVerdict",
    "AnalysisReport",
    "Backend",
    "CertificateVector",
    "EigenDecomposition",
    "EigenspaceCluster",
    "EigenspaceVerdict",
    "FeasibilityOutcome",
    "FeasibilityProblem",
    "NoNonnegCheck",
    "NumericalFailure",
    "PairClassification",
    "PairKind",
    "ParseError",
    "PropositionViolation",
    "Subspace",
    "SymmetricMatrix",
    "UsageError",
    "WitnessVector",
    "analyze",
    "brute_force_feasibility",
    "build_counterexample",
    "classify_pair",
    "cluster_eigenvalues",
    "counterexample_vectors",
    "decide_alternative",
    "eigenspaces",
    "exact_array",
    "find_nonneg_witness",
    "find_positive_certificate",
    "jacobi_eigendecomposition",
    "orthogonal_complement",
    "orthonormalize",
    "project",
    "random_two_eigenvalue_matrix",
    "solve_feasibility",
    "verify_certificate",
    "verify_no_nonneg_eigenvector",
    "verify_witness",
]
