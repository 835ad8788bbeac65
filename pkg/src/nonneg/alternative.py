"""Witnesses and certificates for nonnegative vectors in a subspace.

For any subspace V of R^n, exactly one of the following holds:

* V contains a nonzero nonnegative vector.  We return it scaled onto the
  standard simplex (components sum to 1) as a ``WitnessVector``.
* The orthogonal complement of V contains a strictly positive vector.  We
  return it scaled so its smallest component is 1 as a ``CertificateVector``.
  Such a vector proves the first case impossible: a nonzero nonnegative x in V
  would have <x, v> >= min(v) * sum(x) > 0, yet orthogonality forces 0.

Both searches reduce to standard-form LP feasibility.  ``verify_witness`` and
``verify_certificate`` re-check any claimed vector without trusting solver
internals.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NumericalFailure, PropositionViolation, UsageError
from .feasibility import DEFAULT_FEAS_TOL, FeasibilityProblem, solve_feasibility
from .linalg import (
    Backend,
    Subspace,
    as_backend_array,
    identity,
    max_abs,
    ones_vector,
    orthogonal_complement,
    orthonormalize,
    project,
    projector_matrix,
    zeros,
)

DEFAULT_VERIFY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WitnessVector:
    """Nonzero nonnegative element of a subspace, scaled to component sum 1."""

    x: np.ndarray
    subspace_residual: object  # max |x - P_V x|
    min_component: object

    def __post_init__(self):
        self.x.setflags(write=False)


@dataclass(frozen=True, eq=False)
class CertificateVector:
    """Strictly positive vector orthogonal to a subspace, min component 1."""

    v: np.ndarray
    orthogonality_residual: object  # max |<v, basis column>|

    def __post_init__(self):
        self.v.setflags(write=False)


@dataclass(frozen=True, eq=False)
class AlternativeVerdict:
    """Outcome of the decision: a witness in V, or a certificate in V-perp."""

    witness: WitnessVector | None = None
    certificate: CertificateVector | None = None

    def __post_init__(self):
        if (self.witness is None) == (self.certificate is None):
            raise UsageError("exactly one of witness/certificate must be populated")

    @property
    def has_nonneg(self) -> bool:
        return self.witness is not None


class PairKind(enum.Enum):
    BOTH_SIDES = "BOTH_SIDES"
    ONLY_V = "ONLY_V"
    ONLY_COMPLEMENT = "ONLY_COMPLEMENT"


@dataclass(frozen=True, eq=False)
class PairClassification:
    """Joint verdict for V and its orthogonal complement.

    The fourth combination (neither side contains a nonzero nonnegative
    vector) has no constructor: it cannot occur mathematically.
    """

    kind: PairKind
    witness_v: WitnessVector | None = None
    witness_complement: WitnessVector | None = None
    certificate_in_v: CertificateVector | None = None
    certificate_in_complement: CertificateVector | None = None

    @classmethod
    def both_sides(cls, witness_v, witness_complement) -> "PairClassification":
        return cls(PairKind.BOTH_SIDES, witness_v=witness_v, witness_complement=witness_complement)

    @classmethod
    def only_v(cls, witness_v, certificate_in_v) -> "PairClassification":
        # The certificate lives in V and proves the complement has no
        # nonzero nonnegative vector.
        return cls(PairKind.ONLY_V, witness_v=witness_v, certificate_in_v=certificate_in_v)

    @classmethod
    def only_complement(cls, certificate_in_complement, witness_complement) -> "PairClassification":
        return cls(
            PairKind.ONLY_COMPLEMENT,
            certificate_in_complement=certificate_in_complement,
            witness_complement=witness_complement,
        )


def _make_witness(V: Subspace, x: np.ndarray) -> WitnessVector:
    residual = max_abs(x - project(V, x))
    return WitnessVector(x=x, subspace_residual=residual, min_component=x.min())


def _make_certificate(V: Subspace, v: np.ndarray) -> CertificateVector:
    residual = max_abs(V.basis.T @ v) if V.dim else (Fraction(0) if V.mode is Backend.EXACT else 0.0)
    return CertificateVector(v=v, orthogonality_residual=residual)


def find_nonneg_witness(
    V: Subspace,
    feas_tol: float = DEFAULT_FEAS_TOL,
    verify_tol: float = DEFAULT_VERIFY_TOL,
) -> WitnessVector | None:
    """Nonzero nonnegative vector in V, scaled onto the simplex, or None.

    Membership in V is encoded in ambient coordinates as (I - P_V) x = 0 with
    redundant projector rows rank-filtered away, plus sum(x) = 1 and x >= 0.
    """
    n, mode = V.ambient_dim, V.mode
    if V.dim == 0:
        return None
    one = Fraction(1) if mode is Backend.EXACT else 1.0
    if V.dim == n:
        x = ones_vector(n, mode) / (Fraction(n) if mode is Backend.EXACT else float(n))
    else:
        residual_projector = identity(n, mode) - projector_matrix(V)
        # Columns of I - P span V-perp; orthogonalizing them rank-filters the
        # constraint rows while keeping the same solution set.
        filtered = orthonormalize(residual_projector)
        rows = filtered.dim
        A = zeros((rows + 1, n), mode)
        A[:rows, :] = filtered.basis.T
        A[rows, :] = ones_vector(n, mode)
        b = zeros(rows + 1, mode)
        b[rows] = one
        outcome = solve_feasibility(FeasibilityProblem(A, b), feas_tol=feas_tol)
        if not outcome.feasible:
            return None
        x = outcome.x
    witness = _make_witness(V, x)
    if not verify_witness(V, x, _effective_tol(mode, verify_tol)):
        raise NumericalFailure(
            f"witness search produced a vector that fails re-verification "
            f"(subspace residual {witness.subspace_residual}, min component {witness.min_component})"
        )
    return witness


def find_positive_certificate(
    V: Subspace,
    feas_tol: float = DEFAULT_FEAS_TOL,
    verify_tol: float = DEFAULT_VERIFY_TOL,
) -> CertificateVector | None:
    """Strictly positive vector orthogonal to V (min component 1), or None.

    Strict positivity is encoded in closed form through v = y + 1 with y >= 0,
    valid because the complement is closed under positive scaling; the result
    is rescaled so its smallest component is exactly 1.
    """
    n, mode = V.ambient_dim, V.mode
    ones = ones_vector(n, mode)
    if V.dim == 0:
        certificate = _make_certificate(V, ones)
        return certificate
    if V.dim == n:
        return None
    A = V.basis.T.copy()
    b = -(V.basis.T @ ones)
    outcome = solve_feasibility(FeasibilityProblem(A, b), feas_tol=feas_tol)
    if not outcome.feasible:
        return None
    v = outcome.x + ones
    v = v / v.min()
    certificate = _make_certificate(V, v)
    if not verify_certificate(V, v, _effective_tol(mode, verify_tol)):
        raise NumericalFailure(
            f"certificate search produced a vector that fails re-verification "
            f"(orthogonality residual {certificate.orthogonality_residual})"
        )
    return certificate


def decide_alternative(
    V: Subspace,
    feas_tol: float = DEFAULT_FEAS_TOL,
    verify_tol: float = DEFAULT_VERIFY_TOL,
) -> AlternativeVerdict:
    """Witness in V if one exists, else a positive certificate in V-perp.

    A certificate is required whenever the witness search fails; if both come
    up empty the state is mathematically impossible and PropositionViolation
    (a numerical failure, never a finding) is raised.
    """
    witness = find_nonneg_witness(V, feas_tol=feas_tol, verify_tol=verify_tol)
    if witness is not None:
        return AlternativeVerdict(witness=witness)
    certificate = find_positive_certificate(V, feas_tol=feas_tol, verify_tol=verify_tol)
    if certificate is not None:
        return AlternativeVerdict(certificate=certificate)
    raise PropositionViolation(
        f"neither a nonnegative witness nor a positive certificate was found for a "
        f"{V.dim}-dimensional subspace of R^{V.ambient_dim}; exactly one must exist, "
        f"so the approximate search has broken down numerically"
    )


def classify_pair(
    V: Subspace,
    feas_tol: float = DEFAULT_FEAS_TOL,
    verify_tol: float = DEFAULT_VERIFY_TOL,
) -> PairClassification:
    """Which of V and its complement contain nonzero nonnegative vectors."""
    complement = orthogonal_complement(V)
    side_v = decide_alternative(V, feas_tol=feas_tol, verify_tol=verify_tol)
    side_c = decide_alternative(complement, feas_tol=feas_tol, verify_tol=verify_tol)
    if side_v.has_nonneg and side_c.has_nonneg:
        return PairClassification.both_sides(side_v.witness, side_c.witness)
    if side_v.has_nonneg:
        # side_c's certificate is orthogonal to the complement, i.e. lives in V.
        return PairClassification.only_v(side_v.witness, side_c.certificate)
    if side_c.has_nonneg:
        return PairClassification.only_complement(side_v.certificate, side_c.witness)
    raise PropositionViolation(
        "both V and its complement were classified as having no nonzero nonnegative "
        "vector, which is impossible; the approximate search has broken down"
    )


def verify_witness(V: Subspace, x, tol: float = DEFAULT_VERIFY_TOL) -> bool:
    """True iff x sums to 1, is nonnegative, and lies in V, all within tol."""
    vec = as_backend_array(x, V.mode)
    if vec.shape != (V.ambient_dim,):
        raise UsageError(f"witness has shape {vec.shape}, expected ({V.ambient_dim},)")
    if abs(vec.sum() - 1) > tol:
        return False
    if vec.min() < -tol:
        return False
    return max_abs(vec - project(V, vec)) <= tol


def verify_certificate(V: Subspace, v, tol: float = DEFAULT_VERIFY_TOL) -> bool:
    """True iff v is >= 1 - tol componentwise and orthogonal to V within tol.

    A passing certificate proves, up to tol, that V contains no nonzero
    nonnegative vector: the inner product with any such vector would be
    strictly positive, while membership in V-perp forces it to zero.
    """
    vec = as_backend_array(v, V.mode)
    if vec.shape != (V.ambient_dim,):
        raise UsageError(f"certificate has shape {vec.shape}, expected ({V.ambient_dim},)")
    if vec.min() < 1 - tol:
        return False
    if V.dim == 0:
        return True
    return max_abs(V.basis.T @ vec) <= tol


def _effective_tol(mode: Backend, tol: float):
    """Internal re-verification tolerance: exact backend verifies exactly."""
    return 0 if mode is Backend.EXACT else tol
