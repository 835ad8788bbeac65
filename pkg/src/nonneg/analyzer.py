"""End-to-end analysis of symmetric matrices for nonnegative eigenvectors.

A real symmetric matrix with one or two distinct eigenvalues always has an
eigenvector with all components nonnegative (its two eigenspaces are mutual
orthogonal complements, and one of any complementary pair must meet the
nonnegative orthant beyond the origin).  With three or more distinct
eigenvalues the guarantee fails: ``build_counterexample`` constructs matrices
that have no nonnegative eigenvector at all, and
``verify_no_nonneg_eigenvector`` checks that claim by a route independent of
the LP-based search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .alternative import (
    DEFAULT_VERIFY_TOL,
    AlternativeVerdict,
    decide_alternative,
)
from .eigen import (
    DEFAULT_CLUSTER_TOL,
    EigenspaceCluster,
    SymmetricMatrix,
    eigenspaces,
)
from .errors import NumericalFailure, UsageError
from .feasibility import DEFAULT_FEAS_TOL
from .linalg import exact_array, orthonormalize

# Witnesses pass through LP post-processing, so their eigen-residual is held
# to a looser bound than the raw decomposition tolerances.
EIGEN_RESIDUAL_TOL = 1e-6
MIN_EIGENVALUE_GAP = 1e-6
SIGN_SCAN_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class EigenspaceVerdict:
    """Alternative verdict for one eigenspace.

    A witness is a candidate nonnegative eigenvector (eigen-residual checked
    against the cluster's representative eigenvalue); a certificate is a
    positive vector orthogonal to the whole eigenspace.
    """

    cluster: EigenspaceCluster
    verdict: AlternativeVerdict
    eigen_residual: float | None  # max |M x - lambda x| for witnesses, else None


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    matrix_dim: int
    distinct_eigenvalue_count: int
    per_eigenspace: tuple[EigenspaceVerdict, ...]
    has_nonneg_eigenvector: bool
    theorem_applicable: bool  # true iff distinct count <= 2
    theorem_satisfied: bool


def analyze(
    M: SymmetricMatrix,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    feas_tol: float = DEFAULT_FEAS_TOL,
    verify_tol: float = DEFAULT_VERIFY_TOL,
) -> AnalysisReport:
    """Per-eigenspace nonnegative-eigenvector verdicts for a symmetric matrix.

    With at most two distinct eigenvalues at least one eigenspace must yield a
    witness; a miss in that regime is reported as NumericalFailure with a full
    diagnostic dump, never as a mathematical finding.
    """
    clusters = eigenspaces(M, cluster_tol=cluster_tol)
    verdicts = []
    for cluster in clusters:
        verdict = decide_alternative(cluster.space, feas_tol=feas_tol, verify_tol=verify_tol)
        residual = None
        if verdict.has_nonneg:
            x = np.asarray(verdict.witness.x, dtype=float)
            lam = cluster.representative_value
            residual = float(np.abs(M.entries @ x - lam * x).max())
            if residual > EIGEN_RESIDUAL_TOL * max(1.0, abs(lam)):
                raise NumericalFailure(
                    f"witness for eigenvalue {lam} has eigen-residual {residual:.3e}, "
                    f"beyond {EIGEN_RESIDUAL_TOL:.0e} * max(1, |lambda|)"
                )
        verdicts.append(EigenspaceVerdict(cluster=cluster, verdict=verdict, eigen_residual=residual))

    has_nonneg = any(v.verdict.has_nonneg for v in verdicts)
    applicable = len(clusters) <= 2
    if applicable and not has_nonneg:
        dump = "; ".join(
            f"lambda={v.cluster.representative_value} mult={v.cluster.multiplicity} "
            f"verdict={'HAS_NONNEG' if v.verdict.has_nonneg else 'NO_NONNEG'}"
            for v in verdicts
        )
        raise NumericalFailure(
            f"matrix with {len(clusters)} distinct eigenvalue(s) produced no nonnegative "
            f"eigenvector, which is impossible; eigenspace dump: {dump}"
        )
    return AnalysisReport(
        matrix_dim=M.n,
        distinct_eigenvalue_count=len(clusters),
        per_eigenspace=tuple(verdicts),
        has_nonneg_eigenvector=has_nonneg,
        theorem_applicable=applicable,
        theorem_satisfied=(not applicable) or has_nonneg,
    )


def counterexample_vectors(n: int) -> tuple[np.ndarray, np.ndarray]:
    """The exact orthogonal pair (v, w) seeding the counterexample family.

    v = (-1/2, 1, 1, ..., 1) and w = (1, -1/2, 1, 0, ..., 0) in R^n: neither
    is nonnegative, they are orthogonal, and v + w is strictly positive.
    Requires n >= 3 (the third coordinate carries the +1 that cancels the
    negative inner-product contributions).
    """
    if n < 3:
        raise UsageError(
            f"the counterexample construction requires ambient dimension n >= 3, got n={n}"
        )
    v = exact_array([Fraction(-1, 2)] + [Fraction(1)] * (n - 1))
    w = exact_array([Fraction(1), Fraction(-1, 2), Fraction(1)] + [Fraction(0)] * (n - 3))
    assert v @ w == 0
    assert all(entry > 0 for entry in v + w)
    return v, w


def _resolve_spectrum(n: int, eigenvalues) -> tuple[float, float, list[float]]:
    lams = [float(lam) for lam in eigenvalues]
    if not all(np.isfinite(lams)):
        raise UsageError("eigenvalues must be finite")
    if len(lams) == 3:
        lam_v, lam_w, rest = lams[0], lams[1], [lams[2]] * (n - 2)
    elif len(lams) == n:
        lam_v, lam_w, rest = lams[0], lams[1], lams[2:]
    else:
        raise UsageError(
            f"expected 3 eigenvalues (last one reused for every remaining direction) "
            f"or exactly n={n}, got {len(lams)}"
        )
    if abs(lam_v - lam_w) < MIN_EIGENVALUE_GAP:
        raise UsageError(
            f"the first two eigenvalues must differ by at least {MIN_EIGENVALUE_GAP:.0e}"
        )
    for r in rest:
        if abs(lam_v - r) < MIN_EIGENVALUE_GAP or abs(lam_w - r) < MIN_EIGENVALUE_GAP:
            raise UsageError(
                f"remaining eigenvalues must differ from the first two by at least "
                f"{MIN_EIGENVALUE_GAP:.0e} (they may repeat among themselves)"
            )
    return lam_v, lam_w, rest


def build_counterexample(n: int, eigenvalues) -> SymmetricMatrix:
    """Symmetric n x n matrix (n >= 3) with no nonnegative eigenvector.

    The first two eigenvalues are attached to the directions of
    ``counterexample_vectors``; the rest go to a deterministic completion of
    that pair to an orthogonal basis (Gram-Schmidt over standard basis
    vectors).  Neither seed direction is nonnegative, and every other
    eigenvector is orthogonal to the strictly positive v + w, so no eigenspace
    can meet the nonnegative orthant beyond the origin.
    """
    v, w = counterexample_vectors(n)
    lam_v, lam_w, rest = _resolve_spectrum(n, eigenvalues)
    seed = np.stack([v, w] + [exact_array([Fraction(int(i == j)) for i in range(n)]) for j in range(n)], axis=1)
    # Exact completion keeps the construction deterministic to the bit.
    full = orthonormalize(seed)
    if full.dim != n:
        raise NumericalFailure("counterexample basis completion lost rank")
    U = np.asarray(full.basis, dtype=float)
    U = U / np.sqrt((U * U).sum(axis=0))
    spectrum = np.array([lam_v, lam_w] + rest, dtype=float)
    M = U @ np.diag(spectrum) @ U.T
    return SymmetricMatrix.from_rows((M + M.T) / 2.0)


@dataclass(frozen=True, eq=False)
class EigenspaceScan:
    representative_value: float
    multiplicity: int
    method: str  # "sign-scan" for lines, "alternative" for higher dimensions
    contains_nonneg: bool


@dataclass(frozen=True, eq=False)
class NoNonnegCheck:
    """Outcome of the independent no-nonnegative-eigenvector check."""

    verified: bool  # true iff no eigenspace contains a nonzero nonnegative vector
    scans: tuple[EigenspaceScan, ...]

    def __bool__(self) -> bool:
        return self.verified


def verify_no_nonneg_eigenvector(
    M: SymmetricMatrix,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    feas_tol: float = DEFAULT_FEAS_TOL,
    sign_tol: float = SIGN_SCAN_TOL,
) -> NoNonnegCheck:
    """Check that no eigenspace of M contains a nonzero nonnegative vector.

    Bypasses the LP search wherever possible: a one-dimensional eigenspace
    span{u} contains a nonzero nonnegative vector iff u or -u is nonnegative,
    which a componentwise sign scan decides.  Higher-dimensional eigenspaces
    fall back to the full alternative decision.
    """
    scans = []
    for cluster in eigenspaces(M, cluster_tol=cluster_tol):
        if cluster.multiplicity == 1:
            u = cluster.space.basis[:, 0]
            contains = bool(u.min() >= -sign_tol or u.max() <= sign_tol)
            method = "sign-scan"
        else:
            contains = decide_alternative(cluster.space, feas_tol=feas_tol).has_nonneg
            method = "alternative"
        scans.append(
            EigenspaceScan(
                representative_value=cluster.representative_value,
                multiplicity=cluster.multiplicity,
                method=method,
                contains_nonneg=contains,
            )
        )
    return NoNonnegCheck(verified=not any(s.contains_nonneg for s in scans), scans=tuple(scans))


def random_two_eigenvalue_matrix(
    n: int, lam1: float, lam2: float, k: int, seed: int
) -> SymmetricMatrix:
    """Random symmetric matrix with spectrum {lam1 (multiplicity k), lam2}.

    The eigenbasis is the orthonormalization of a seeded Gaussian matrix, so
    identical seeds give identical matrices.
    """
    if not 1 <= k <= n - 1:
        raise UsageError(f"multiplicity must satisfy 1 <= k <= n-1, got k={k} for n={n}")
    if abs(float(lam1) - float(lam2)) < MIN_EIGENVALUE_GAP:
        raise UsageError(f"eigenvalues must differ by at least {MIN_EIGENVALUE_GAP:.0e}")
    rng = np.random.default_rng(seed)
    basis = orthonormalize(rng.standard_normal((n, n)))
    if basis.dim != n:
        raise NumericalFailure("random Gaussian matrix was numerically singular")
    Q = basis.basis
    spectrum = np.array([float(lam1)] * k + [float(lam2)] * (n - k))
    M = Q @ np.diag(spectrum) @ Q.T
    return SymmetricMatrix.from_rows((M + M.T) / 2.0)
