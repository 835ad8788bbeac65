"""Symmetric eigendecomposition by cyclic Jacobi rotations.

Approximate backend only: eigenvalues of rational matrices are algebraic, not
rational, so there is no exact counterpart.  Computed eigenvalues are grouped
into numerically distinct clusters by a relative gap threshold, each cluster
carrying its eigenspace as a validated Subspace.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalFailure, UsageError
from .linalg import Subspace, approx_array, orthonormalize

DEFAULT_SWEEP_TOL = 1e-14
DEFAULT_CLUSTER_TOL = 1e-8
MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SymmetricMatrix:
    """Dense real symmetric matrix, stored canonically as (M + M^T) / 2."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)

    @classmethod
    def from_rows(cls, rows) -> "SymmetricMatrix":
        M = approx_array(rows)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise UsageError(f"expected a square matrix, got shape {M.shape}")
        n = M.shape[0]
        scale = float(np.abs(M).max()) if M.size else 0.0
        skew = float(np.abs(M - M.T).max())
        if skew > SYMMETRY_TOL * scale:
            i, j = np.unravel_index(np.argmax(np.abs(M - M.T)), M.shape)
            raise UsageError(
                f"matrix is not symmetric: |M[{i},{j}] - M[{j},{i}]| = {skew:.3e} "
                f"exceeds {SYMMETRY_TOL:.0e} * max|entry|"
            )
        return cls(n, (M + M.T) / 2.0)


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    eigenvalues: np.ndarray  # ascending
    rotation: np.ndarray  # orthogonal; column j is the eigenvector for eigenvalues[j]

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.rotation.setflags(write=False)


@dataclass(frozen=True, eq=False)
class EigenspaceCluster:
    representative_value: float  # mean eigenvalue of the cluster
    multiplicity: int
    space: Subspace


def _offdiag_norm(A: np.ndarray) -> float:
    off = A - np.diag(np.diag(A))
    return float(np.sqrt(np.sum(off * off)))


def jacobi_eigendecomposition(
    M: SymmetricMatrix,
    sweep_tol: float = DEFAULT_SWEEP_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> EigenDecomposition:
    """Cyclic-by-row Jacobi sweeps until the off-diagonal Frobenius norm
    drops to sweep_tol * ||M||_F.  Eigenvalues are returned ascending with
    eigenvector columns permuted to match.

    Raises NumericalFailure if the cap of ``max_sweeps`` sweeps is exhausted;
    unreachable for valid symmetric input.
    """
    n = M.n
    A = M.entries.copy()
    Q = np.eye(n)
    threshold = sweep_tol * float(np.sqrt(np.sum(M.entries * M.entries)))

    for _ in range(max_sweeps):
        if _offdiag_norm(A) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                # Plane rotation annihilating A[p, q], smaller-angle branch.
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                qp, qq = Q[:, p].copy(), Q[:, q].copy()
                Q[:, p] = c * qp - s * qq
                Q[:, q] = s * qp + c * qq
    else:
        if _offdiag_norm(A) > threshold:
            raise NumericalFailure(
                f"Jacobi iteration did not converge within {max_sweeps} sweeps "
                f"(off-diagonal norm {_offdiag_norm(A):.3e}, threshold {threshold:.3e})"
            )

    values = np.diag(A).copy()
    order = np.argsort(values, kind="stable")
    return EigenDecomposition(eigenvalues=values[order], rotation=Q[:, order])


def cluster_eigenvalues(values, cluster_tol: float = DEFAULT_CLUSTER_TOL) -> list[tuple[int, int]]:
    """Greedy gap clustering of an ascending eigenvalue list.

    A new cluster starts whenever the gap to the previous value exceeds
    cluster_tol * max(1, max|value|).  Returns half-open index ranges.
    """
    vals = approx_array(values)
    if vals.ndim != 1:
        raise UsageError("expected a 1-d list of eigenvalues")
    if len(vals) == 0:
        return []
    if np.any(np.diff(vals) < 0):
        raise UsageError("eigenvalues must be ascending")
    gap_limit = cluster_tol * max(1.0, float(np.abs(vals).max()))
    ranges = []
    start = 0
    for i in range(1, len(vals)):
        if vals[i] - vals[i - 1] > gap_limit:
            ranges.append((start, i))
            start = i
    ranges.append((start, len(vals)))
    return ranges


def eigenspaces(
    M: SymmetricMatrix,
    cluster_tol: float = DEFAULT_CLUSTER_TOL,
    sweep_tol: float = DEFAULT_SWEEP_TOL,
) -> list[EigenspaceCluster]:
    """Distinct (clustered) eigenvalues with re-orthonormalized eigenspaces."""
    decomposition = jacobi_eigendecomposition(M, sweep_tol=sweep_tol)
    clusters = []
    for start, stop in cluster_eigenvalues(decomposition.eigenvalues, cluster_tol):
        space = orthonormalize(decomposition.rotation[:, start:stop])
        if space.dim != stop - start:
            raise NumericalFailure(
                f"eigenvector columns for cluster [{start}:{stop}] lost rank "
                f"during re-orthonormalization"
            )
        clusters.append(
            EigenspaceCluster(
                representative_value=float(np.mean(decomposition.eigenvalues[start:stop])),
                multiplicity=stop - start,
                space=space,
            )
        )
    return clusters
