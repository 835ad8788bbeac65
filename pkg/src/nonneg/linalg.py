"""Scalar backends and dense subspace primitives.

Two backends share one vocabulary:

* ``Backend.APPROX`` -- binary64 floats.  Every comparison takes an explicit
  tolerance; there is no hidden global epsilon.
* ``Backend.EXACT`` -- arbitrary-precision rationals (``fractions.Fraction``),
  closed under +, -, *, / with no rounding.  Square roots are unavailable, so
  exact bases are orthogonal but not unit-normalized.

Vectors and matrices are numpy arrays: ``float64`` for APPROX, ``dtype=object``
holding ``Fraction`` for EXACT.  All returned arrays are frozen (read-only) so
values can be shared freely across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NumericalFailure, UsageError

DEFAULT_RANK_TOL = 1e-10
# Subspace construction invariants.
ORTHONORMALITY_TOL = 1e-12
COMPLEMENT_ORTHOGONALITY_TOL = 1e-10


class Backend(enum.Enum):
    APPROX = "approx"
    EXACT = "exact"


def backend_of(array: np.ndarray) -> Backend:
    return Backend.EXACT if array.dtype == object else Backend.APPROX


def _freeze(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value)
    raise UsageError(
        f"exact backend accepts int, Fraction, or string entries, got {type(value).__name__}: "
        f"{value!r} (floats are ambiguous; pass a string or Fraction instead)"
    )


def exact_array(data) -> np.ndarray:
    """Build an object array of Fractions from nested ints/strings/Fractions."""
    arr = np.array(data, dtype=object)
    flat = arr.reshape(-1)
    for i, entry in enumerate(flat):
        flat[i] = _to_fraction(entry)
    return arr


def approx_array(data) -> np.ndarray:
    arr = np.array(data, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise UsageError("approximate-backend entries must be finite (no NaN/Inf)")
    return arr


def as_backend_array(data, mode: Backend) -> np.ndarray:
    return exact_array(data) if mode is Backend.EXACT else approx_array(data)


def zeros(shape, mode: Backend) -> np.ndarray:
    if mode is Backend.EXACT:
        arr = np.empty(shape, dtype=object)
        arr.reshape(-1)[:] = [Fraction(0)] * arr.size
        return arr
    return np.zeros(shape, dtype=float)


def ones_vector(n: int, mode: Backend) -> np.ndarray:
    if mode is Backend.EXACT:
        arr = np.empty(n, dtype=object)
        arr[:] = [Fraction(1)] * n
        return arr
    return np.ones(n, dtype=float)


def identity(n: int, mode: Backend) -> np.ndarray:
    out = zeros((n, n), mode)
    one = Fraction(1) if mode is Backend.EXACT else 1.0
    for i in range(n):
        out[i, i] = one
    return out


def max_abs(array: np.ndarray):
    """Largest absolute entry; 0 for empty arrays."""
    if array.size == 0:
        return Fraction(0) if backend_of(array) is Backend.EXACT else 0.0
    return np.abs(array).max()


def _primitive(u: np.ndarray) -> np.ndarray:
    """Rescale an exact vector to a primitive integer direction.

    Clears denominators, divides by the gcd, and flips sign so the first
    nonzero entry is positive.  Keeps Gram-Schmidt outputs small and makes
    exact bases canonical.
    """
    fracs = [Fraction(f) for f in u]
    denom_lcm = math.lcm(*(f.denominator for f in fracs)) if fracs else 1
    ints = [int(f * denom_lcm) for f in fracs]
    g = math.gcd(*ints) if ints else 0
    if g == 0:
        return np.array([Fraction(0)] * len(fracs), dtype=object)
    ints = [i // g for i in ints]
    lead = next(i for i in ints if i != 0)
    if lead < 0:
        ints = [-i for i in ints]
    return np.array([Fraction(i) for i in ints], dtype=object)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of R^n given by basis columns.

    APPROX basis columns are orthonormal (B^T B = I within 1e-12 per entry);
    EXACT basis columns are orthogonal with positive squared norms, not
    unit-normalized.  ``dim == 0`` encodes the zero subspace.
    """

    ambient_dim: int
    basis: np.ndarray  # (ambient_dim, dim), columns are basis vectors
    mode: Backend

    def __post_init__(self):
        n, basis = self.ambient_dim, self.basis
        if n < 1:
            raise UsageError(f"ambient dimension must be >= 1, got {n}")
        if basis.ndim != 2 or basis.shape[0] != n:
            raise UsageError(f"basis must be {n} x k, got shape {basis.shape}")
        if basis.shape[1] > n:
            raise UsageError(f"basis has {basis.shape[1]} columns in ambient dimension {n}")
        if backend_of(basis) is not self.mode:
            raise UsageError(f"basis dtype does not match backend {self.mode.value}")
        self._validate_orthogonality()
        _freeze(basis)

    def _validate_orthogonality(self):
        if self.dim == 0:
            return
        gram = self.basis.T @ self.basis
        k = self.dim
        if self.mode is Backend.APPROX:
            if not np.all(np.isfinite(self.basis)):
                raise UsageError("basis entries must be finite")
            err = np.abs(gram - np.eye(k)).max()
            if err > ORTHONORMALITY_TOL:
                raise UsageError(
                    f"basis columns are not orthonormal: max |B^T B - I| = {err:.3e} "
                    f"> {ORTHONORMALITY_TOL:.0e}"
                )
        else:
            for i in range(k):
                if gram[i, i] <= 0:
                    raise UsageError("exact basis contains a zero column")
                for j in range(i + 1, k):
                    if gram[i, j] != 0:
                        raise UsageError(
                            f"exact basis columns {i} and {j} are not orthogonal "
                            f"(inner product {gram[i, j]})"
                        )

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def basis_columns(self):
        return [self.basis[:, j] for j in range(self.dim)]

    @classmethod
    def zero(cls, ambient_dim: int, mode: Backend = Backend.APPROX) -> "Subspace":
        empty = zeros((ambient_dim, 0), mode)
        return cls(ambient_dim, empty, mode)

    @classmethod
    def full(cls, ambient_dim: int, mode: Backend = Backend.APPROX) -> "Subspace":
        return cls(ambient_dim, identity(ambient_dim, mode), mode)


def _gram_schmidt_columns(columns, kept, mode: Backend, keep_threshold):
    """Orthogonalize ``columns`` against ``kept`` (extended in place).

    APPROX runs modified Gram-Schmidt with one reorthogonalization pass and
    unit-normalizes survivors; EXACT subtracts exact projections and rescales
    survivors to primitive integer vectors.  A column survives when its
    residual norm exceeds ``keep_threshold`` (EXACT: residual nonzero).
    """
    for col in columns:
        u = col.copy()
        if mode is Backend.APPROX:
            for _ in range(2):  # second pass restores orthogonality lost to cancellation
                for q in kept:
                    u = u - (q @ u) * q
            norm = float(np.sqrt(u @ u))
            if norm > keep_threshold:
                kept.append(u / norm)
        else:
            for q in kept:
                qq = q @ q
                coeff = (q @ u) / qq
                if coeff != 0:
                    u = u - coeff * q
            if any(entry != 0 for entry in u):
                kept.append(_primitive(u))
    return kept


def orthonormalize(vectors, rank_tol: float = DEFAULT_RANK_TOL, mode: Backend | None = None) -> Subspace:
    """Span of the input columns as a validated Subspace.

    Rank is decided by rejecting columns whose residual after projection onto
    the previously kept columns has norm <= rank_tol * (largest input column
    norm).  The exact backend keeps every column with a nonzero residual.
    """
    arr = np.asarray(vectors) if mode is None else as_backend_array(vectors, mode)
    if arr.ndim != 2:
        raise UsageError(f"expected a 2-d array of column vectors, got ndim={arr.ndim}")
    mode = backend_of(arr)
    arr = exact_array(arr) if mode is Backend.EXACT else approx_array(arr)
    n, m = arr.shape
    if n < 1:
        raise UsageError("ambient dimension must be >= 1")
    columns = [arr[:, j] for j in range(m)]
    if mode is Backend.APPROX:
        largest = max((float(np.sqrt(c @ c)) for c in columns), default=0.0)
        threshold = rank_tol * largest
    else:
        threshold = None  # exact rank needs no tolerance
    kept = _gram_schmidt_columns(columns, [], mode, threshold)
    basis = np.stack(kept, axis=1) if kept else zeros((n, 0), mode)
    return Subspace(n, basis, mode)


def orthogonal_complement(V: Subspace) -> Subspace:
    """Orthogonal complement of V, with dim = n - dim(V).

    Extends V's basis to a basis of R^n by Gram-Schmidt over the standard
    basis vectors (deterministic order); the added columns are the complement.
    """
    n, k, mode = V.ambient_dim, V.dim, V.mode
    kept = list(V.basis_columns())
    eye = identity(n, mode)
    threshold = DEFAULT_RANK_TOL if mode is Backend.APPROX else None
    kept = _gram_schmidt_columns([eye[:, j] for j in range(n)], kept, mode, threshold)
    if len(kept) != n:
        raise NumericalFailure(
            f"complement construction kept {len(kept)} directions instead of {n}"
        )
    comp = kept[k:]
    basis = np.stack(comp, axis=1) if comp else zeros((n, 0), mode)
    out = Subspace(n, basis, mode)
    residual = max_orthogonality_residual(V, out)
    if residual > COMPLEMENT_ORTHOGONALITY_TOL:
        raise NumericalFailure(
            f"complement basis is not orthogonal to V: residual {residual:.3e}"
        )
    return out


def max_orthogonality_residual(V: Subspace, W: Subspace):
    """max |<v_i, w_j>| over basis columns (exact mode: any nonzero is a failure)."""
    if V.dim == 0 or W.dim == 0:
        return Fraction(0) if V.mode is Backend.EXACT else 0.0
    cross = V.basis.T @ W.basis
    return max_abs(cross)


def project(V: Subspace, x) -> np.ndarray:
    """Orthogonal projection of x onto V.  Idempotent."""
    vec = _as_vector(V, x)
    if V.dim == 0:
        return zeros(V.ambient_dim, V.mode)
    if V.mode is Backend.APPROX:
        return V.basis @ (V.basis.T @ vec)
    out = zeros(V.ambient_dim, V.mode)
    for b in V.basis_columns():
        out = out + ((b @ vec) / (b @ b)) * b
    return out


def projector_matrix(V: Subspace) -> np.ndarray:
    """The n x n orthogonal-projection matrix onto V."""
    n, mode = V.ambient_dim, V.mode
    if V.dim == 0:
        return zeros((n, n), mode)
    if mode is Backend.APPROX:
        return V.basis @ V.basis.T
    P = zeros((n, n), mode)
    for b in V.basis_columns():
        P = P + np.outer(b, b) / (b @ b)
    return P


def _as_vector(V: Subspace, x) -> np.ndarray:
    vec = as_backend_array(x, V.mode)
    if vec.shape != (V.ambient_dim,):
        raise UsageError(
            f"vector has shape {vec.shape}, expected ({V.ambient_dim},)"
        )
    return vec
