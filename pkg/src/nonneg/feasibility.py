"""Standard-form linear feasibility: find x with A x = b, x >= 0.

Two deliberately different deciders:

* ``solve_feasibility`` -- phase-1 simplex with artificial variables and
  Bland's anti-cycling rule (lowest-index entering and leaving variable).
* ``brute_force_feasibility`` -- enumeration of basic solutions over small
  coordinate subsets; exists purely to cross-check the simplex and is kept
  free of any simplex machinery.

Both run on either scalar backend: float64 tableaus compare against explicit
tolerances, Fraction tableaus compare against zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NumericalFailure, UsageError
from .linalg import Backend, approx_array, backend_of, exact_array, max_abs, zeros

DEFAULT_FEAS_TOL = 1e-9
# Pivot admission threshold in the approximate backend; entries below it are
# treated as zero during pivot selection.
PIVOT_TOL = 1e-10
BRUTE_FORCE_MAX_VARS = 12


@dataclass(frozen=True, eq=False)
class FeasibilityProblem:
    """Find x in R^d with A x = b and x >= 0."""

    A: np.ndarray  # (m, d)
    b: np.ndarray  # (m,)

    def __post_init__(self):
        if self.A.ndim != 2:
            raise UsageError(f"A must be 2-d, got ndim={self.A.ndim}")
        m, d = self.A.shape
        if m < 1 or d < 1:
            raise UsageError(f"need m >= 1 and d >= 1, got A shape {self.A.shape}")
        if self.b.shape != (m,):
            raise UsageError(f"b has shape {self.b.shape}, expected ({m},)")
        if backend_of(self.A) is not backend_of(self.b):
            raise UsageError("A and b must share one scalar backend")
        if self.mode is Backend.APPROX:
            if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b))):
                raise UsageError("approximate-backend entries must be finite")
        self.A.setflags(write=False)
        self.b.setflags(write=False)

    @property
    def mode(self) -> Backend:
        return backend_of(self.A)

    @classmethod
    def from_data(cls, A, b, mode: Backend = Backend.APPROX) -> "FeasibilityProblem":
        if mode is Backend.EXACT:
            return cls(exact_array(A), exact_array(b))
        return cls(approx_array(A), approx_array(b))


@dataclass(frozen=True, eq=False)
class FeasibilityOutcome:
    feasible: bool
    x: np.ndarray | None  # nonnegative solution when feasible

    def __post_init__(self):
        if self.feasible != (self.x is not None):
            raise UsageError("feasible outcomes carry x; infeasible outcomes carry none")
        if self.x is not None:
            self.x.setflags(write=False)

    @classmethod
    def found(cls, x: np.ndarray) -> "FeasibilityOutcome":
        return cls(True, x)

    @classmethod
    def infeasible(cls) -> "FeasibilityOutcome":
        return cls(False, None)


def residual_bounds_hold(p: FeasibilityProblem, x: np.ndarray, feas_tol: float = DEFAULT_FEAS_TOL) -> bool:
    """Re-verify a claimed solution against the outcome contract, solver-independently."""
    residual = max_abs(p.A @ x - p.b)
    if p.mode is Backend.EXACT:
        return residual == 0 and all(entry >= 0 for entry in x)
    scale = max(1.0, float(max_abs(p.b)))
    return float(residual) <= feas_tol * scale and float(np.min(x)) >= -1e-12


def solve_feasibility(
    p: FeasibilityProblem,
    feas_tol: float = DEFAULT_FEAS_TOL,
    max_iterations: int | None = None,
) -> FeasibilityOutcome:
    """Phase-1 simplex decision for A x = b, x >= 0.

    Rows with negative right-hand side are negated, one artificial variable is
    added per row, and the artificial mass is minimized under Bland's rule.
    FEASIBLE iff the minimum is <= feas_tol * max(1, max|b|) (exact: == 0).
    Raises NumericalFailure past 50 * (d + m) pivots.
    """
    exact = p.mode is Backend.EXACT
    m, d = p.A.shape
    if max_iterations is None:
        max_iterations = 50 * (d + m)

    T = zeros((m, d + m + 1), p.mode)
    T[:, :d] = p.A
    T[:, d + m] = p.b
    one = Fraction(1) if exact else 1.0
    for i in range(m):
        if T[i, d + m] < 0:
            T[i, :] = -T[i, :]
        T[i, d + i] = one

    # Reduced costs for min(sum of artificials) with the artificial basis:
    # start from the cost row and subtract every (basic) tableau row.
    obj = zeros(d + m + 1, p.mode)
    obj[d : d + m] = one
    for i in range(m):
        obj = obj - T[i, :]
    basis = list(range(d, d + m))

    entering_cut = 0 if exact else -PIVOT_TOL
    pivot_cut = 0 if exact else PIVOT_TOL
    pivots = 0
    while True:
        entering = next((j for j in range(d + m) if obj[j] < entering_cut), None)
        if entering is None:
            break
        if pivots >= max_iterations:
            raise NumericalFailure(
                f"simplex exceeded the {max_iterations}-pivot cap "
                f"(d={d}, m={m}); input is severely ill-conditioned"
            )
        leaving, best_ratio = None, None
        for i in range(m):
            coeff = T[i, entering]
            if coeff > pivot_cut:
                ratio = T[i, d + m] / coeff
                if (
                    leaving is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leaving])
                ):
                    leaving, best_ratio = i, ratio
        if leaving is None:
            raise NumericalFailure(
                "phase-1 objective appears unbounded below; the artificial mass "
                "is bounded by construction, so the tableau has degraded numerically"
            )
        T[leaving, :] = T[leaving, :] / T[leaving, entering]
        for i in range(m):
            if i != leaving and (T[i, entering] != 0 if exact else abs(T[i, entering]) > 0.0):
                T[i, :] = T[i, :] - T[i, entering] * T[leaving, :]
        obj = obj - obj[entering] * T[leaving, :]
        basis[leaving] = entering
        pivots += 1

    artificial_mass = -obj[d + m]
    threshold = 0 if exact else feas_tol * max(1.0, float(max_abs(p.b)))
    if artificial_mass > threshold:
        return FeasibilityOutcome.infeasible()
    x = zeros(d, p.mode)
    for i, var in enumerate(basis):
        if var < d:
            x[var] = T[i, d + m]
    return FeasibilityOutcome.found(x)


def brute_force_feasibility(
    p: FeasibilityProblem, feas_tol: float = DEFAULT_FEAS_TOL
) -> FeasibilityOutcome:
    """Feasibility by enumeration of candidate basic solutions.

    Tries every coordinate subset of size <= m in deterministic order (by size,
    then lexicographic), solves the subsystem by elimination, and accepts the
    first nonnegative solution.  Valid because a feasible standard-form system
    always has a basic feasible solution supported on independent columns.
    Guarded to d <= 12 variables.
    """
    m, d = p.A.shape
    if d > BRUTE_FORCE_MAX_VARS:
        raise UsageError(
            f"brute force is limited to {BRUTE_FORCE_MAX_VARS} variables, got d={d}"
        )
    exact = p.mode is Backend.EXACT
    nonneg_cut = 0 if exact else -feas_tol

    for size in range(0, min(m, d) + 1):
        for cols in itertools.combinations(range(d), size):
            solution = _eliminate(p.A, p.b, cols, exact, feas_tol)
            if solution is None:
                continue
            if all(entry >= nonneg_cut for entry in solution):
                x = zeros(d, p.mode)
                for col, value in zip(cols, solution):
                    x[col] = value
                return FeasibilityOutcome.found(x)
    return FeasibilityOutcome.infeasible()


def _eliminate(A, b, cols, exact: bool, feas_tol: float):
    """Unique solution of A[:, cols] y = b, or None.

    None when the selected columns are dependent (no basic solution there) or
    the system is inconsistent.  Gauss-Jordan with partial pivoting in the
    approximate backend, first-nonzero pivoting in the exact backend.
    """
    m = A.shape[0]
    size = len(cols)
    mode = backend_of(A)
    aug = zeros((m, size + 1), mode)
    for j, col in enumerate(cols):
        aug[:, j] = A[:, col]
    aug[:, size] = b
    if exact:
        zero_cut = 0
    else:
        scale = max(1.0, float(max_abs(A)), float(max_abs(b)))
        zero_cut = 1e-11 * scale

    row = 0
    for col in range(size):
        if exact:
            pivot = next((r for r in range(row, m) if aug[r, col] != 0), None)
        else:
            candidates = [(abs(aug[r, col]), r) for r in range(row, m)]
            best = max(candidates, default=(0.0, None))
            pivot = best[1] if best[0] > zero_cut else None
        if pivot is None:
            return None  # dependent columns: no basic solution on this subset
        if pivot != row:
            aug[[row, pivot], :] = aug[[pivot, row], :]
        aug[row, :] = aug[row, :] / aug[row, col]
        for r in range(m):
            if r != row and (aug[r, col] != 0 if exact else abs(aug[r, col]) > 0.0):
                aug[r, :] = aug[r, :] - aug[r, col] * aug[row, :]
        row += 1

    for r in range(row, m):
        leftover = aug[r, size]
        if (leftover != 0) if exact else (abs(leftover) > feas_tol * max(1.0, float(max_abs(b)))):
            return None  # inconsistent
    return [aug[r, size] for r in range(size)]
