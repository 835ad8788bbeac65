"""Shared deterministic generators for the test suite."""

import random
from fractions import Fraction

import numpy as np

from nonneg.linalg import Backend, Subspace, exact_array, orthonormalize


def random_rational(rng: random.Random, max_abs: int = 9) -> Fraction:
    return Fraction(rng.randint(-max_abs, max_abs), rng.randint(1, max_abs))


def random_rational_columns(rng: random.Random, n: int, k: int, max_abs: int = 9) -> np.ndarray:
    return exact_array([[random_rational(rng, max_abs) for _ in range(k)] for _ in range(n)])


def random_rational_subspace(rng: random.Random, n: int, k: int) -> Subspace:
    if k == 0:
        return Subspace.zero(n, Backend.EXACT)
    return orthonormalize(random_rational_columns(rng, n, k))


def random_float_subspace(rng: np.random.Generator, n: int, k: int) -> Subspace:
    if k == 0:
        return Subspace.zero(n)
    return orthonormalize(rng.standard_normal((n, k)))
