import random
from fractions import Fraction

import numpy as np
import pytest

from helpers import random_rational, random_rational_columns, random_rational_subspace
from nonneg.alternative import (
    PairKind,
    classify_pair,
    decide_alternative,
    find_nonneg_witness,
    find_positive_certificate,
    verify_certificate,
    verify_witness,
)
from nonneg.errors import UsageError
from nonneg.linalg import Backend, Subspace, exact_array, orthonormalize

R2 = 1.0 / np.sqrt(2.0)

SPAN_VW_COLUMNS = [["-1/2", "1"], ["1", "-1/2"], ["1", "1"]]


def diag_line():
    return orthonormalize(np.array([[R2], [R2]]))


def antidiag_line():
    return orthonormalize(np.array([[R2], [-R2]]))


def span_vw():
    return orthonormalize(exact_array(SPAN_VW_COLUMNS))


def test_witness_on_diagonal_line():
    w = find_nonneg_witness(diag_line())
    np.testing.assert_allclose(w.x, [0.5, 0.5], atol=1e-12)
    assert abs(float(w.subspace_residual)) <= 1e-12


def test_no_witness_on_mixed_sign_line():
    assert find_nonneg_witness(antidiag_line()) is None


def test_witness_for_span_vw_and_named_combination():
    V = span_vw()
    w = find_nonneg_witness(V)
    assert w is not None
    assert verify_witness(V, w.x, 0)
    # the normalized sum of the two defining vectors is itself a valid witness
    assert verify_witness(V, [Fraction(1, 6), Fraction(1, 6), Fraction(2, 3)], 0)


def test_certificate_examples():
    c = find_positive_certificate(antidiag_line())
    np.testing.assert_allclose(c.v, [1.0, 1.0], atol=1e-12)

    assert find_positive_certificate(diag_line()) is None

    V = orthonormalize(exact_array([["-1/2"], ["1"], ["1"]]))
    c = find_positive_certificate(V)
    assert c is not None
    assert verify_certificate(V, c.v, 0)
    assert verify_certificate(V, [4, 1, 1], 0)  # -2 + 1 + 1 = 0, all entries positive


def test_decide_alternative_degenerate_spaces():
    full = Subspace.full(4)
    verdict = decide_alternative(full)
    assert verdict.has_nonneg
    np.testing.assert_allclose(verdict.witness.x, np.full(4, 0.25))

    zero = Subspace.zero(3)
    verdict = decide_alternative(zero)
    assert not verdict.has_nonneg
    np.testing.assert_allclose(verdict.certificate.v, np.ones(3))

    zero_exact = Subspace.zero(3, Backend.EXACT)
    verdict = decide_alternative(zero_exact)
    assert verdict.certificate.v.tolist() == [Fraction(1)] * 3


def test_decide_alternative_mixed_sign_line():
    V = orthonormalize(exact_array([["-1/2"], ["1"], ["1"]]))
    verdict = decide_alternative(V)
    assert not verdict.has_nonneg
    assert all(entry >= 1 for entry in verdict.certificate.v)


def test_classify_x_axis_both_sides():
    V = orthonormalize(np.array([[1.0], [0.0]]))
    pc = classify_pair(V)
    assert pc.kind is PairKind.BOTH_SIDES
    np.testing.assert_allclose(pc.witness_v.x, [1.0, 0.0])
    np.testing.assert_allclose(pc.witness_complement.x, [0.0, 1.0])


def test_classify_mixed_sign_line_only_complement():
    pc = classify_pair(antidiag_line())
    assert pc.kind is PairKind.ONLY_COMPLEMENT
    np.testing.assert_allclose(pc.certificate_in_complement.v, [1.0, 1.0], atol=1e-12)
    np.testing.assert_allclose(pc.witness_complement.x, [0.5, 0.5], atol=1e-12)


def test_classify_span_vw_only_v():
    V = span_vw()
    pc = classify_pair(V)
    assert pc.kind is PairKind.ONLY_V
    assert verify_witness(V, pc.witness_v.x, 0)
    # the certificate against the complement is a positive vector inside V
    complement_direction = [Fraction(2), Fraction(2), Fraction(-1)]
    dot = sum(a * b for a, b in zip(pc.certificate_in_v.v, complement_direction))
    assert dot == 0
    assert all(entry >= 1 for entry in pc.certificate_in_v.v)


def test_verify_witness_cases():
    V = diag_line()
    assert verify_witness(V, [0.5, 0.5], 1e-9)
    assert not verify_witness(V, [1.0, 0.0], 1e-9)  # not in V
    assert not verify_witness(V, [0.6, 0.5], 1e-9)  # sum != 1
    assert verify_witness(span_vw(), [Fraction(1, 6), Fraction(1, 6), Fraction(2, 3)], 0)


def test_verify_certificate_cases():
    V = antidiag_line()
    assert verify_certificate(V, [1.0, 1.0], 1e-9)
    assert not verify_certificate(V, [1.0, -1.0], 1e-9)  # not positive
    assert not verify_certificate(diag_line(), [1.0, 1.0], 1e-9)  # not orthogonal
    assert verify_certificate(
        orthonormalize(exact_array([["-1/2"], ["1"], ["1"]])), [4, 1, 1], 0
    )


def test_verifier_length_mismatch_raises():
    with pytest.raises(UsageError):
        verify_witness(diag_line(), [1.0, 0.0, 0.0])
    with pytest.raises(UsageError):
        verify_certificate(diag_line(), [1.0])


def test_exclusivity_over_random_exact_subspaces():
    rng = random.Random(314)
    for _ in range(300):
        n = rng.randint(1, 8)
        V = random_rational_subspace(rng, n, rng.randint(0, n))
        witness = find_nonneg_witness(V)
        certificate = find_positive_certificate(V)
        assert (witness is None) != (certificate is None)
        if witness is not None:
            assert verify_witness(V, witness.x, 0)
        if certificate is not None:
            assert verify_certificate(V, certificate.v, 0)


def test_verifier_pair_rejects_contradictory_claims():
    # If a valid witness exists, no vector can pass the certificate check
    # (and vice versa): <x, v> >= min(v) * sum(x) > 0 contradicts orthogonality.
    rng = random.Random(2718)
    seen_witness = seen_certificate = 0
    while seen_witness < 20 or seen_certificate < 20:
        n = rng.randint(1, 6)
        V = random_rational_subspace(rng, n, rng.randint(0, n))
        verdict = decide_alternative(V)
        if verdict.has_nonneg:
            seen_witness += 1
            assert not verify_certificate(V, [Fraction(1)] * n, 0)
        else:
            seen_certificate += 1
            uniform = [Fraction(1, n)] * n
            assert not verify_witness(V, uniform, 0) or n == 0


def test_classify_pair_never_reaches_the_impossible_state():
    # 1000-trial sweep: the (no witness, no witness) combination must never
    # appear, and each populated vector must pass its verifier exactly.
    rng = random.Random(424242)
    for _ in range(1000):
        n = rng.randint(1, 8)
        V = random_rational_subspace(rng, n, rng.randint(0, n))
        pc = classify_pair(V)
        assert pc.kind in (PairKind.BOTH_SIDES, PairKind.ONLY_V, PairKind.ONLY_COMPLEMENT)
        if pc.kind is PairKind.BOTH_SIDES:
            assert pc.witness_v is not None and pc.witness_complement is not None
        elif pc.kind is PairKind.ONLY_V:
            assert pc.witness_v is not None and pc.certificate_in_v is not None
        else:
            assert pc.witness_complement is not None and pc.certificate_in_complement is not None


def test_scale_invariance_of_verdict():
    rng = random.Random(1618)
    for _ in range(100):
        n = rng.randint(1, 6)
        k = rng.randint(1, n)
        cols = random_rational_columns(rng, n, k)
        V = orthonormalize(cols)
        scaled = cols.copy()
        for j in range(k):
            factor = Fraction(rng.choice([x for x in range(-5, 6) if x != 0]), rng.randint(1, 5))
            scaled[:, j] = scaled[:, j] * factor
        W = orthonormalize(scaled)
        assert decide_alternative(V).has_nonneg == decide_alternative(W).has_nonneg


def test_witness_normalization_and_certificate_scaling():
    rng = random.Random(55)
    for _ in range(120):
        n = rng.randint(1, 7)
        V = random_rational_subspace(rng, n, rng.randint(0, n))
        verdict = decide_alternative(V)
        if verdict.has_nonneg:
            assert verdict.witness.x.sum() == 1
            assert verdict.witness.min_component >= 0
        else:
            assert verdict.certificate.v.min() == 1
