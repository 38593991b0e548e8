import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import bell, direct_inner, rand_state, rng_of, seeds
from matramp.errors import DimensionError, ValidationError
from matramp.matrixize import (
    BipartiteState, entropy_report, matrixize, overlap_via_trace, vectorize,
)
from matramp.qcore import X, Y, Z


def test_vectorize_examples():
    assert np.allclose(vectorize(np.eye(2) / math.sqrt(2)), bell("phi+"))
    e01 = np.array([[0, 1], [0, 0]])
    assert np.array_equal(vectorize(e01), [0, 1, 0, 0])
    with pytest.raises((DimensionError, ValidationError)):
        vectorize(np.ones((2, 4)))


@given(seeds)
def test_vectorize_row_major_oracle(seed):
    rng = rng_of(seed)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    v = vectorize(m)
    for i in range(4):
        for j in range(4):
            assert v[4 * i + j] == m[i, j]
    assert np.isclose(np.linalg.norm(v), np.linalg.norm(m, "fro"))


def test_matrixize_examples():
    assert np.allclose(matrixize(bell("phi+")), np.eye(2) / math.sqrt(2))
    assert np.allclose(matrixize(bell("psi-")), 1j * Y / math.sqrt(2))
    with pytest.raises((DimensionError, ValidationError)):
        matrixize(np.ones(8))


@given(seeds, st.integers(1, 3))
def test_round_trip_exact(seed, n):
    rng = rng_of(seed)
    d = 2**n
    m = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    assert np.array_equal(matrixize(vectorize(m)), m)
    v = m.reshape(-1)
    assert np.array_equal(vectorize(matrixize(v)), v)


def test_bell_pauli_correspondence():
    for label, pauli in (("phi+", np.eye(2)), ("phi-", Z), ("psi+", X), ("psi-", 1j * Y)):
        assert np.allclose(matrixize(bell(label)), pauli / math.sqrt(2))


def test_overlap_examples():
    a = BipartiteState(rand_state(2, rng_of(1)))
    assert overlap_via_trace(a, a) == pytest.approx(1)
    e0, e1 = np.eye(4)[0], np.eye(4)[3]
    assert overlap_via_trace(BipartiteState(e0), BipartiteState(e1)) == 0


@given(seeds, st.integers(1, 3))
def test_overlap_matches_direct_sum(seed, n):
    rng = rng_of(seed)
    a, b = rand_state(2 * n, rng), rand_state(2 * n, rng)
    got = overlap_via_trace(BipartiteState(a), BipartiteState(b))
    assert abs(got - direct_inner(b, a)) < 1e-10


def test_overlap_size_mismatch():
    with pytest.raises((DimensionError, ValidationError)):
        overlap_via_trace(BipartiteState(np.eye(4)[0]), BipartiteState(np.eye(16)[0]))


def test_entropy_examples():
    prod = entropy_report(BipartiteState.product([1, 0], [0.6, 0.8]))
    assert prod.h_inf == 0 and prod.h_half == 0
    assert prod.lambda_max == pytest.approx(1) and prod.gamma_max == pytest.approx(0.5)
    for n in (1, 2, 3):
        maxent = np.eye(2**n).reshape(-1) / 2 ** (n / 2)
        r = entropy_report(BipartiteState(maxent))
        assert r.lambda_max == pytest.approx(2 ** (n / 2))
        assert r.gamma_max == pytest.approx(2 ** (-n / 2 - 1))
    s = math.sqrt(0.8) * np.kron([1, 0], [1, 0]) + math.sqrt(0.2) * np.kron([0, 1], [0, 1])
    r = entropy_report(BipartiteState(s))
    assert r.h_inf == pytest.approx(-math.log2(0.8), abs=1e-12)
    assert r.h_half == pytest.approx(2 * math.log2(math.sqrt(0.8) + math.sqrt(0.2)), abs=1e-12)


@given(seeds, st.integers(1, 3))
def test_entropy_chain(seed, n):
    r = entropy_report(BipartiteState(rand_state(2 * n, rng_of(seed))))
    assert 0 <= r.h_inf <= r.h_half + 1e-12 <= n + 2e-12


def test_odd_register_rejected():
    with pytest.raises((DimensionError, ValidationError)):
        BipartiteState(np.eye(8)[0])
