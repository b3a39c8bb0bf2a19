import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dqdgates.cavity import U_ENT, dispersive_gate_unitary, holonomic_gate_unitary
from dqdgates.core import NotUnitaryError
from dqdgates.invariants import (
    CNOT, CZ, IDENTITY, ISWAP, SWAP, LocalInvariants, classify_entangler, is_perfect_entangler,
    locally_equivalent, makhlin_invariants,
)

import oracles


def local_dressing(seed, u):
    rng = np.random.default_rng(seed)
    k1 = np.kron(oracles.random_su2(rng), oracles.random_su2(rng))
    k2 = np.kron(oracles.random_su2(rng), oracles.random_su2(rng))
    return np.exp(1j * rng.uniform(0, 2 * math.pi)) * k1 @ u @ k2


@pytest.mark.parametrize("gate, expected", [
    (U_ENT, (0.0, 0.0, -1.0)),
    (IDENTITY, (1.0, 0.0, 3.0)),
    (CNOT, (0.0, 0.0, 1.0)),
    (CZ, (0.0, 0.0, 1.0)),
    (SWAP, (-1.0, 0.0, -3.0)),
    (ISWAP, (0.0, 0.0, -1.0)),
])
def test_known_invariants(gate, expected):
    np.testing.assert_allclose(makhlin_invariants(gate).as_tuple(), expected, atol=1e-10)
    np.testing.assert_allclose(oracles.makhlin(gate), expected, atol=1e-10)


def test_matches_determinant_oracle_on_random_gates():
    rng = np.random.default_rng(4)
    for _ in range(50):
        u = oracles.random_unitary(rng, 4)
        np.testing.assert_allclose(makhlin_invariants(u).as_tuple(), oracles.makhlin(u), atol=1e-10)


@pytest.mark.parametrize("gate, perfect", [
    (U_ENT, True), (CNOT, True), (ISWAP, True), (IDENTITY, False), (SWAP, False),
    (holonomic_gate_unitary(0.0), False),
])
def test_perfect_entangler_classification(gate, perfect):
    assert is_perfect_entangler(makhlin_invariants(gate)) is perfect


def test_sqrt_swap_is_on_boundary():
    # sqrt(SWAP) sits on a face of the perfect-entangler polyhedron
    s = np.array([[1, 0, 0, 0], [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
                  [0, (1 - 1j) / 2, (1 + 1j) / 2, 0], [0, 0, 0, 1]])
    cls = classify_entangler(makhlin_invariants(s))
    assert cls.perfect and cls.on_boundary
    # G = 0 gates such as CNOT satisfy sin^2(mu) <= 4|G| with equality
    assert classify_entangler(makhlin_invariants(CNOT)).on_boundary


def test_classification_tolerance():
    inside = LocalInvariants(0.25 + 1e-10, 0.0, 0.0)
    outside = LocalInvariants(0.25 + 1e-6, 0.0, 0.0)
    assert classify_entangler(inside).perfect and classify_entangler(inside).on_boundary
    assert not classify_entangler(outside).perfect


def test_holonomic_entangler_family():
    inv = makhlin_invariants(holonomic_gate_unitary(-math.pi / 2))
    assert inv.g3 == pytest.approx(-1.0, abs=1e-12)
    assert 4 * inv.modulus <= 1 + 1e-12
    # xi sweep agrees with the determinant oracle everywhere
    for xi in np.linspace(-math.pi, math.pi, 25):
        u = holonomic_gate_unitary(xi)
        np.testing.assert_allclose(makhlin_invariants(u).as_tuple(), oracles.makhlin(u), atol=1e-10)


def test_local_equivalence_cases():
    assert locally_equivalent(U_ENT, dispersive_gate_unitary(0.37, math.pi / (2 * 0.37)))
    assert locally_equivalent(U_ENT, ISWAP)
    assert not locally_equivalent(CNOT, ISWAP)
    assert locally_equivalent(CNOT, CZ)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_local_dressing_preserves_invariants(seed):
    for gate in (U_ENT, CNOT):
        dressed = local_dressing(seed, gate)
        np.testing.assert_allclose(makhlin_invariants(dressed).as_tuple(),
                                   makhlin_invariants(gate).as_tuple(), atol=1e-8)
        assert locally_equivalent(dressed, gate)


def test_input_validation():
    with pytest.raises(ValueError):
        makhlin_invariants(np.eye(2))
    with pytest.raises(NotUnitaryError):
        makhlin_invariants(2 * np.eye(4))
