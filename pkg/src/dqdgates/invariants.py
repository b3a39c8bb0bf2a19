"""Makhlin local invariants and the perfect-entangler test for two-qubit gates."""
from dataclasses import dataclass
import cmath
import math

import numpy as np

from .core import NotUnitaryError, as_matrix, is_unitary

BOUNDARY_TOL = 1e-9

# computational -> Bell ("magic") basis
Q_MAGIC = np.array([
    [1, 0, 0, 1j],
    [0, 1j, 1, 0],
    [0, 1j, -1, 0],
    [1, 0, 0, -1j],
], dtype=complex) / math.sqrt(2)

IDENTITY = np.eye(4, dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
ISWAP = np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)


@dataclass(frozen=True)
class LocalInvariants:
    g1: float
    g2: float
    g3: float

    @property
    def modulus(self):
        return math.hypot(self.g1, self.g2)

    @property
    def mu(self):
        return math.atan2(self.g2, self.g1)

    def as_tuple(self):
        return (self.g1, self.g2, self.g3)


@dataclass(frozen=True)
class EntanglerClass:
    perfect: bool
    on_boundary: bool


def makhlin_invariants(u, tol=1e-8):
    """(G1, G2, G3) of a 4x4 unitary after rescaling it into SU(4)."""
    u = as_matrix(u)
    if u.shape != (4, 4):
        raise ValueError("Makhlin invariants are defined for 4x4 gates")
    if not is_unitary(u, tol):
        raise NotUnitaryError("gate is not unitary")
    u = u / cmath.exp(cmath.log(np.linalg.det(u)) / 4)
    ub = Q_MAGIC.conj().T @ u @ Q_MAGIC
    m = ub.T @ ub
    tr = np.trace(m)
    tr2 = tr * tr
    g = tr2 / 16
    g3 = (tr2 - np.trace(m @ m)) / 4
    return LocalInvariants(float(g.real), float(g.imag), float(g3.real))


def classify_entangler(inv, tol=BOUNDARY_TOL):
    """Evaluate sin^2(mu) <= 4|G| <= 1 and cos(mu)(cos(mu) - G3) >= 0.

    Points within ``tol`` of a boundary count as perfect entanglers and are
    flagged.
    """
    mod = inv.modulus
    mu = inv.mu
    lhs = math.sin(mu) ** 2
    four_g = 4 * mod
    c2 = math.cos(mu) * (math.cos(mu) - inv.g3)
    margins = (four_g - lhs, 1 - four_g, c2)
    perfect = all(m >= -tol for m in margins)
    on_boundary = perfect and any(abs(m) <= tol for m in margins)
    return EntanglerClass(perfect, on_boundary)


def is_perfect_entangler(inv, tol=BOUNDARY_TOL):
    return classify_entangler(inv, tol).perfect


def locally_equivalent(u, v, tol=1e-8):
    a = makhlin_invariants(u)
    b = makhlin_invariants(v)
    return all(abs(x - y) <= tol for x, y in zip(a.as_tuple(), b.as_tuple()))
