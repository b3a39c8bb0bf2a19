"""Two charge qubits coupled through a resonator (Tavis-Cummings model).

Product ordering is qubit 1 (x) resonator (x) qubit 2 and |m n q> labels the
corresponding basis vector. Qubit level 0 is the ground state, so
sigma_minus = |0><1| and sigma_z = |0><0| - |1><1|. Simulations run in the
frame rotating at the resonator frequency, where the Hamiltonian is constant.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np

from .core import I2, SM, SZ, SX, as_matrix, expm_hermitian_generator, kron, projector
from .lindblad import EvolutionProblem, LindbladTerm, default_dt, evolve


@dataclass(frozen=True)
class CoupledSystemParams:
    g1: float
    g2: float
    delta: float = 0.0
    kappa: float = 0.0
    gamma1_1: float = 0.0
    gamma1_2: float = 0.0
    gamma_phi_1: float = 0.0
    gamma_phi_2: float = 0.0
    n_max: int = 1

    def __post_init__(self):
        if not (self.g1 > 0 and self.g2 > 0):
            raise ValueError("couplings g1, g2 must be positive")
        rates = (self.kappa, self.gamma1_1, self.gamma1_2, self.gamma_phi_1, self.gamma_phi_2)
        if any(r < 0 for r in rates):
            raise ValueError("decay rates must be non-negative")
        if int(self.n_max) < 1:
            raise ValueError("n_max must be >= 1")

    @property
    def omega(self):
        return math.hypot(self.g1, self.g2)

    @property
    def dim(self):
        return 4 * (self.n_max + 1)


@dataclass(frozen=True)
class BrightDarkBasis:
    xi: float
    bright: np.ndarray
    dark: np.ndarray
    Omega: float


@dataclass
class TwoQubitResult:
    fidelity: float
    times: np.ndarray
    populations: np.ndarray  # (n_times, dim), product-basis diagonal
    final_state: np.ndarray
    ideal_state: np.ndarray
    gate_time: float
    max_trace_drift: float

    def population(self, q1, n, q2, n_max=1):
        return self.populations[:, product_index(q1, n, q2, n_max)]


def product_index(q1, n, q2, n_max=1):
    if not (0 <= n <= n_max and q1 in (0, 1) and q2 in (0, 1)):
        raise ValueError(f"|{q1}{n}{q2}> outside the truncated space")
    return (q1 * (n_max + 1) + n) * 2 + q2


def product_state(q1, n, q2, n_max=1):
    v = np.zeros(4 * (n_max + 1), dtype=complex)
    v[product_index(q1, n, q2, n_max)] = 1.0
    return v


def logical_embedding(n_max=1):
    """Isometry from the two-qubit space {|q1 q2>} to |q1, 0, q2>."""
    cols = [product_state(q1, 0, q2, n_max) for q1 in (0, 1) for q2 in (0, 1)]
    return np.stack(cols, axis=1)


def operators(n_max=1):
    """sigma_minus/sigma_z for each qubit and the resonator annihilator."""
    n = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)
    eye = np.eye(n)
    return {
        "sm1": kron(SM, eye, I2),
        "sm2": kron(I2, eye, SM),
        "sz1": kron(SZ, eye, I2),
        "sz2": kron(I2, eye, SZ),
        "a": kron(I2, a, I2),
    }


def build_rotating_frame_hamiltonian(p):
    """(Delta/2) sum_k sz_k + sum_k g_k (a^dag sm_k + h.c.)."""
    ops = operators(p.n_max)
    ad = ops["a"].conj().T
    h = 0.5 * p.delta * (ops["sz1"] + ops["sz2"])
    for g, sm in ((p.g1, ops["sm1"]), (p.g2, ops["sm2"])):
        x = g * ad @ sm
        h = h + x + x.conj().T
    return h


def lab_frame_hamiltonian(omega_r, qubits, couplings, n_max=1):
    """Un-approximated lab-frame Hamiltonian in the position basis of each dot.

    ``qubits`` is a pair of (t_c, eps) tuples; each dot couples to the
    resonator through g tau_z (a + a^dag). Provided for reference; the
    simulations use the rotating-wave, rotating-frame form.
    """
    n = n_max + 1
    a = np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)
    eye = np.eye(n)
    h = omega_r * kron(I2, a.conj().T @ a, I2)
    (tc1, e1), (tc2, e2) = qubits
    h0 = [tc1 * SX - 0.5 * e1 * SZ, tc2 * SX - 0.5 * e2 * SZ]
    h = h + kron(h0[0], eye, I2) + kron(I2, eye, h0[1])
    x = a + a.conj().T
    h = h + couplings[0] * kron(SZ, x, I2) + couplings[1] * kron(I2, x, SZ)
    return h


def bright_dark_decomposition(g1, g2, n_max=1):
    """Bright/dark combinations of |100> and |001>.

    xi follows tan(xi/2) = -g1/g2. The bright vector is signed so that
    <010|H|b> = +Omega.
    """
    if g1 == 0 and g2 == 0:
        raise ValueError("at least one coupling must be nonzero")
    xi = 2.0 * math.atan2(-g1, g2)
    s, c = math.sin(xi / 2), math.cos(xi / 2)
    e100 = product_state(1, 0, 0, n_max)
    e001 = product_state(0, 0, 1, n_max)
    omega = math.hypot(g1, g2)
    bright = s * e100 - c * e001
    # flip the overall sign when needed so the coupling matrix element is positive
    if g1 * s - g2 * c < 0:
        bright = -bright
    dark = c * e100 + s * e001
    return BrightDarkBasis(xi, bright, dark, omega)


def holonomic_gate_unitary(xi):
    c, s = math.cos(xi), math.sin(xi)
    return np.array([[1, 0, 0, 0], [0, c, s, 0], [0, s, -c, 0], [0, 0, 0, -1]], dtype=complex)


U_ENT = holonomic_gate_unitary(-math.pi / 2)


def gate_duration_resonant(p):
    if p.delta != 0:
        raise ValueError("resonant schedule requires delta = 0")
    return math.pi / p.omega


def dissipators(p):
    ops = operators(p.n_max)
    return [
        LindbladTerm(ops["sm1"], p.gamma1_1),
        LindbladTerm(ops["sm2"], p.gamma1_2),
        LindbladTerm(ops["sz1"], 0.5 * p.gamma_phi_1),
        LindbladTerm(ops["sz2"], 0.5 * p.gamma_phi_2),
        LindbladTerm(ops["a"], p.kappa),
    ]


def coupled_dt(p, h=None):
    if h is None:
        h = build_rotating_frame_hamiltonian(p)
    w = np.linalg.eigvalsh(h)
    rates = p.kappa + p.gamma1_1 + p.gamma1_2 + p.gamma_phi_1 + p.gamma_phi_2
    return default_dt(max(w[-1] - w[0], rates, 1e-12))


def _run(p, rho0, t_gate, u_ideal, dt, save_every):
    h = build_rotating_frame_hamiltonian(p)
    rho0 = as_matrix(rho0)
    if rho0.shape != (p.dim, p.dim):
        raise ValueError(f"rho0 must be {p.dim}x{p.dim} for n_max={p.n_max}")
    if dt is None:
        dt = coupled_dt(p, h)
    prob = EvolutionProblem(h, dissipators(p), rho0, t_gate, dt)
    traj = evolve(prob, save_every=save_every)
    rho_id = u_ideal @ rho0 @ u_ideal.conj().T
    rho = traj.final
    fid = float(np.real(np.sum(rho_id.T * rho)))
    pops = np.real(np.einsum("tii->ti", traj.states))
    return TwoQubitResult(fid, traj.times, pops, rho, rho_id, t_gate, traj.max_trace_drift)


def simulate_resonant_gate(p, rho0, dt=None, save_every=1):
    """Holonomic gate at delta = 0 for duration pi/Omega.

    The reference state evolves under the same Hamiltonian without
    dissipation; fidelity is Tr[rho_id rho] on the full space.
    """
    t_gate = gate_duration_resonant(p)
    u = expm_hermitian_generator(build_rotating_frame_hamiltonian(p), t_gate)
    return _run(p, rho0, t_gate, u, dt, save_every)


def dispersive_coupling(p):
    """Effective exchange strength g1 g2 / delta (= g^2/delta for equal couplings)."""
    if p.delta == 0:
        raise ValueError("dispersive coupling needs delta != 0")
    return p.g1 * p.g2 / p.delta


def dispersive_effective_hamiltonian(p):
    """Two-qubit dispersive Hamiltonian with the resonator in vacuum.

    lambda (|e1><e1| + |e2><e2| + sp1 sm2 + sm1 sp2) in the {|q1 q2>} basis.
    """
    g = max(p.g1, p.g2)
    ratio = abs(p.delta) / g
    if ratio < 3:
        raise ValueError(f"|delta|/g = {ratio:.3g} is too small for the dispersive approximation")
    if ratio < 5:
        warnings.warn(f"|delta|/g = {ratio:.3g} < 5; dispersive approximation is marginal")
    s1 = p.g1 ** 2 / p.delta
    s2 = p.g2 ** 2 / p.delta
    lam = dispersive_coupling(p)
    e = np.diag([0.0, 1.0]).astype(complex)
    sp = SM.T
    h = s1 * np.kron(e, I2) + s2 * np.kron(I2, e)
    h = h + lam * (np.kron(sp, SM) + np.kron(SM, sp))
    return h


def dispersive_gate_unitary(lam, t):
    z = np.exp(-2j * lam * t)
    return np.array([
        [1, 0, 0, 0],
        [0, (1 + z) / 2, (-1 + z) / 2, 0],
        [0, (-1 + z) / 2, (1 + z) / 2, 0],
        [0, 0, 0, z],
    ], dtype=complex)


def dispersive_reference_unitary(p, t):
    """Ideal dispersive evolution expressed in the simulation frame, embedded in the full space.

    In the resonator frame the qubits keep their (delta/2) sigma_z terms and
    the virtual-photon shift has the opposite sign to the interaction-picture
    form, so the logical block is exp(-i delta t/2 (sz1 + sz2)) times the
    complex conjugate of the dispersive gate unitary. At lambda t = pi/2 the
    gate block is real and identical to the interaction-picture gate.
    """
    lam = dispersive_coupling(p)
    free = np.exp(-0.5j * p.delta * t * np.array([2.0, 0.0, 0.0, -2.0]))
    block = free[:, None] * np.conj(dispersive_gate_unitary(lam, t))
    iso = logical_embedding(p.n_max)
    u = iso @ block @ iso.conj().T
    # identity outside the logical vacuum manifold keeps u unitary
    return u + (np.eye(p.dim) - iso @ iso.conj().T)


def simulate_dispersive_gate(p, rho0, dt=None, save_every=1):
    """Dispersive two-qubit gate: full Tavis-Cummings dynamics for pi/(2 lambda)."""
    lam = dispersive_coupling(p)
    t_gate = math.pi / (2 * abs(lam))
    u = dispersive_reference_unitary(p, t_gate)
    return _run(p, rho0, t_gate, u, dt, save_every)


def initial_state(q1, n, q2, n_max=1):
    return projector(product_state(q1, n, q2, n_max))
