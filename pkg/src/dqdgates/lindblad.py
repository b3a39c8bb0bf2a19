"""Fixed-step RK4 integration of the Lindblad master equation.

    drho/dt = -i[H(t), rho] + sum_k rate_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2)

States may carry leading batch axes, ``rho.shape == (..., d, d)``, in which
case the Hamiltonian callback may return a matching batch of matrices. Each
batch element evolves independently, so a batch of quasistatic noise
realizations is integrated in one pass.
"""
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union
import math

import numpy as np

from .core import DimensionError, as_matrix, dag

TRACE_FAIL_TOL = 1e-6
# steps per unit of the fastest angular frequency; gives dt ~ 6.6e-5 ns for
# the single-qubit drive at t_c/2pi = 12 GHz (fastest term at 2*omega)
DT_DENSITY = 50.0


class IntegrationError(RuntimeError):
    """Raised when the trace drifts beyond tolerance (dt too large)."""

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


@dataclass(frozen=True)
class LindbladTerm:
    operator: np.ndarray
    rate: float

    def __post_init__(self):
        object.__setattr__(self, "operator", as_matrix(self.operator))
        if not self.rate >= 0:
            raise ValueError(f"Lindblad rate must be >= 0, got {self.rate}")


Hamiltonian = Union[np.ndarray, Callable[[float], np.ndarray]]


@dataclass
class EvolutionProblem:
    hamiltonian: Hamiltonian
    dissipators: Sequence[LindbladTerm]
    rho0: np.ndarray
    t_final: float
    dt: float
    t_start: float = 0.0

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.t_final >= 0:
            raise ValueError(f"t_final must be >= 0, got {self.t_final}")
        self.rho0 = np.asarray(self.rho0, dtype=complex)
        d = self.rho0.shape[-1]
        if self.rho0.ndim < 2 or self.rho0.shape[-2] != d:
            raise DimensionError("rho0 must be (..., d, d)")
        for term in self.dissipators:
            if term.operator.shape != (d, d):
                raise DimensionError(
                    f"jump operator shape {term.operator.shape} does not match system dim {d}")
        if not callable(self.hamiltonian):
            h = np.asarray(self.hamiltonian, dtype=complex)
            if h.shape[-2:] != (d, d):
                raise DimensionError(f"Hamiltonian shape {h.shape} does not match system dim {d}")
            self.hamiltonian = h

    @property
    def dim(self):
        return self.rho0.shape[-1]

    def hamiltonian_at(self, t):
        if callable(self.hamiltonian):
            return np.asarray(self.hamiltonian(t), dtype=complex)
        return self.hamiltonian


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n_saved, ..., d, d)
    max_trace_drift: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def final(self):
        return self.states[-1]


def default_dt(omega_max):
    """Step size for a problem whose fastest angular frequency is omega_max (rad/ns)."""
    if not omega_max > 0:
        raise ValueError("omega_max must be positive")
    return 1.0 / (DT_DENSITY * omega_max)


def dissipator(term, rho):
    """rate * (L rho L^dag - (L^dag L rho + rho L^dag L) / 2)."""
    rho = np.asarray(rho, dtype=complex)
    L = term.operator
    if rho.shape[-2:] != L.shape:
        raise DimensionError(f"rho shape {rho.shape} does not match operator {L.shape}")
    Ld = L.conj().T
    LdL = Ld @ L
    return term.rate * (L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL))


def _trace(rho):
    return np.einsum("...ii->...", rho)


class _Rhs:
    def __init__(self, dissipators, dim):
        self.dim = dim
        terms = [t for t in dissipators if t.rate != 0]
        # constant dissipative part applied as one superoperator product
        self.dsup = _dissipator_superop(terms, dim).T.copy() if terms else None

    def __call__(self, h, rho):
        # H and rho are Hermitian, so rho H = (H rho)^dag; this keeps the
        # update exactly Hermitian
        hr = h @ rho
        out = -1j * (hr - dag(hr))
        if self.dsup is not None:
            d2 = self.dim * self.dim
            out += (rho.reshape(-1, d2) @ self.dsup).reshape(rho.shape)
        return out


def _dissipator_superop(dissipators, d):
    eye = np.eye(d)
    sup = np.zeros((d * d, d * d), dtype=complex)
    for term in dissipators:
        L = term.operator
        LdL = L.conj().T @ L
        sup += term.rate * (np.kron(L, L.conj()) - 0.5 * (np.kron(LdL, eye) + np.kron(eye, LdL.T)))
    return sup


def _liouvillian(h, dissipators):
    """Superoperator acting on row-major vec(rho)."""
    d = h.shape[0]
    eye = np.eye(d)
    return -1j * (np.kron(h, eye) - np.kron(eye, h.T)) + _dissipator_superop(dissipators, d)


def _check_trace(rho, t, target):
    """Trace drift, widened to catch divergence the exact-trace RK4 update hides.

    For a density matrix ||rho||_F <= Tr rho, so norm growth beyond the
    target trace (or any non-finite entry) also counts as drift.
    """
    drift = np.abs(_trace(rho) - target)
    growth = np.linalg.norm(rho, axis=(-2, -1)) - np.abs(target)
    drift = np.maximum(drift, growth)
    drift = np.where(np.isfinite(drift), drift, np.inf)
    worst = float(np.max(drift))
    if worst > TRACE_FAIL_TOL:
        failed = np.argwhere(np.atleast_1d(drift) > TRACE_FAIL_TOL).ravel() if drift.ndim else ()
        raise IntegrationError(
            f"trace drift {worst:.3e} at t={t:.6g} ns exceeds {TRACE_FAIL_TOL:g}; reduce dt",
            failed=[int(i) for i in failed])
    return worst


def evolve(problem, save_every=1):
    """Integrate ``problem`` with classical RK4.

    The step is ``t_final / ceil(t_final / dt)`` so the grid lands exactly on
    ``t_final``. ``save_every`` controls how many steps separate stored
    states; ``None`` stores only the initial and final state. The trace is
    never renormalized; a drift above 1e-6 raises IntegrationError.
    """
    rho = problem.rho0.copy()
    t0 = problem.t_start
    n_steps = int(math.ceil(problem.t_final / problem.dt - 1e-9)) if problem.t_final > 0 else 0
    h_step = problem.t_final / n_steps if n_steps else 0.0
    target = _trace(rho)

    times = [t0]
    states = [rho.copy()]
    drift = 0.0

    constant = not callable(problem.hamiltonian) and problem.hamiltonian.ndim == 2
    if constant:
        d = problem.dim
        lv = _liouvillian(problem.hamiltonian, problem.dissipators) * h_step
        lv2 = lv @ lv
        prop = np.eye(d * d) + lv + lv2 / 2 + lv2 @ lv / 6 + lv2 @ lv2 / 24
        batch = rho.shape[:-2]
        vec = rho.reshape(batch + (d * d,))
        for i in range(1, n_steps + 1):
            vec = vec @ prop.T
            t = t0 + i * h_step
            if save_every and i % save_every == 0 or i == n_steps:
                rho = vec.reshape(batch + (d, d))
                drift = max(drift, _check_trace(rho, t, target))
                times.append(t)
                states.append(rho.copy())
    else:
        rhs = _Rhs(problem.dissipators, problem.dim)
        ham = problem.hamiltonian_at
        for i in range(n_steps):
            t = t0 + i * h_step
            h1 = ham(t)
            hm = ham(t + 0.5 * h_step)
            h2 = ham(t + h_step)
            k1 = rhs(h1, rho)
            k2 = rhs(hm, rho + 0.5 * h_step * k1)
            k3 = rhs(hm, rho + 0.5 * h_step * k2)
            k4 = rhs(h2, rho + h_step * k3)
            rho = rho + (h_step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            step = i + 1
            if save_every and step % save_every == 0 or step == n_steps:
                drift = max(drift, _check_trace(rho, t + h_step, target))
                times.append(t0 + step * h_step)
                states.append(rho.copy())
    if len(times) == 1:
        times.append(t0)
        states.append(rho.copy())
    return Trajectory(np.array(times), np.stack(states), max_trace_drift=drift)


def fidelity_at_final_time(problem, ideal_trajectory):
    """Tr[rho_id(T) rho(T)] with rho_id supplied as a function of time."""
    traj = evolve(problem, save_every=None)
    t_end = problem.t_start + problem.t_final
    rho_id = np.asarray(ideal_trajectory(t_end), dtype=complex)
    rho = traj.final
    if rho_id.shape[-2:] != rho.shape[-2:]:
        raise DimensionError("ideal state dimension does not match the evolved state")
    f = np.real(np.einsum("...ij,...ji->...", rho_id, rho))
    return float(f) if np.ndim(f) == 0 else f
