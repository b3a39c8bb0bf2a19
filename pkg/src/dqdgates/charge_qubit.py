"""Microwave-driven charge qubit: Hamiltonians, gate schedules and simulation.

Position basis {|L>, |R>}; computational basis {|0>, |1>} with
|0> = (|L> - |R>)/sqrt2 and |1> = (|L> + |R>)/sqrt2. The detuning is driven as
eps(t) = eps_bar + 2 A cos(omega t + chi) with omega locked to 2 t_c.
"""
from dataclasses import dataclass, field, replace
import math

import numpy as np

from .core import I2, SM, SX, SY, SZ, expm_hermitian_generator, projector
from .lindblad import EvolutionProblem, LindbladTerm, default_dt, evolve

TAU_X = SX
TAU_Z = SZ

# columns: |0>, |1> written in the position basis
POSITION_TO_COMPUTATIONAL = np.array([[1, 1], [-1, 1]], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class ChargeQubitParams:
    eps_bar: float
    t_c: float
    d_eps: float = 0.0
    d_tc: float = 0.0

    def with_noise(self, d_eps, d_tc):
        return replace(self, d_eps=d_eps, d_tc=d_tc)


@dataclass(frozen=True)
class MicrowaveSegment:
    amplitude: float
    phase: float
    duration: float

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError("segment amplitude must be positive")
        if not self.duration > 0:
            raise ValueError("segment duration must be positive")


@dataclass(frozen=True)
class PulseSchedule:
    segments: tuple
    omega: float = None

    @property
    def duration(self):
        return math.fsum(s.duration for s in self.segments)

    @property
    def boundaries(self):
        """Start time of each segment followed by the end time."""
        return np.concatenate([[0.0], np.cumsum([s.duration for s in self.segments])])

    def at_resonance(self, t_c):
        if not t_c > 0:
            raise ValueError("resonant drive needs t_c > 0")
        return replace(self, omega=2.0 * t_c)


@dataclass(frozen=True)
class GeometricGateSpec:
    gamma: float
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")

    @property
    def axis(self):
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])


GEOMETRIC_NOT = GeometricGateSpec(gamma=-math.pi / 2, theta=math.pi / 2, phi=0.0)


def hamiltonian_lab_position(p, eps_t):
    return (p.t_c + p.d_tc) * TAU_X - 0.5 * (eps_t + p.d_eps) * TAU_Z


def hamiltonian_computational(p, eps_t):
    tc = p.t_c + p.d_tc
    e = 0.5 * (eps_t + p.d_eps)
    return np.array([[tc, e], [e, -tc]], dtype=complex)


def hamiltonian_rotating(p, seg, omega, t):
    """Full rotating-frame Hamiltonian with counter-rotating and noise terms.

    ``p.d_eps`` and ``p.d_tc`` may be arrays of equal shape, in which case a
    stack of matrices is returned.
    """
    if not omega > 0:
        raise ValueError("drive frequency must be positive")
    d_eps = np.asarray(p.d_eps, dtype=float)
    d_tc = np.asarray(p.d_tc, dtype=float)
    shape = np.broadcast_shapes(d_eps.shape, d_tc.shape)
    a = 0.5 * seg.amplitude
    diag = np.broadcast_to(p.t_c + d_tc - 0.5 * omega, shape)
    off = (a * np.exp(-1j * seg.phase) + a * np.exp(1j * (2 * omega * t + seg.phase))
           + 0.5 * (p.eps_bar + d_eps) * np.exp(1j * omega * t))
    off = np.broadcast_to(off, shape)
    h = np.empty(shape + (2, 2), dtype=complex)
    h[..., 0, 0] = diag
    h[..., 1, 1] = -diag
    h[..., 0, 1] = off
    h[..., 1, 0] = np.conj(off)
    return h


def hamiltonian_rwa(seg):
    """Drive Hamiltonian with counter-rotating terms and noise dropped."""
    return 0.5 * seg.amplitude * (math.cos(seg.phase) * SX + math.sin(seg.phase) * SY)


def energy_splitting_expansion(eps_bar, t_c):
    """E01 and its first derivatives with respect to eps and t_c at the mean point."""
    e01 = math.sqrt(4 * t_c ** 2 + eps_bar ** 2)
    if e01 == 0:
        raise ValueError("energy splitting is degenerate at eps_bar = t_c = 0")
    return e01, eps_bar / e01, 4 * t_c / e01


def synthesize_geometric_gate(spec, A_eps):
    """Three-segment longitude loop producing exp(i gamma n.sigma).

    Pulse areas are theta, pi and pi - theta, with phases phi - pi/2,
    phi + gamma - pi/2 and phi - pi/2. Zero-area segments are dropped.
    """
    if not A_eps > 0:
        raise ValueError("A_eps must be positive")
    if not 0.0 <= spec.theta <= math.pi:
        raise ValueError("theta must lie in [0, pi]")
    base = spec.phi - math.pi / 2
    pieces = [
        (spec.theta, base),
        (math.pi, base + spec.gamma),
        (math.pi - spec.theta, base),
    ]
    segs = tuple(MicrowaveSegment(A_eps, phase, area / A_eps) for area, phase in pieces if area > 0)
    return PulseSchedule(segs)


def synthesize_dynamical_gate(axis_phi, angle, A_eps):
    """Single square pulse implementing exp(-i angle/2 (cos phi X + sin phi Y))."""
    if not angle > 0:
        raise ValueError("rotation angle must be positive")
    if not A_eps > 0:
        raise ValueError("A_eps must be positive")
    return PulseSchedule((MicrowaveSegment(A_eps, axis_phi, angle / A_eps),))


def dressed_states(theta, phi):
    plus = np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(1j * phi)])
    minus = np.array([math.sin(theta / 2) * np.exp(-1j * phi), -math.cos(theta / 2)])
    return plus, minus


def ideal_geometric_unitary(spec):
    n = spec.axis
    ns = n[0] * SX + n[1] * SY + n[2] * SZ
    return math.cos(spec.gamma) * I2 + 1j * math.sin(spec.gamma) * ns


def dynamical_unitary(axis_phi, angle):
    return expm_hermitian_generator(0.5 * (math.cos(axis_phi) * SX + math.sin(axis_phi) * SY), angle)


def rwa_unitary(schedule):
    """Product of the ideal (RWA, noiseless) segment propagators."""
    u = I2.copy()
    for seg in schedule.segments:
        u = expm_hermitian_generator(hamiltonian_rwa(seg), seg.duration) @ u
    return u


def gate_dt(schedule, omega):
    fastest = max([2 * omega] + [s.amplitude for s in schedule.segments])
    return default_dt(fastest)


def evolve_gate(p, schedule, gamma1, rho0, dt=None, save_every=None):
    """Integrate the master equation segment by segment.

    ``p.d_eps``/``p.d_tc`` may be equal-length arrays; ``rho0`` is then
    broadcast over that batch. Returns the list of per-segment trajectories.
    """
    omega = schedule.omega if schedule.omega is not None else 2.0 * p.t_c
    if not math.isclose(omega, 2.0 * p.t_c, rel_tol=1e-12):
        raise ValueError("schedule must be driven at resonance omega = 2 t_c")
    if dt is None:
        dt = gate_dt(schedule, omega)
    batch = np.broadcast_shapes(np.shape(p.d_eps), np.shape(p.d_tc))
    rho = np.broadcast_to(np.asarray(rho0, dtype=complex), batch + (2, 2)).copy()
    terms = [LindbladTerm(SM, gamma1)]
    trajectories = []
    t = 0.0
    for seg in schedule.segments:
        prob = EvolutionProblem(
            hamiltonian=lambda tt, seg=seg: hamiltonian_rotating(p, seg, omega, tt),
            dissipators=terms, rho0=rho, t_final=seg.duration, dt=dt, t_start=t)
        traj = evolve(prob, save_every=save_every)
        trajectories.append(traj)
        rho = traj.final
        t += seg.duration
    return trajectories


def simulate_gate(p, schedule, gamma1, rho0, ideal, dt=None):
    """Gate fidelity Tr[U rho0 U^dag rho(T)] after open-system evolution.

    Returns a float, or an array when ``p`` carries arrays of noise offsets.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    trajs = evolve_gate(p, schedule, gamma1, rho0, dt=dt)
    rho_id = ideal @ rho0 @ ideal.conj().T
    rho = trajs[-1].final
    f = np.real(np.einsum("ij,...ji->...", rho_id, rho))
    return float(f) if np.ndim(f) == 0 else f


def ground_state():
    return projector(np.array([1, 0], dtype=complex))
