import itertools
import math

import numpy as np
import pytest

from dqdgates import ghz
from dqdgates.charge_qubit import (
    GEOMETRIC_NOT, POSITION_TO_COMPUTATIONAL, ChargeQubitParams, GeometricGateSpec,
    MicrowaveSegment, PulseSchedule, dressed_states, dynamical_unitary, energy_splitting_expansion,
    evolve_gate, ground_state, hamiltonian_computational, hamiltonian_lab_position,
    hamiltonian_rotating, hamiltonian_rwa, ideal_geometric_unitary, rwa_unitary, simulate_gate,
    synthesize_dynamical_gate, synthesize_geometric_gate,
)
from dqdgates.core import I2, SX, SY, gate_distance_up_to_phase

import oracles

A_EPS = ghz(2.0)
TC = ghz(12.0)
NOT_TARGET = np.diag([0.0, 1.0]).astype(complex)


def test_lab_hamiltonian_cases():
    np.testing.assert_allclose(hamiltonian_lab_position(ChargeQubitParams(0.0, 1.0), 0.0), SX)
    np.testing.assert_allclose(hamiltonian_lab_position(ChargeQubitParams(0.0, 0.0), 2.0),
                               np.diag([-1, 1]))
    w = np.linalg.eigvalsh(hamiltonian_lab_position(ChargeQubitParams(0.0, 2.0), 3.0))
    np.testing.assert_allclose(w, [-2.5, 2.5])


def test_computational_hamiltonian_cases():
    np.testing.assert_allclose(hamiltonian_computational(ChargeQubitParams(0.0, 1.0), 0.0),
                               np.diag([1, -1]))
    p = ChargeQubitParams(0.0, 1.0, d_tc=0.1)
    np.testing.assert_allclose(hamiltonian_computational(p, 0.0), np.diag([1.1, -1.1]))


def test_computational_is_basis_change_up_to_sign():
    v = POSITION_TO_COMPUTATIONAL
    for tc, eps in [(1.0, 0.0), (0.7, 1.3), (2.0, -0.4)]:
        p = ChargeQubitParams(0.0, tc)
        h0 = hamiltonian_lab_position(p, eps)
        hc = hamiltonian_computational(p, eps)
        np.testing.assert_allclose(hc, -(v.conj().T @ h0 @ v), atol=1e-14)
        np.testing.assert_allclose(np.linalg.eigvalsh(hc), np.linalg.eigvalsh(h0), atol=1e-14)


def test_rotating_hamiltonian_cases():
    p = ChargeQubitParams(0.0, TC)
    seg = MicrowaveSegment(A_EPS, 0.0, 1.0)
    h = hamiltonian_rotating(p, seg, 2 * TC, 0.0)
    assert h[0, 1] == pytest.approx(A_EPS)
    assert h[0, 0] == pytest.approx(0.0, abs=1e-12)
    h = hamiltonian_rotating(p.with_noise(0.0, 0.2), seg, 2 * TC, 0.3)
    np.testing.assert_allclose(np.diag(h).real, [0.2, -0.2], atol=1e-12)


def test_rotating_hamiltonian_averages_to_rwa():
    p = ChargeQubitParams(0.0, TC)
    for chi in (0.0, 0.7, -2.0):
        seg = MicrowaveSegment(A_EPS, chi, 1.0)
        omega = 2 * TC
        ts = np.linspace(0.0, 2 * math.pi / omega, 2001)[:-1]
        avg = np.mean([hamiltonian_rotating(p, seg, omega, t) for t in ts], axis=0)
        np.testing.assert_allclose(avg, hamiltonian_rwa(seg), atol=1e-10)
        np.testing.assert_allclose(hamiltonian_rwa(seg),
                                   0.5 * A_EPS * (math.cos(chi) * SX + math.sin(chi) * SY))


def test_rotating_hamiltonian_broadcasts_noise():
    p = ChargeQubitParams(0.0, TC, d_eps=np.array([0.0, 0.3]), d_tc=np.array([0.1, -0.1]))
    h = hamiltonian_rotating(p, MicrowaveSegment(A_EPS, 0.2, 1.0), 2 * TC, 0.05)
    assert h.shape == (2, 2, 2)
    one = hamiltonian_rotating(ChargeQubitParams(0.0, TC, 0.3, -0.1),
                               MicrowaveSegment(A_EPS, 0.2, 1.0), 2 * TC, 0.05)
    np.testing.assert_allclose(h[1], one)


def test_energy_splitting_expansion():
    assert energy_splitting_expansion(0.0, 1.0) == pytest.approx((2.0, 0.0, 2.0))
    assert energy_splitting_expansion(3.0, 2.0) == pytest.approx((5.0, 0.6, 1.6))
    assert energy_splitting_expansion(4.0, 1e-12) == pytest.approx((4.0, 1.0, 0.0), abs=1e-9)
    with pytest.raises(ValueError):
        energy_splitting_expansion(0.0, 0.0)


def test_geometric_not_schedule():
    sched = synthesize_geometric_gate(GEOMETRIC_NOT, A_EPS)
    durations = [s.duration for s in sched.segments]
    phases = [s.phase for s in sched.segments]
    np.testing.assert_allclose(durations, [0.125, 0.25, 0.125])
    np.testing.assert_allclose(phases, [-math.pi / 2, -math.pi, -math.pi / 2])
    assert sched.duration == pytest.approx(0.5)
    np.testing.assert_allclose(sched.boundaries, [0.0, 0.125, 0.375, 0.5])


def test_theta_zero_drops_first_segment():
    sched = synthesize_geometric_gate(GeometricGateSpec(0.4, 0.0, 0.0), A_EPS)
    assert len(sched.segments) == 2
    assert sched.segments[0].duration == pytest.approx(math.pi / A_EPS)


def test_geometric_closure_against_bruteforce_oracle():
    grid = np.linspace(-math.pi, math.pi, 7)
    thetas = np.linspace(0.0, math.pi, 6)
    for gamma, theta, phi in itertools.product(grid, thetas, grid[:4]):
        spec = GeometricGateSpec(gamma, theta, phi)
        sched = synthesize_geometric_gate(spec, A_EPS)
        u = np.eye(2)
        for s in sched.segments:
            u = oracles.rwa_segment(s.amplitude, s.phase, s.duration) @ u
        ref = oracles.su2_rotation(gamma, theta, phi)
        assert gate_distance_up_to_phase(u, ref) < 1e-10
        assert gate_distance_up_to_phase(rwa_unitary(sched), ideal_geometric_unitary(spec)) < 1e-10


def test_ideal_geometric_unitary_cases():
    np.testing.assert_allclose(ideal_geometric_unitary(GEOMETRIC_NOT), -1j * SX, atol=1e-15)
    np.testing.assert_allclose(ideal_geometric_unitary(GeometricGateSpec(0.0, 1.0, 2.0)), I2)


def test_dressed_states_are_eigenvectors():
    rng = np.random.default_rng(11)
    for _ in range(20):
        gamma, theta, phi = rng.uniform(-math.pi, math.pi), rng.uniform(0, math.pi), rng.uniform(0, 6)
        u = ideal_geometric_unitary(GeometricGateSpec(gamma, theta, phi))
        plus, minus = dressed_states(theta, phi)
        np.testing.assert_allclose(u @ plus, np.exp(1j * gamma) * plus, atol=1e-12)
        np.testing.assert_allclose(u @ minus, np.exp(-1j * gamma) * minus, atol=1e-12)


def test_dynamical_gate_cases():
    sched = synthesize_dynamical_gate(0.0, math.pi, A_EPS)
    assert len(sched.segments) == 1
    assert sched.duration == pytest.approx(0.25)
    assert gate_distance_up_to_phase(rwa_unitary(sched), SX) < 1e-14
    np.testing.assert_allclose(dynamical_unitary(0.3, 2 * math.pi), -I2, atol=1e-14)
    ref = oracles.rwa_segment(1.0, math.pi / 2, math.pi / 2)
    np.testing.assert_allclose(dynamical_unitary(math.pi / 2, math.pi / 2), ref, atol=1e-14)


def test_schedule_validation():
    with pytest.raises(ValueError):
        MicrowaveSegment(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        GeometricGateSpec(0.1, 4.0, 0.0)
    with pytest.raises(ValueError):
        synthesize_dynamical_gate(0.0, -1.0, A_EPS)
    sched = PulseSchedule((MicrowaveSegment(A_EPS, 0.0, 0.25),), omega=TC)
    with pytest.raises(ValueError):
        evolve_gate(ChargeQubitParams(0.0, TC), sched, 0.0, ground_state())


@pytest.mark.parametrize("kind", ["geometric", "dynamical"])
def test_noiseless_not_against_oracle(kind):
    p = ChargeQubitParams(0.0, TC)
    if kind == "geometric":
        sched, ideal = synthesize_geometric_gate(GEOMETRIC_NOT, A_EPS), ideal_geometric_unitary(GEOMETRIC_NOT)
    else:
        sched, ideal = synthesize_dynamical_gate(0.0, math.pi, A_EPS), dynamical_unitary(0.0, math.pi)
    f = simulate_gate(p, sched, 0.0, ground_state(), ideal)
    rho = oracles.single_qubit_gate([(s.amplitude, s.phase, s.duration) for s in sched.segments], TC)
    assert f > 0.995
    assert f == pytest.approx(np.real(np.trace(NOT_TARGET @ rho)), abs=1e-6)


def test_small_tunneling_is_worse():
    sched = synthesize_geometric_gate(GEOMETRIC_NOT, A_EPS)
    ideal = ideal_geometric_unitary(GEOMETRIC_NOT)
    lo = simulate_gate(ChargeQubitParams(0.0, ghz(2.0)), sched, 0.0, ground_state(), ideal)
    hi = simulate_gate(ChargeQubitParams(0.0, TC), sched, 0.0, ground_state(), ideal)
    assert lo < hi


def test_relaxation_against_oracle():
    p = ChargeQubitParams(0.0, TC)
    sched = synthesize_geometric_gate(GEOMETRIC_NOT, A_EPS)
    f = simulate_gate(p, sched, 0.1, ground_state(), ideal_geometric_unitary(GEOMETRIC_NOT))
    rho = oracles.single_qubit_gate([(s.amplitude, s.phase, s.duration) for s in sched.segments],
                                    TC, gamma1=0.1)
    assert f == pytest.approx(np.real(rho[1, 1]), abs=1e-6)


def test_strong_relaxation_pins_to_ground():
    # decay much faster than the gate keeps the qubit near |0>, so the NOT fidelity collapses
    gamma1 = 2000.0
    p = ChargeQubitParams(0.0, TC)
    sched = synthesize_geometric_gate(GEOMETRIC_NOT, A_EPS)
    f = simulate_gate(p, sched, gamma1, ground_state(), ideal_geometric_unitary(GEOMETRIC_NOT),
                      dt=1e-5)
    rho = oracles.single_qubit_gate([(s.amplitude, s.phase, s.duration) for s in sched.segments],
                                    TC, gamma1=gamma1)
    assert f < 1e-4
    assert f == pytest.approx(np.real(rho[1, 1]), rel=1e-3)


def test_batched_noise_matches_individual_runs():
    sched = synthesize_dynamical_gate(0.0, math.pi, A_EPS)
    ideal = dynamical_unitary(0.0, math.pi)
    d_eps = np.array([0.0, 1.5, -3.0])
    d_tc = np.array([0.5, 0.0, 2.0])
    batch = simulate_gate(ChargeQubitParams(0.0, TC, d_eps, d_tc), sched, 0.05, ground_state(), ideal)
    for k in range(3):
        one = simulate_gate(ChargeQubitParams(0.0, TC, d_eps[k], d_tc[k]), sched, 0.05,
                            ground_state(), ideal)
        assert batch[k] == pytest.approx(one, abs=1e-12)


def test_detuned_realization_against_oracle():
    p = ChargeQubitParams(0.0, TC, d_eps=2.0, d_tc=1.5)
    sched = synthesize_geometric_gate(GEOMETRIC_NOT, A_EPS)
    f = simulate_gate(p, sched, 0.1, ground_state(), ideal_geometric_unitary(GEOMETRIC_NOT))
    rho = oracles.single_qubit_gate([(s.amplitude, s.phase, s.duration) for s in sched.segments],
                                    TC, gamma1=0.1, d_eps=2.0, d_tc=1.5)
    assert f == pytest.approx(np.real(rho[1, 1]), abs=1e-6)
