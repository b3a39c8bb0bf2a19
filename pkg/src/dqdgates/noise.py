"""Quasistatic Gaussian charge noise and Monte Carlo fidelity averaging.

Realization ``i`` draws its offsets from a generator seeded by the pair
``(master_seed, i)``, so results do not depend on how realizations are
grouped or scheduled across workers.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math
import os

import numpy as np

from .charge_qubit import ground_state, simulate_gate
from .core import uev_to_rad_per_ns
from .lindblad import IntegrationError

HBAR_EV_S = 6.582119569e-16
THREADS_ENV = "DQDGATES_THREADS"
# fixed grouping of realizations; independent of the worker count
CHUNK_SIZE = 250


@dataclass(frozen=True)
class NoiseSpec:
    sigma_eps: float
    sigma_tc: float

    def __post_init__(self):
        if self.sigma_eps < 0 or self.sigma_tc < 0:
            raise ValueError("noise strengths must be non-negative")


@dataclass(frozen=True)
class MonteCarloConfig:
    n_realizations: int = 1000
    master_seed: int = 0

    def __post_init__(self):
        if int(self.n_realizations) < 1:
            raise ValueError("n_realizations must be >= 1")


@dataclass
class MonteCarloResult:
    mean: float
    std_error: float
    fidelities: np.ndarray


class RealizationError(RuntimeError):
    def __init__(self, message, index, master_seed):
        super().__init__(message)
        self.index = index
        self.master_seed = master_seed


def _generator(master_seed, index):
    seq = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, int(index)])
    return np.random.default_rng(seq)


def sample_realization(spec, master_seed, index):
    """(d_eps, d_tc) for one realization, deterministic in (master_seed, index)."""
    z = _generator(master_seed, index).standard_normal(2)
    return spec.sigma_eps * z[0], spec.sigma_tc * z[1]


def sample_offsets(spec, master_seed, indices):
    z = np.array([_generator(master_seed, i).standard_normal(2) for i in indices]).reshape(-1, 2)
    return spec.sigma_eps * z[:, 0], spec.sigma_tc * z[:, 1]


def sigma_eps_from_spectrum(c_eps, omega_l):
    """Detuning noise width from a 1/f amplitude c_eps (ueV) and low cutoff omega_l (rad/s).

    Returns (sigma in ueV, sigma in rad/ns).
    """
    hbar_omega = HBAR_EV_S * omega_l * 1e6  # ueV
    arg = math.sqrt(2 * math.pi) * c_eps / hbar_omega
    if not arg > 1:
        raise ValueError(f"log argument {arg:.4g} must exceed 1")
    sigma = c_eps * math.sqrt(2 * math.log(arg))
    return sigma, uev_to_rad_per_ns(sigma)


def worker_count(default=1):
    value = os.environ.get(THREADS_ENV)
    if value is None:
        return default
    n = int(value)
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1")
    return n


def mean_and_error(values):
    values = [float(v) for v in values]
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def monte_carlo_fidelity(p, schedule, spec, cfg, gamma1, ideal, rho0=None, dt=None, workers=None):
    """Average the gate fidelity over quasistatic noise realizations.

    Each realization adds its sampled (d_eps, d_tc) to the mean parameters in
    ``p`` and runs :func:`simulate_gate`. The reduction is in ascending index
    order with compensated summation.
    """
    if rho0 is None:
        rho0 = ground_state()
    n = int(cfg.n_realizations)
    chunks = [range(s, min(s + CHUNK_SIZE, n)) for s in range(0, n, CHUNK_SIZE)]

    def run(idx):
        d_eps, d_tc = sample_offsets(spec, cfg.master_seed, idx)
        q = p.with_noise(p.d_eps + d_eps, p.d_tc + d_tc)
        try:
            return np.atleast_1d(simulate_gate(q, schedule, gamma1, rho0, ideal, dt=dt))
        except IntegrationError as exc:
            bad = idx[exc.failed[0]] if exc.failed else idx[0]
            raise RealizationError(
                f"realization {bad} (master_seed={cfg.master_seed}) failed: {exc}",
                index=bad, master_seed=cfg.master_seed) from exc

    workers = workers or worker_count()
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    fids = np.concatenate(parts)
    mean, se = mean_and_error(fids)
    return MonteCarloResult(mean, se, fids)
