"""Geometric and dynamical gates for microwave-driven double-quantum-dot charge qubits."""

__version__ = "0.1.0"

TWO_PI = 2.0 * 3.141592653589793


def ghz(f):
    """Ordinary frequency f/2pi in GHz -> angular frequency in rad/ns."""
    return TWO_PI * f


def mhz(f):
    """Ordinary frequency f/2pi in MHz -> angular frequency in rad/ns."""
    return TWO_PI * f * 1e-3
