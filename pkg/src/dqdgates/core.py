"""Dense complex linear algebra and state utilities.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128. Energies are
angular frequencies in rad/ns and times are in ns throughout the package.
"""
import numpy as np

# Planck constant in eV s; 1 ueV -> h^-1 * 1e-6 eV = 0.2418 GHz
PLANCK_EV_S = 4.135667696e-15
UEV_TO_GHZ = 1e-6 / PLANCK_EV_S * 1e-9


def uev_to_rad_per_ns(energy_uev):
    """Convert an energy in micro-eV to an angular frequency in rad/ns."""
    return 2 * np.pi * UEV_TO_GHZ * energy_uev


I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
# lowering operator |0><1| in the {|0>, |1>} ordering
SM = np.array([[0, 1], [0, 0]], dtype=complex)
SP = SM.T.copy()


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


def as_matrix(a):
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def is_hermitian(m, tol=1e-10):
    m = as_matrix(m)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def is_unitary(m, tol=1e-10):
    m = as_matrix(m)
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) <= tol)


def dag(m):
    return np.conj(np.swapaxes(m, -1, -2))


def kron(*ops):
    """Tensor product, leftmost factor slowest-varying."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, as_matrix(op))
    return out


def basis(dim, index):
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def normalize(psi, tol=1e-10):
    psi = np.asarray(psi, dtype=complex)
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("cannot normalize the zero vector")
    return psi / norm


def check_state(psi, tol=1e-10):
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise DimensionError("state must be a vector")
    if abs(np.vdot(psi, psi).real - 1.0) > tol:
        raise ValueError("state is not normalized")
    return psi


def projector(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def check_density_matrix(rho, herm_tol=1e-10, trace_tol=1e-8, pos_tol=1e-8):
    """Raise ValueError unless rho is Hermitian, unit-trace and positive."""
    rho = as_matrix(rho)
    if not is_hermitian(rho, herm_tol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {np.trace(rho).real:.3e} != 1")
    if np.min(np.linalg.eigvalsh(rho)) < -pos_tol:
        raise ValueError("density matrix has negative eigenvalues")
    return rho


def expm_hermitian_generator(h, t):
    """Return exp(-i h t) for Hermitian h via its eigendecomposition."""
    h = as_matrix(h)
    if not is_hermitian(h):
        raise NotHermitianError("generator is not Hermitian")
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def state_fidelity(rho_id, rho):
    """Tr[rho_id rho] for density matrices of equal dimension."""
    rho_id = as_matrix(rho_id)
    rho = as_matrix(rho)
    if rho_id.shape != rho.shape:
        raise DimensionError(f"shape mismatch {rho_id.shape} vs {rho.shape}")
    return float(np.real(np.sum(rho_id.T * rho)))


def partial_trace(rho, dims, keep):
    """Reduced density matrix over the subsystems listed in ``keep``.

    ``dims`` gives the subsystem dimensions, leftmost slowest-varying. Passing
    an empty ``keep`` traces everything out and returns a 1x1 matrix.
    """
    rho = as_matrix(rho)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != rho.shape[0] or any(d < 1 for d in dims):
        raise DimensionError(f"dims {dims} inconsistent with matrix of size {rho.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"keep indices {keep} out of range")
    n = len(dims)
    t = rho.reshape(dims + dims)
    traced = [k for k in range(n) if k not in keep]
    # trace pairs from the highest index down so axis numbers stay valid
    for k in sorted(traced, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + m)
    d = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d, d)


def gate_distance_up_to_phase(u, v, tol=1e-8):
    """1 - |Tr(U^dag V)|/d; zero iff U and V agree up to a global phase."""
    u = as_matrix(u)
    v = as_matrix(v)
    if u.shape != v.shape:
        raise DimensionError(f"shape mismatch {u.shape} vs {v.shape}")
    if not (is_unitary(u, tol) and is_unitary(v, tol)):
        raise NotUnitaryError("gate distance requires unitary arguments")
    d = u.shape[0]
    return max(0.0, 1.0 - abs(np.trace(u.conj().T @ v)) / d)
