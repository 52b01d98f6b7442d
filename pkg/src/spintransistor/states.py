"""Pure states, gate configurations and density-matrix validation."""

import numpy as np

from .operators import DIM

UP = np.array([1.0, 0.0], dtype=complex)
DOWN = np.array([0.0, 1.0], dtype=complex)


def qubit_state(a, b):
    """Normalized single-qubit state a|up> + b|down>."""
    v = np.array([a, b], dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero amplitudes")
    return v / n


def left_state(r, theta):
    """Left-qubit input family (|up> + r e^{i theta} |down>) / sqrt(1 + r^2)."""
    return qubit_state(1.0, r * np.exp(1j * theta))


def gate_open():
    """Gate pair configuration |down,down> that lets state transfer through."""
    return np.kron(DOWN, DOWN)


def gate_closed(theta=np.pi / 4):
    """Gate pair configuration cos(theta)|up,down> + sin(theta)|down,up>.

    The default theta = pi/4 gives the symmetric combination that blocks
    transfer exactly (a dark state of the couplings to the outer qubits).
    """
    return np.cos(theta) * np.kron(UP, DOWN) + np.sin(theta) * np.kron(DOWN, UP)


def gate_singlet():
    """Antisymmetric gate-pair state (|up,down> - |down,up>) / sqrt(2)."""
    return (np.kron(UP, DOWN) - np.kron(DOWN, UP)) / np.sqrt(2)


def product_state(left, gate, right):
    """Four-qubit product state |left> (x) |gate pair> (x) |right>."""
    psi = np.kron(np.asarray(left, dtype=complex),
                  np.kron(np.asarray(gate, dtype=complex),
                          np.asarray(right, dtype=complex)))
    if psi.shape != (DIM,):
        raise ValueError(f"product state has dim {psi.shape}, expected ({DIM},)")
    return psi


def density(psi):
    """Density matrix |psi><psi| of a pure state."""
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def check_pure_state(psi, tol=1e-9):
    """Raise unless psi is a normalized state vector."""
    psi = np.asarray(psi)
    if psi.ndim != 1:
        raise ValueError(f"pure state must be a vector, got shape {psi.shape}")
    n = np.linalg.norm(psi)
    if abs(n - 1.0) > tol:
        raise ValueError(f"state norm {n} deviates from 1 beyond {tol}")
    return psi


def check_density_matrix(rho, tol=1e-9, eig_tol=1e-9):
    """Raise unless rho is Hermitian, unit trace and positive to tolerance."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise ValueError(f"trace {tr} deviates from 1 beyond {tol}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian to tolerance")
    min_eig = float(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min())
    if min_eig < -eig_tol:
        raise ValueError(f"density matrix has eigenvalue {min_eig} < -{eig_tol}")
    return rho
