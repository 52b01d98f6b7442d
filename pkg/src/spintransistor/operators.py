"""Pauli operators, tensor embeddings and spin-projection sectors.

Basis convention, fixed once for the whole package: the four-qubit register
lives on computational indices b in [0, 16).  Qubit 1 (the left qubit L) is
the most significant bit and qubit 4 (the right qubit R) the least
significant.  Bit value 0 encodes |up>, so sigma_z |up> = +|up> and, e.g.,
|up,down,down,down> sits at index 0b0111 = 7.
"""

from dataclasses import dataclass

import numpy as np

N_QUBITS = 4
DIM = 2**N_QUBITS

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |down> -> |up>
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |up> -> |down>

PAULI = {
    "x": SIGMA_X,
    "y": SIGMA_Y,
    "z": SIGMA_Z,
    "+": SIGMA_PLUS,
    "-": SIGMA_MINUS,
}


def kron_all(ops):
    """Kronecker product of a sequence of matrices, leftmost factor first."""
    out = np.array([[1.0]], dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def embed(op, qubit):
    """Lift a single-qubit operator to the 16-dim register at `qubit` (1..4)."""
    if not 1 <= qubit <= N_QUBITS:
        raise ValueError(f"qubit label must be in 1..{N_QUBITS}, got {qubit}")
    ops = [IDENTITY_2] * N_QUBITS
    ops[qubit - 1] = np.asarray(op, dtype=complex)
    return kron_all(ops)


def pauli(qubit, axis):
    """16-dim Pauli operator sigma_axis acting on one qubit.

    `axis` is one of 'x', 'y', 'z', '+', '-'; sigma_+- = (sigma_x +- i sigma_y)/2.
    """
    try:
        op = PAULI[axis]
    except KeyError:
        raise ValueError(f"axis must be one of {sorted(PAULI)}, got {axis!r}") from None
    return embed(op, qubit)


def total_sz():
    """Sum of sigma_z over all four qubits (twice the total spin projection)."""
    return sum(pauli(q, "z") for q in range(1, N_QUBITS + 1))


def exchange(i, j):
    """Hopping term sigma_+(i) sigma_-(j) + sigma_-(i) sigma_+(j)."""
    return pauli(i, "+") @ pauli(j, "-") + pauli(i, "-") @ pauli(j, "+")


def commutator(a, b):
    return a @ b - b @ a


def max_abs(a):
    """Largest entrywise magnitude, the norm used for operator identities."""
    return float(np.abs(a).max())


def is_hermitian(h, tol=1e-12):
    return max_abs(h - h.conj().T) <= tol


def ket(label):
    """Basis state from a 4-character string of 'u'/'d', qubit 1 first.

    ket('uddd') is |up,down,down,down>.
    """
    if len(label) != N_QUBITS or any(c not in "ud" for c in label):
        raise ValueError(f"label must be 4 chars of 'u'/'d', got {label!r}")
    index = 0
    for c in label:
        index = (index << 1) | (0 if c == "u" else 1)
    v = np.zeros(DIM, dtype=complex)
    v[index] = 1.0
    return v


def basis_label(index):
    """Inverse of :func:`ket`: the 'u'/'d' string of a basis index."""
    return "".join("u" if (index >> (N_QUBITS - 1 - q)) & 1 == 0 else "d"
                   for q in range(N_QUBITS))


SECTOR_KS = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class SpinSector:
    """Eigenspace of the total spin projection Sum sigma_z / 2 = k."""

    k: int
    indices: tuple

    @property
    def dim(self):
        return len(self.indices)

    def projector(self):
        """16 x dim isometry whose columns are the sector basis states."""
        p = np.zeros((DIM, self.dim), dtype=complex)
        for col, idx in enumerate(self.indices):
            p[idx, col] = 1.0
        return p

    def restrict(self, op):
        """dim x dim block of a 16-dim operator in this sector's basis."""
        p = self.projector()
        return p.conj().T @ np.asarray(op) @ p


def sector(k):
    """Sector of total spin projection k, with basis ordered by basis index.

    The dimensions are (1, 4, 6, 4, 1) for k = (-2, -1, 0, 1, 2).  For
    k = -1 the ordered basis is the single up-spin placed on qubit 1
    through qubit 4, i.e. (|uddd>, |dudd>, |ddud>, |dddu>).
    """
    if k not in SECTOR_KS:
        raise ValueError(f"total spin projection k must be in {SECTOR_KS}, got {k}")
    n_down = 2 - k  # each down-spin lowers Sum sigma_z by 2 from +4
    indices = tuple(b for b in range(DIM) if bin(b).count("1") == n_down)
    return SpinSector(k=k, indices=indices)


SINGLE_EXCITATION = sector(-1)
