"""Hamiltonian builders for the diamond-coupled four-qubit register.

The diamond model couples a left qubit (1) and a right qubit (4) to a gate
pair (2, 3):

    H = J23_z sigma_z(2) sigma_z(3)
        + sum_{i<j} J_ij [sigma_+(i) sigma_-(j) + sigma_-(i) sigma_+(j)]

with real coupling strengths (an XXZ bond inside the gate, XX bonds
elsewhere).  Every builder returns a dense 16 x 16 Hermitian matrix in the
basis convention of :mod:`spintransistor.operators` and commutes with the
total spin projection, except the gate drive which moves between projection
sectors by design.

The hardware-flavored variant keeps the left/right qubits detuned by Delta
from the gate qubits.  In the frame rotating with the bare qubit splittings
the couplings to the outer qubits oscillate:

    H(t) = J_z sigma_z(2) sigma_z(3) + J_x [s+(2)s-(3) + s-(2)s+(3)]
           + J_2 (s+(1) + s+(4)) (s-(2) - s-(3)) e^{+i Delta t} + h.c.

and the circuit realization adds a weak direct cross-talk
J_4 [s+(1)s-(4) + h.c.] between the outer qubits.
"""

import dataclasses
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import units
from .operators import exchange, pauli

_PAIRS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


def _frozen(a):
    a.flags.writeable = False
    return a


# fixed operator content of the hardware model; couplings only scale these
_GATE_ZZ = _frozen(pauli(2, "z") @ pauli(3, "z"))
_GATE_XX = _frozen(exchange(2, 3))
_OUTER_XX = _frozen(exchange(1, 4))
_SLOW_COUPLER = _frozen((pauli(1, "+") + pauli(4, "+"))
                        @ (pauli(2, "-") - pauli(3, "-")))
_GATE_RAISING = _frozen(pauli(2, "+") + pauli(3, "+"))


@dataclass(frozen=True)
class GeneralCouplings:
    """Coupling strengths of the general diamond model, in rad/s.

    J12..J34 are the XX strengths for each qubit pair; J23_z is the extra
    ZZ strength inside the gate pair.
    """

    J23_z: float = 0.0
    J12: float = 0.0
    J13: float = 0.0
    J14: float = 0.0
    J23: float = 0.0
    J24: float = 0.0
    J34: float = 0.0

    def x(self, i, j):
        """XX coupling strength for the unordered pair (i, j)."""
        i, j = min(i, j), max(i, j)
        if (i, j) not in _PAIRS:
            raise ValueError(f"no qubit pair ({i}, {j})")
        return getattr(self, f"J{i}{j}")

    @classmethod
    def reduced(cls, J, Jz):
        """Two-parameter transistor model: J12 = J24 = -J13 = -J34 = J.

        The sign pattern makes the symmetric closed-gate state dark, and the
        gate XX bond is dropped because it only adds unwanted interference.
        """
        return cls(J23_z=Jz, J12=J, J24=J, J13=-J, J34=-J, J14=0.0, J23=0.0)


@dataclass(frozen=True)
class DiamondCouplings:
    """Spin-model parameter set of the hardware variant, in rad/s.

    Omega is the gate-qubit frequency, Delta the detuning of the outer
    qubits from the gate qubits; J_z and J_x are the gate-pair ZZ and XX
    strengths, J_2 the outer-to-gate coupling and J_4 the parasitic direct
    outer-outer coupling.
    """

    J_z: float
    J_x: float
    J_2: float
    J_4: float
    Omega: float
    Delta: float

    @classmethod
    def from_table_units(cls, Omega_ghz, Delta_ghz, Jz_mhz,
                         Jx_over_Jz, J2_over_Jz, J4_over_Jz=0.0):
        """Build from values as printed in hardware parameter tables.

        Frequencies are cyclic ("X / 2pi GHz" columns); the J ratios are
        dimensionless multiples of J_z.
        """
        Jz = units.mhz(Jz_mhz)
        return cls(J_z=Jz, J_x=Jx_over_Jz * Jz, J_2=J2_over_Jz * Jz,
                   J_4=J4_over_Jz * Jz, Omega=units.ghz(Omega_ghz),
                   Delta=units.ghz(Delta_ghz))

    def replace(self, **kwargs):
        return dataclasses.replace(self, **kwargs)

    def summary(self):
        return (f"J_z/2pi = {units.to_mhz(self.J_z):+.4g} MHz, "
                f"J_x/J_z = {self.J_x / self.J_z:.4g}, "
                f"J_2/J_z = {self.J_2 / self.J_z:.4g}, "
                f"J_4/J_z = {self.J_4 / self.J_z:.4g}, "
                f"Omega/2pi = {units.to_ghz(self.Omega):+.4g} GHz, "
                f"Delta/2pi = {units.to_ghz(self.Delta):+.4g} GHz")


def reference_couplings():
    """Spin-model working point derived from the reference circuit design."""
    return DiamondCouplings.from_table_units(
        Omega_ghz=-13.67, Delta_ghz=1.067, Jz_mhz=-41.99,
        Jx_over_Jz=0.8690, J2_over_Jz=0.3003, J4_over_Jz=-9.898e-4)


def resonant_couplings(J_z, m=1):
    """Resonant (Delta = 0) working point with perfect transfer order m.

    Sets J_2 = sqrt(m^2 - 1/4) |J_z| so that an open gate swaps the outer
    qubits exactly at t_f = pi/|J_z|; J_x and J_4 are zero.
    """
    if J_z == 0:
        raise ValueError("J_z must be nonzero")
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise ValueError(f"transfer order m must be a positive integer, got {m}")
    return DiamondCouplings(J_z=J_z, J_x=0.0, J_2=np.sqrt(m**2 - 0.25) * abs(J_z),
                            J_4=0.0, Omega=0.0, Delta=0.0)


@dataclass(frozen=True)
class DriveParams:
    """Gate-drive amplitude and frequency (both rad/s); amplitude >= 0."""

    amplitude: float
    omega_d: float

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError("drive amplitude must be >= 0")

    @classmethod
    def resonant(cls, amplitude, couplings):
        """Drive at omega_d = |Omega - 3 J_z|, the open/closed splitting.

        This is the exact two-level spacing when J_x = -J_z; see
        :func:`gate_transition_gap` for the general expression.
        """
        wd = abs(couplings.Omega - 3.0 * couplings.J_z)
        return cls(amplitude=amplitude, omega_d=wd)


def gate_transition_gap(couplings):
    """Exact open/closed transition frequency |Omega + J_x - 2 J_z|.

    In the frame where the drive carries e^{+-i Omega t} phases, the open
    gate state |dd> sits at J_z and the closed state at J_x - J_z, so the
    resonance condition is omega_d = |Omega + J_x - 2 J_z|.  This coincides
    with |Omega - 3 J_z| exactly when J_x = -J_z.
    """
    return abs(couplings.Omega + couplings.J_x - 2.0 * couplings.J_z)


def diamond_hamiltonian(c: GeneralCouplings):
    """General diamond model for real couplings; time independent."""
    h = c.J23_z * (pauli(2, "z") @ pauli(3, "z"))
    for (i, j) in _PAIRS:
        jx = c.x(i, j)
        if jx != 0.0:
            h = h + jx * exchange(i, j)
    return h


@lru_cache(maxsize=128)
def rotating_frame_terms(c: DiamondCouplings):
    """Constant and oscillating parts (H_static, H_slow) of the rotating frame.

    The full Hamiltonian is H(t) = H_static + e^{+i Delta t} H_slow + h.c.
    Splitting it this way lets propagators rebuild H(t) from two fixed
    matrices and one phase per evaluation.  Cached per couplings; the
    returned arrays are read-only.
    """
    h_static = c.J_z * _GATE_ZZ + c.J_x * _GATE_XX
    h_slow = c.J_2 * _SLOW_COUPLER
    return _frozen(h_static), _frozen(h_slow)


def rotating_frame_hamiltonian(c: DiamondCouplings, t):
    """Rotating-frame diamond model at time t (no cross-talk term)."""
    h_static, h_slow = rotating_frame_terms(c)
    phase = np.exp(1j * c.Delta * t)
    return h_static + phase * h_slow + np.conj(phase) * h_slow.conj().T


@lru_cache(maxsize=128)
def circuit_terms(c: DiamondCouplings):
    """Like :func:`rotating_frame_terms` but with the J_4 cross-talk included."""
    h_static, h_slow = rotating_frame_terms(c)
    return _frozen(h_static + c.J_4 * _OUTER_XX), h_slow


def circuit_hamiltonian(c: DiamondCouplings, t):
    """Circuit-realized model at time t: rotating frame plus J_4 cross-talk."""
    h_static, h_slow = circuit_terms(c)
    phase = np.exp(1j * c.Delta * t)
    return h_static + phase * h_slow + np.conj(phase) * h_slow.conj().T


def drive_hamiltonian(d: DriveParams, Omega, t):
    """Gate-pair drive in the interaction picture at time t.

    H_d(t) = i A cos(omega_d t) [ (s+(2) + s+(3)) e^{+i Omega t}
                                  - (s-(2) + s-(3)) e^{-i Omega t} ],

    Hermitian by the relative minus sign between the raising and lowering
    blocks.  The drive addresses the gate qubits symmetrically, so the
    antisymmetric gate singlet stays decoupled.
    """
    raising = _GATE_RAISING * np.exp(1j * Omega * t)
    block = raising - raising.conj().T
    return 1j * d.amplitude * np.cos(d.omega_d * t) * block


def lab_frame_splitting(c: DiamondCouplings):
    """Bare qubit splittings H_0: outer qubits at Omega + Delta, gate at Omega."""
    return (0.5 * (c.Omega + c.Delta) * (pauli(1, "z") + pauli(4, "z"))
            + 0.5 * c.Omega * (pauli(2, "z") + pauli(3, "z")))


def lab_frame_interaction(c: DiamondCouplings):
    """Static interaction H_int with bare sigma_x sigma_x couplings."""
    sx = [None] + [pauli(q, "x") for q in range(1, 5)]
    return (c.J_z * (pauli(2, "z") @ pauli(3, "z"))
            + c.J_x * (sx[2] @ sx[3])
            + c.J_2 * ((sx[1] + sx[4]) @ (sx[2] - sx[3])))


def lab_frame_hamiltonian(c: DiamondCouplings):
    """Full static lab-frame Hamiltonian H_0 + H_int.

    Transforming with U = e^{+i H_0 t} and dropping terms that oscillate at
    2 Omega + Delta and 2 Omega recovers :func:`rotating_frame_hamiltonian`;
    the residual disagreement of the two pictures is the accuracy of that
    rotating wave approximation.
    """
    return lab_frame_splitting(c) + lab_frame_interaction(c)
