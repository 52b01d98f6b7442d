"""Unit conventions and physical constants.

Internally every frequency, coupling strength and decay rate is an angular
frequency in rad/s, and every time is in seconds.  Parameter tables for
superconducting hardware quote cyclic frequencies ("f / 2pi GHz" style), so
the helpers below convert on ingestion and for display.

Circuit energies are handled in units of h * GHz (i.e. E/h in GHz), which is
what a "E / 2pi GHz" table column means once hbar is restored.
"""

import numpy as np

TWO_PI = 2.0 * np.pi

# CODATA 2018 exact values
ELEMENTARY_CHARGE = 1.602176634e-19  # C
PLANCK = 6.62607015e-34              # J s
HBAR = PLANCK / TWO_PI
FLUX_QUANTUM = PLANCK / (2.0 * ELEMENTARY_CHARGE)        # Phi_0 = h/2e, Wb
REDUCED_FLUX_QUANTUM = FLUX_QUANTUM / TWO_PI             # Phi_0 / 2pi


def ghz(f):
    """Angular frequency (rad/s) of a cyclic frequency given in GHz."""
    return TWO_PI * 1e9 * np.asarray(f)


def mhz(f):
    """Angular frequency (rad/s) of a cyclic frequency given in MHz."""
    return TWO_PI * 1e6 * np.asarray(f)


def to_ghz(omega):
    """Cyclic GHz value of an angular frequency in rad/s."""
    return np.asarray(omega) / (TWO_PI * 1e9)


def to_mhz(omega):
    """Cyclic MHz value of an angular frequency in rad/s."""
    return np.asarray(omega) / (TWO_PI * 1e6)


def us(t):
    """Seconds from microseconds."""
    return np.asarray(t) * 1e-6


def to_us(t):
    """Microseconds from seconds."""
    return np.asarray(t) * 1e6


def inductive_energy_ghz(inductance_nh):
    """(Phi_0/2pi)^2 / L in units of h*GHz, for L in nH.

    For L = 20 nH this evaluates to about 8.17 GHz.
    """
    L = np.asarray(inductance_nh) * 1e-9
    return REDUCED_FLUX_QUANTUM**2 / (L * PLANCK) / 1e9


def pair_charging_energy_ghz(kinv_per_ff):
    """(2e)^2 * (K^-1)_(i,j) in units of h*GHz, for a K^-1 entry in 1/fF.

    K is the capacitance matrix of the circuit Lagrangian, so its inverse
    entries carry units of one over capacitance.
    """
    kinv = np.asarray(kinv_per_ff) * 1e15  # 1/fF -> 1/F
    return (2.0 * ELEMENTARY_CHARGE) ** 2 * kinv / PLANCK / 1e9


def kinv_per_ff_from_pair_energy_ghz(energy_ghz):
    """Inverse of :func:`pair_charging_energy_ghz`."""
    e = np.asarray(energy_ghz) * 1e9 * PLANCK
    return e / (2.0 * ELEMENTARY_CHARGE) ** 2 / 1e15
