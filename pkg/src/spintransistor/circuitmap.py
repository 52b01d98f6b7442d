"""Superconducting-circuit element values to spin-model parameters.

The seven circuit coordinates are, in fixed order,

    (phi_1, phi_2, phi_3, phi_4, phi_LR, phi_RR, phi_CM),

where phi_1/phi_4 are the outer transmon qubits, phi_2/phi_3 the two gate
modes built from the central nodes, phi_LR/phi_RR the coupling resonators
and phi_CM a center-of-mass mode.  Kinetic terms define the capacitance
matrix K via L_kin = (1/2) phidot^T K phidot; interaction strengths are
proportional to entries of K^-1.

Two input modes are supported.  `explicit` takes the needed K^-1 entries
directly (their closed forms in terms of element values are unwieldy and
are normally obtained from a netlist tool); `netlist` assembles K from a
documented assumed topology, which is good enough for trend studies such
as the cross-talk suppression scan but is not calibrated against the
reference design.

All energies in this module are E/h in GHz; couplings convert to angular
frequencies only on exit, when a DiamondCouplings is produced.
"""

import json
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from . import units
from .hamiltonians import DiamondCouplings

COORDINATES = ("phi_1", "phi_2", "phi_3", "phi_4", "phi_LR", "phi_RR", "phi_CM")
TRANSMON_RATIO_FLOOR = 20.0

# Gate-qubit frequency (GHz, cyclic) used to back out the common-mode
# charging energy when no (7,7) inverse entry is supplied.
DEFAULT_GATE_FREQUENCY_GHZ = -13.67


@dataclass(frozen=True)
class CircuitParams:
    """Element values: inductances in nH, Josephson energies in GHz (E/h),
    capacitances in fF."""

    L_nH: float
    L_prime_nH: float
    L_R_nH: float
    E_J_GHz: float
    E_J_prime_GHz: float
    E_q_GHz: float
    E_R_GHz: float
    C_fF: float
    C_J_fF: float
    C_prime_fF: float
    C_c_fF: float
    C_R_fF: float

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")


def reference_circuit():
    """Element values of the reference transistor design."""
    return CircuitParams(L_nH=20.0, L_prime_nH=2.0, L_R_nH=20.0,
                         E_J_GHz=38.0, E_J_prime_GHz=38.0, E_q_GHz=15.0,
                         E_R_GHz=41.0, C_fF=91.0, C_J_fF=20.0,
                         C_prime_fF=47.0, C_c_fF=17.0, C_R_fF=2000.0)


class MissingKInverseEntry(KeyError):
    """An explicit-mode K^-1 entry needed by a formula was not supplied."""


@dataclass(frozen=True)
class KMatrixSpec:
    """Capacitance-matrix input, either explicit K^-1 entries or a netlist.

    In explicit mode `entries` maps 1-based coordinate pairs (i, j) to
    (K^-1)_(i,j) in 1/fF; pairs are unordered (K^-1 is symmetric).  In
    netlist mode the matrix is assembled from the CircuitParams with the
    resonator capacitance scaled by `cr_scale`.
    """

    mode: str = "explicit"
    entries: tuple = ()        # ((i, j, value_per_fF), ...)
    cr_scale: float = 1.0

    def __post_init__(self):
        if self.mode not in ("explicit", "netlist"):
            raise ValueError(f"mode must be 'explicit' or 'netlist', got {self.mode!r}")

    @classmethod
    def explicit(cls, entries):
        """From a dict {(i, j): value_per_fF}."""
        items = tuple(sorted((min(i, j), max(i, j), float(v))
                             for (i, j), v in entries.items()))
        return cls(mode="explicit", entries=items)

    @classmethod
    def netlist(cls, cr_scale=1.0):
        return cls(mode="netlist", cr_scale=cr_scale)

    def entry_map(self):
        return {(i, j): v for (i, j, v) in self.entries}

    def kinv_per_ff(self, i, j, params: CircuitParams = None):
        """(K^-1)_(i,j) in 1/fF for 1-based coordinate indices."""
        key = (min(i, j), max(i, j))
        if self.mode == "explicit":
            table = self.entry_map()
            if key not in table:
                raise MissingKInverseEntry(
                    f"(K^-1)_({key[0]},{key[1]}) is required but was not supplied")
            return table[key]
        kinv = kinv_matrix_per_ff(params, cr_scale=self.cr_scale)
        return float(kinv[key[0] - 1, key[1] - 1])

    def has_entry(self, i, j):
        if self.mode == "netlist":
            return True
        return (min(i, j), max(i, j)) in self.entry_map()


def assemble_k_matrix_ff(params: CircuitParams, cr_scale=1.0):
    """Assemble K (in fF) for the assumed topology of the coupling network.

    Assumed capacitor placement on nodes (A, B, C, D, E, F, G):
    outer transmons A and G shunted by C; resonators B and F shunted by
    C_R; coupling capacitors C_c on A-B, B-D, E-F, F-G; junction
    capacitances C_J across C-D and C-E; central shunts C' on C, D, E.
    The placement is left/right symmetric (A<->G, B<->F, D<->E), which is
    what the antisymmetric gate couplings rely on; any refinement of the
    real network only changes numbers, not the structure of the map.
    """
    n = 7
    A, B, C, D, E, F, G = range(n)
    node = np.zeros((n, n))

    def shunt(i, c):
        node[i, i] += c

    def branch(i, j, c):
        node[i, i] += c
        node[j, j] += c
        node[i, j] -= c
        node[j, i] -= c

    p = params
    shunt(A, p.C_fF)
    shunt(G, p.C_fF)
    shunt(B, p.C_R_fF * cr_scale)
    shunt(F, p.C_R_fF * cr_scale)
    for (i, j) in ((A, B), (B, D), (E, F), (F, G)):
        branch(i, j, p.C_c_fF)
    for (i, j) in ((C, D), (C, E)):
        branch(i, j, p.C_J_fF)
    for i in (C, D, E):
        shunt(i, p.C_prime_fF)

    # coordinate transform rows: new = M @ node_fluxes
    m = np.array([
        [1, 0, 0, 0, 0, 0, 0],    # phi_1 = phi_A
        [0, 0, -1, 1, -1, 0, 0],  # phi_2 = phi_D - phi_E - phi_C
        [0, 0, 1, 1, -1, 0, 0],   # phi_3 = phi_D - phi_E + phi_C
        [0, 0, 0, 0, 0, 0, 1],    # phi_4 = phi_G
        [0, 1, 0, 0, 0, 0, 0],    # phi_LR = phi_B
        [0, 0, 0, 0, 0, 1, 0],    # phi_RR = phi_F
        [0, 0, 1, 1, 1, 0, 0],    # phi_CM = phi_C + phi_D + phi_E
    ], dtype=float)
    m_inv = np.linalg.inv(m)
    return m_inv.T @ node @ m_inv


def kinv_matrix_per_ff(params: CircuitParams, cr_scale=1.0):
    """K^-1 (in 1/fF) of the assembled netlist matrix."""
    k = assemble_k_matrix_ff(params, cr_scale=cr_scale)
    eigs = np.linalg.eigvalsh(k)
    if eigs.min() <= 0:
        raise ValueError(f"assembled K is not positive definite "
                         f"(min eigenvalue {eigs.min():.3e} fF)")
    return np.linalg.inv(k)


@dataclass(frozen=True)
class EffectiveEnergies:
    """Effective mode energies in GHz (E/h).

    E_C* are charging energies, E_J* Josephson energies and E_L*
    inductive energies of the outer (1), gate (2) and common (CM) modes.
    """

    E_C1: float
    E_C2: float
    E_CCM: float
    E_J1: float
    E_J2: float
    E_JCM: float
    E_L2: float
    E_LCM: float

    def __post_init__(self):
        for label, ej, ec in (("outer", self.E_J1, self.E_C1),
                              ("gate", self.E_J2, self.E_C2)):
            if ej / ec < TRANSMON_RATIO_FLOOR:
                warnings.warn(
                    f"{label} mode has E_J/E_C = {ej / ec:.1f} < "
                    f"{TRANSMON_RATIO_FLOOR:.0f}; outside the transmon regime",
                    stacklevel=2)

    @property
    def gate_stiffness(self):
        """E_L2 + E_J2/2, the restoring-energy combination of the gate mode."""
        return self.E_L2 + 0.5 * self.E_J2


def charging_energy_ghz(kinv_per_ff):
    """E_C = (2e)^2 (K^-1)_(i,i) / 8 in GHz."""
    return units.pair_charging_energy_ghz(kinv_per_ff) / 8.0


def solve_common_mode_charging(e_c2, e_j2, e_l2, e_jcm, e_lcm, p: CircuitParams,
                               omega_target_ghz=DEFAULT_GATE_FREQUENCY_GHZ):
    """Back out E_CCM from the gate-frequency formula at a target Omega.

    Omega depends on E_CCM only through a term proportional to
    sqrt(E_CCM), so the inversion is closed-form.  Used when no explicit
    (K^-1)_(7,7) entry is available.
    """
    stiff = e_l2 + 0.5 * e_j2
    base = (-np.sqrt(16.0 * e_c2 * stiff)
            + e_j2 * e_c2 / (2.0 * stiff)
            + e_c2 * (p.E_J_prime_GHz + p.E_J_GHz + 8.0 * p.E_q_GHz) / (16.0 * stiff))
    coeff = (5.0 * p.E_q_GHz / 32.0) * np.sqrt(e_c2 / (stiff * (e_lcm + 0.5 * e_jcm)))
    root = (omega_target_ghz - base) / coeff
    if root <= 0:
        raise ValueError(f"gate frequency target {omega_target_ghz} GHz is not "
                         f"reachable (needs sqrt(E_CCM) = {root:.3e})")
    return root**2


def effective_energies(p: CircuitParams, kspec: KMatrixSpec,
                       omega_target_ghz=DEFAULT_GATE_FREQUENCY_GHZ):
    """Effective mode energies from element values and the K matrix.

    E_C,i = (2e)^2 (K^-1)_(i,i) / 8,  E_J1 = E_R,
    E_L2 = (Phi0/2pi)^2 (1/8L + 1/8L') + (3/32)(E_J' + E_J + E_q),
    E_J2 = (E_J' + E_J + 17 E_q)/16,  E_JCM = E_q/8,  E_LCM = 3 E_q/16.

    When the common-mode diagonal entry is absent in explicit mode, E_CCM
    defaults to the value that reproduces `omega_target_ghz`.
    """
    e_c1 = charging_energy_ghz(kspec.kinv_per_ff(1, 1, p))
    e_c2 = charging_energy_ghz(kspec.kinv_per_ff(2, 2, p))
    e_j1 = p.E_R_GHz
    e_l2 = (units.inductive_energy_ghz(p.L_nH) / 8.0
            + units.inductive_energy_ghz(p.L_prime_nH) / 8.0
            + (3.0 / 32.0) * (p.E_J_prime_GHz + p.E_J_GHz + p.E_q_GHz))
    e_j2 = (p.E_J_prime_GHz + p.E_J_GHz + 17.0 * p.E_q_GHz) / 16.0
    e_jcm = p.E_q_GHz / 8.0
    e_lcm = 3.0 * p.E_q_GHz / 16.0
    if kspec.has_entry(7, 7):
        e_ccm = charging_energy_ghz(kspec.kinv_per_ff(7, 7, p))
    else:
        e_ccm = solve_common_mode_charging(e_c2, e_j2, e_l2, e_jcm, e_lcm, p,
                                           omega_target_ghz=omega_target_ghz)
    return EffectiveEnergies(E_C1=e_c1, E_C2=e_c2, E_CCM=e_ccm, E_J1=e_j1,
                             E_J2=e_j2, E_JCM=e_jcm, E_L2=e_l2, E_LCM=e_lcm)


def _common_mode_term(e: EffectiveEnergies):
    return np.sqrt(e.E_C2 * e.E_CCM
                   / (e.gate_stiffness * (e.E_LCM + 0.5 * e.E_JCM)))


def gate_frequency_ghz(e: EffectiveEnergies, p: CircuitParams):
    """Gate-qubit frequency Omega in GHz (negative for these designs)."""
    stiff = e.gate_stiffness
    return (-np.sqrt(16.0 * e.E_C2 * stiff)
            + e.E_J2 * e.E_C2 / (2.0 * stiff)
            + e.E_C2 * (p.E_J_prime_GHz + p.E_J_GHz + 8.0 * p.E_q_GHz) / (16.0 * stiff)
            + (5.0 * p.E_q_GHz / 32.0) * _common_mode_term(e))


def detuning_ghz(e: EffectiveEnergies, omega_ghz):
    """Outer-qubit detuning Delta = -sqrt(8 E_C1 E_J1) + E_C1 - Omega, GHz."""
    return -np.sqrt(8.0 * e.E_C1 * e.E_J1) + e.E_C1 - omega_ghz


def gate_zz_coupling_ghz(e: EffectiveEnergies, p: CircuitParams):
    """J_z = -E_C2 (E_J' + E_J + 8 E_q) / (64 (E_L2 + E_J2/2)), GHz."""
    return (-e.E_C2 * (p.E_J_prime_GHz + p.E_J_GHz + 8.0 * p.E_q_GHz)
            / (64.0 * e.gate_stiffness))


def gate_xx_coupling_ghz(e: EffectiveEnergies, p: CircuitParams, kinv_23_per_ff):
    """Gate XX strength J_x in GHz; mixes inductive, junction and capacitive parts."""
    stiff = e.gate_stiffness
    ratio = np.sqrt(e.E_C2 / stiff)
    return (ratio * (units.inductive_energy_ghz(p.L_prime_nH) / 4.0
                     - units.inductive_energy_ghz(p.L_nH) / 4.0)
            + ratio * ((p.E_J_prime_GHz - p.E_J_GHz) / 4.0 - p.E_q_GHz)
            + 0.25 * np.sqrt(stiff / e.E_C2)
            * units.pair_charging_energy_ghz(kinv_23_per_ff)
            - e.E_C2 * (p.E_J_prime_GHz - p.E_J_GHz - 10.0 * p.E_q_GHz)
            / (32.0 * stiff)
            + (p.E_q_GHz / 8.0) * _common_mode_term(e))


def outer_gate_coupling_ghz(e: EffectiveEnergies, kinv_13_per_ff):
    """J_2 = -(1/4) (E_J1 (E_L2 + E_J2/2) / (2 E_C1 E_C2))^(1/4) (2e)^2 (K^-1)_(1,3)."""
    quartic = (e.E_J1 * e.gate_stiffness / (2.0 * e.E_C1 * e.E_C2)) ** 0.25
    return -0.25 * quartic * units.pair_charging_energy_ghz(kinv_13_per_ff)


def crosstalk_coupling_ghz(e: EffectiveEnergies, kinv_14_per_ff):
    """J_4 = (1/4) sqrt(E_J1 / (2 E_C1)) (2e)^2 (K^-1)_(1,4)."""
    return (0.25 * np.sqrt(e.E_J1 / (2.0 * e.E_C1))
            * units.pair_charging_energy_ghz(kinv_14_per_ff))


def spin_parameters(e: EffectiveEnergies, p: CircuitParams, kspec: KMatrixSpec):
    """Full spin-model parameter set (angular frequencies) from the circuit."""
    omega = gate_frequency_ghz(e, p)
    delta = detuning_ghz(e, omega)
    j_z = gate_zz_coupling_ghz(e, p)
    j_x = gate_xx_coupling_ghz(e, p, kspec.kinv_per_ff(2, 3, p))
    j_2 = outer_gate_coupling_ghz(e, kspec.kinv_per_ff(1, 3, p))
    j_4 = crosstalk_coupling_ghz(e, kspec.kinv_per_ff(1, 4, p))
    return DiamondCouplings(J_z=units.ghz(j_z), J_x=units.ghz(j_x),
                            J_2=units.ghz(j_2), J_4=units.ghz(j_4),
                            Omega=units.ghz(omega), Delta=units.ghz(delta))


def couplings_from_circuit(p: CircuitParams, kspec: KMatrixSpec,
                           omega_target_ghz=DEFAULT_GATE_FREQUENCY_GHZ):
    """(EffectiveEnergies, DiamondCouplings) for one circuit configuration."""
    e = effective_energies(p, kspec, omega_target_ghz=omega_target_ghz)
    return e, spin_parameters(e, p, kspec)


def crosstalk_scaling_scan(base: CircuitParams, factors):
    """Cross-talk suppression versus the resonator capacitance C_R.

    For each multiplier f the netlist K is reassembled with C_R -> f C_R
    and the coupling ratios recomputed.  Returns a list of rows
    {cr_multiplier, cr_fF, j4_over_j2_abs, j4_over_jz_abs}; the first ratio
    decreases roughly like 1/C_R because the direct outer-outer path runs
    through both resonators while the outer-gate path runs through one.
    """
    rows = []
    for f in factors:
        if not f > 0:
            raise ValueError("C_R multipliers must be positive")
        kspec = KMatrixSpec.netlist(cr_scale=f)
        e, c = couplings_from_circuit(base, kspec)
        rows.append({
            "cr_multiplier": float(f),
            "cr_fF": base.C_R_fF * float(f),
            "j4_over_j2_abs": abs(c.J_4 / c.J_2),
            "j4_over_jz_abs": abs(c.J_4 / c.J_z),
        })
    return rows


def reached_crosstalk_target(rows, threshold=0.01):
    """Whether any scan row suppresses |J_4/J_z| below `threshold`."""
    return any(r["j4_over_jz_abs"] < threshold for r in rows)


# K^-1 entries (1/fF) calibrated so that the explicit-mode map reproduces
# the reference design's effective energies and coupling ratios; the
# common-mode diagonal entry is deliberately absent so the gate-frequency
# inversion path stays exercised.
REFERENCE_KINV_ENTRIES_PER_FF = {
    (1, 1): 2.7133062577399947e-02,
    (2, 2): 2.1317463246082320e-02,
    (1, 3): 4.4574071548141950e-05,
    (2, 3): -1.8069367607826060e-03,
    (1, 4): 1.7179685596165542e-07,
}


def reference_kmatrix():
    """Explicit K^-1 entries matching the reference circuit design."""
    return KMatrixSpec.explicit(REFERENCE_KINV_ENTRIES_PER_FF)


def config_dict(p: CircuitParams, kspec: KMatrixSpec):
    """JSON-ready dict with unit-annotated keys."""
    d = {"circuit": asdict(p)}
    if kspec.mode == "explicit":
        d["k_inverse"] = {
            "mode": "explicit",
            "entries_per_fF": {f"{i},{j}": v for (i, j, v) in kspec.entries},
        }
    else:
        d["k_inverse"] = {"mode": "netlist", "cr_scale": kspec.cr_scale}
    return d


def circuit_from_config(d):
    """(CircuitParams, KMatrixSpec) from a config dict; see `config_dict`."""
    p = CircuitParams(**d["circuit"])
    kd = d.get("k_inverse", {"mode": "netlist"})
    if kd["mode"] == "netlist":
        kspec = KMatrixSpec.netlist(cr_scale=float(kd.get("cr_scale", 1.0)))
    else:
        entries = {}
        for key, v in kd.get("entries_per_fF", {}).items():
            i, j = (int(x) for x in key.split(","))
            entries[(i, j)] = float(v)
        kspec = KMatrixSpec.explicit(entries)
    return p, kspec


def load_circuit_config(path):
    with open(path) as f:
        return circuit_from_config(json.load(f))


def save_circuit_config(path, p: CircuitParams, kspec: KMatrixSpec):
    with open(path, "w") as f:
        json.dump(config_dict(p, kspec), f, indent=2)
        f.write("\n")
