"""Analytic blockade and transfer conditions for the diamond model.

Three groups of results live here:

* Closed gate: the coupling constraints under which the four-qubit state
  |L> |closed> |R> is an exact eigenstate (perfect blockade), checked both
  symbolically on the couplings and numerically on the assembled matrix.

* Resonant open gate: the closed-form eigensystem of the single-excitation
  sector, the transfer time t_f = pi/|J_z|, and the coupling-ratio
  criterion |J_12 / J_z| = sqrt(m^2 - 1/4) for perfect transfer.

* Detuned open gate: the first-order high-frequency (Magnus) effective
  Hamiltonian of the periodically driven frame,

      H_F = H_0 + ( [H_1, H_1^+] - [H_1, H_0] + [H_1^+, H_0] ) / Delta,

  its single-excitation spectrum in closed form, and the driven transfer
  time t_f = pi |Delta| / (4 J_2^2).
"""

import json
from dataclasses import asdict, dataclass

import numpy as np

from .dynamics import expm_propagate, period_propagator, refine_peak
from .hamiltonians import (DiamondCouplings, GeneralCouplings,
                           circuit_hamiltonian, diamond_hamiltonian,
                           rotating_frame_hamiltonian, rotating_frame_terms)
from .operators import SINGLE_EXCITATION, ket, max_abs
from .states import DOWN, UP, gate_closed, product_state, qubit_state
from .units import TWO_PI


@dataclass
class ClosedGateReport:
    """Residuals of the perfect-blockade conditions for given couplings.

    All residuals vanish exactly when |L>|closed(theta)>|R> is an eigenstate
    for every left and right qubit state.  `constraint_residuals` holds the
    four dark-state conditions on the couplings of qubits 1 and 4 to the
    gate; `eigen_residual_*` are the numeric eigenvector checks in the
    one-excitation and zero-projection sectors at energy E_c.
    """

    theta: float
    J14_residual: float
    constraint_residuals: tuple
    theta_solutions: tuple
    E_c: float
    eigen_residual_single: float
    eigen_residual_zero: float

    @property
    def max_residual(self):
        return max(self.J14_residual, *self.constraint_residuals,
                   self.eigen_residual_single, self.eigen_residual_zero)

    def to_json(self, path=None, **dump_kwargs):
        payload = asdict(self)
        payload["max_residual"] = self.max_residual
        text = json.dumps(payload, indent=2, **dump_kwargs)
        if path is not None:
            with open(path, "w") as f:
                f.write(text + "\n")
        return text


def closed_gate_report(c: GeneralCouplings, theta=np.pi / 4):
    """Check the blockade conditions for gate angle theta.

    The couplings must satisfy J14 = 0 together with the dark-state
    conditions

        J12 cos(theta) + J13 sin(theta) = 0,   J12 sin(theta) + J13 cos(theta) = 0,
        J24 cos(theta) + J34 sin(theta) = 0,   J24 sin(theta) + J34 cos(theta) = 0,

    which admit nontrivial couplings only at theta = +-pi/4.  The blockade
    energy is E_c = -J23_z + J23 sin(2 theta).
    """
    ct, st = np.cos(theta), np.sin(theta)
    constraints = (
        abs(c.J12 * ct + c.J13 * st),
        abs(c.J12 * st + c.J13 * ct),
        abs(c.J24 * ct + c.J34 * st),
        abs(c.J24 * st + c.J34 * ct),
    )
    solutions = []
    if abs(c.J13 + c.J12) <= 1e-14 * max(1.0, abs(c.J12)) and \
       abs(c.J34 + c.J24) <= 1e-14 * max(1.0, abs(c.J24)):
        solutions.append(np.pi / 4)
    if abs(c.J13 - c.J12) <= 1e-14 * max(1.0, abs(c.J12)) and \
       abs(c.J34 - c.J24) <= 1e-14 * max(1.0, abs(c.J24)):
        solutions.append(-np.pi / 4)

    e_c = -c.J23_z + c.J23 * np.sin(2.0 * theta)
    h = diamond_hamiltonian(c)
    v_single = product_state(DOWN, gate_closed(theta), DOWN)
    v_zero = product_state(UP, gate_closed(theta), DOWN)
    res_single = max_abs(h @ v_single - e_c * v_single)
    res_zero = max_abs(h @ v_zero - e_c * v_zero)
    return ClosedGateReport(theta=theta, J14_residual=abs(c.J14),
                            constraint_residuals=constraints,
                            theta_solutions=tuple(solutions), E_c=e_c,
                            eigen_residual_single=res_single,
                            eigen_residual_zero=res_zero)


def closed_for_arbitrary_right(c: GeneralCouplings, theta=np.pi / 4,
                               right_amplitudes=None, horizon_periods=10.0,
                               n_samples=40, tol=1e-9):
    """Numerically verify that the blockade survives any right-qubit state.

    Propagates |L>|closed>|R> for a sample of right-qubit states over
    t in [0, horizon_periods/|J23_z|] and demands remain-fidelity 1 to
    `tol` throughout.  Uses the exact eigensystem propagator, so failures
    reflect physics and not integration error.
    """
    if right_amplitudes is None:
        right_amplitudes = ((1.0, 0.0), (0.0, 1.0),
                            (1 / np.sqrt(2), 1 / np.sqrt(2)),
                            (0.6, 0.8j))
    if c.J23_z == 0:
        raise ValueError("J23_z must be nonzero to set the time scale")
    h = diamond_hamiltonian(c)
    times = np.linspace(0.0, horizon_periods / abs(c.J23_z), n_samples)
    left = qubit_state(0.6, 0.8 * np.exp(0.3j))  # generic left input
    for (cr, dr) in right_amplitudes:
        psi0 = product_state(left, gate_closed(theta), qubit_state(cr, dr))
        states = expm_propagate(h, psi0, times)
        fids = np.abs(states @ psi0.conj()) ** 2
        if np.abs(fids - 1.0).max() > tol:
            return False
    return True


@dataclass
class EigensystemB1:
    """Closed-form spectrum of the single-excitation block.

    `states` holds the four (normalized) eigenvectors as columns in the
    ordered sector basis (up-spin on qubit 1, 2, 3, 4).
    """

    energies: np.ndarray
    states: np.ndarray
    zeta: float

    def asdict(self):
        return {"energies": self.energies.tolist(),
                "states_real": self.states.real.tolist(),
                "states_imag": self.states.imag.tolist(),
                "zeta": self.zeta}


def single_excitation_block(c: GeneralCouplings):
    """4 x 4 matrix of the diamond model in the single-excitation sector."""
    return SINGLE_EXCITATION.restrict(diamond_hamiltonian(c))


def single_excitation_eigensystem(J12, Jz):
    """Exact eigensystem of the reduced model's single-excitation block.

    With L = sqrt(4 J12^2 + Jz^2) and zeta = (Jz + L) / (2 J12), the
    energies are (-Jz, +Jz, -L, +L) with eigenvectors

        |E1> = |up on 2> + |up on 3>
        |E2> = |up on 4> - |up on 1>
        |E3> = |up on 1> - zeta |up on 2> + zeta |up on 3> + |up on 4>
        |E4> = |up on 1> + (1/zeta)|up on 2> - (1/zeta)|up on 3> + |up on 4>.
    """
    if J12 == 0:
        raise ValueError("J12 = 0 degenerates the parameterization "
                         "(zeta undefined); diagonalize directly instead")
    L = np.sqrt(4.0 * J12**2 + Jz**2)
    zeta = (Jz + L) / (2.0 * J12)
    energies = np.array([-Jz, +Jz, -L, +L])
    vecs = np.array([
        [0.0, 1.0, 1.0, 0.0],
        [-1.0, 0.0, 0.0, 1.0],
        [1.0, -zeta, zeta, 1.0],
        [1.0, 1.0 / zeta, -1.0 / zeta, 1.0],
    ]).T
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    return EigensystemB1(energies=energies, states=vecs.astype(complex), zeta=zeta)


def resonant_transfer_criterion(J12, Jz):
    """Distance of |J12/Jz| from the nearest perfect-transfer ratio.

    Perfect transfer at t_f = pi/|Jz| requires |J12/Jz| = sqrt(m^2 - 1/4)
    for a positive integer m.  Returns (m_nearest, residual, t_f); the
    transfer is perfect iff residual = 0.
    """
    if Jz == 0:
        raise ValueError("Jz must be nonzero")
    ratio = abs(J12 / Jz)
    # residual is monotone around m* = sqrt(ratio^2 + 1/4); check neighbors
    m_star = np.sqrt(ratio**2 + 0.25)
    candidates = {max(1, int(np.floor(m_star))), max(1, int(np.ceil(m_star)))}
    m_nearest = min(candidates, key=lambda m: abs(ratio - np.sqrt(m**2 - 0.25)))
    residual = abs(ratio - np.sqrt(m_nearest**2 - 0.25))
    return m_nearest, residual, np.pi / abs(Jz)


def open_transfer_target(a, b):
    """Final state of a perfect open-gate cycle, before the phase fix.

    The input a|up> + b|down> on the left qubit arrives on the right qubit
    as a|up> - b|down> because the all-down state picks up e^{-i pi}
    relative to the transferred excitation.  Returns the normalized
    16-dim target a |dddu> - b |dddd>.
    """
    v = a * ket("dddu") - b * ket("dddd")
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-9:
        raise ValueError(f"|a|^2 + |b|^2 = {n**2:.3e} must be 1")
    return v / n


@dataclass
class FloquetResult:
    """First-order high-frequency effective Hamiltonian and derived scales."""

    h_f: np.ndarray
    kappa: float
    j_tilde: float
    transfer_time: float
    g: float

    @property
    def g_nearest(self):
        """Nearest integer to g, rounding half away from zero."""
        return int(np.sign(self.g) * np.floor(abs(self.g) + 0.5))

    @property
    def infidelity_scale(self):
        """|g - round(g)| / g, the predicted relative miss of the slow phase."""
        return abs((self.g - self.g_nearest) / self.g)

    def asdict(self):
        return {"kappa": self.kappa, "j_tilde": self.j_tilde,
                "transfer_time": self.transfer_time, "g": self.g,
                "g_nearest": self.g_nearest,
                "infidelity_scale": self.infidelity_scale}


def closed_form_kappa(c: DiamondCouplings):
    """kappa = sqrt(64 J2^4/D^2 + 16 J2^2 Jt (Jt + D)/D^2 + Jt^2), Jt = 2Jz + Jx."""
    jt = 2.0 * c.J_z + c.J_x
    d = c.Delta
    return np.sqrt(64.0 * c.J_2**4 / d**2
                   + 16.0 * c.J_2**2 * jt * (jt + d) / d**2
                   + jt**2)


def driven_transfer_time(c: DiamondCouplings):
    """Leading-order driven transfer time t_f = pi |Delta| / (4 J_2^2)."""
    if c.J_2 == 0:
        raise ValueError("J_2 = 0 supports no transfer (t_f diverges)")
    return np.pi * abs(c.Delta) / (4.0 * c.J_2**2)


def floquet_hamiltonian(c: DiamondCouplings):
    """First-order Magnus effective Hamiltonian of the detuned frame.

    Splits H(t) = H_0 + H_1 e^{+i Delta t} + H_1^+ e^{-i Delta t} and
    evaluates H_F = H_0 + ([H_1, H_1^+] - [H_1, H_0] + [H_1^+, H_0])/Delta
    with the commutators taken numerically on the assembled matrices.
    """
    if c.Delta == 0:
        raise ValueError("Delta = 0 is the resonant regime; use the "
                         "resonant transfer analysis instead")
    h0, h1 = rotating_frame_terms(c)
    h1d = h1.conj().T
    h_f = h0 + (_comm(h1, h1d) - _comm(h1, h0) + _comm(h1d, h0)) / c.Delta
    jt = 2.0 * c.J_z + c.J_x
    g = jt * c.Delta / (8.0 * c.J_2**2) if c.J_2 != 0 else np.inf
    return FloquetResult(h_f=h_f, kappa=closed_form_kappa(c), j_tilde=jt,
                         transfer_time=driven_transfer_time(c), g=g)


def _comm(a, b):
    return a @ b - b @ a


def floquet_single_excitation_eigensystem(c: DiamondCouplings):
    """Spectrum of H_F in the single-excitation sector.

    The closed forms are E1 = J_x - J_z, E2 = J_z, E3 = -(J_x + kappa)/2,
    E4 = -(J_x - kappa)/2; the eigenvectors have the same structure as in
    the resonant case with zeta replaced by a detuning-dressed value, which
    is read off the numeric eigenvectors here.
    """
    result = floquet_hamiltonian(c)
    block = SINGLE_EXCITATION.restrict(result.h_f)
    kappa = result.kappa
    energies = np.array([c.J_x - c.J_z, c.J_z,
                         -(c.J_x + kappa) / 2.0, -(c.J_x - kappa) / 2.0])
    evals, evecs = np.linalg.eigh(block)
    order = [int(np.argmin(np.abs(evals - e))) for e in energies]
    if len(set(order)) != 4:
        # closed forms nearly degenerate; fall back to a stable assignment
        order = list(np.argsort([np.argmin(np.abs(energies - ev)) for ev in evals]))
    states = evecs[:, order]
    # dressed zeta from the |E3> component ratio (up on 3 over up on 1)
    e3 = states[:, 2]
    zeta = float(np.real(e3[2] / e3[0])) if abs(e3[0]) > 1e-12 else np.inf
    return EigensystemB1(energies=energies, states=states, zeta=zeta), result


def simulated_peak_transfer(c: DiamondCouplings, horizon=None, cross_talk=True):
    """Peak transfer fidelity and time from direct stroboscopic simulation.

    Propagates |uddd> with the period propagator of the detuned frame and
    locates the maximum of the transfer fidelity to |dddu> by quadratic
    interpolation.  Returns (t_peak, f_peak).
    """
    if c.Delta == 0:
        raise ValueError("stroboscopic scan needs Delta != 0")
    build = circuit_hamiltonian if cross_talk else rotating_frame_hamiltonian
    period = TWO_PI / abs(c.Delta)
    u_t = period_propagator(lambda t: build(c, t), period, dim=16)
    horizon = 1.35 * driven_transfer_time(c) if horizon is None else horizon
    n_max = max(8, int(np.ceil(horizon / period)))
    psi = ket("uddd")
    target = ket("dddu").conj()
    amps = np.empty(n_max + 1, dtype=complex)
    amps[0] = target @ psi
    for n in range(1, n_max + 1):
        psi = u_t @ psi
        amps[n] = target @ psi
    times = np.arange(n_max + 1) * period
    return refine_peak(times, np.abs(amps) ** 2)
