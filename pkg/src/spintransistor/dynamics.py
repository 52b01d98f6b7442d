"""Closed and open system propagation, fidelities and trace containers.

Pure states follow i d|psi>/dt = H(t)|psi>; density matrices follow the
dephasing master equation

    drho/dt = -i [H, rho] + sum_i gamma_i (sigma_z(i) rho sigma_z(i) - rho),

where the anticommutator part of the standard Lindblad dissipator has been
simplified using sigma_z^2 = 1.  Both integrators use adaptive high-order
Runge-Kutta (DOP853) with tight tolerances; callers that know the fastest
oscillation in H(t) should cap the step via `recommended_max_step` so the
error estimator never skips over a drive period.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import units
from .states import check_density_matrix, check_pure_state

DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12


class IntegrationError(RuntimeError):
    """Propagation failed or violated a conservation contract."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform output grid from t0 to t1 with n_points samples."""

    t0: float
    t1: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError("n_points must be >= 2")
        if not self.t1 > self.t0:
            raise ValueError("need t1 > t0")

    @property
    def times(self):
        return np.linspace(self.t0, self.t1, self.n_points)


@dataclass(frozen=True)
class NoiseConfig:
    """Pure dephasing with base rate gamma (rad/s).

    The gate qubits decohere twice as fast as the outer qubits:
    gamma_1 = gamma_4 = gamma and gamma_2 = gamma_3 = 2 gamma.
    """

    gamma: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0")

    @classmethod
    def from_cyclic_mhz(cls, gamma_over_2pi_mhz):
        """Rate from the quoted gamma/2pi value in MHz."""
        return cls(gamma=units.mhz(gamma_over_2pi_mhz))

    @property
    def rates(self):
        g = self.gamma
        return np.array([g, 2 * g, 2 * g, g])


def recommended_max_step(*angular_frequencies):
    """Integrator step cap: a twentieth of the fastest oscillation period."""
    freqs = [abs(w) for w in angular_frequencies if w]
    if not freqs:
        return np.inf
    return (units.TWO_PI / max(freqs)) / 20.0


def _as_callable(hamiltonian):
    if callable(hamiltonian):
        return hamiltonian
    h = np.asarray(hamiltonian, dtype=complex)
    return lambda t: h


def _solve(rhs, y0, grid, rtol, atol, max_step, what):
    sol = solve_ivp(rhs, (grid.t0, grid.t1), y0, method="DOP853",
                    rtol=rtol, atol=atol, t_eval=grid.times,
                    max_step=max_step if max_step is not None else np.inf,
                    first_step=None)
    if not sol.success:
        raise IntegrationError(f"{what} failed: {sol.message} "
                               f"(reached t = {sol.t[-1] if len(sol.t) else grid.t0:.3e} s)")
    return sol


def propagate(hamiltonian, psi0, grid: TimeGrid, rtol=DEFAULT_RTOL,
              atol=DEFAULT_ATOL, max_step=None, norm_tol=1e-8):
    """Propagate a pure state; returns an (n_points, dim) array of states.

    `hamiltonian` is either a constant matrix or a callable t -> matrix.
    The returned states keep their integration error: norm drift beyond
    `norm_tol` raises instead of being hidden by renormalization.
    """
    psi0 = check_pure_state(psi0)
    h = _as_callable(hamiltonian)

    def rhs(t, y):
        return -1j * (h(t) @ y)

    sol = _solve(rhs, psi0.astype(complex), grid, rtol, atol, max_step,
                 "state propagation")
    states = sol.y.T.copy()
    drift = np.abs(np.linalg.norm(states, axis=1) - 1.0).max()
    if drift > norm_tol:
        raise IntegrationError(f"norm drift {drift:.3e} exceeds {norm_tol:.1e}; "
                               "tighten rtol/atol or reduce max_step")
    return states


def expm_propagate(hamiltonian, psi0, times):
    """Exact evolution under a constant Hamiltonian via its eigensystem.

    Oracle-grade reference for the adaptive integrator; also the cheapest
    route for static Hamiltonians.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    psi0 = check_pure_state(psi0)
    evals, evecs = np.linalg.eigh(h)
    coeff = evecs.conj().T @ psi0
    phases = np.exp(-1j * np.outer(np.asarray(times), evals))
    return (phases * coeff) @ evecs.T


def period_propagator(hamiltonian, period, dim, rtol=1e-12, atol=1e-14,
                      max_step=None):
    """One-period propagator U(T, 0) of a T-periodic Hamiltonian.

    Stroboscopic evolution is then exactly U(nT, 0) = U(T, 0)^n, which turns
    long drives into cheap matrix powers.  Solved at tighter tolerance than
    state propagation because errors compound over many periods.
    """
    h = _as_callable(hamiltonian)

    def rhs(t, y):
        u = y.reshape(dim, dim)
        return (-1j * (h(t) @ u)).ravel()

    grid = TimeGrid(0.0, period, 2)
    y0 = np.eye(dim, dtype=complex).ravel()
    sol = _solve(rhs, y0, grid, rtol, atol, max_step, "period propagator")
    return sol.y[:, -1].reshape(dim, dim)


def dephasing_matrix(noise: NoiseConfig, dim=16):
    """Entrywise dissipator factor W with (W o rho) = sum_i gamma_i (Z_i rho Z_i - rho).

    Because every collapse operator is diagonal, the whole dissipator is an
    elementwise (Hadamard) product with a fixed real matrix.
    """
    n_qubits = int(np.log2(dim))
    rates = noise.rates
    if len(rates) != n_qubits:
        raise ValueError("noise rates do not match register size")
    w = np.zeros((dim, dim))
    for q, g in enumerate(rates):
        bit = n_qubits - 1 - q
        z = 1.0 - 2.0 * ((np.arange(dim) >> bit) & 1)
        w += g * (np.outer(z, z) - 1.0)
    return w


def lindblad_propagate(hamiltonian, mats0, noise: NoiseConfig, grid: TimeGrid,
                       rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL, max_step=None):
    """Propagate a stack of matrices under the dephasing master equation.

    The master equation is linear, so this low-level entry point accepts any
    initial matrices (not only physical density matrices); callers combine
    the solutions linearly.  Returns (n_mats, n_points, dim, dim).
    """
    mats0 = np.asarray(mats0, dtype=complex)
    single = mats0.ndim == 2
    if single:
        mats0 = mats0[None]
    n_mats, dim, _ = mats0.shape
    h = _as_callable(hamiltonian)
    w = dephasing_matrix(noise, dim)

    def rhs(t, y):
        rho = y.reshape(n_mats, dim, dim)
        ht = h(t)
        out = -1j * (ht @ rho - rho @ ht) + w * rho
        return out.ravel()

    sol = _solve(rhs, mats0.ravel(), grid, rtol, atol, max_step,
                 "master equation")
    res = sol.y.T.reshape(grid.n_points, n_mats, dim, dim).transpose(1, 0, 2, 3)
    return res[0] if single else res


def evolve_lindblad(hamiltonian, rho0, noise: NoiseConfig, grid: TimeGrid,
                    rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL, max_step=None,
                    trace_tol=1e-8, herm_tol=1e-9, eig_tol=1e-7):
    """Evolve a density matrix; returns an (n_points, dim, dim) array.

    Postconditions are enforced, not assumed: trace drift beyond
    `trace_tol`, Hermiticity violation beyond `herm_tol`, or an eigenvalue
    below -`eig_tol` raise IntegrationError.
    """
    rho0 = check_density_matrix(rho0)
    rhos = lindblad_propagate(hamiltonian, rho0, noise, grid,
                              rtol=rtol, atol=atol, max_step=max_step)
    traces = np.einsum("tii->t", rhos).real
    drift = np.abs(traces - 1.0).max()
    if drift > trace_tol:
        raise IntegrationError(f"trace drift {drift:.3e} exceeds {trace_tol:.1e}")
    herm = np.abs(rhos - rhos.conj().transpose(0, 2, 1)).max()
    if herm > herm_tol:
        raise IntegrationError(f"Hermiticity violation {herm:.3e} exceeds {herm_tol:.1e}")
    min_eig = np.linalg.eigvalsh((rhos + rhos.conj().transpose(0, 2, 1)) / 2).min()
    if min_eig < -eig_tol:
        raise IntegrationError(f"negative eigenvalue {min_eig:.3e} below -{eig_tol:.1e}")
    return rhos


def fidelity(state, target):
    """Transition fidelity <f|rho|f>, or |<f|psi>|^2 for pure states.

    Insensitive to global phases of either argument.
    """
    target = np.asarray(target, dtype=complex)
    state = np.asarray(state, dtype=complex)
    if target.ndim != 1:
        raise ValueError("target must be a pure state vector")
    if state.shape[-1] != target.shape[0]:
        raise ValueError(f"dimension mismatch: state {state.shape}, "
                         f"target {target.shape}")
    if state.ndim == 1:
        return float(np.abs(np.vdot(target, state)) ** 2)
    if state.ndim == 2:
        return float(np.real(target.conj() @ state @ target))
    raise ValueError(f"state must be a vector or matrix, got shape {state.shape}")


def refine_peak(times, values):
    """(t_peak, v_peak) from a sampled curve, with quadratic refinement.

    Fits a parabola through the three samples around the discrete maximum;
    falls back to the raw sample at the ends of the grid.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    i = int(np.argmax(values))
    if 0 < i < len(values) - 1:
        y1, y2, y3 = values[i - 1], values[i], values[i + 1]
        denom = y1 - 2.0 * y2 + y3
        if denom != 0.0:
            offset = 0.5 * (y1 - y3) / denom
            h = times[i + 1] - times[i]
            return times[i] + offset * h, y2 - 0.25 * (y1 - y3) * offset
    return float(times[i]), float(values[i])


def _format_sig(x):
    return f"{x:.12g}"


@dataclass
class FidelityTrace:
    """Fidelity versus time for one scenario; serializes to CSV.

    The CSV carries times in microseconds with 12 significant digits under
    the fixed header `t_us,fidelity`.
    """

    times: np.ndarray
    fidelities: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.fidelities = np.asarray(self.fidelities, dtype=float)
        if self.times.shape != self.fidelities.shape:
            raise ValueError("times and fidelities must have equal length")
        if self.fidelities.size and (self.fidelities.min() < -1e-9
                                     or self.fidelities.max() > 1.0 + 1e-9):
            raise ValueError("fidelities must lie in [0, 1] to 1e-9")

    def peak(self):
        return refine_peak(self.times, self.fidelities)

    def to_csv(self, path):
        with open(path, "w") as f:
            f.write("t_us,fidelity\n")
            for t, v in zip(self.times, self.fidelities):
                f.write(f"{_format_sig(units.to_us(t))},{_format_sig(v)}\n")

    @classmethod
    def from_csv(cls, path):
        data = np.genfromtxt(path, delimiter=",", skip_header=1)
        data = np.atleast_2d(data)
        return cls(times=units.us(data[:, 0]), fidelities=data[:, 1])


@dataclass
class BandTrace:
    """Min/mean/max fidelity over a family of initial states, versus time."""

    times: np.ndarray
    f_min: np.ndarray
    f_mean: np.ndarray
    f_max: np.ndarray
    meta: dict = field(default_factory=dict)

    def peak(self):
        """Peak of the mean curve."""
        return refine_peak(self.times, self.f_mean)

    def to_csv(self, path):
        with open(path, "w") as f:
            f.write("t_us,fidelity_min,fidelity_mean,fidelity_max\n")
            for row in zip(self.times, self.f_min, self.f_mean, self.f_max):
                t, lo, mid, hi = row
                f.write(f"{_format_sig(units.to_us(t))},{_format_sig(lo)},"
                        f"{_format_sig(mid)},{_format_sig(hi)}\n")

    @classmethod
    def from_csv(cls, path):
        data = np.atleast_2d(np.genfromtxt(path, delimiter=",", skip_header=1))
        return cls(times=units.us(data[:, 0]), f_min=data[:, 1],
                   f_mean=data[:, 2], f_max=data[:, 3])
