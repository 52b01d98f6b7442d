"""Propagator contracts, dephasing oracle, fidelity and trace serialization."""

import numpy as np
import pytest

from spintransistor import units
from spintransistor.dynamics import (BandTrace, FidelityTrace,
                                     IntegrationError, NoiseConfig, TimeGrid,
                                     dephasing_matrix, evolve_lindblad,
                                     expm_propagate, fidelity,
                                     period_propagator, propagate,
                                     recommended_max_step, refine_peak)
from spintransistor.hamiltonians import (GeneralCouplings, diamond_hamiltonian,
                                         lab_frame_hamiltonian,
                                         lab_frame_splitting,
                                         reference_couplings,
                                         rotating_frame_hamiltonian)
from spintransistor.operators import DIM, ket, pauli
from spintransistor.states import (DOWN, UP, density, gate_open, product_state,
                                   qubit_state)

RNG = np.random.default_rng(424242)


def random_hermitian(dim, scale=1.0):
    a = RNG.normal(size=(dim, dim)) + 1j * RNG.normal(size=(dim, dim))
    return scale * (a + a.conj().T) / 2


def test_time_grid_validation():
    with pytest.raises(ValueError):
        TimeGrid(0.0, 1.0, 1)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 1.0, 10)
    g = TimeGrid(0.0, 1e-6, 11)
    assert g.times[0] == 0.0 and g.times[-1] == 1e-6 and len(g.times) == 11


def test_zero_hamiltonian_keeps_state():
    psi0 = ket("uddd")
    states = propagate(np.zeros((DIM, DIM)), psi0, TimeGrid(0, 1e-6, 7))
    assert np.abs(states - psi0).max() < 1e-12


def test_single_qubit_z_phase_exact():
    # H = (w/2) sigma_z on one qubit: |up> picks up e^{-i w t / 2}
    w = units.ghz(1.0)
    h = 0.5 * w * np.diag([1.0, -1.0]).astype(complex)
    psi0 = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)
    grid = TimeGrid(0.0, 2e-9, 5)
    states = propagate(h, psi0, grid)
    for t, psi in zip(grid.times, states):
        expected = np.array([np.exp(-1j * w * t / 2),
                             np.exp(+1j * w * t / 2)]) / np.sqrt(2)
        assert np.abs(psi - expected).max() < 1e-9


def test_adaptive_matches_matrix_exponential():
    h = random_hermitian(DIM, scale=units.mhz(30.0))
    psi0 = ket("uddd")
    grid = TimeGrid(0.0, 1e-7, 9)
    states = propagate(h, psi0, grid)
    exact = expm_propagate(h, psi0, grid.times)
    assert np.linalg.norm(states - exact, axis=1).max() <= 1e-9


def test_ideal_reduced_model_transfer_time():
    # open gate at the perfect-transfer point: F = 1 at t_f = pi/|Jz|
    Jz = units.mhz(-41.99)
    J = np.sqrt(0.75) * abs(Jz)
    h = diamond_hamiltonian(GeneralCouplings.reduced(J, Jz))
    psi0 = product_state(UP, gate_open(), DOWN)
    t_f = np.pi / abs(Jz)
    states = propagate(h, psi0, TimeGrid(0.0, t_f, 101))
    f = fidelity(states[-1], ket("dddu"))
    assert f >= 1.0 - 1e-8


def test_propagate_norm_contract_violation_raises():
    h = random_hermitian(DIM, scale=units.ghz(2.0))
    psi0 = ket("uddd")
    with pytest.raises(IntegrationError):
        propagate(h, psi0, TimeGrid(0, 1e-6, 3), rtol=1e-3, atol=1e-4,
                  norm_tol=1e-12)


def test_recommended_max_step():
    assert recommended_max_step() == np.inf
    assert recommended_max_step(0.0) == np.inf
    w = units.ghz(1.0)
    assert recommended_max_step(w) == pytest.approx(units.TWO_PI / w / 20)


def test_period_propagator_is_unitary_floquet_step():
    c = reference_couplings()
    period = units.TWO_PI / abs(c.Delta)
    u = period_propagator(lambda t: rotating_frame_hamiltonian(c, t), period,
                          DIM)
    assert np.abs(u @ u.conj().T - np.eye(DIM)).max() < 1e-10


# --- master equation ---------------------------------------------------------


def test_lindblad_unitary_limit_matches_schrodinger():
    c = reference_couplings()
    grid = TimeGrid(0.0, units.us(0.2), 41)
    max_step = recommended_max_step(c.Delta)
    psi0 = product_state(UP, gate_open(), DOWN)
    states = propagate(lambda t: rotating_frame_hamiltonian(c, t), psi0, grid,
                       max_step=max_step)
    rhos = evolve_lindblad(lambda t: rotating_frame_hamiltonian(c, t),
                           density(psi0), NoiseConfig(0.0), grid,
                           max_step=max_step)
    target = ket("dddu")
    f_pure = np.abs(states @ target.conj()) ** 2
    f_rho = np.einsum("i,tij,j->t", target.conj(), rhos, target).real
    assert np.abs(f_pure - f_rho).max() <= 1e-7
    purity = np.einsum("tij,tji->t", rhos, rhos).real
    assert np.abs(purity - 1.0).max() <= 1e-7


def test_dephasing_matrix_rates():
    noise = NoiseConfig.from_cyclic_mhz(0.0016)
    w = dephasing_matrix(noise, DIM)
    assert np.abs(np.diag(w)).max() == 0.0  # populations untouched
    i, j = 0b0111, 0b1111  # differ in qubit 1 only
    assert w[i, j] == pytest.approx(-2 * noise.gamma, rel=1e-12)
    i, j = 0b1011, 0b1111  # differ in qubit 2 only (doubled rate)
    assert w[i, j] == pytest.approx(-4 * noise.gamma, rel=1e-12)


def test_single_qubit_dephasing_analytic_decay():
    """Coherence of |+> on a gate qubit decays as e^{-4 gamma t}.

    The gate qubits carry rate 2*gamma, and a sigma_z dephasing channel of
    rate g damps off-diagonals as e^{-2 g t}; an outer qubit decays as
    e^{-2 gamma t}.  Oracle: exact exponentials.
    """
    noise = NoiseConfig.from_cyclic_mhz(0.0016)
    grid = TimeGrid(0.0, 50e-6, 21)
    h = np.zeros((DIM, DIM))

    plus_on_gate = product_state(DOWN, np.kron(qubit_state(1, 1), DOWN), DOWN)
    rhos = evolve_lindblad(h, density(plus_on_gate), noise, grid)
    coh = rhos[:, 0b1011, 0b1111]  # <d u d d| rho |d d d d>
    expected = 0.5 * np.exp(-4.0 * noise.gamma * grid.times)
    assert np.abs(coh - expected).max() < 1e-9

    plus_on_outer = product_state(qubit_state(1, 1), gate_open(), DOWN)
    rhos = evolve_lindblad(h, density(plus_on_outer), noise, grid)
    coh = rhos[:, 0b0111, 0b1111]
    expected = 0.5 * np.exp(-2.0 * noise.gamma * grid.times)
    assert np.abs(coh - expected).max() < 1e-9


def test_lindblad_trace_hermiticity_positivity_contracts():
    c = reference_couplings()
    noise = NoiseConfig.from_cyclic_mhz(0.0016)
    grid = TimeGrid(0.0, units.us(0.1), 11)
    psi0 = product_state(UP, gate_open(), DOWN)
    rhos = evolve_lindblad(lambda t: rotating_frame_hamiltonian(c, t),
                           density(psi0), noise, grid,
                           max_step=recommended_max_step(c.Delta))
    traces = np.einsum("tii->t", rhos).real
    assert np.abs(traces - 1.0).max() <= 1e-8
    assert np.abs(rhos - rhos.conj().transpose(0, 2, 1)).max() <= 1e-9
    assert np.linalg.eigvalsh(rhos).min() >= -1e-7


def test_noise_config_validation():
    with pytest.raises(ValueError):
        NoiseConfig(-1.0)
    n = NoiseConfig.from_cyclic_mhz(0.0016)
    assert n.rates[1] == n.rates[2] == 2 * n.rates[0]
    assert n.rates[0] == pytest.approx(units.mhz(0.0016))


# --- fidelity ----------------------------------------------------------------


def test_fidelity_examples():
    f = ket("dddu")
    assert fidelity(f, f) == pytest.approx(1.0)
    assert fidelity(ket("uddd"), f) == 0.0
    assert fidelity(np.eye(DIM) / DIM, f) == pytest.approx(1.0 / DIM)
    assert fidelity(density(f), f) == pytest.approx(1.0)
    # global phase invariance
    assert fidelity(np.exp(0.7j) * f, f) == pytest.approx(1.0)


def test_fidelity_dimension_mismatch():
    with pytest.raises(ValueError):
        fidelity(ket("uddd"), np.array([1.0, 0.0]))


# --- frame-change oracle -----------------------------------------------------


def test_rotating_frame_agrees_with_lab_frame_oracle():
    """Lab-frame (exact, static) evolution unrotated into the moving frame.

    The rotating-frame model drops terms oscillating at 2*Omega + Delta,
    which feed the transfer at relative weight Delta/(2*Omega + Delta);
    over a short window the two pictures agree at the 1e-3 level.
    """
    c = reference_couplings()
    grid = TimeGrid(0.0, units.us(0.05), 101)
    psi0 = product_state(UP, gate_open(), DOWN)
    target = ket("dddu")

    h_lab = lab_frame_hamiltonian(c)
    lab_states = expm_propagate(h_lab, psi0, grid.times)
    h0_diag = np.real(np.diag(lab_frame_splitting(c)))
    unrotated = np.exp(1j * np.outer(grid.times, h0_diag)) * lab_states
    f_lab = np.abs(unrotated @ target.conj()) ** 2

    rot_states = propagate(lambda t: rotating_frame_hamiltonian(c, t), psi0,
                           grid, max_step=recommended_max_step(c.Delta))
    f_rot = np.abs(rot_states @ target.conj()) ** 2
    assert np.abs(f_lab - f_rot).max() <= 1e-3


# --- peak refinement and traces ---------------------------------------------


def test_refine_peak_quadratic():
    t = np.linspace(0.0, 1.0, 101)
    y = 1.0 - (t - 0.503) ** 2
    t_peak, v_peak = refine_peak(t, y)
    assert t_peak == pytest.approx(0.503, abs=1e-12)
    assert v_peak == pytest.approx(1.0, abs=1e-12)


def test_fidelity_trace_round_trip(tmp_path):
    times = units.us(np.linspace(0.0, 1.5, 7))
    fids = np.array([0.0, 0.25, 0.5, 0.987654321012, 0.5, 0.25, 1.0])
    trace = FidelityTrace(times=times, fidelities=fids)
    path = tmp_path / "trace.csv"
    trace.to_csv(path)
    header = path.read_text().splitlines()[0]
    assert header == "t_us,fidelity"
    back = FidelityTrace.from_csv(path)
    assert np.abs(back.fidelities - fids).max() < 1e-12
    assert np.abs(back.times - times).max() < 1e-12 * times.max()


def test_fidelity_trace_rejects_out_of_range():
    with pytest.raises(ValueError):
        FidelityTrace(times=np.array([0.0, 1.0]),
                      fidelities=np.array([0.5, 1.5]))


def test_band_trace_round_trip(tmp_path):
    times = units.us(np.linspace(0.0, 1.0, 5))
    band = BandTrace(times=times, f_min=np.full(5, 0.25),
                     f_mean=np.full(5, 0.5), f_max=np.full(5, 0.75))
    path = tmp_path / "band.csv"
    band.to_csv(path)
    back = BandTrace.from_csv(path)
    assert np.abs(back.f_mean - 0.5).max() == 0.0
    assert path.read_text().splitlines()[0] == \
        "t_us,fidelity_min,fidelity_mean,fidelity_max"
