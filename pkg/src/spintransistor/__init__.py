"""Four-qubit diamond-coupled quantum spin transistor toolkit.

A left and a right qubit exchange an arbitrary qubit state through a
two-qubit gate whose configuration (|down,down> open, symmetric single
excitation closed) either permits perfect state transfer or blocks it
exactly.  The package builds the spin Hamiltonians, propagates closed and
dephasing-noisy dynamics, encodes the analytic blockade/transfer conditions
including the detuned Floquet regime, and maps superconducting-circuit
element values to the spin-model working point.
"""

from . import units
from .operators import (DIM, N_QUBITS, SINGLE_EXCITATION, SpinSector, embed,
                        exchange, ket, pauli, sector, total_sz)
from .states import (DOWN, UP, density, gate_closed, gate_open, gate_singlet,
                     left_state, product_state, qubit_state)
from .hamiltonians import (DiamondCouplings, DriveParams, GeneralCouplings,
                           circuit_hamiltonian, diamond_hamiltonian,
                           drive_hamiltonian, gate_transition_gap,
                           lab_frame_hamiltonian, lab_frame_splitting,
                           reference_couplings, resonant_couplings,
                           rotating_frame_hamiltonian)
from .dynamics import (BandTrace, FidelityTrace, IntegrationError, NoiseConfig,
                       TimeGrid, evolve_lindblad, expm_propagate, fidelity,
                       period_propagator, propagate, recommended_max_step,
                       refine_peak)
from .transfer import (ClosedGateReport, EigensystemB1, FloquetResult,
                       closed_for_arbitrary_right, closed_gate_report,
                       driven_transfer_time, floquet_hamiltonian,
                       floquet_single_excitation_eigensystem,
                       open_transfer_target, resonant_transfer_criterion,
                       simulated_peak_transfer, single_excitation_block,
                       single_excitation_eigensystem)
from .circuitmap import (CircuitParams, EffectiveEnergies, KMatrixSpec,
                         couplings_from_circuit, crosstalk_scaling_scan,
                         effective_energies, reference_circuit,
                         reference_kmatrix, spin_parameters)
from .scenarios import (Scenario, ScenarioResult, StatePrepResult, SweepResult,
                        SweepSpec, default_scenario, run_delta_sweep,
                        run_scenario, run_state_prep, state_prep_couplings)
from .reporting import emit

__version__ = "0.1.0"
