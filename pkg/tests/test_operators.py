"""Pauli embeddings, basis conventions, sectors and state constructors."""

import numpy as np
import pytest

from spintransistor.operators import (DIM, SINGLE_EXCITATION, basis_label,
                                      embed, exchange, is_hermitian, ket,
                                      max_abs, pauli, sector, total_sz)
from spintransistor.states import (DOWN, UP, check_density_matrix,
                                   check_pure_state, density, gate_closed,
                                   gate_open, gate_singlet, left_state,
                                   product_state, qubit_state)


def test_pauli_z_eigenvector_convention():
    psi = ket("uddd")
    assert max_abs(pauli(1, "z") @ psi - psi) == 0.0
    assert max_abs(pauli(2, "z") @ psi + psi) == 0.0


def test_raising_operator_flips_down_to_up():
    assert max_abs(pauli(2, "+") @ ket("dddd") - ket("dudd")) == 0.0
    assert max_abs(pauli(2, "+") @ ket("dudd")) == 0.0  # already up


def test_disjoint_supports_commute():
    comm = pauli(1, "x") @ pauli(2, "x") - pauli(2, "x") @ pauli(1, "x")
    assert max_abs(comm) == 0.0


def test_pauli_algebra_on_each_qubit():
    for q in range(1, 5):
        x, y, z = pauli(q, "x"), pauli(q, "y"), pauli(q, "z")
        assert max_abs(x @ y - y @ x - 2j * z) < 1e-15
        assert max_abs(pauli(q, "+") - (x + 1j * y) / 2) == 0.0
        assert max_abs(pauli(q, "-") - (x - 1j * y) / 2) == 0.0


def test_embed_rejects_bad_labels():
    with pytest.raises(ValueError):
        embed(np.eye(2), 0)
    with pytest.raises(ValueError):
        pauli(5, "z")
    with pytest.raises(ValueError):
        pauli(1, "w")


def test_ket_round_trip():
    assert basis_label(0b0111) == "uddd"
    assert np.argmax(np.abs(ket("uddd"))) == 0b0111
    assert np.argmax(np.abs(ket("dddu"))) == 0b1110
    with pytest.raises(ValueError):
        ket("uud")


@pytest.mark.parametrize("k,dim", [(-2, 1), (-1, 4), (0, 6), (1, 4), (2, 1)])
def test_sector_dimensions(k, dim):
    assert sector(k).dim == dim


def test_sector_invalid_k():
    with pytest.raises(ValueError):
        sector(3)


def test_lowest_sector_is_all_down():
    s = sector(-2)
    assert s.indices == (0b1111,)


def test_single_excitation_basis_order():
    labels = [basis_label(i) for i in SINGLE_EXCITATION.indices]
    assert labels == ["uddd", "dudd", "ddud", "dddu"]


@pytest.mark.parametrize("k", [-2, -1, 0, 1, 2])
def test_total_sz_restricts_to_2k(k):
    s = sector(k)
    block = s.restrict(total_sz())
    assert max_abs(block - 2 * k * np.eye(s.dim)) < 1e-15


def test_projector_isometry():
    p = sector(0).projector()
    assert max_abs(p.conj().T @ p - np.eye(6)) == 0.0


def test_exchange_is_hermitian_and_hops():
    op = exchange(1, 4)
    assert is_hermitian(op)
    assert max_abs(op @ ket("dddu") - ket("uddd")) == 0.0


def test_gate_states():
    assert max_abs(gate_open() - np.kron(DOWN, DOWN)) == 0.0
    sym = (np.kron(UP, DOWN) + np.kron(DOWN, UP)) / np.sqrt(2)
    assert max_abs(gate_closed() - sym) < 1e-15
    assert max_abs(gate_closed(0.0) - np.kron(UP, DOWN)) == 0.0
    assert abs(np.vdot(gate_singlet(), gate_closed())) < 1e-15


def test_left_state_family():
    psi = left_state(1.0, np.pi / 2)
    expected = np.array([1.0, 1j]) / np.sqrt(2)
    assert max_abs(psi - expected) < 1e-15
    check_pure_state(psi)


def test_product_state_layout():
    psi = product_state(UP, gate_open(), DOWN)
    assert max_abs(psi - ket("uddd")) == 0.0
    psi = product_state(DOWN, gate_closed(0.0), UP)
    assert max_abs(psi - ket("dudu")) == 0.0


def test_state_validators():
    check_pure_state(ket("uddd"))
    with pytest.raises(ValueError):
        check_pure_state(2.0 * ket("uddd"))
    rho = density(qubit_state(1, 1j))
    check_density_matrix(rho)
    with pytest.raises(ValueError):
        check_density_matrix(2 * rho)
    with pytest.raises(ValueError):
        check_density_matrix(rho - 0.5 * np.eye(2))
