import numpy as np
import pytest

from gfvqs.dimer import (
    LADDER_STRINGS,
    S1_STRINGS,
    SymmetryError,
    SymmetryPropagator,
    check_propositions,
    sign_table,
    single_pauli_propagator,
    symmetry_report,
    verify_symmetry_sets,
)
from gfvqs.exact import exact_propagate, ground_state
from gfvqs.hubbard import HubbardModel, qubit_hamiltonian
from gfvqs.pauli import PauliString
from gfvqs.series import time_grid
from gfvqs.statevector import QubitState, apply_pauli

# rows XZXI, YZYI, IXZX, IYZY, ZZII, IIZZ; columns XIII, ZXII, ZZXI, ZZZX
TABLE_I = [
    "++-+",
    "-+++",
    "+++-",
    "+-++",
    "--++",
    "++--",
]


def test_sign_table_regression():
    table = sign_table()
    assert ["".join(row[1:]) for row in table.as_rows()] == TABLE_I
    for col in LADDER_STRINGS:
        assert table.column_sum(col, rows=S1_STRINGS) == 2
        assert table.column_sum(col, rows=("ZZII", "IIZZ")) == 0


@pytest.fixture(scope="module")
def dimer():
    h = qubit_hamiltonian(HubbardModel(2))
    return h, ground_state(h)[1]


def test_sets_and_propositions_hold(dimer):
    h, psi = dimer
    sets = verify_symmetry_sets(h)
    report = check_propositions(psi, sets)
    assert report.max_residual < 1e-10
    assert all(abs(a - 1) < 1e-10 for a in report.alphas.values())


def test_propositions_fail_off_the_ground_state(dimer):
    h, _ = dimer
    with pytest.raises(SymmetryError):
        check_propositions(QubitState.random(4, np.random.default_rng(0)), verify_symmetry_sets(h))


def test_wrong_register_rejected():
    with pytest.raises(SymmetryError):
        verify_symmetry_sets(qubit_hamiltonian(HubbardModel(3)))


@pytest.mark.parametrize("p_tilde", LADDER_STRINGS + ("YIII", "ZYII", "ZZYI", "ZZZY"))
@pytest.mark.parametrize("generator", S1_STRINGS)
def test_single_pauli_rule_is_exact(dimer, p_tilde, generator):
    h, psi = dimer
    start = apply_pauli(PauliString(p_tilde), psi)
    rule = single_pauli_propagator(p_tilde, generator, h)
    for t in (0.3, 1.7, 4.0):
        ref = exact_propagate(h, t, start).amplitudes
        np.testing.assert_allclose(rule.apply(start.amplitudes, t), ref, atol=1e-10)


def test_rule_rejects_uncovered_strings(dimer):
    h, _ = dimer
    with pytest.raises(ValueError):
        single_pauli_propagator("ZZII", "XZXI", h)
    with pytest.raises(ValueError):
        single_pauli_propagator("XIII", "ZZII", h)


def test_symmetry_propagator_evolution(dimer):
    h, psi = dimer
    start = apply_pauli(PauliString("ZZXI"), psi)
    times = time_grid(2.0, 0.1)
    evo = SymmetryPropagator().propagate(h, start.amplitudes, times, PauliString("ZZXI"))
    for k in (0, 7, len(times) - 1):
        ref = exact_propagate(h, times[k], start).amplitudes
        np.testing.assert_allclose(np.exp(1j * evo.theta0[k]) * evo.states[k], ref, atol=1e-10)


def test_report_is_serializable(dimer):
    import json

    h, psi = dimer
    json.dumps(symmetry_report(h, psi))
