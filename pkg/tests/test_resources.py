from fractions import Fraction

import pytest

from gfvqs.hubbard import HubbardModel, qubit_hamiltonian
from gfvqs.pauli import PauliString, PauliSum, average_weight
from gfvqs.resources import (
    advantage_threshold,
    cf_cnot_formula,
    cf_count,
    chain_weight_formula,
    exp_gate_cost,
    os_cnot_formula,
    os_count,
)


@pytest.mark.parametrize("symbols,expected", [
    ("XIII", (3, 0)), ("XZXI", (5, 4)), ("ZZII", (1, 2)), ("ZXZZZZZX", (5, 14)),
])
def test_uncontrolled_exponential_cost(symbols, expected):
    assert exp_gate_cost(PauliString(symbols)) == expected


def test_controlled_exponential_cost():
    assert exp_gate_cost(PauliString("XZXI"), controlled=True) == (4, 5)
    assert exp_gate_cost(PauliString("ZZII"), controlled=True) == (0, 3)
    with pytest.raises(ValueError):
        exp_gate_cost(PauliString("II"))


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_chain_weight_formula(n):
    h = qubit_hamiltonian(HubbardModel(n))
    assert Fraction(average_weight(h)).limit_denominator(1000) == chain_weight_formula(n)


@pytest.mark.parametrize("model", [HubbardModel(2), HubbardModel(3), HubbardModel(4, boundary="periodic")])
@pytest.mark.parametrize("d", [1, 3])
def test_closed_forms_match_enumeration(model, d):
    h = qubit_hamiltonian(model)
    assert os_count(h, d).two_qubit == pytest.approx(os_cnot_formula(h, d))
    assert cf_count(h, d).two_qubit == pytest.approx(cf_cnot_formula(h, d))


def test_advantage_threshold():
    assert advantage_threshold(2.8) == pytest.approx(1.2778, abs=5e-5)
    assert advantage_threshold(PauliSum([(1.0, "XX")])) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        advantage_threshold(1.0)


def test_depth_validation():
    with pytest.raises(ValueError):
        cf_count(qubit_hamiltonian(HubbardModel(2)), 0)
