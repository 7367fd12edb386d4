import numpy as np
import pytest

from gfvqs.exact import dense_matrix
from gfvqs.hubbard import (
    HubbardModel,
    ladder_operator,
    momentum_operator,
    number_operator,
    parse_combo,
    qubit_hamiltonian,
)
from gfvqs.pauli import weight
from oracles import fermion_annihilator, hubbard_matrix, sum_matrix


def test_dimer_terms_in_declared_order():
    h = qubit_hamiltonian(HubbardModel(2, 1.0, 3.0))
    assert [(t.coefficient, t.string.symbols) for t in h] == [
        (-1.5, "IIII"), (-0.5, "XZXI"), (-0.5, "YZYI"), (-0.5, "IXZX"), (-0.5, "IYZY"),
        (0.75, "ZZII"), (0.75, "IIZZ"),
    ]


@pytest.mark.parametrize("n,periodic", [(2, False), (3, False), (4, False), (3, True), (4, True)])
def test_hamiltonian_matches_fermionic_oracle(n, periodic):
    m = HubbardModel(n, 0.7, 2.3, "periodic" if periodic else "open")
    h = qubit_hamiltonian(m)
    np.testing.assert_allclose(dense_matrix(h), hubbard_matrix(n, 0.7, 2.3, periodic), atol=1e-12)


def test_hamiltonian_conserves_particle_number():
    m = HubbardModel(3)
    H, N = dense_matrix(qubit_hamiltonian(m)), dense_matrix(number_operator(m))
    np.testing.assert_allclose(H @ N, N @ H, atol=1e-12)


def test_periodic_wrap_terms_have_weight_2n_minus_1():
    h = qubit_hamiltonian(HubbardModel(4, boundary="periodic"))
    weights = sorted(weight(t.string) for t in h.without_identity())
    assert weights.count(7) == 4
    assert max(weights) == 7


def test_ladder_operator_matches_fermionic_oracle():
    m = HubbardModel(2)
    for site in (1, 2):
        for spin in ("up", "down"):
            c = ladder_operator(m, site, spin, "annihilation")
            mode = m.qubit(site, spin)
            mat = sum_matrix([(a, s.symbols) for a, s in c])
            np.testing.assert_allclose(mat, fermion_annihilator(4, mode), atol=1e-12)
            cd = ladder_operator(m, site, spin, "creation")
            np.testing.assert_allclose(sum_matrix([(a, s.symbols) for a, s in cd]), mat.conj().T, atol=1e-12)


def test_canonical_anticommutation():
    m = HubbardModel(2)
    ops = {(s, sp): sum_matrix([(a, p.symbols) for a, p in ladder_operator(m, s, sp, "annihilation")])
           for s in (1, 2) for sp in ("up", "down")}
    for ka, a in ops.items():
        for kb, b in ops.items():
            expected = np.eye(16) if ka == kb else 0
            np.testing.assert_allclose(a @ b.conj().T + b.conj().T @ a, expected, atol=1e-12)
            np.testing.assert_allclose(a @ b + b @ a, 0, atol=1e-12)


def test_momentum_operator_normalization_and_label():
    m = HubbardModel(2)
    c = momentum_operator(m, parse_combo("1:1:up,-1:2:up"), "annihilation")
    c1 = fermion_annihilator(4, 1)
    c2 = fermion_annihilator(4, 3)
    mat = sum_matrix([(a, s.symbols) for a, s in c])
    np.testing.assert_allclose(mat, (c1 - c2) / np.sqrt(2), atol=1e-12)
    assert c.label == "(+c1↑-c2↑)"
    raw = momentum_operator(m, parse_combo("1:1:up,-1:2:up"), "annihilation", normalize=False)
    np.testing.assert_allclose(sum_matrix([(a, s.symbols) for a, s in raw]), c1 - c2, atol=1e-12)
    assert momentum_operator(m, parse_combo("1:1:up"), "creation").kind == "creation"


@pytest.mark.parametrize("kwargs", [dict(n_sites=1), dict(n_sites=2, boundary="periodic"),
                                    dict(n_sites=3, boundary="ring"), dict(n_sites=2, tau=float("nan"))])
def test_invalid_models_rejected(kwargs):
    with pytest.raises(ValueError):
        HubbardModel(**kwargs)


@pytest.mark.parametrize("text", ["1:1", "x:1:up", "1:1:sideways"])
def test_bad_combos_rejected(text):
    with pytest.raises(ValueError):
        parse_combo(text)


def test_site_out_of_range_rejected():
    with pytest.raises(IndexError):
        ladder_operator(HubbardModel(2), 3, "up", "annihilation")
