"""Exact-diagonalization reference for registers of up to eight qubits."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pauli import PauliSum
from .series import GreensSeries, check_uniform, retarded
from .statevector import QubitState, apply_operator_vec, pauli_action

MAX_QUBITS = 8
DEGENERACY_TOL = 1e-9


def dense_matrix(h: PauliSum) -> np.ndarray:
    if h.n_qubits > MAX_QUBITS:
        raise ValueError(f"dense matrices are capped at {MAX_QUBITS} qubits, got {h.n_qubits}")
    dim = 1 << h.n_qubits
    mat = np.zeros((dim, dim), dtype=complex)
    rows = np.arange(dim)
    for term in h.terms:
        src, phase = pauli_action(term.string)
        mat[rows, src] += term.coefficient * phase
    return mat


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degeneracy_tolerance: float = DEGENERACY_TOL

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def ground_degeneracy(self) -> int:
        gap = self.eigenvalues - self.eigenvalues[0]
        return int(np.count_nonzero(gap < self.degeneracy_tolerance))

    def propagator(self, t: float) -> np.ndarray:
        v = self.eigenvectors
        return (v * np.exp(-1j * self.eigenvalues * t)) @ v.conj().T

    def evolve_vec(self, vec: np.ndarray, times) -> np.ndarray:
        """Rows are ``exp(-i H t_k) vec``."""
        v = self.eigenvectors
        coeffs = v.conj().T @ vec
        phases = np.exp(-1j * np.outer(np.atleast_1d(times), self.eigenvalues))
        return (phases * coeffs) @ v.T


@lru_cache(maxsize=32)
def diagonalize(h: PauliSum) -> SpectralDecomposition:
    mat = dense_matrix(h)
    evals, evecs = np.linalg.eigh(mat)
    recon = (evecs * evals) @ evecs.conj().T
    err = np.max(np.abs(recon - mat)) if mat.size else 0.0
    assert err <= 1e-10, f"eigendecomposition reconstruction error {err:g}"
    evals.setflags(write=False)
    evecs.setflags(write=False)
    return SpectralDecomposition(evals, evecs)


def _canonical_pick(basis: np.ndarray) -> np.ndarray:
    # project the basis state of largest weight in the subspace; that amplitude ends up real positive
    weights = np.round(np.sum(np.abs(basis) ** 2, axis=1), 9)
    x = int(np.argmax(weights))
    vec = basis @ basis[x].conj()
    return vec / np.linalg.norm(vec)


def ground_state(h: PauliSum, selector: int = 0) -> tuple[float, QubitState]:
    """Lowest eigenpair of ``h``.

    For a degenerate ground level the returned vector is canonical rather
    than whatever the eigensolver happened to produce: within the
    degenerate subspace, the basis state with the largest weight is
    projected in and normalized. ``selector = j`` repeats that procedure
    ``j`` times on the orthogonal complement of the previous picks.
    """
    dec = diagonalize(h)
    k = dec.ground_degeneracy()
    if not 0 <= selector < k:
        raise IndexError(f"selector {selector} outside the {k}-fold ground level")
    basis = np.array(dec.eigenvectors[:, :k])
    for _ in range(selector + 1):
        vec = _canonical_pick(basis)
        # drop the picked direction from the subspace
        basis = basis - np.outer(vec, vec.conj() @ basis)
        u, s, _ = np.linalg.svd(basis, full_matrices=False)
        basis = u[:, s > 1e-8]
    return dec.ground_energy, QubitState(vec, h.n_qubits)


def exact_propagate(h: PauliSum | SpectralDecomposition, t: float, s: QubitState) -> QubitState:
    """``exp(-i H t) |s>``."""
    dec = h if isinstance(h, SpectralDecomposition) else diagonalize(h)
    if dec.eigenvectors.shape[0] != s.dim:
        raise ValueError("state and Hamiltonian act on different registers")
    return QubitState(dec.evolve_vec(s.amplitudes, [t])[0], s.n_qubits)


def exact_greens(
    h: PauliSum,
    ground: QubitState,
    annihilator,
    creator,
    times,
    label: str = "",
) -> tuple[GreensSeries, GreensSeries, GreensSeries]:
    """Lesser, greater and retarded components by exact propagation.

    ``annihilator`` is the expansion of ``c_l`` and ``creator`` that of
    ``c_m^dagger``; ``ground`` need not be an eigenstate.
    """
    times = np.asarray(times, dtype=float)
    check_uniform(times)
    dec = diagonalize(h)
    psi = ground.amplitudes
    psi_t = dec.evolve_vec(psi, times)
    # G^<(t) = -i <psi(t)| c_l |(c_m^dag psi)(t)>
    created_t = dec.evolve_vec(apply_operator_vec(creator, psi), times)
    lesser = -1j * np.einsum("ti,ti->t", psi_t.conj(), apply_operator_vec(annihilator, created_t))
    # G^>(t) = +i <(c_m psi)(t)| c_l |psi(t)>
    removed_t = dec.evolve_vec(apply_operator_vec(_adjoint(creator), psi), times)
    greater = 1j * np.einsum("ti,ti->t", removed_t.conj(), apply_operator_vec(annihilator, psi_t))
    label = label or f"{getattr(annihilator, 'label', 'c')},{getattr(creator, 'label', 'c†')}"
    g_less = GreensSeries(label, "lesser", times, lesser, "exact")
    g_great = GreensSeries(label, "greater", times, greater, "exact")
    return g_less, g_great, retarded(g_less, g_great)


def _adjoint(op):
    return op.adjoint() if hasattr(op, "adjoint") else [(np.conj(c), s) for c, s in op]
