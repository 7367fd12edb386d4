"""Dense statevector emulation of Pauli circuits.

Basis index bit ``k`` holds qubit ``k + 1``. Most functions come in two
flavours: a public one acting on :class:`QubitState` and an array kernel
(``*_vec``) used by the time-evolution engine, where the amplitude axis is
always the last one so that stacks of states can be processed at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .pauli import PauliString, PauliSum


@dataclass(frozen=True, eq=False)
class QubitState:
    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n_qubits,):
            raise ValueError(f"expected {1 << self.n_qubits} amplitudes, got shape {amps.shape}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_vector(cls, vec) -> "QubitState":
        vec = np.asarray(vec, dtype=complex)
        n = int(round(math.log2(vec.size)))
        if 1 << n != vec.size:
            raise ValueError(f"vector length {vec.size} is not a power of two")
        return cls(vec, n)

    @classmethod
    def basis(cls, n_qubits: int, index: int = 0) -> "QubitState":
        vec = np.zeros(1 << n_qubits, dtype=complex)
        vec[index] = 1.0
        return cls(vec, n_qubits)

    @classmethod
    def random(cls, n_qubits: int, rng: np.random.Generator) -> "QubitState":
        vec = rng.normal(size=1 << n_qubits) + 1j * rng.normal(size=1 << n_qubits)
        return cls(vec / np.linalg.norm(vec), n_qubits)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "QubitState":
        return QubitState(self.amplitudes / self.norm(), self.n_qubits)

    def scaled(self, factor: complex) -> "QubitState":
        return QubitState(factor * self.amplitudes, self.n_qubits)

    def __add__(self, other: "QubitState") -> "QubitState":
        _check(self, other)
        return QubitState(self.amplitudes + other.amplitudes, self.n_qubits)

    def __sub__(self, other: "QubitState") -> "QubitState":
        _check(self, other)
        return QubitState(self.amplitudes - other.amplitudes, self.n_qubits)


def _check(a, b) -> None:
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"register size mismatch: {a.n_qubits} vs {b.n_qubits}")


@lru_cache(maxsize=4096)
def pauli_action(p: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """Gather indices and phases with ``(P v)[y] = phase[y] * v[index[y]]``."""
    dim = 1 << p.n_qubits
    y = np.arange(dim, dtype=np.int64)
    src = y ^ p.x_mask
    signs = 1 - 2 * (np.bitwise_count(src & p.z_mask).astype(np.int64) & 1)
    phase = (1j ** p.n_y) * signs.astype(complex)
    src.setflags(write=False)
    phase.setflags(write=False)
    return src, phase


def apply_pauli_vec(p: PauliString, vec: np.ndarray) -> np.ndarray:
    src, phase = pauli_action(p)
    return phase * vec[..., src]


def apply_pauli_exponential_vec(theta: float, p: PauliString, vec: np.ndarray) -> np.ndarray:
    # exp(i theta P) = cos(theta) I + i sin(theta) P since P^2 = I
    return math.cos(theta) * vec + (1j * math.sin(theta)) * apply_pauli_vec(p, vec)


def apply_sum_vec(h: PauliSum, vec: np.ndarray) -> np.ndarray:
    out = np.zeros_like(vec, dtype=complex)
    for term in h.terms:
        out += term.coefficient * apply_pauli_vec(term.string, vec)
    return out


def apply_pauli(p: PauliString, s: QubitState) -> QubitState:
    _check(p, s)
    return QubitState(apply_pauli_vec(p, s.amplitudes), s.n_qubits)


def apply_pauli_exponential(theta: float, p: PauliString, s: QubitState) -> QubitState:
    """``exp(i theta P) |s>``."""
    _check(p, s)
    if not math.isfinite(theta):
        raise ValueError(f"non-finite rotation angle {theta}")
    return QubitState(apply_pauli_exponential_vec(theta, p, s.amplitudes), s.n_qubits)


def apply_sum(h: PauliSum, s: QubitState) -> QubitState:
    _check(h, s)
    return QubitState(apply_sum_vec(h, s.amplitudes), s.n_qubits)


def _flat_theta(ansatz, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != ansatz.n_params:
        raise ValueError(f"ansatz expects {ansatz.n_params} parameters, got {theta.size}")
    return theta


def apply_vha_vec(ansatz, theta, vec: np.ndarray) -> np.ndarray:
    theta = _flat_theta(ansatz, theta)
    for k, p in enumerate(ansatz.parameter_strings):
        vec = apply_pauli_exponential_vec(theta[k], p, vec)
    return vec


def apply_vha(ansatz, theta, s: QubitState) -> QubitState:
    """Apply layers ``d = 1..depth``, each ``prod_m exp(i theta[d, m] P_m)``.

    Within a layer the generator acting first is ``P_1``.
    """
    _check(ansatz, s)
    return QubitState(apply_vha_vec(ansatz, theta, s.amplitudes), s.n_qubits)


def vha_state_and_tangents(ansatz, theta, vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(U(theta) v, T)`` where row ``k`` of ``T`` is ``d/dtheta_k U(theta) v``.

    One sweep through the circuit: after each factor is applied to the
    running state, the derivative row for that factor is appended, and every
    later factor is applied to all rows accumulated so far.
    """
    theta = _flat_theta(ansatz, theta)
    strings = ansatz.parameter_strings
    tangents = np.empty((len(strings), vec.size), dtype=complex)
    state = np.asarray(vec, dtype=complex)
    for k, p in enumerate(strings):
        c, s = math.cos(theta[k]), math.sin(theta[k])
        src, phase = pauli_action(p)
        if k:
            block = tangents[:k]
            tangents[:k] = c * block + (1j * s) * (phase * block[:, src])
        state = c * state + (1j * s) * (phase * state[src])
        tangents[k] = 1j * (phase * state[src])
    return state, tangents


def tangent_state(ansatz, theta, index, s0: QubitState) -> QubitState:
    """Exact derivative of :func:`apply_vha` with respect to one parameter.

    ``index`` is a flat parameter index or a 0-based ``(layer, generator)`` pair.
    """
    _check(ansatz, s0)
    k = ansatz.flat_index(index)
    theta = _flat_theta(ansatz, theta)
    vec = s0.amplitudes
    strings = ansatz.parameter_strings
    for j in range(k + 1):
        vec = apply_pauli_exponential_vec(theta[j], strings[j], vec)
    vec = 1j * apply_pauli_vec(strings[k], vec)
    for j in range(k + 1, len(strings)):
        vec = apply_pauli_exponential_vec(theta[j], strings[j], vec)
    return QubitState(vec, s0.n_qubits)


def inner(a: QubitState, b: QubitState) -> complex:
    """``<a|b>``, antilinear in ``a``."""
    _check(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def expectation(h: PauliSum, s: QubitState) -> float:
    _check(h, s)
    value = np.vdot(s.amplitudes, apply_sum_vec(h, s.amplitudes))
    if abs(value.imag) > 1e-10:
        raise ArithmeticError(f"expectation of a Hermitian sum has imaginary part {value.imag:g}")
    return float(value.real)


def apply_operator_vec(op, vec: np.ndarray) -> np.ndarray:
    """Apply ``sum_i c_i P_i`` given as an iterable of ``(c_i, P_i)`` pairs."""
    out = np.zeros_like(vec, dtype=complex)
    for coeff, string in op:
        out += coeff * apply_pauli_vec(string, vec)
    return out
