"""Green's functions from evolved Pauli-excited states.

Two protocols are emulated:

* one-state (OS): only ``P_j|psi>`` is evolved, ground-state evolution is
  replaced by the phase ``exp(i E0 t)`` and the evolved state carries its
  own global phase ``theta0_j(t)``;
* control-free (CF): one set of parameters must evolve ``|psi>`` and
  ``P_j|psi>`` together; it is trained on the ancilla-extended state
  ``(|0>|psi> + |1>P_j|psi>)/sqrt(2)``.

Both reduce to a table of brakets ``X_ij(t)`` from which

    G^<(t) = -i sum_ij a_i b_j X_ij(t)
    G^>(t) = +i sum_ij a_i b_j conj(X_ij(t))

where ``c_l = sum_i a_i P_i`` and ``c_m^dagger = sum_j b_j P_j``. The
greater component needs ``exp(-iHt) c_m|psi>``; ``c_m`` has the same
strings as ``c_m^dagger``, so every string's evolution serves both.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from .exact import MAX_QUBITS, diagonalize
from .pauli import PauliString, PauliSum
from .series import GreensSeries, check_uniform, retarded, same_grid
from .statevector import QubitState, apply_pauli_exponential_vec, apply_pauli_vec
from .vqs import DEFAULT_REGULARIZATION, VhaAnsatz, VqsTrajectory, evolve

__all__ = [
    "BraketTask",
    "Evolution",
    "ExactPropagator",
    "GreensSeries",
    "TrotterPropagator",
    "VqsPropagator",
    "cf_greens",
    "estimate_braket",
    "hadamard_braket",
    "manifest",
    "os_greater",
    "os_greens",
    "os_lesser",
    "retarded",
    "rms_error",
]


# ---------------------------------------------------------------------------
# Hadamard-test brakets


def estimate_braket(value: complex, shots: int | None, rng: np.random.Generator | None = None) -> complex:
    """Shot-noise estimate of a braket measured by a Hadamard test.

    Each quadrature is read from ``shots`` ancilla measurements; outcome
    ``+1`` has probability ``(1 + Re)/2`` (ancilla phase 0) or
    ``(1 + Im)/2`` (ancilla phase -pi/2).
    """
    if shots is None:
        return complex(value)
    if shots < 1:
        raise ValueError("shots must be a positive integer")
    if abs(value) > 1 + 1e-9:
        raise ValueError(f"|braket| = {abs(value):g} > 1: the measured operator is not unitary")
    rng = rng if rng is not None else np.random.default_rng()
    p = np.clip((1 + np.array([value.real, value.imag])) / 2, 0.0, 1.0)
    ups = rng.binomial(shots, p)
    re, im = 2 * ups / shots - 1
    return complex(re, im)


def _estimate_many(values: np.ndarray, shots: int | None, rng: np.random.Generator | None) -> np.ndarray:
    if shots is None:
        return values
    if shots < 1:
        raise ValueError("shots must be a positive integer")
    rng = rng if rng is not None else np.random.default_rng()
    p_re = np.clip((1 + values.real) / 2, 0.0, 1.0)
    p_im = np.clip((1 + values.imag) / 2, 0.0, 1.0)
    re = 2 * rng.binomial(shots, p_re) / shots - 1
    im = 2 * rng.binomial(shots, p_im) / shots - 1
    return re + 1j * im


def hadamard_braket(
    state: QubitState,
    chain: Sequence,
    shots: int | None = None,
    rng: np.random.Generator | None = None,
) -> complex:
    """``<psi| O_k ... O_1 |psi>`` for a chain of unitaries applied left to right.

    Elements of ``chain`` are Pauli strings or callables mapping an
    amplitude vector to an amplitude vector; ``chain[0]`` acts first.
    """
    vec = state.amplitudes
    for op in chain:
        vec = apply_pauli_vec(op, vec) if isinstance(op, PauliString) else np.asarray(op(vec))
    if abs(np.linalg.norm(vec) - state.norm()) > 1e-9:
        raise ValueError("operator chain is not unitary")
    return estimate_braket(complex(np.vdot(state.amplitudes, vec)), shots, rng)


@dataclass(frozen=True)
class BraketTask:
    left: PauliString
    right: PauliString
    coefficient: complex
    time_index: int

    def __post_init__(self):
        if self.left.n_qubits != self.right.n_qubits:
            raise ValueError("braket strings act on different registers")
        if not np.isfinite(self.coefficient):
            raise ValueError("non-finite braket coefficient")


# ---------------------------------------------------------------------------
# propagators


@dataclass(frozen=True, eq=False)
class Evolution:
    """Circuit outputs ``U(t_k)|s0>`` (rows) and the phases ``theta0(t_k)``.

    The physical state is ``exp(i theta0) U |s0>``.
    """

    times: np.ndarray
    states: np.ndarray
    theta0: np.ndarray
    trajectory: VqsTrajectory | None = None


class Propagator(Protocol):
    name: str

    def propagate(self, h: PauliSum, vec: np.ndarray, times: np.ndarray,
                  string: PauliString | None = None) -> Evolution: ...


def _idle_high_qubits(h: PauliSum) -> int:
    # number of top qubits on which every term acts as identity
    n = 0
    while n < h.n_qubits - 1 and all(t.string.symbols[h.n_qubits - 1 - n] == "I" for t in h.terms):
        n += 1
    return n


class ExactPropagator:
    name = "exact"

    def propagate(self, h, vec, times, string=None) -> Evolution:
        idle = _idle_high_qubits(h) if h.n_qubits > MAX_QUBITS else 0
        core = PauliSum([(t.coefficient, t.string.symbols[: h.n_qubits - idle]) for t in h.terms],
                        h.n_qubits - idle)
        dec = diagonalize(core)
        blocks = np.asarray(vec, dtype=complex).reshape(1 << idle, 1 << core.n_qubits)
        states = np.concatenate([dec.evolve_vec(b, times) for b in blocks], axis=1)
        return Evolution(np.asarray(times), states, np.zeros(len(times)))


@dataclass
class TrotterPropagator:
    """First-order product formula with a fixed step (``round(t/step)`` slices)."""

    step: float
    name: str = "trotter"

    def propagate(self, h, vec, times, string=None) -> Evolution:
        states = []
        for t in times:
            n = max(1, int(round(t / self.step)))
            v = np.asarray(vec, dtype=complex)
            for _ in range(n):
                for term in h.terms:
                    v = apply_pauli_exponential_vec(-term.coefficient * t / n, term.string, v)
            states.append(v)
        return Evolution(np.asarray(times), np.array(states), np.zeros(len(times)))


@dataclass
class VqsPropagator:
    """McLachlan evolution in a Hamiltonian-generated ansatz of fixed depth."""

    depth: int
    strings: Sequence[str] | None = None
    integrator: str = "rk4"
    regularization: float = DEFAULT_REGULARIZATION
    name: str = "vqs"
    trajectories: dict = field(default_factory=dict)

    def propagate(self, h, vec, times, string=None) -> Evolution:
        times = np.asarray(times, dtype=float)
        dt = check_uniform(times)
        ansatz = VhaAnsatz.from_hamiltonian(h, self.depth, self.strings)
        s0 = QubitState(vec, h.n_qubits)
        traj = evolve(ansatz, s0, h, times[-1], dt, self.integrator, self.regularization)
        if traj.times.size != times.size or not np.allclose(traj.times, times, atol=1e-9):
            raise ValueError("time grid must start at 0 with a constant step")
        self.trajectories[str(string) if string is not None else len(self.trajectories)] = traj
        return Evolution(times, traj.states(), traj.theta0, traj)


# ---------------------------------------------------------------------------
# braket tables


def _ground_energy(h: PauliSum, ground: QubitState, e0: float | None) -> float:
    if e0 is not None:
        return float(e0)
    if h.n_qubits <= MAX_QUBITS:
        return diagonalize(h).ground_energy
    from .statevector import expectation

    return expectation(h, ground)


def _check_grid(times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    check_uniform(times)
    if abs(times[0]) > 1e-12:
        raise ValueError("time grid must start at t = 0")
    return times


def _os_table(h, ground, annihilator, creator, propagator, times, shots, rng) -> np.ndarray:
    """``X[i, j, t] = exp(i theta0_j) <psi|P_i U_j P_j|psi>`` (E0 phase not included)."""
    psi = ground.amplitudes
    left = [apply_pauli_vec(p, psi) for _, p in annihilator]
    table = np.zeros((len(annihilator), len(creator), len(times)), dtype=complex)
    for j, (_, pj) in enumerate(creator):
        evo = propagator.propagate(h, apply_pauli_vec(pj, psi), times, pj)
        if evo.states.shape[0] != len(times):
            raise ValueError(f"propagator returned {evo.states.shape[0]} states for {len(times)} times")
        for i, li in enumerate(left):
            raw = evo.states @ li.conj()
            table[i, j] = np.exp(1j * evo.theta0) * _estimate_many(raw, shots, rng)
    return table


def _cf_table(h, ground, annihilator, creator, propagator, times, shots, rng) -> np.ndarray:
    """``X[i, j, t] = <U psi| P_i |U P_j psi>`` with ``U`` trained on the ancilla-extended state."""
    psi = ground.amplitudes
    dim = psi.size
    h_ext = h.extended(1)
    table = np.zeros((len(annihilator), len(creator), len(times)), dtype=complex)
    for j, (_, pj) in enumerate(creator):
        # ancilla is the highest qubit: first half of the vector is ancilla |0>
        start = np.concatenate([psi, apply_pauli_vec(pj, psi)]) / math.sqrt(2)
        evo = propagator.propagate(h_ext, start, times, pj)
        ev_psi, ev_pj = evo.states[:, :dim], evo.states[:, dim:]
        for i, (_, pi) in enumerate(annihilator):
            raw = 2 * np.einsum("tk,tk->t", ev_psi.conj(), apply_pauli_vec(pi, ev_pj))
            table[i, j] = _estimate_many(raw, shots, rng)
    return table


def _assemble(table, annihilator, creator, times, phase, label, algorithm, shots, meta):
    weights = np.outer([complex(a) for a, _ in annihilator], [complex(b) for b, _ in creator])
    x = phase * table
    less = -1j * np.einsum("ij,ijt->t", weights, x)
    great = 1j * np.einsum("ij,ijt->t", weights, x.conj())
    g_less = GreensSeries(label, "lesser", times, less, algorithm, shots, dict(meta))
    g_great = GreensSeries(label, "greater", times, great, algorithm, shots, dict(meta))
    return g_less, g_great


def _label(annihilator, creator, label):
    return label or f"{getattr(annihilator, 'label', 'c')},{getattr(creator, 'label', 'c†')}"


def os_greens(
    h: PauliSum,
    ground: QubitState,
    annihilator,
    creator,
    propagator: Propagator,
    times,
    e0: float | None = None,
    shots: int | None = None,
    rng: np.random.Generator | None = None,
    label: str = "",
) -> tuple[GreensSeries, GreensSeries, GreensSeries]:
    """Lesser, greater and retarded components by the one-state protocol.

    ``e0`` overrides the exact ground energy in the ``exp(+-i E0 t)`` factors.
    """
    times = _check_grid(times)
    energy = _ground_energy(h, ground, e0)
    table = _os_table(h, ground, annihilator, creator, propagator, times, shots, rng)
    tag = "trotter" if getattr(propagator, "name", "") == "trotter" else "OS"
    meta = {"propagator": getattr(propagator, "name", type(propagator).__name__), "E0": energy}
    g_less, g_great = _assemble(table, annihilator, creator, times, np.exp(1j * energy * times),
                                _label(annihilator, creator, label), tag, shots, meta)
    return g_less, g_great, retarded(g_less, g_great)


def os_lesser(h, ground, annihilator, creator, propagator, times, e0=None, shots=None, rng=None, label=""):
    return os_greens(h, ground, annihilator, creator, propagator, times, e0, shots, rng, label)[0]


def os_greater(h, ground, annihilator, creator, propagator, times, e0=None, shots=None, rng=None, label=""):
    return os_greens(h, ground, annihilator, creator, propagator, times, e0, shots, rng, label)[1]


def cf_greens(
    h: PauliSum,
    ground: QubitState,
    annihilator,
    creator,
    propagator: Propagator,
    times,
    shots: int | None = None,
    rng: np.random.Generator | None = None,
    label: str = "",
) -> tuple[GreensSeries, GreensSeries, GreensSeries]:
    """Lesser, greater and retarded components by the control-free protocol."""
    times = _check_grid(times)
    table = _cf_table(h, ground, annihilator, creator, propagator, times, shots, rng)
    meta = {"propagator": getattr(propagator, "name", type(propagator).__name__)}
    g_less, g_great = _assemble(table, annihilator, creator, times, 1.0,
                                _label(annihilator, creator, label), "CF", shots, meta)
    return g_less, g_great, retarded(g_less, g_great)


# ---------------------------------------------------------------------------


def rms_error(candidate: GreensSeries, reference: GreensSeries) -> float:
    if not same_grid(candidate, reference):
        raise ValueError("series are on different grids")
    return float(np.sqrt(np.mean(np.abs(candidate.values - reference.values) ** 2)))


def manifest(model: dict, series: Sequence[GreensSeries], **extra) -> str:
    doc = {
        "model": model,
        "series": [
            {"label": s.label, "kind": s.kind, "algorithm": s.algorithm, "shots": s.shots,
             "dt": s.dt, "n_times": int(s.times.size), **s.meta}
            for s in series
        ],
        **extra,
    }
    return json.dumps(doc, indent=2, sort_keys=True, default=str)
