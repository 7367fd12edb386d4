"""McLachlan variational real-time evolution with a layered Hamiltonian ansatz."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, Sequence

import numpy as np

from .pauli import PauliString, PauliSum, PauliTerm
from .series import time_grid
from .statevector import (
    QubitState,
    apply_pauli_exponential_vec,
    apply_sum_vec,
    vha_state_and_tangents,
)

DEFAULT_REGULARIZATION = 1e-8


class VqsError(RuntimeError):
    """Raised when the variational integration leaves its domain of validity."""


@dataclass(frozen=True)
class VhaAnsatz:
    """``prod_{d=1}^{depth} prod_m exp(i theta_{d,m} P_m)``.

    Parameters are flattened layer-major: index ``d * M + m``.
    """

    generators: tuple[PauliTerm, ...]
    depth: int
    n_qubits: int

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("ansatz depth must be at least 1")
        if not self.generators:
            raise ValueError("ansatz needs at least one generator")
        for g in self.generators:
            if g.string.n_qubits != self.n_qubits:
                raise ValueError(f"generator {g.string} does not act on {self.n_qubits} qubits")
            if g.string.is_identity():
                raise ValueError("identity generator only adds a global phase")

    @classmethod
    def from_hamiltonian(cls, h: PauliSum, depth: int, strings: Sequence[str | PauliString] | None = None) -> "VhaAnsatz":
        """Generators are the non-identity terms of ``h`` (or the listed subset, in that order)."""
        terms = {t.string.symbols: t for t in h.without_identity().terms}
        if strings is None:
            chosen = tuple(terms.values())
        else:
            keys = [s.symbols if isinstance(s, PauliString) else s for s in strings]
            missing = [k for k in keys if k not in terms]
            if missing:
                raise ValueError(f"generators {missing} are not terms of the Hamiltonian")
            chosen = tuple(terms[k] for k in keys)
        return cls(chosen, depth, h.n_qubits)

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def n_params(self) -> int:
        return self.depth * len(self.generators)

    @cached_property
    def parameter_strings(self) -> tuple[PauliString, ...]:
        return tuple(g.string for g in self.generators) * self.depth

    def flat_index(self, index) -> int:
        if isinstance(index, tuple):
            d, m = index
            if not (0 <= d < self.depth and 0 <= m < self.n_generators):
                raise IndexError(f"parameter {index} outside depth {self.depth} x {self.n_generators}")
            return d * self.n_generators + m
        if not 0 <= index < self.n_params:
            raise IndexError(f"parameter {index} outside 0..{self.n_params - 1}")
        return int(index)

    def zeros(self) -> np.ndarray:
        return np.zeros(self.n_params)

    def extended(self, n_extra: int) -> "VhaAnsatz":
        """Same circuit on a register with ``n_extra`` idle high qubits."""
        pad = PauliString.identity(n_extra)
        gens = tuple(PauliTerm(g.coefficient, g.string.tensor(pad)) for g in self.generators)
        return VhaAnsatz(gens, self.depth, self.n_qubits + n_extra)


@dataclass(frozen=True, eq=False)
class VqsLinearSystem:
    M: np.ndarray
    V: np.ndarray
    regularization: float = DEFAULT_REGULARIZATION
    # <d_i phi|phi>, <phi|H|phi> and the evolved state, kept for the phase equation
    overlaps: np.ndarray | None = None
    energy: float = 0.0
    state: np.ndarray | None = None
    tangents: np.ndarray | None = None

    def __post_init__(self):
        asym = np.max(np.abs(self.M - self.M.T)) if self.M.size else 0.0
        if asym > 1e-10:
            raise ValueError(f"M is not symmetric (max deviation {asym:g})")


def assemble_system(
    ansatz: VhaAnsatz,
    theta,
    s0: QubitState | np.ndarray,
    h: PauliSum,
    regularization: float = DEFAULT_REGULARIZATION,
) -> VqsLinearSystem:
    """Build ``M`` and ``V`` from the derivative states of ``U(theta)|s0>``.

    ``M_ij = Re<d_i phi|d_j phi> + <d_i phi|phi><d_j phi|phi>`` and
    ``V_i = Im<d_i phi|H|phi> + i <d_i phi|phi><phi|H|phi>``.
    """
    vec = s0.amplitudes if isinstance(s0, QubitState) else np.asarray(s0, dtype=complex)
    if h.n_qubits != ansatz.n_qubits or vec.size != 1 << ansatz.n_qubits:
        raise ValueError("ansatz, state and Hamiltonian act on different registers")
    phi, tangents = vha_state_and_tangents(ansatz, theta, vec)
    h_phi = apply_sum_vec(h, phi)
    energy = float(np.vdot(phi, h_phi).real)
    overlaps = tangents.conj() @ phi
    M = (tangents.conj() @ tangents.T).real + (np.outer(overlaps, overlaps)).real
    M = 0.5 * (M + M.T)
    V = (tangents.conj() @ h_phi).imag + (1j * overlaps * energy).real
    return VqsLinearSystem(M, V, regularization, overlaps, energy, phi, tangents)


def geometric_system(ansatz: VhaAnsatz, theta, s0: QubitState, h: PauliSum) -> tuple[np.ndarray, np.ndarray]:
    """``Re<T_i|T_j>`` and ``Im<T_i|H|phi>`` with ``T_i = d_i phi - <phi|d_i phi> phi``."""
    phi, tangents = vha_state_and_tangents(ansatz, theta, s0.amplitudes)
    proj = tangents - np.outer(tangents @ phi.conj(), phi)
    return (proj.conj() @ proj.T).real, (proj.conj() @ apply_sum_vec(h, phi)).imag


NULL_SPACE_RTOL = 1e-12


def solve_velocities(system: VqsLinearSystem) -> np.ndarray:
    """Minimum-norm solution of ``(M + reg I) thetadot = V`` on the range of ``M``.

    ``V`` lies in the range of ``M`` in exact arithmetic, so eigen-directions
    with eigenvalue below ``NULL_SPACE_RTOL * max eig`` carry only rounding
    noise; keeping them would amplify it by ``1 / reg``.
    """
    M, V = system.M, system.V
    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(V))):
        raise VqsError("non-finite entries in the McLachlan system")
    w, U = np.linalg.eigh(M)
    top = float(np.max(np.abs(w))) if w.size else 0.0
    keep = w > NULL_SPACE_RTOL * top
    if not np.any(keep):
        return np.zeros_like(V)
    Uk = U[:, keep]
    return Uk @ ((Uk.T @ V) / (w[keep] + system.regularization))


def velocity_residual(system: VqsLinearSystem, thetadot: np.ndarray) -> float:
    A = system.M + system.regularization * np.eye(system.M.shape[0])
    return float(np.linalg.norm(A @ thetadot - system.V))


def global_phase_rate(ansatz: VhaAnsatz, theta, thetadot, s0: QubitState, h: PauliSum) -> float:
    """``sum_i Im<d_i phi|phi> thetadot_i - <phi|H|phi>``."""
    system = assemble_system(ansatz, theta, s0, h)
    return _phase_rate(system, np.asarray(thetadot, dtype=float))


def _phase_rate(system: VqsLinearSystem, thetadot: np.ndarray) -> float:
    return float(system.overlaps.imag @ thetadot - system.energy)


@dataclass(frozen=True, eq=False)
class VqsTrajectory:
    times: np.ndarray
    theta: np.ndarray
    theta0: np.ndarray
    initial_state: QubitState
    ansatz: VhaAnsatz
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if self.theta.shape != (self.times.size, self.ansatz.n_params):
            raise ValueError("theta must have one row of parameters per time")
        if self.theta0.shape != self.times.shape:
            raise ValueError("theta0 must have one entry per time")

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def state_vec(self, k: int, with_phase: bool = True) -> np.ndarray:
        from .statevector import apply_vha_vec

        vec = apply_vha_vec(self.ansatz, self.theta[k], self.initial_state.amplitudes)
        return np.exp(1j * self.theta0[k]) * vec if with_phase else vec

    def states(self, with_phase: bool = False) -> np.ndarray:
        """Rows ``U(theta(t_k)) |s0>``, optionally times ``exp(i theta0)``."""
        return np.array([self.state_vec(k, with_phase) for k in range(self.times.size)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "theta0", *(f"theta_{k + 1}" for k in range(self.ansatz.n_params))])
        for t, th0, th in zip(self.times, self.theta0, self.theta):
            writer.writerow([repr(float(t)), repr(float(th0)), *(repr(float(x)) for x in th)])
        return buf.getvalue()


Integrator = Literal["rk4", "euler"]


def evolve(
    ansatz: VhaAnsatz,
    s0: QubitState,
    h: PauliSum,
    t_max: float,
    dt: float,
    integrator: Integrator = "rk4",
    regularization: float = DEFAULT_REGULARIZATION,
    abort_residual: float = 1e-6,
) -> VqsTrajectory:
    """Integrate ``M thetadot = V`` and the global-phase equation from ``theta = 0``.

    The grid is ``0, dt, 2 dt, ...`` up to the first point at or past
    ``t_max``. Each Runge-Kutta stage reassembles the linear system.
    """
    if dt <= 0 or not math.isfinite(dt):
        raise ValueError("dt must be positive and finite")
    if integrator not in ("rk4", "euler"):
        raise ValueError(f"unknown integrator {integrator!r}")
    times = time_grid(t_max, dt)
    vec = s0.amplitudes

    def rate(theta: np.ndarray) -> tuple[np.ndarray, float, float]:
        system = assemble_system(ansatz, theta, vec, h, regularization)
        thetadot = solve_velocities(system)
        resid = velocity_residual(system, thetadot)
        if resid > abort_residual:
            raise VqsError(f"linear solve residual {resid:g} above {abort_residual:g}")
        if not np.all(np.isfinite(thetadot)):
            raise VqsError("non-finite parameter velocities")
        return thetadot, _phase_rate(system, thetadot), resid

    theta = np.zeros((times.size, ansatz.n_params))
    theta0 = np.zeros(times.size)
    residuals = np.zeros(times.size)
    for k in range(times.size - 1):
        th = theta[k]
        if integrator == "euler":
            k1, p1, r1 = rate(th)
            theta[k + 1] = th + dt * k1
            theta0[k + 1] = theta0[k] + dt * p1
            residuals[k] = r1
            continue
        k1, p1, r1 = rate(th)
        k2, p2, r2 = rate(th + 0.5 * dt * k1)
        k3, p3, r3 = rate(th + 0.5 * dt * k2)
        k4, p4, r4 = rate(th + dt * k3)
        theta[k + 1] = th + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        theta0[k + 1] = theta0[k] + dt / 6 * (p1 + 2 * p2 + 2 * p3 + p4)
        residuals[k] = max(r1, r2, r3, r4)
    return VqsTrajectory(times, theta, theta0, s0, ansatz, residuals)


def trotter_propagate(h: PauliSum, t: float, n_steps: int, s: QubitState) -> QubitState:
    """``(prod_m exp(-i c_m P_m t / n))^n |s>`` in the declared term order."""
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    if h.n_qubits != s.n_qubits:
        raise ValueError("Hamiltonian and state act on different registers")
    vec = s.amplitudes
    for _ in range(n_steps):
        for term in h.terms:
            vec = apply_pauli_exponential_vec(-term.coefficient * t / n_steps, term.string, vec)
    return QubitState(vec, s.n_qubits)
