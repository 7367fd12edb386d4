"""Symmetry reduction of the two-site Hubbard model.

The dimer qubit Hamiltonian splits into the hopping set ``S1`` and the
interaction set ``S2``. On the non-degenerate ground state all members of
a set act identically, which makes the evolution of ``P|psi>`` for a
single Jordan-Wigner string ``P`` an exponential of one hopping term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exact import dense_matrix
from .pauli import PauliString, PauliSum, commutes, multiply
from .statevector import QubitState, apply_pauli_vec

S1_STRINGS = ("XZXI", "YZYI", "IXZX", "IYZY")
S2_STRINGS = ("ZZII", "IIZZ")
LADDER_STRINGS = ("XIII", "ZXII", "ZZXI", "ZZZX")


class SymmetryError(AssertionError):
    """A structural property of the dimer failed to hold."""


@dataclass(frozen=True)
class SymmetrySets:
    S1: tuple[PauliString, ...]
    S2: tuple[PauliString, ...]

    @classmethod
    def default(cls) -> "SymmetrySets":
        return cls(tuple(map(PauliString, S1_STRINGS)), tuple(map(PauliString, S2_STRINGS)))

    def sets(self) -> tuple[tuple[PauliString, ...], ...]:
        return (self.S1, self.S2)

    def to_dict(self) -> dict:
        return {"S1": [p.symbols for p in self.S1], "S2": [p.symbols for p in self.S2]}


def verify_symmetry_sets(h: PauliSum, atol: float = 1e-10) -> SymmetrySets:
    """Check pairwise commutation, ``[H, P_l P_m] = 0`` and ``P^2 = I`` for both sets."""
    if h.n_qubits != 4:
        raise SymmetryError(f"dimer Hamiltonian acts on 4 qubits, not {h.n_qubits}")
    sets = SymmetrySets.default()
    H = dense_matrix(h)
    for group in sets.sets():
        coeffs = {h.coefficient(p) for p in group}
        if len(coeffs) != 1 or 0.0 in coeffs:
            raise SymmetryError(f"members of {[p.symbols for p in group]} carry unequal coefficients {coeffs}")
        for p in group:
            phase, sq = multiply(p, p)
            if phase != 1 or not sq.is_identity():
                raise SymmetryError(f"{p} does not square to the identity")
        for a, b in combinations(group, 2):
            if not commutes(a, b):
                raise SymmetryError(f"{a} and {b} do not commute")
            phase, prod = multiply(a, b)
            P = phase * dense_matrix(PauliSum([(1.0, prod)]))
            comm = np.max(np.abs(H @ P - P @ H))
            if comm > atol:
                raise SymmetryError(f"[H, {a}{b}] has norm {comm:g}")
    return sets


@dataclass
class PropositionReport:
    """Residuals ``||P_l P_m psi - psi||`` and ``||P_l psi - P_m psi||`` per pair."""

    product_residuals: dict = field(default_factory=dict)
    equality_residuals: dict = field(default_factory=dict)
    alphas: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        vals = [*self.product_residuals.values(), *self.equality_residuals.values()]
        return max(vals) if vals else 0.0

    def to_dict(self) -> dict:
        key = lambda k: f"{k[0]}*{k[1]}"
        return {
            "product_residuals": {key(k): v for k, v in self.product_residuals.items()},
            "equality_residuals": {key(k): v for k, v in self.equality_residuals.items()},
            "alpha": {key(k): [v.real, v.imag] for k, v in self.alphas.items()},
            "max_residual": self.max_residual,
        }


def check_propositions(ground: QubitState, sets: SymmetrySets, atol: float = 1e-10) -> PropositionReport:
    """``P_l P_m|psi> = |psi>`` and ``P_l|psi> = P_m|psi>`` for every pair within a set."""
    psi = ground.amplitudes
    report = PropositionReport()
    for group in sets.sets():
        for a, b in combinations(group, 2):
            pa, pb = apply_pauli_vec(a, psi), apply_pauli_vec(b, psi)
            pab = apply_pauli_vec(a, pb)
            key = (a.symbols, b.symbols)
            report.product_residuals[key] = float(np.linalg.norm(pab - psi))
            report.equality_residuals[key] = float(np.linalg.norm(pa - pb))
            report.alphas[key] = complex(np.vdot(psi, pab))
    if report.max_residual > atol:
        raise SymmetryError(f"propositions violated, max residual {report.max_residual:g}")
    return report


@dataclass(frozen=True)
class SignTable:
    """``entries[(P_l, P~)] = +1`` if ``P_l`` and ``P~`` commute, else ``-1``."""

    rows: tuple[str, ...]
    columns: tuple[str, ...]
    entries: dict

    def __getitem__(self, key: tuple[str, str]) -> int:
        return self.entries[key]

    def column_sum(self, column: str, rows=None, weights=None) -> float:
        rows = self.rows if rows is None else rows
        weights = weights or {}
        return sum(weights.get(r, 1.0) * self.entries[r, column] for r in rows)

    def as_rows(self) -> list[list[str]]:
        return [[r, *("+" if self.entries[r, c] > 0 else "-" for c in self.columns)] for r in self.rows]


def sign(p_l: str | PauliString, p_tilde: str | PauliString) -> int:
    a = p_l if isinstance(p_l, PauliString) else PauliString(p_l)
    b = p_tilde if isinstance(p_tilde, PauliString) else PauliString(p_tilde)
    return 1 if commutes(a, b) else -1


def sign_table(columns=LADDER_STRINGS) -> SignTable:
    rows = S1_STRINGS + S2_STRINGS
    return SignTable(rows, tuple(columns), {(r, c): sign(r, c) for r in rows for c in columns})


@dataclass(frozen=True)
class SinglePauliRule:
    """``exp(-iHt) P~|psi> = exp(-i c_I t) exp(i sigma tau P_l t) P~|psi>``."""

    p_tilde: PauliString
    generator: PauliString
    sigma: int
    tau: float
    identity_coefficient: float

    def angle(self, t) -> np.ndarray:
        return self.sigma * self.tau * np.asarray(t, dtype=float)

    def global_phase(self, t) -> np.ndarray:
        return -self.identity_coefficient * np.asarray(t, dtype=float)

    def apply(self, vec: np.ndarray, t: float, with_phase: bool = True) -> np.ndarray:
        a = float(self.angle(t))
        out = math.cos(a) * vec + 1j * math.sin(a) * apply_pauli_vec(self.generator, vec)
        return np.exp(1j * self.global_phase(t)) * out if with_phase else out


def single_pauli_propagator(p_tilde: str | PauliString, p_l: str | PauliString, h: PauliSum) -> SinglePauliRule:
    """Exact one-term propagator for ``P~|psi>`` on the dimer.

    ``P~`` must anticommute with exactly one member of ``S1`` and with
    exactly one member of ``S2``; the four ladder strings and their Y
    partners all qualify.
    """
    p_tilde = p_tilde if isinstance(p_tilde, PauliString) else PauliString(p_tilde)
    p_l = p_l if isinstance(p_l, PauliString) else PauliString(p_l)
    if p_l.symbols not in S1_STRINGS:
        raise ValueError(f"generator {p_l} is not in S1 = {S1_STRINGS}")
    if p_tilde.n_qubits != 4:
        raise ValueError(f"{p_tilde} is not a 4-qubit string")
    s1_sum = sum(sign(r, p_tilde) for r in S1_STRINGS)
    s2_sum = sum(sign(r, p_tilde) for r in S2_STRINGS)
    if s1_sum != 2 or s2_sum != 0:
        raise ValueError(f"{p_tilde} is not covered by the sign table (S1 sum {s1_sum}, S2 sum {s2_sum})")
    c1 = h.coefficient(p_l)
    if c1 == 0.0:
        raise ValueError(f"{p_l} is not a term of the Hamiltonian")
    # hopping coefficient is -tau/2
    return SinglePauliRule(p_tilde, p_l, sign(p_l, p_tilde), -2.0 * c1, h.identity_coefficient())


@dataclass
class SymmetryPropagator:
    """Evolve ``P~|psi>`` with one S1 exponential; only valid for dimer ladder strings."""

    generator: str = "XZXI"
    name: str = "symmetry"

    def propagate(self, h: PauliSum, vec: np.ndarray, times: np.ndarray, string: PauliString | None = None):
        from .greens import Evolution

        if string is None:
            raise ValueError("the symmetry propagator needs the excitation string")
        rule = single_pauli_propagator(string, self.generator, h)
        times = np.asarray(times, dtype=float)
        angles = rule.angle(times)
        pv = apply_pauli_vec(rule.generator, vec)
        states = np.cos(angles)[:, None] * vec + (1j * np.sin(angles))[:, None] * pv
        return Evolution(times, states, rule.global_phase(times))


def symmetry_report(h: PauliSum, ground: QubitState) -> dict:
    sets = verify_symmetry_sets(h)
    table = sign_table()
    report = check_propositions(ground, sets)
    return {
        "sets": sets.to_dict(),
        "sign_table": {"columns": list(table.columns), "rows": table.as_rows()},
        "propositions": report.to_dict(),
    }
