"""Hubbard chains and their Jordan-Wigner images.

Spin orbitals are interleaved, ``(1up, 1down, 2up, 2down, ...)`` maps to
qubits ``(1, 2, 3, 4, ...)``. The annihilator of qubit ``q`` is

    c_q = Z_1 ... Z_{q-1} (X_q + i Y_q) / 2

with ``|1>`` meaning occupied, so ``n_q = (I - Z_q) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

from .pauli import PauliString, PauliSum, PauliTerm, multiply

Spin = Literal["up", "down"]
Kind = Literal["creation", "annihilation"]

_SPIN_ALIASES = {"up": "up", "u": "up", "↑": "up", "down": "down", "d": "down", "dn": "down", "↓": "down"}

# coefficients below this are treated as exact cancellations
_ZERO = 1e-12


def normalize_spin(spin: str) -> Spin:
    try:
        return _SPIN_ALIASES[spin.strip().lower()]  # type: ignore[return-value]
    except KeyError:
        raise ValueError(f"unknown spin {spin!r}; use 'up' or 'down'") from None


@dataclass(frozen=True)
class HubbardModel:
    n_sites: int
    tau: float = 1.0
    U: float = 3.0
    boundary: Literal["open", "periodic"] = "open"

    def __post_init__(self):
        if self.n_sites < 2:
            raise ValueError(f"n_sites must be >= 2, got {self.n_sites}")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"boundary must be 'open' or 'periodic', got {self.boundary!r}")
        if self.boundary == "periodic" and self.n_sites == 2:
            raise ValueError("periodic boundary on 2 sites double-counts the only bond")
        if not (math.isfinite(self.tau) and math.isfinite(self.U)):
            raise ValueError("tau and U must be finite")

    @property
    def n_qubits(self) -> int:
        return 2 * self.n_sites

    def qubit(self, site: int, spin: str) -> int:
        """1-based qubit carrying spin orbital ``(site, spin)``."""
        if not 1 <= site <= self.n_sites:
            raise IndexError(f"site {site} outside 1..{self.n_sites}")
        return 2 * (site - 1) + (1 if normalize_spin(spin) == "up" else 2)

    def bonds(self) -> list[tuple[int, int]]:
        bonds = [(i, i + 1) for i in range(1, self.n_sites)]
        if self.boundary == "periodic":
            bonds.append((1, self.n_sites))
        return bonds


@dataclass(frozen=True)
class LadderOperatorExpansion:
    """A fermionic operator written as ``sum_i coefficients[i] * strings[i]``."""

    coefficients: tuple[complex, ...]
    strings: tuple[PauliString, ...]
    kind: Kind
    label: str = ""

    def __post_init__(self):
        if len(self.coefficients) != len(self.strings):
            raise ValueError("coefficients and strings differ in length")
        if not self.strings:
            raise ValueError("empty ladder operator expansion")

    @property
    def n_qubits(self) -> int:
        return self.strings[0].n_qubits

    def __iter__(self):
        return iter(zip(self.coefficients, self.strings))

    def __len__(self) -> int:
        return len(self.strings)

    def adjoint(self) -> "LadderOperatorExpansion":
        kind: Kind = "annihilation" if self.kind == "creation" else "creation"
        label = self.label[:-1] if self.label.endswith("†") else self.label + "†"
        return LadderOperatorExpansion(
            tuple(complex(c).conjugate() for c in self.coefficients), self.strings, kind, label
        )


def _jw_annihilator(n_qubits: int, qubit: int) -> dict[PauliString, complex]:
    prefix = "Z" * (qubit - 1)
    suffix = "I" * (n_qubits - qubit)
    return {PauliString(prefix + "X" + suffix): 0.5, PauliString(prefix + "Y" + suffix): 0.5j}


def _conj(op: dict[PauliString, complex]) -> dict[PauliString, complex]:
    return {s: complex(c).conjugate() for s, c in op.items()}


def _product(*ops: dict[PauliString, complex]) -> dict[PauliString, complex]:
    result = {PauliString.identity(next(iter(ops[0])).n_qubits): 1 + 0j}
    for op in ops:
        nxt: dict[PauliString, complex] = {}
        for sa, ca in result.items():
            for sb, cb in op.items():
                phase, s = multiply(sa, sb)
                nxt[s] = nxt.get(s, 0j) + phase * ca * cb
        result = nxt
    return result


def _accumulate(total: dict[PauliString, complex], op: dict[PauliString, complex], scale: complex) -> None:
    for s, c in op.items():
        total[s] = total.get(s, 0j) + scale * c


def qubit_hamiltonian(m: HubbardModel) -> PauliSum:
    """Jordan-Wigner image of the Hubbard chain, chemical potential U/2 included.

    Term order: identity, then hopping strings bond by bond (up before
    down, X-string before Y-string), then the on-site ZZ pairs.
    """
    n = m.n_qubits
    a = {q: _jw_annihilator(n, q) for q in range(1, n + 1)}
    num = {q: _product(_conj(a[q]), a[q]) for q in a}
    total: dict[PauliString, complex] = {PauliString.identity(n): 0j}
    for i, j in m.bonds():
        for spin in ("up", "down"):
            p, q = m.qubit(i, spin), m.qubit(j, spin)
            _accumulate(total, _product(_conj(a[p]), a[q]), -m.tau)
            _accumulate(total, _product(_conj(a[q]), a[p]), -m.tau)
    for i in range(1, m.n_sites + 1):
        up, down = m.qubit(i, "up"), m.qubit(i, "down")
        _accumulate(total, _product(num[up], num[down]), m.U)
        _accumulate(total, num[up], -m.U / 2)
        _accumulate(total, num[down], -m.U / 2)
    for s, c in total.items():
        if abs(c.imag) > _ZERO:
            raise ArithmeticError(f"non-Hermitian remainder {c} on {s}")
    rank = {s: k for k, s in enumerate(_canonical_order(m))}
    kept = sorted((s for s, c in total.items() if abs(c.real) > _ZERO), key=lambda s: rank.get(s, len(rank)))
    return PauliSum([PauliTerm(total[s].real, s) for s in kept], n)


def _canonical_order(m: HubbardModel) -> list[PauliString]:
    n = m.n_qubits
    order = [PauliString.identity(n)]
    for i, j in m.bonds():
        for spin in ("up", "down"):
            p, q = sorted((m.qubit(i, spin), m.qubit(j, spin)))
            for sym in "XY":
                order.append(PauliString("I" * (p - 1) + sym + "Z" * (q - p - 1) + sym + "I" * (n - q)))
    for i in range(1, m.n_sites + 1):
        q = m.qubit(i, "up")
        order.append(PauliString("I" * (q - 1) + "ZZ" + "I" * (n - q - 1)))
    return order


def ladder_operator(m: HubbardModel, site: int, spin: str, kind: Kind) -> LadderOperatorExpansion:
    q = m.qubit(site, spin)
    op = _jw_annihilator(m.n_qubits, q)
    if kind == "creation":
        op = _conj(op)
    elif kind != "annihilation":
        raise ValueError(f"kind must be 'creation' or 'annihilation', got {kind!r}")
    arrow = "↑" if normalize_spin(spin) == "up" else "↓"
    label = f"c{site}{arrow}" + ("†" if kind == "creation" else "")
    return LadderOperatorExpansion(tuple(op.values()), tuple(op.keys()), kind, label)


def momentum_operator(
    m: HubbardModel,
    combo: Sequence[tuple[complex, int, str]],
    kind: Kind,
    normalize: bool = True,
    label: str | None = None,
) -> LadderOperatorExpansion:
    """Linear combination ``c = sum_k a_k c_{site_k, spin_k}`` (or its adjoint).

    ``combo`` lists ``(a_k, site_k, spin_k)`` for the annihilation operator;
    ``kind="creation"`` returns ``c^dagger``. With ``normalize`` the weights
    are divided by ``sqrt(sum |a_k|^2)``.
    """
    if not combo:
        raise ValueError("empty operator combination")
    norm = math.sqrt(sum(abs(a) ** 2 for a, _, _ in combo)) if normalize else 1.0
    if norm == 0:
        raise ValueError("operator combination has zero norm")
    total: dict[PauliString, complex] = {}
    for a, site, spin in combo:
        _accumulate(total, _jw_annihilator(m.n_qubits, m.qubit(site, spin)), complex(a) / norm)
    total = {s: c for s, c in total.items() if abs(c) > _ZERO}
    if label is None:
        label = "(" + "".join(f"{_fmt(a)}c{site}{'↑' if normalize_spin(spin) == 'up' else '↓'}" for a, site, spin in combo) + ")"
    expansion = LadderOperatorExpansion(tuple(total.values()), tuple(total.keys()), "annihilation", label)
    if kind == "creation":
        return expansion.adjoint()
    if kind != "annihilation":
        raise ValueError(f"kind must be 'creation' or 'annihilation', got {kind!r}")
    return expansion


def _fmt(a: complex) -> str:
    a = complex(a)
    if a.imag == 0:
        return "+" if a.real == 1 else "-" if a.real == -1 else f"{a.real:+g}"
    return f"+({a:g})"


def parse_combo(text: str) -> list[tuple[complex, int, str]]:
    """Parse ``"1:1:up,-1:2:up"`` into ``[(1, 1, 'up'), (-1, 2, 'up')]``."""
    combo = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad combo entry {chunk!r}; expected coeff:site:spin")
        combo.append((complex(parts[0]), int(parts[1]), normalize_spin(parts[2])))
    return combo


def number_operator(m: HubbardModel) -> PauliSum:
    """Total particle number ``sum_q (I - Z_q) / 2``."""
    n = m.n_qubits
    terms: list[PauliTerm] = [PauliTerm(n / 2, PauliString.identity(n))]
    terms += [PauliTerm(-0.5, PauliString.single(n, q, "Z")) for q in range(1, n + 1)]
    return PauliSum(terms, n)


def expansion_terms(op: LadderOperatorExpansion) -> Iterable[tuple[complex, PauliString]]:
    return zip(op.coefficients, op.strings)
