"""Pauli strings, weighted Pauli sums and their exact algebra.

Strings are written with qubit 1 leftmost, so ``"XZXI"`` acts with X on
qubit 1, Z on qubit 2, X on qubit 3 and identity on qubit 4. In the dense
representation used elsewhere in the package, qubit ``k`` is bit ``k - 1``
of the basis index.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

SYMBOLS = "IXYZ"

# (a, b) -> (power of i, symbol) for the single-qubit product a*b
_PRODUCT = {
    ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"), ("X", "X"): (0, "I"), ("X", "Y"): (1, "Z"), ("X", "Z"): (3, "Y"),
    ("Y", "I"): (0, "Y"), ("Y", "X"): (3, "Z"), ("Y", "Y"): (0, "I"), ("Y", "Z"): (1, "X"),
    ("Z", "I"): (0, "Z"), ("Z", "X"): (1, "Y"), ("Z", "Y"): (3, "X"), ("Z", "Z"): (0, "I"),
}

_UNITS = (1 + 0j, 1j, -1 + 0j, -1j)


class Commutation(enum.Enum):
    COMMUTING = "commuting"
    ANTICOMMUTING = "anticommuting"


@dataclass(frozen=True)
class PauliString:
    """An n-qubit Pauli word such as ``"XZXI"``."""

    symbols: str

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("empty Pauli string")
        bad = set(self.symbols) - set(SYMBOLS)
        if bad:
            raise ValueError(f"invalid Pauli symbols {sorted(bad)} in {self.symbols!r}")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls("I" * n_qubits)

    @classmethod
    def single(cls, n_qubits: int, qubit: int, symbol: str) -> "PauliString":
        """Single-qubit Pauli on ``qubit`` (1-based)."""
        chars = ["I"] * n_qubits
        chars[qubit - 1] = symbol
        return cls("".join(chars))

    @property
    def n_qubits(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return self.symbols

    def __mul__(self, other: "PauliString") -> tuple[complex, "PauliString"]:
        return multiply(self, other)

    @cached_property
    def x_mask(self) -> int:
        """Bits of the qubits flipped by this string (X or Y)."""
        return sum(1 << k for k, s in enumerate(self.symbols) if s in "XY")

    @cached_property
    def z_mask(self) -> int:
        """Bits of the qubits picking up a sign on |1> (Z or Y)."""
        return sum(1 << k for k, s in enumerate(self.symbols) if s in "ZY")

    @cached_property
    def n_y(self) -> int:
        return self.symbols.count("Y")

    def is_identity(self) -> bool:
        return set(self.symbols) == {"I"}

    def tensor(self, other: "PauliString") -> "PauliString":
        """Concatenate registers: ``self`` on the low qubits, ``other`` after."""
        return PauliString(self.symbols + other.symbols)


def _check_lengths(a: PauliString, b: PauliString) -> None:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {a} ({len(a)}) vs {b} ({len(b)})")


def multiply(a: PauliString, b: PauliString) -> tuple[complex, PauliString]:
    """Return ``(phase, product)`` such that ``a @ b == phase * product``.

    The phase is one of ``1, -1, 1j, -1j``.
    """
    _check_lengths(a, b)
    power = 0
    chars = []
    for sa, sb in zip(a.symbols, b.symbols):
        k, s = _PRODUCT[sa, sb]
        power += k
        chars.append(s)
    return _UNITS[power % 4], PauliString("".join(chars))


def anticommuting_positions(a: PauliString, b: PauliString) -> int:
    _check_lengths(a, b)
    return sum(1 for sa, sb in zip(a.symbols, b.symbols) if sa != "I" and sb != "I" and sa != sb)


def commutator_class(a: PauliString, b: PauliString) -> Commutation:
    """Two strings commute iff they differ non-trivially on an even number of qubits."""
    if anticommuting_positions(a, b) % 2 == 0:
        return Commutation.COMMUTING
    return Commutation.ANTICOMMUTING


def commutes(a: PauliString, b: PauliString) -> bool:
    return commutator_class(a, b) is Commutation.COMMUTING


def weight(p: PauliString) -> int:
    return sum(1 for s in p.symbols if s != "I")


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    string: PauliString

    def __post_init__(self):
        if not math.isfinite(self.coefficient):
            raise ValueError(f"non-finite coefficient {self.coefficient} for {self.string}")


class PauliSum:
    """Real-weighted sum of distinct Pauli strings on a fixed register.

    Terms are kept in first-insertion order; repeated strings are merged and
    terms whose coefficient cancels to zero are dropped.
    """

    def __init__(self, terms: Iterable[PauliTerm | tuple[float, str | PauliString]], n_qubits: int | None = None):
        merged: dict[PauliString, float] = {}
        for term in terms:
            if not isinstance(term, PauliTerm):
                coeff, string = term
                if not isinstance(string, PauliString):
                    string = PauliString(string)
                term = PauliTerm(float(coeff), string)
            if n_qubits is None:
                n_qubits = term.string.n_qubits
            if term.string.n_qubits != n_qubits:
                raise ValueError(f"term {term.string} does not act on {n_qubits} qubits")
            merged[term.string] = merged.get(term.string, 0.0) + term.coefficient
        if n_qubits is None or n_qubits < 1:
            raise ValueError("cannot infer register size of an empty PauliSum")
        self.n_qubits = n_qubits
        self.terms: tuple[PauliTerm, ...] = tuple(
            PauliTerm(c, s) for s, c in merged.items() if c != 0.0
        )

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash((self.n_qubits, frozenset(self.as_dict().items())))

    def __repr__(self) -> str:
        body = " ".join(f"{t.coefficient:+g}*{t.string}" for t in self.terms)
        return f"PauliSum({body or '0'}; n_qubits={self.n_qubits})"

    def as_dict(self) -> dict[str, float]:
        return {t.string.symbols: t.coefficient for t in self.terms}

    def coefficient(self, string: str | PauliString) -> float:
        key = string.symbols if isinstance(string, PauliString) else string
        return self.as_dict().get(key, 0.0)

    def identity_coefficient(self) -> float:
        return self.coefficient(PauliString.identity(self.n_qubits))

    def without_identity(self) -> "PauliSum":
        return PauliSum([t for t in self.terms if not t.string.is_identity()], self.n_qubits)

    def shifted(self, alpha: float) -> "PauliSum":
        """``self + alpha * I``."""
        return PauliSum([*self.terms, PauliTerm(alpha, PauliString.identity(self.n_qubits))], self.n_qubits)

    def extended(self, n_extra: int) -> "PauliSum":
        """Same operator acting on ``n_extra`` additional (high) qubits as identity."""
        pad = PauliString.identity(n_extra)
        return PauliSum([PauliTerm(t.coefficient, t.string.tensor(pad)) for t in self.terms],
                        self.n_qubits + n_extra)

    def to_text(self) -> str:
        """``# n_qubits N`` header, then one ``coefficient<TAB>string`` line per term."""
        return f"# n_qubits {self.n_qubits}\n" + "".join(
            f"{t.coefficient!r}\t{t.string.symbols}\n" for t in self.terms)

    @classmethod
    def from_text(cls, text: str) -> "PauliSum":
        terms = []
        n_qubits = None
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "n_qubits":
                    n_qubits = int(parts[1])
                continue
            try:
                coeff, string = line.split("\t")
                terms.append(PauliTerm(float(coeff), PauliString(string.strip())))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: cannot parse {line!r}") from exc
        return cls(terms, n_qubits)


def average_weight(h: PauliSum, include_identity: bool = False) -> float:
    strings: Sequence[PauliString] = [
        t.string for t in h.terms if include_identity or not t.string.is_identity()
    ]
    if not strings:
        raise ValueError("average weight of an empty Pauli sum")
    return sum(weight(s) for s in strings) / len(strings)
