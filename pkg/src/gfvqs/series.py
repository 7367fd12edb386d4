"""Time series of Green's-function components."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from typing import Literal

import numpy as np

Kind = Literal["lesser", "greater", "retarded"]
Algorithm = Literal["exact", "OS", "CF", "trotter"]


def check_uniform(times: np.ndarray, rtol: float = 1e-9) -> float:
    """Return the step of a uniform, strictly increasing grid."""
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise ValueError("time grid needs at least two points")
    steps = np.diff(times)
    dt = float(steps.mean())
    if dt <= 0 or np.max(np.abs(steps - dt)) > rtol * max(1.0, abs(times[-1])):
        raise ValueError("time grid is not uniform and increasing")
    return dt


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """``0, dt, 2 dt, ...`` up to the first point at or beyond ``t_max``."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    n = int(np.ceil(t_max / dt - 1e-9))
    return dt * np.arange(n + 1)


@dataclass(frozen=True, eq=False)
class GreensSeries:
    label: str
    kind: Kind
    times: np.ndarray
    values: np.ndarray
    algorithm: Algorithm = "exact"
    shots: int | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if times.shape != values.shape:
            raise ValueError(f"times {times.shape} and values {values.shape} differ in shape")
        check_uniform(times)
        if self.kind == "retarded" and np.any(values[times < 0] != 0):
            raise ValueError("retarded series must vanish for t < 0")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be positive")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def with_values(self, values, **changes) -> "GreensSeries":
        return replace(self, values=np.asarray(values, dtype=complex), **changes)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "Re", "Im"])
        for t, v in zip(self.times, self.values):
            writer.writerow([repr(float(t)), repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label: str, kind: Kind, algorithm: Algorithm = "exact") -> "GreensSeries":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0] != ["t", "Re", "Im"]:
            raise ValueError("expected header t,Re,Im")
        data = np.array([[float(x) for x in row] for row in rows[1:]])
        return cls(label, kind, data[:, 0], data[:, 1] + 1j * data[:, 2], algorithm)


def same_grid(a: GreensSeries, b: GreensSeries, atol: float = 1e-12) -> bool:
    return a.times.shape == b.times.shape and bool(np.allclose(a.times, b.times, rtol=0, atol=atol))


def retarded(lesser: GreensSeries, greater: GreensSeries) -> GreensSeries:
    """``G^R(t) = [G^<(t) - G^>(t)] step(t)`` with ``step(0) = 1``."""
    if lesser.kind != "lesser" or greater.kind != "greater":
        raise ValueError("retarded() takes a lesser and a greater series")
    if not same_grid(lesser, greater):
        raise ValueError("lesser and greater series are on different grids")
    step = (lesser.times >= 0).astype(float)
    return replace(lesser, kind="retarded", values=(lesser.values - greater.values) * step)
