"""Discrete Fourier analysis of Green's-function time series."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from .series import GreensSeries, check_uniform


@dataclass(frozen=True, eq=False)
class Spectrum:
    """``G(omega_j) = dt sum_k g(t_k) exp((i omega_j - eta) t_k)`` on the DFT grid.

    ``frequencies`` are ascending with spacing ``2 pi / window``. ``t0`` and
    ``dt`` describe the sampled times, which the Fourier shift needs.
    """

    frequencies: np.ndarray
    values: np.ndarray
    window: float
    damping: float = 0.0
    dt: float = 0.0
    t0: float = 0.0

    @property
    def resolution(self) -> float:
        return 2 * np.pi / self.window

    @property
    def span(self) -> float:
        return float(self.frequencies[-1] - self.frequencies[0])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["omega", "Re", "Im"])
        for w, v in zip(self.frequencies, self.values):
            writer.writerow([repr(float(w)), repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()


def _dft(samples: np.ndarray, dt: float, t0: float) -> tuple[np.ndarray, np.ndarray]:
    n = samples.size
    omega = np.fft.fftshift(2 * np.pi * np.fft.fftfreq(n, d=dt))
    values = np.fft.fftshift(dt * n * np.fft.ifft(samples)) * np.exp(1j * omega * t0)
    return omega, values


def _idft(s: Spectrum) -> np.ndarray:
    """Recover the damped samples ``g(t_k) exp(-eta t_k)``."""
    raw = s.values * np.exp(-1j * s.frequencies * s.t0)
    return np.fft.fft(np.fft.ifftshift(raw)) / (s.dt * raw.size)


def transform(g: GreensSeries, window: float | None = None, damping: float = 0.0) -> Spectrum:
    """Fourier transform of the samples with ``t_0 <= t < t_0 + window``.

    Without ``window`` every sample is used. The recorded window is always
    ``N dt`` for the ``N`` samples kept, so ``resolution`` matches the grid.
    """
    dt = check_uniform(g.times)
    if damping < 0:
        raise ValueError("damping must be non-negative")
    times, values = g.times, g.values
    if window is not None:
        if window <= 0:
            raise ValueError("window must be positive")
        n = math.ceil(window / dt - 1e-9)
        if n > times.size:
            raise ValueError(f"window {window} exceeds the series length {times.size * dt}")
        times, values = times[:n], values[:n]
    samples = values * np.exp(-damping * (times - times[0]))
    omega, spec = _dft(samples, dt, float(times[0]))
    return Spectrum(omega, spec, times.size * dt, damping, dt, float(times[0]))


def energy_shift(
    s: Spectrum,
    e0: float,
    e0_tilde: float,
    method: Literal["fourier", "linear"] = "fourier",
) -> Spectrum:
    """``s'(omega) = s(omega + e0_tilde - e0)``, moving every feature by ``e0 - e0_tilde``.

    ``fourier`` evaluates the band-limited interpolant of the DFT, which is
    the spectrum of ``exp(i (e0_tilde - e0) t) g(t)``; ``linear`` interpolates
    the tabulated values and pads with zero.
    """
    delta = e0_tilde - e0
    if abs(delta) >= s.span:
        raise ValueError(f"shift {delta} exceeds the frequency span {s.span}")
    if delta == 0:
        return replace(s)
    if method == "fourier":
        n = s.values.size
        times = s.t0 + s.dt * np.arange(n)
        _, values = _dft(_idft(s) * np.exp(1j * delta * times), s.dt, s.t0)
    elif method == "linear":
        target = s.frequencies + delta
        values = np.interp(target, s.frequencies, s.values.real, left=0.0, right=0.0) + 1j * np.interp(
            target, s.frequencies, s.values.imag, left=0.0, right=0.0
        )
    else:
        raise ValueError(f"unknown shift method {method!r}")
    return replace(s, values=values)


@dataclass(frozen=True)
class Pole:
    frequency: float
    height: float


def find_poles(s: Spectrum, threshold: float | None = None, relative: float = 0.1) -> list[Pole]:
    """Interior local maxima of ``|Im s|`` above ``threshold`` with parabolic refinement.

    Without an absolute ``threshold`` the cut is ``relative * max |Im s|``.
    Under a rectangular window a pole exactly half a bin off the grid
    leaves almost no weight in ``Im s``; use ``damping`` to see it.
    """
    y = np.abs(s.values.imag)
    scale = float(np.max(np.abs(s.values))) if y.size else 0.0
    if y.size < 3 or scale == 0.0:
        return []
    cut = relative * float(y.max()) if threshold is None else float(threshold)
    # rounding ripple on a plateau is not a pole
    rise = 1e-9 * scale
    poles = []
    for j in range(1, y.size - 1):
        if y[j] <= cut or y[j] < y[j - 1] or y[j] <= y[j + 1] or y[j] - min(y[j - 1], y[j + 1]) <= rise:
            continue
        a, b, c = y[j - 1], y[j], y[j + 1]
        denom = a - 2 * b + c
        offset = 0.5 * (a - c) / denom if denom != 0 else 0.0
        height = b - 0.25 * (a - c) * offset
        step = s.frequencies[j + 1] - s.frequencies[j]
        poles.append(Pole(float(s.frequencies[j] + offset * step), float(height)))
    return poles


def poles_to_json(poles: list[Pole]) -> str:
    return json.dumps([{"omega": p.frequency, "height": p.height} for p in poles], indent=2)


def parseval_gap(g: GreensSeries, s: Spectrum) -> float:
    """Relative difference between ``dt sum |g|^2`` and ``(1 / 2 pi) dw sum |G|^2``."""
    n = s.values.size
    samples = g.values[:n] * np.exp(-s.damping * (g.times[:n] - g.times[0]))
    lhs = s.dt * float(np.sum(np.abs(samples) ** 2))
    rhs = s.resolution / (2 * np.pi) * float(np.sum(np.abs(s.values) ** 2))
    return abs(lhs - rhs) / max(lhs, 1e-300)
