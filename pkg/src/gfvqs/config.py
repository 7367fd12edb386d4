"""Flat ``key = value`` experiment configuration.

Schema (defaults in brackets)::

    n_sites      int >= 2                       [2]
    tau          float                          [1.0]
    U            float                          [3.0]
    boundary     open | periodic                [open]
    operator     coeff:site:spin[,...]           [1:1:up]
    normalize    bool                           [true]
    algorithm    exact | os | cf | trotter      [os]
    propagator   vqs | symmetry | exact         [vqs]   (os only)
    depth        int >= 1                       [1]
    generators   comma list of Pauli strings    []      (all terms)
    integrator   rk4 | euler                    [rk4]
    trotter_step float > 0                      [0.01]
    dt           float > 0                      [0.02]
    t_max        float > 0                      [4pi]
    window       float > 0 or none              [none]  (spectrum window)
    damping      float >= 0                     [0.0]
    shots        int >= 1 or none               [none]
    e0           exact | float                  [exact]
    ground       int >= 0                       [0]     (degenerate-level selector)
    seed         int                            [0]
    output       directory name                 [run]

Floats accept a trailing ``pi`` factor (``4pi``, ``8*pi``). Lines starting
with ``#`` are comments.
"""

from __future__ import annotations

import math
import re
from dataclasses import asdict, dataclass, fields

from .hubbard import parse_combo
from .pauli import SYMBOLS

ALGORITHMS = ("exact", "os", "cf", "trotter")
PROPAGATORS = ("vqs", "symmetry", "exact")


class ConfigError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__("invalid configuration:\n  " + "\n  ".join(problems))


_PI = re.compile(r"^\s*([-+]?[0-9.eE+-]*)\s*\*?\s*pi\s*$")


def parse_float(text: str) -> float:
    text = str(text).strip()
    m = _PI.match(text)
    if m:
        factor = m.group(1)
        return (float(factor) if factor not in ("", "+", "-") else float(factor + "1")) * math.pi
    return float(text)


def _parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _optional(parse):
    def inner(text):
        if text is None or str(text).strip().lower() in ("none", ""):
            return None
        return parse(text)

    return inner


def _e0(text):
    t = str(text).strip().lower()
    return "exact" if t == "exact" else parse_float(t)


def _strings(text):
    if isinstance(text, tuple):
        return text
    return tuple(s.strip() for s in str(text).split(",") if s.strip())


@dataclass(frozen=True)
class ExperimentConfig:
    n_sites: int = 2
    tau: float = 1.0
    U: float = 3.0
    boundary: str = "open"
    operator: str = "1:1:up"
    normalize: bool = True
    algorithm: str = "os"
    propagator: str = "vqs"
    depth: int = 1
    generators: tuple = ()
    integrator: str = "rk4"
    trotter_step: float = 0.01
    dt: float = 0.02
    t_max: float = 4 * math.pi
    window: float | None = None
    damping: float = 0.0
    shots: int | None = None
    e0: object = "exact"
    ground: int = 0
    seed: int = 0
    output: str = "run"

    @classmethod
    def from_mapping(cls, values: dict[str, str]) -> "ExperimentConfig":
        """Parse and validate; every problem is collected before raising."""
        problems = []
        parsed = {}
        known = {f.name for f in fields(cls)}
        for key, raw in values.items():
            if key not in known:
                problems.append(f"unknown key {key!r}")
                continue
            try:
                parsed[key] = _PARSERS[key](raw)
            except (TypeError, ValueError) as exc:
                problems.append(f"{key}: cannot parse {raw!r} ({exc})")
        if problems:
            raise ConfigError(problems)
        config = cls(**parsed)
        config.validate()
        return config

    @classmethod
    def from_text(cls, text: str, overrides: dict[str, str] | None = None) -> "ExperimentConfig":
        return cls.from_mapping({**parse_text(text), **(overrides or {})})

    def validate(self) -> None:
        p = []
        if self.n_sites < 2:
            p.append("n_sites must be at least 2")
        if self.boundary not in ("open", "periodic"):
            p.append(f"boundary must be open or periodic, got {self.boundary!r}")
        elif self.boundary == "periodic" and self.n_sites < 3:
            p.append("periodic boundary needs at least 3 sites")
        if self.algorithm not in ALGORITHMS:
            p.append(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.propagator not in PROPAGATORS:
            p.append(f"propagator must be one of {PROPAGATORS}, got {self.propagator!r}")
        if self.propagator == "symmetry" and self.n_sites != 2:
            p.append("the symmetry propagator exists only for n_sites = 2")
        if self.integrator not in ("rk4", "euler"):
            p.append(f"integrator must be rk4 or euler, got {self.integrator!r}")
        if self.depth < 1:
            p.append("depth must be at least 1")
        for name in ("dt", "t_max", "trotter_step"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                p.append(f"{name} must be positive and finite")
        if self.window is not None and not self.window > 0:
            p.append("window must be positive")
        if self.damping < 0:
            p.append("damping must be non-negative")
        if self.shots is not None and self.shots < 1:
            p.append("shots must be positive")
        if self.ground < 0:
            p.append("ground selector must be non-negative")
        for s in self.generators:
            if len(s) != 2 * self.n_sites or any(ch not in SYMBOLS for ch in s):
                p.append(f"generator {s!r} is not a {2 * self.n_sites}-qubit Pauli string")
        try:
            combo = parse_combo(self.operator)
            if not combo:
                p.append("operator is empty")
            for _, site, _ in combo:
                if not 1 <= site <= self.n_sites:
                    p.append(f"operator site {site} outside 1..{self.n_sites}")
        except ValueError as exc:
            p.append(f"operator: {exc}")
        if p:
            raise ConfigError(p)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["generators"] = list(self.generators)
        return d

    def to_text(self) -> str:
        out = []
        for key, value in self.as_dict().items():
            if isinstance(value, list):
                value = ",".join(value)
            elif isinstance(value, bool):
                value = str(value).lower()
            elif isinstance(value, float):
                value = repr(value)
            out.append(f"{key} = {value}")
        return "\n".join(out) + "\n"


_PARSERS = {
    "n_sites": int,
    "tau": parse_float,
    "U": parse_float,
    "boundary": lambda s: str(s).strip().lower(),
    "operator": lambda s: str(s).strip(),
    "normalize": _parse_bool,
    "algorithm": lambda s: str(s).strip().lower(),
    "propagator": lambda s: str(s).strip().lower(),
    "depth": int,
    "generators": _strings,
    "integrator": lambda s: str(s).strip().lower(),
    "trotter_step": parse_float,
    "dt": parse_float,
    "t_max": parse_float,
    "window": _optional(parse_float),
    "damping": parse_float,
    "shots": _optional(int),
    "e0": _e0,
    "ground": int,
    "seed": int,
    "output": lambda s: str(s).strip(),
}


def parse_text(text: str) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError([f"line {lineno}: expected key = value, got {line!r}"])
        key, value = (s.strip() for s in line.split("=", 1))
        values[key] = value
    return values
