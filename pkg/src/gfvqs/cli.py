"""Command-line driver: config-file experiments that write plot-ready data bundles.

The output root is ``$GFVQS_OUTPUT_ROOT`` (default: current directory);
each run writes into ``<root>/<output>``.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, ExperimentConfig
from .dimer import SymmetryError, SymmetryPropagator, symmetry_report
from .exact import exact_greens, ground_state
from .greens import ExactPropagator, TrotterPropagator, VqsPropagator, cf_greens, os_greens, rms_error
from .hubbard import HubbardModel, momentum_operator, parse_combo, qubit_hamiltonian
from .resources import cf_count, os_count, table_ii
from .series import GreensSeries, same_grid, time_grid
from .spectral import find_poles, poles_to_json, transform
from .statevector import apply_pauli_vec

OUTPUT_ENV = "GFVQS_OUTPUT_ROOT"
KINDS = ("lesser", "greater", "retarded")


def output_dir(config: ExperimentConfig) -> Path:
    return Path(os.environ.get(OUTPUT_ENV, ".")) / config.output


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


class Bundle:
    """Collects files in memory and writes them in a fixed order."""

    def __init__(self, root: Path):
        self.root = root
        self.files: dict[str, str] = {}

    def add(self, name: str, text: str) -> None:
        self.files[name] = text

    def write(self, config: ExperimentConfig, extra: dict | None = None) -> Path:
        digests = {n: hashlib.sha256(t.encode()).hexdigest() for n, t in sorted(self.files.items())}
        self.files["manifest.json"] = _dump_json(
            {"version": __version__, "config": config.as_dict(), "files": digests, **(extra or {})}
        )
        for name in sorted(self.files):
            path = self.root / name
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(self.files[name], encoding="utf-8")
        return self.root


# ---------------------------------------------------------------------------
# pipelines


class Experiment:
    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.model = HubbardModel(config.n_sites, config.tau, config.U, config.boundary)
        self.h = qubit_hamiltonian(self.model)
        self.e0, self.ground = ground_state(self.h, config.ground)
        combo = parse_combo(config.operator)
        self.annihilator = momentum_operator(self.model, combo, "annihilation", config.normalize)
        self.creator = self.annihilator.adjoint()
        self.times = time_grid(config.t_max, config.dt)

    def model_dict(self) -> dict:
        m = self.model
        return {"n_sites": m.n_sites, "tau": m.tau, "U": m.U, "boundary": m.boundary, "E0": self.e0}

    def propagator(self):
        c = self.config
        if c.algorithm == "trotter":
            return TrotterPropagator(c.trotter_step)
        if c.algorithm == "cf":
            strings = [s + "I" for s in c.generators] or None
            return VqsPropagator(c.depth, strings, c.integrator)
        if c.propagator == "symmetry":
            return SymmetryPropagator()
        if c.propagator == "exact":
            return ExactPropagator()
        return VqsPropagator(c.depth, list(c.generators) or None, c.integrator)

    def greens(self) -> tuple[tuple[GreensSeries, ...], object]:
        c = self.config
        if c.algorithm == "exact":
            return exact_greens(self.h, self.ground, self.annihilator, self.creator, self.times,
                                self.annihilator.label), None
        prop = self.propagator()
        rng = np.random.default_rng(c.seed)
        if c.algorithm == "cf":
            out = cf_greens(self.h, self.ground, self.annihilator, self.creator, prop, self.times,
                            c.shots, rng, self.annihilator.label)
        else:
            e0 = None if c.e0 == "exact" else float(c.e0)
            out = os_greens(self.h, self.ground, self.annihilator, self.creator, prop, self.times,
                            e0, c.shots, rng, self.annihilator.label)
        return out, prop

    def resources(self) -> dict:
        d = self.config.depth
        return {"model": self.model_dict(), "OS": os_count(self.h, d).row(), "CF": cf_count(self.h, d).row()}


def _greens_files(bundle: Bundle, series, prop) -> None:
    for s in series:
        bundle.add(f"greens_{s.kind}.csv", s.to_csv())
    for key, traj in sorted(getattr(prop, "trajectories", {}).items()):
        bundle.add(f"trajectories/{key}.csv", traj.to_csv())


def _spectrum_files(bundle: Bundle, config: ExperimentConfig, series) -> None:
    for s in series:
        spec = transform(s, config.window, config.damping)
        bundle.add(f"spectrum_{s.kind}.csv", spec.to_csv())
        bundle.add(f"poles_{s.kind}.json", poles_to_json(find_poles(spec)) + "\n")


def run(config: ExperimentConfig, parts=("hamiltonian", "greens", "spectrum", "symmetry", "resources")) -> Path:
    """Execute the requested stages and write a bundle with its manifest."""
    exp = Experiment(config)
    bundle = Bundle(output_dir(config))
    extra = {"model": exp.model_dict()}
    if "hamiltonian" in parts:
        bundle.add("hamiltonian.txt", exp.h.to_text())
    if "greens" in parts or "spectrum" in parts:
        series, prop = exp.greens()
        _greens_files(bundle, series, prop)
        if "spectrum" in parts:
            _spectrum_files(bundle, config, series)
    if "symmetry" in parts and config.n_sites == 2:
        bundle.add("symmetry.json", _dump_json(symmetry_report(exp.h, exp.ground)))
    if "resources" in parts:
        bundle.add("resources.json", _dump_json(exp.resources()))
    bundle.add("config.txt", config.to_text())
    return bundle.write(config, extra)


def run_evolve(config: ExperimentConfig) -> Path:
    """VQS trajectories of ``P_j|psi>`` with fidelity against exact evolution."""
    exp = Experiment(config)
    prop = VqsPropagator(config.depth, list(config.generators) or None, config.integrator)
    exact = ExactPropagator()
    bundle = Bundle(output_dir(config))
    rows = []
    for _, pj in exp.creator:
        start = apply_pauli_vec(pj, exp.ground.amplitudes)
        evo = prop.propagate(exp.h, start, exp.times, pj)
        ref = exact.propagate(exp.h, start, exp.times)
        overlap = np.einsum("tk,tk->t", ref.states.conj(), np.exp(1j * evo.theta0)[:, None] * evo.states)
        rows.append({"string": str(pj), "min_fidelity": float(np.min(np.abs(overlap) ** 2)),
                     "min_phase_overlap_re": float(np.min(overlap.real))})
    for key, traj in sorted(prop.trajectories.items()):
        bundle.add(f"trajectories/{key}.csv", traj.to_csv())
    bundle.add("fidelity.json", _dump_json(rows))
    bundle.add("config.txt", config.to_text())
    return bundle.write(config, {"model": exp.model_dict()})


def run_resources(root: Path) -> Path:
    rows = table_ii()
    root.mkdir(parents=True, exist_ok=True)
    (root / "table_ii.json").write_text(_dump_json(rows), encoding="utf-8")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    (root / "table_ii.csv").write_text(buf.getvalue(), encoding="utf-8")
    return root


# ---------------------------------------------------------------------------
# comparison


def load_bundle(path: Path) -> dict[str, GreensSeries]:
    out = {}
    for kind in KINDS:
        f = Path(path) / f"greens_{kind}.csv"
        if f.exists():
            out[kind] = GreensSeries.from_csv(f.read_text(encoding="utf-8"), f.parent.name, kind)
    if not out:
        raise FileNotFoundError(f"no greens_*.csv files in {path}")
    return out


def _pole_shifts(ref: list[dict], cand: list[dict]) -> list[dict]:
    shifts = []
    for p in ref:
        if not cand:
            break
        nearest = min(cand, key=lambda q: abs(q["omega"] - p["omega"]))
        shifts.append({"reference": p["omega"], "candidate": nearest["omega"],
                       "shift": nearest["omega"] - p["omega"]})
    return shifts


def compare(reference: Path, candidate: Path) -> dict:
    """Max abs and RMS deviation per component, plus pole shifts when both bundles have poles."""
    ref, cand = load_bundle(reference), load_bundle(candidate)
    report = {}
    for kind in sorted(set(ref) & set(cand)):
        a, b = ref[kind], cand[kind]
        if not same_grid(a, b):
            raise ValueError(f"{kind}: time grids differ")
        entry = {"max_abs": float(np.max(np.abs(b.values - a.values))), "rms": rms_error(b, a)}
        pa, pb = Path(reference) / f"poles_{kind}.json", Path(candidate) / f"poles_{kind}.json"
        if pa.exists() and pb.exists():
            entry["pole_shifts"] = _pole_shifts(json.loads(pa.read_text()), json.loads(pb.read_text()))
        report[kind] = entry
    if not report:
        raise ValueError("bundles share no Green's-function components")
    return report


# ---------------------------------------------------------------------------
# argument parsing


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key = value file")
    group = p.add_argument_group("config keys (override the file)")
    for f in fields(ExperimentConfig):
        group.add_argument(f"--{f.name.replace('_', '-')}", dest=f"key_{f.name}", metavar="VALUE")


def config_from_args(args) -> ExperimentConfig:
    text = args.config.read_text(encoding="utf-8") if args.config else ""
    overrides = {k[4:]: v for k, v in vars(args).items() if k.startswith("key_") and v is not None}
    return ExperimentConfig.from_text(text, overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gfvqs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("run", "every stage: Hamiltonian, Green's functions, spectra, symmetry, resources"),
        ("hamiltonian", "write the qubit Hamiltonian"),
        ("evolve", "VQS trajectories of the excited states with exact fidelities"),
        ("greens", "lesser, greater and retarded Green's functions"),
        ("spectrum", "Green's functions, their spectra and poles"),
        ("symmetry", "dimer symmetry sets, sign table and proposition residuals"),
    ):
        _add_config_flags(sub.add_parser(name, help=help_))
    res = sub.add_parser("resources", help="gate counts for the 2-, 3- and 4-site ansatz choices")
    res.add_argument("--output", default="resources", help="directory under the output root")
    cmp_ = sub.add_parser("compare", help="error metrics between two bundles")
    cmp_.add_argument("reference", type=Path)
    cmp_.add_argument("candidate", type=Path)
    cmp_.add_argument("--json", type=Path, help="also write the report here")
    return parser


_PARTS = {
    "run": ("hamiltonian", "greens", "spectrum", "symmetry", "resources"),
    "hamiltonian": ("hamiltonian",),
    "greens": ("greens",),
    "spectrum": ("spectrum",),
    "symmetry": ("symmetry",),
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "resources":
            path = run_resources(Path(os.environ.get(OUTPUT_ENV, ".")) / args.output)
        elif args.command == "compare":
            report = _dump_json(compare(args.reference, args.candidate))
            if args.json:
                args.json.write_text(report, encoding="utf-8")
            sys.stdout.write(report)
            return 0
        else:
            config = config_from_args(args)
            if args.command == "symmetry" and config.n_sites != 2:
                raise ConfigError(["symmetry analysis needs n_sites = 2"])
            path = run_evolve(config) if args.command == "evolve" else run(config, _PARTS[args.command])
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError, ArithmeticError, RuntimeError, SymmetryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
