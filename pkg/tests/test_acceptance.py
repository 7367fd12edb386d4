"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the
terminal summary under "acceptance criteria".
"""

import time

import numpy as np
import pytest

from gfvqs.dimer import LADDER_STRINGS, S1_STRINGS, S2_STRINGS, SymmetryPropagator, sign_table
from gfvqs.exact import exact_greens, ground_state
from gfvqs.greens import ExactPropagator, VqsPropagator, cf_greens, os_greens, rms_error
from gfvqs.hubbard import HubbardModel, ladder_operator, momentum_operator, parse_combo, qubit_hamiltonian
from gfvqs.pauli import PauliString
from gfvqs.resources import (
    advantage_threshold,
    cf_cnot_formula,
    cf_count,
    os_cnot_formula,
    os_count,
    table_ii,
)
from gfvqs.series import time_grid
from gfvqs.spectral import energy_shift, find_poles, transform
from gfvqs.statevector import QubitState
from gfvqs.vqs import VhaAnsatz, assemble_system, evolve, geometric_system, trotter_propagate

TWO_PI = 2 * np.pi


def dimer():
    m = HubbardModel(2, 1.0, 3.0)
    h = qubit_hamiltonian(m)
    e0, psi = ground_state(h)
    return m, h, e0, psi


# ---------------------------------------------------------------------------
# 1


def test_1_dimer_ground_energy(criterion):
    start = time.perf_counter()
    _, _, e0, _ = dimer()
    elapsed = time.perf_counter() - start
    criterion("1 dimer E0", abs(e0 + 4) <= 1e-10 and elapsed < 1.0,
              f"E0 = {e0:.12f} (|E0 + 4| = {abs(e0 + 4):.1e}), {elapsed:.2f} s")


# ---------------------------------------------------------------------------
# 2


def test_2_symmetry_propagator_greens(criterion):
    m, h, _, psi = dimer()
    c = ladder_operator(m, 1, "up", "annihilation")
    t = time_grid(4 * np.pi, 0.02)
    ref = exact_greens(h, psi, c, c.adjoint(), t)[2]
    got = os_greens(h, psi, c, c.adjoint(), SymmetryPropagator(), t)[2]
    err = float(np.max(np.abs(got.values - ref.values)))
    re = float(np.max(np.abs(got.values.real)))
    criterion("2 OS symmetry G^R_1up1up", err <= 1e-8 and re <= 1e-8,
              f"max |G - G_exact| = {err:.1e}, max |Re G^R| = {re:.1e}")


# ---------------------------------------------------------------------------
# 3


@pytest.mark.parametrize("source", ["exact", "OS"])
def test_3_four_poles(criterion, source):
    m, h, _, psi = dimer()
    c = ladder_operator(m, 1, "up", "annihilation")
    window = 8 * np.pi
    t = time_grid(window, window / 1280)
    if source == "exact":
        g = exact_greens(h, psi, c, c.adjoint(), t)[2]
    else:
        g = os_greens(h, psi, c, c.adjoint(), SymmetryPropagator(), t)[2]
    poles = sorted(p.frequency for p in find_poles(transform(g, window=window)))
    target = [-3.5, -1.5, 1.5, 3.5]
    ok = len(poles) == 4 and all(abs(p - q) <= 0.05 for p, q in zip(poles, target))
    criterion(f"3 poles of {source} G^R over T = 8 pi", ok, f"poles {np.round(poles, 4).tolist()}")


# ---------------------------------------------------------------------------
# 4

TABLE_II = {
    ("Two-site Hubbard model", "OS", 1): (4, 5, 9),
    ("Two-site Hubbard model", "CF", 1): (22, 20, 42),
    ("Two-site Hubbard model", "CF", 2): (44, 40, 84),
    ("3-site Hubbard model", "OS", 3): (96, 147, 243),
    ("3-site Hubbard model", "CF", 3): (129, 114, 243),
    ("3-site Hubbard model", "CF", 5): (160, 190, 350),
    ("4-site Hubbard model", "OS", 3): (192, 372, 564),
    ("4-site Hubbard model", "CF", 4): (336, 416, 752),
    ("4-site Hubbard model", "CF", 5): (420, 520, 940),
}


@pytest.mark.parametrize("key", list(TABLE_II), ids=lambda k: f"{k[0].split()[0]}-{k[1]}-d{k[2]}")
def test_4_table_ii_row(criterion, key):
    rows = {(r["model"], r["algorithm"], r["d"]): (r["one_qubit"], r["two_qubit"], r["depth"]) for r in table_ii()}
    got, want = rows[key], TABLE_II[key]
    criterion(f"4 Table II {key[0]} {key[1]} d={key[2]}", got == want,
              f"(1q, 2q, depth) = {got}, table {want}")


def test_4_closed_forms_and_threshold(criterion):
    start = time.perf_counter()
    gaps = []
    for model in (HubbardModel(2), HubbardModel(3), HubbardModel(4, boundary="periodic")):
        h = qubit_hamiltonian(model)
        for d in (1, 2, 3, 4, 5):
            gaps.append(abs(os_count(h, d).two_qubit - os_cnot_formula(h, d)))
            gaps.append(abs(cf_count(h, d).two_qubit - cf_cnot_formula(h, d)))
    thr = advantage_threshold(2.8)
    elapsed = time.perf_counter() - start
    ok = max(gaps) < 1e-9 and round(thr, 4) == 1.2778 and elapsed < 1.0
    criterion("4 closed forms and threshold", ok,
              f"max |formula - enumeration| = {max(gaps):.1e}, threshold(2.8) = {thr:.4f}, {elapsed:.2f} s")


# ---------------------------------------------------------------------------
# 5

TABLE_I = {
    "XZXI": "++-+", "YZYI": "-+++", "IXZX": "+++-", "IYZY": "+-++", "ZZII": "--++", "IIZZ": "++--",
}


def test_5_table_i(criterion):
    table = sign_table()
    got = {row[0]: "".join(row[1:]) for row in table.as_rows()}
    matches = sum(a == b for r in TABLE_I for a, b in zip(got[r], TABLE_I[r]))
    s1 = [table.column_sum(c, rows=S1_STRINGS) for c in LADDER_STRINGS]
    s2 = [table.column_sum(c, rows=S2_STRINGS) for c in LADDER_STRINGS]
    ok = matches == 24 and all(v == 2 for v in s1) and all(v == 0 for v in s2)
    criterion("5 Table I signs", ok, f"{matches}/24 signs match, S1 column sums {s1}, S2 column sums {s2}")


# ---------------------------------------------------------------------------
# 6


def _random_case(rng):
    n_sites = int(rng.integers(2, 4))
    m = HubbardModel(n_sites, rng.uniform(0.5, 1.5), rng.uniform(0.0, 4.0))
    h = qubit_hamiltonian(m)
    strings = [t.string.symbols for t in h.without_identity()]
    k = int(rng.integers(1, len(strings) + 1))
    chosen = [strings[i] for i in sorted(rng.choice(len(strings), size=k, replace=False))]
    ansatz = VhaAnsatz.from_hamiltonian(h, int(rng.integers(1, 4)), chosen)
    theta = rng.uniform(-np.pi, np.pi, size=ansatz.n_params)
    return h, ansatz, theta, QubitState.random(h.n_qubits, rng)


def test_6a_6b_mclachlan_forms(criterion):
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    dm = dv = re_overlap = 0.0
    for _ in range(50):
        h, ansatz, theta, s = _random_case(rng)
        sys_ = assemble_system(ansatz, theta, s, h)
        M, V = geometric_system(ansatz, theta, s, h)
        dm = max(dm, float(np.max(np.abs(sys_.M - M))))
        dv = max(dv, float(np.max(np.abs(sys_.V - V))))
        re_overlap = max(re_overlap, float(np.max(np.abs(sys_.overlaps.real))))
    elapsed = time.perf_counter() - start
    criterion("6a assembly equals geometric form", max(dm, dv) <= 1e-10 and elapsed < 60,
              f"50 cases, max |dM| = {dm:.1e}, max |dV| = {dv:.1e}, {elapsed:.1f} s")
    criterion("6b <d_i phi|phi> purely imaginary", re_overlap <= 1e-10, f"max |Re| = {re_overlap:.1e}")


def test_6c_short_time_slope(criterion):
    # the ansatz applies exp(+i theta P), so exp(-iHt) is matched by theta_m = -c_m t
    _, h, _, _ = dimer()
    ansatz = VhaAnsatz.from_hamiltonian(h, 1)
    c = np.array([g.coefficient for g in ansatz.generators])
    dt = 1e-3
    worst = 0.0
    for seed in range(10):
        s = QubitState.random(4, np.random.default_rng(seed))
        traj = evolve(ansatz, s, h, dt, dt)
        worst = max(worst, float(np.max(np.abs(traj.theta[1] / dt + c))))
    criterion("6c slope theta_m(dt)/dt -> -c_m at dt = 1e-3", worst <= 1e-4,
              f"max |theta_m(dt)/dt + c_m| over 10 random dimer states = {worst:.2e}")


# ---------------------------------------------------------------------------
# 7

ONE_PERIOD = 4 * np.pi


def _ordering_runs(model, combo, normalize, runs, dt):
    h = qubit_hamiltonian(model)
    _, psi = ground_state(h)
    c = momentum_operator(model, parse_combo(combo), "annihilation", normalize)
    t = time_grid(ONE_PERIOD, dt)
    ref = exact_greens(h, psi, c, c.adjoint(), t)[2]
    out = {}
    for alg, d in runs:
        f = os_greens if alg == "OS" else cf_greens
        out[alg, d] = rms_error(f(h, psi, c, c.adjoint(), VqsPropagator(d), t)[2], ref)
    return out


def test_7_dimer_cf_depths(criterion):
    rms = _ordering_runs(HubbardModel(2), "1:1:up,-1:2:up", True, [("CF", 1), ("CF", 2)], 0.01)
    criterion("7 dimer CF-d1 RMS > 0.1", rms["CF", 1] > 0.1, f"RMS = {rms['CF', 1]:.3e}")
    criterion("7 dimer CF-d2 RMS <= 0.05", rms["CF", 2] <= 0.05, f"RMS = {rms['CF', 2]:.3e}")


@pytest.mark.slow
def test_7_three_site_ordering(criterion):
    rms = _ordering_runs(HubbardModel(3), "1:1:up,-1:2:up", False, [("OS", 3), ("CF", 3), ("CF", 5)], 0.01)
    criterion("7 3-site CF-d3 RMS > OS-d3 RMS", rms["CF", 3] > rms["OS", 3],
              f"CF-d3 {rms['CF', 3]:.3e} vs OS-d3 {rms['OS', 3]:.3e}")
    criterion("7 3-site OS-d3 RMS <= CF-d5 RMS", rms["OS", 3] <= rms["CF", 5],
              f"OS-d3 {rms['OS', 3]:.3e} vs CF-d5 {rms['CF', 5]:.3e}")


@pytest.mark.slow
def test_7_four_site_ordering(criterion):
    rms = _ordering_runs(HubbardModel(4, boundary="periodic"), "1:1:up,-1:2:up", False,
                         [("OS", 3), ("CF", 5)], 0.01)
    criterion("7 4-site OS-d3 RMS <= CF-d5 RMS", rms["OS", 3] <= rms["CF", 5],
              f"OS-d3 {rms['OS', 3]:.3e} vs CF-d5 {rms['CF', 5]:.3e}")


# ---------------------------------------------------------------------------
# 8


def test_8_trotter_error_halves(criterion):
    from gfvqs.exact import exact_propagate

    _, h, _, _ = dimer()
    s = QubitState.random(4, np.random.default_rng(11))
    ref = exact_propagate(h, 1.0, s).amplitudes
    steps = [10, 20, 40, 80, 160]
    errs = [float(np.linalg.norm(trotter_propagate(h, 1.0, n, s).amplitudes - ref)) for n in steps]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    criterion("8 Trotter error halves per doubling", all(abs(r - 2) <= 0.2 for r in ratios),
              f"dimer t = 1, n = {steps}, ratios {np.round(ratios, 3).tolist()}")


def test_8_shot_noise_scaling(criterion):
    m, h, _, psi = dimer()
    c = momentum_operator(m, parse_combo("1:1:up,-1:2:up"), "annihilation")
    t = time_grid(2.0, 0.1)
    ref = os_greens(h, psi, c, c.adjoint(), SymmetryPropagator(), t)[2]
    shots = np.array([1e2, 1e3, 1e4, 1e5])
    rng = np.random.default_rng(5)
    errs = []
    for n in shots:
        trials = [rms_error(os_greens(h, psi, c, c.adjoint(), SymmetryPropagator(), t, shots=int(n), rng=rng)[2], ref)
                  for _ in range(20)]
        errs.append(np.mean(trials))
    slope = float(np.polyfit(np.log10(shots), np.log10(errs), 1)[0])
    criterion("8 shot error slope -0.5 +- 0.1", abs(slope + 0.5) <= 0.1,
              f"fitted slope {slope:.3f} over N = 1e2..1e5 (20 repetitions each)")


# ---------------------------------------------------------------------------
# 9


def test_9_energy_shift(criterion):
    m, h, e0, psi = dimer()
    c = momentum_operator(m, parse_combo("1:1:up,-1:2:up"), "annihilation")
    window = 8 * np.pi
    t = time_grid(window, window / 1280)
    exact = os_greens(h, psi, c, c.adjoint(), SymmetryPropagator(), t)
    noisy = os_greens(h, psi, c, c.adjoint(), SymmetryPropagator(), t, e0=-3.91)
    s_exact = transform(exact[0], window=window)
    s_noisy = transform(noisy[0], window=window)
    gap = float(np.max(np.abs(energy_shift(s_exact, e0, -3.91).values - s_noisy.values)))
    criterion("9 shift identity", gap <= 1e-6, f"max |shift(G) - FT(e^(i dE t) g)| = {gap:.1e}")

    # lesser poles move by E0 - E0~, greater poles by the opposite amount
    moved, detail = [], []
    for k, sign in ((0, -1), (1, 1)):
        a = transform(exact[k], window=window)
        b = transform(noisy[k], window=window)
        before = [p.frequency for p in find_poles(a)]
        after = [p.frequency for p in find_poles(b)]
        for p in before:
            d = min(after, key=lambda q: abs(q - p)) - p if after else float("nan")
            moved.append(abs(d - sign * 0.09) <= a.resolution)
            detail.append(f"{exact[k].kind} {p:+.3f} -> {p + d:+.4f}")
    ok = bool(moved) and all(moved)
    criterion("9 pole displacement 0.09 for E0~ = -3.91", ok,
              f"{', '.join(detail)}; grid resolution {s_exact.resolution:.3f}")
