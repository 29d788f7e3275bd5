"""Acceptance criteria 1-11, one test each, each printing a PASS/FAIL line."""

import itertools
import math

import numpy as np
import pytest

from lonpauli import measurement as meas
from lonpauli.bipartite import (
    BipartiteState,
    SeparableConfig,
    build_phi_3A2B,
    build_psi0,
    cmi_report,
    cmp_report,
    extract_targets,
    first_crossing,
    joint_pauli_measurement,
    mutual_information,
    noise_threshold,
    phi_config,
    product_state,
    sweep,
)
from lonpauli.cli import main
from lonpauli.fock import SectorState, enumerate_basis, lift_unitary, permanent, permanent_naive, random_unitary
from lonpauli.pauli import (
    build_pauli_eigenstate,
    is_complementary,
    is_mutually_unbiased,
    pauli_class_of,
    pauli_classes,
)
from lonpauli.quantities import ComplementaryConfig, entropy_report

LOG5 = math.log(5)
PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
YES_NO_PATTERN = (True, False, True, True, False, True)
NONE = (False,) * 6

# four-mode complementarity table, rows keyed by class representative
TABLE_M4 = {
    1: {(1, 0, 0, 0): YES_NO_PATTERN},
    2: {(2, 0, 0, 0): NONE, (1, 1, 0, 0): NONE, (1, 0, 1, 0): YES_NO_PATTERN},
    3: {
        (1, 1, 1, 0): YES_NO_PATTERN,
        (2, 1, 0, 0): YES_NO_PATTERN,
        (2, 0, 1, 0): YES_NO_PATTERN,
        (2, 0, 0, 1): YES_NO_PATTERN,
        (3, 0, 0, 0): YES_NO_PATTERN,
    },
}


@pytest.fixture
def report(capsys):
    def _report(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return _report


def random_state(M, N, rng):
    b = enumerate_basis(M, N)
    return SectorState(b, rng.normal(size=b.dim) + 1j * rng.normal(size=b.dim))


def test_criterion_01_table_grid(report, capsys):
    cells = mismatches = 0
    for N, rows in TABLE_M4.items():
        classes = {c.representative: c for c in pauli_classes(4, N)}
        assert set(classes) == set(rows)
        for rep, expected in rows.items():
            cls = classes[rep]
            for (j, l), want in zip(PAIRS, expected):
                cells += 1
                got_pred = is_complementary(j, l, cls)
                got_num = is_mutually_unbiased(cls, j, l, 1e-9)
                mismatches += (got_pred != want) + (got_num != want)
    classes4 = pauli_classes(4, 4)
    sector4 = [all(is_complementary(j, l, c) for c in classes4) for j, l in PAIRS]
    d1 = [c for c in classes4 if c.dim == 1]
    vacuous = all(is_complementary(j, l, d1[0]) for j, l in PAIRS)
    code = main(["classes", "-M", "4", "-N", "4", "--grid"])
    err = capsys.readouterr().err
    logged = code == 0 and "E1111" in err
    ok = mismatches == 0 and not any(sector4) and vacuous and logged
    report(1, ok, f"{cells} cells for N=1..3, {mismatches} mismatches; N=4 sector all-no; d=1 note logged={logged}")


def test_criterion_02_eigenstate_statistics(report):
    e = build_pauli_eigenstate(pauli_class_of((1, 1, 0, 0, 0)), 0, 0).to_state()
    dev = np.abs(meas.pauli_measurement(e, 0).probs - [1, 0, 0, 0, 0]).max()
    for j in range(1, 5):
        dev = max(dev, np.abs(meas.pauli_measurement(e, j).probs - 0.2).max())
    report(2, dev < 1e-9, f"max deviation {dev:.1e}")


def test_criterion_03_projector_equivalence(report):
    worst = 0.0
    for M, N in [(4, 2), (5, 2), (5, 3)]:
        b = enumerate_basis(M, N)
        for j, m in itertools.product(range(M), repeat=2):
            worst = max(worst, np.abs(meas.eigen_projector(b, j, m) - meas.hadamard_projector(b, j, m)).max())
    report(3, worst < 1e-9, f"max |pi_eigen - H pi_Z H^dag| = {worst:.1e}")


def test_criterion_04_uncertainty_relation(report):
    psi0 = build_psi0()
    # the tight pair is {Xi, Lambda_0}: psi0 is a Lambda_0 eigenstate
    tight = entropy_report(psi0, ComplementaryConfig.parse(["xi", "l0"], 5, 2))
    full = entropy_report(psi0, ComplementaryConfig.parse(["xi", "l0", "l1", "l2", "l3", "l4"], 5, 2))
    ok = abs(tight.value - 0.5 * LOG5) < 1e-9 and abs(tight.value - tight.bound) < 1e-9
    ok &= abs(full.value - 5 * LOG5 / 6) < 1e-9 and abs(full.bound - math.log(3)) < 1e-12 and full.satisfied
    violations = 0
    for M, N in [(4, 2), (4, 3), (5, 2), (5, 3)]:
        from lonpauli.pauli import complementary_set

        sets = [list(complementary_set(M, N))] + [["xi", f"l{j}"] for j in range(M)]
        cfgs = [ComplementaryConfig.parse(L, M, N) for L in sets]
        rng = np.random.default_rng(400 + 10 * M + N)
        for k in range(200):
            r = entropy_report(random_state(M, N, rng), cfgs[k % len(cfgs)])
            violations += r.value < r.bound - 1e-9
    ok &= violations == 0
    report(4, ok, f"tight {tight.value:.12f} vs {tight.bound:.12f}; full {full.value:.6f} >= {full.bound:.6f}; "
                  f"{violations} violations in 800 random states")


def test_criterion_05_cmi(report):
    phi = build_phi_3A2B()
    names = ["z:z"] + [f"l{j}:l{j}" for j in range(5)]
    dev = 0.0
    for name in names:
        cfg = SeparableConfig.parse([name], 5, 3, 2, override=True)
        dev = max(dev, abs(mutual_information(joint_pauli_measurement(phi, cfg.pairs[0])) - LOG5))
    verdicts = []
    bounds = {}
    for size in range(2, 7):
        r = cmi_report(phi, phi_config(size=size))
        dev = max(dev, abs(r.value - LOG5))
        verdicts.append(r.verdict)
        bounds[size] = r.bound
    ok = dev < 1e-9 and all(v == "entangled" for v in verdicts)
    ok &= abs(bounds[6] - math.log(5 / 3)) < 1e-9 and abs(bounds[2] - 0.5 * LOG5) < 1e-9
    report(5, ok, f"max |CMI - log 5| = {dev:.1e}; bound(6) = {bounds[6]:.6f}, bound(2) = {bounds[2]:.6f}; {set(verdicts)}")


def test_criterion_06_cmp(report):
    phi = build_phi_3A2B()
    sep = BipartiteState.fock((1, 1, 1, 0, 0), (1, 1, 0, 0, 0))
    dev = tight = 0.0
    for size in range(2, 7):
        cfg = phi_config(size=size)
        cfg = cfg.with_targets(extract_targets(phi, cfg))
        r = cmp_report(phi, cfg)
        dev = max(dev, abs(r.value - 1), abs(r.bound - (size + 4) / (5 * size)))
        s = cmp_report(sep, cfg)
        tight = max(tight, abs(s.value - s.bound))
    ok = dev < 1e-9 and tight < 1e-9
    report(6, ok, f"max |CMP - 1|, bound error {dev:.1e}; separable |value - bound| {tight:.1e}")


def test_criterion_07_noise_threshold(report):
    grid = np.round(np.arange(101) * 0.01, 12)
    rows = sweep("noise", phi_config(), grid)
    cross = first_crossing(rows, "cmp")
    closed = abs((1 - 4 * (5 / 6) / 5) - 1 / 3) < 1e-15
    order = []
    for size in range(2, 7):
        cfg = phi_config(size=size)
        order.append((size, noise_threshold(cfg, "cmi"), noise_threshold(cfg, "cmp")))
    ok = cross is not None and abs(cross - 5 / 6) <= 0.01 and closed and all(a < b for _, a, b in order)
    detail = ", ".join(f"|L|={s}: {a:.4f}<{b:.4f}" for s, a, b in order)
    report(7, ok, f"CMP grid crossing {cross}; {detail}")


def test_criterion_08_phase_sweep(report):
    rows = sweep("phase", phi_config(), [0, 1, 2, 3, 4])
    dev = max(abs(r.cmi - LOG5) for r in rows)
    from lonpauli.bipartite import phase_shifted_state
    from lonpauli.measurement import parse_config

    J = joint_pauli_measurement(phase_shifted_state(build_phi_3A2B(), 1), (parse_config("l0", 5),) * 2).probs
    a, b = np.indices((5, 5))
    off = J[(a + b) % 5 != 3].max()
    on = np.abs(J[(a + b) % 5 == 3] - 0.2).max()
    ok = dev < 1e-9 and off < 1e-12 and on < 1e-9 and rows[1].cmp <= rows[1].cmp_bound + 1e-9
    report(8, ok, f"max |CMI - log 5| = {dev:.1e}; theta=1 CMP {rows[1].cmp:.4f} <= {rows[1].cmp_bound:.4f}")


def test_criterion_09_separable_soundness(report):
    rng = np.random.default_rng(900)
    cases = [SeparableConfig.parse(["xi:xi"] + [f"l{j}:l{j}" for j in range(n - 1)], 5, 3, 2) for n in range(2, 7)]
    cases += [SeparableConfig.parse(["xi:xi", f"l{j}:l{j}"], 4, 2, 2) for j in range(4)]
    worst = -math.inf
    counts = {"i": 0, "ii": 0}
    for k in range(100):
        cfg = cases[k % len(cases)]
        cfg = cfg.with_targets(rng.integers(0, cfg.M, len(cfg)))
        counts[cfg.gcd_case] += 1
        s = product_state(random_state(cfg.M, cfg.N_A, rng), random_state(cfg.M, cfg.N_B, rng))
        for r in (cmi_report(s, cfg), cmp_report(s, cfg)):
            worst = max(worst, r.value - r.bound)
    ok = worst <= 1e-9 and counts["i"] > 0 and counts["ii"] > 0
    report(9, ok, f"max value - bound {worst:.3e} over 100 states (case i: {counts['i']}, case ii: {counts['ii']})")


def test_criterion_10_oracles(report):
    rng = np.random.default_rng(1000)
    rel = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 5))
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        ref = permanent_naive(A)
        rel = max(rel, abs(permanent(A) - ref) / abs(ref))
    uni = comp = 0.0
    for M in range(2, 6):
        for N in range(1, 5):
            b = enumerate_basis(M, N)
            U, V = random_unitary(M, rng), random_unitary(M, rng)
            GU, GV = lift_unitary(U, b), lift_unitary(V, b)
            uni = max(uni, np.abs(GU.conj().T @ GU - np.eye(b.dim)).max())
            comp = max(comp, np.abs(lift_unitary(U @ V, b) - GU @ GV).max())
    ok = rel < 1e-12 and uni < 1e-8 and comp < 1e-8
    report(10, ok, f"permanent rel. error {rel:.1e}; unitarity {uni:.1e}; composition {comp:.1e}")


def test_criterion_11_decoherence(report):
    psi0 = build_psi0()
    D = meas.decohere(psi0)
    cfgs = [meas.parse_config("xi", 5)] + [meas.parse_config(f"l{j}", 5) for j in range(5)]
    dev = max(np.abs(meas.measure(psi0, c).probs - meas.measure(D, c).probs).max() for c in cfgs)
    report(11, dev < 1e-9, f"max deviation over six measurements {dev:.1e}")
