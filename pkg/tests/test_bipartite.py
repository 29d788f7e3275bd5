import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lonpauli.bipartite import (
    BipartiteState,
    SeparableConfig,
    apply_local,
    build_phi_3A2B,
    build_psi0,
    cmi,
    cmi_report,
    cmi_separable_bound,
    cmp,
    cmp_report,
    cmp_separable_bound,
    evolve_local,
    extract_targets,
    joint_pauli_measurement,
    joint_subspace_weights,
    mutual_information,
    mutual_predictability,
    noise_threshold,
    phase_shifted_state,
    phi_config,
    product_state,
    sweep,
    verdict,
    white_noise_state,
)
from lonpauli.fock import MixedState, SectorState, enumerate_basis, random_unitary
from lonpauli.measurement import ConfigError, parse_config, pauli_measurement
from lonpauli.pauli import lambda_operator, phase, clock_operator

LOG5 = math.log(5)


@pytest.fixture(scope="module")
def phi():
    return build_phi_3A2B()


def pair(a, b=None, M=5):
    return parse_config(a, M), parse_config(b or a, M)


def delta_table(target, M=5, weight=0.2):
    a, b = np.indices((M, M))
    return np.where((a + b) % M == target, weight, 0.0)


def random_local(M, N, rng):
    b = enumerate_basis(M, N)
    return SectorState(b, rng.normal(size=b.dim) + 1j * rng.normal(size=b.dim))


# -- target states -----------------------------------------------------------

def test_phi_structure(phi):
    assert np.linalg.norm(phi.amplitudes) == pytest.approx(1)
    sup = phi.support()
    assert len(sup) == 10
    assert all(abs(v) == pytest.approx(1 / math.sqrt(10)) for v in sup.values())
    assert phi.amplitude((1, 1, 1, 0, 0), (1, 1, 0, 0, 0)) == pytest.approx(1 / math.sqrt(10))
    assert phi.basis_A.dim * phi.basis_B.dim == 525


def test_phi_stabilizers(phi):
    ZA, ZB = clock_operator(phi.basis_A), clock_operator(phi.basis_B)
    out = apply_local(phi, ZA, ZB).amplitudes
    assert np.abs(out - phase(-1, 5) * phi.amplitudes).max() < 1e-9
    for j in range(5):
        out = apply_local(phi, lambda_operator(phi.basis_A, j), lambda_operator(phi.basis_B, j)).amplitudes
        assert np.abs(out - phase(-j, 5) * phi.amplitudes).max() < 1e-9


def test_psi0_structure():
    psi0 = build_psi0()
    L0 = lambda_operator(psi0.basis, 0)
    assert np.allclose(L0 @ psi0.amplitudes, psi0.amplitudes)
    sup = psi0.support()
    assert len(sup) == 10
    assert all(abs(v) == pytest.approx(1 / math.sqrt(10)) for v in sup.values())


def test_local_evolution_matches_kron():
    rng = np.random.default_rng(0)
    s = product_state(random_local(3, 2, rng), random_local(3, 1, rng))
    UA, UB = random_unitary(3, rng), random_unitary(3, rng)
    out = evolve_local(s, UA, UB)
    from lonpauli.fock import lift_unitary

    big = np.kron(lift_unitary(UA, s.basis_A), lift_unitary(UB, s.basis_B))
    assert np.allclose(out.amplitudes.ravel(), big @ s.amplitudes.ravel())


# -- joint statistics --------------------------------------------------------

def test_zz_joint(phi):
    J = joint_pauli_measurement(phi, pair("z"))
    assert np.abs(J.probs - delta_table(4)).max() < 1e-9


@pytest.mark.parametrize("j", range(5))
def test_lambda_joint(phi, j):
    J = joint_pauli_measurement(phi, pair(f"l{j}"))
    assert np.abs(J.probs - delta_table((5 - j) % 5)).max() < 1e-9
    pa, pb = J.marginals()
    assert np.allclose(pa, 0.2) and np.allclose(pb, 0.2)
    assert mutual_information(J) == pytest.approx(LOG5, abs=1e-9)


def test_joint_marginal_is_local_measurement():
    rng = np.random.default_rng(1)
    a, b = random_local(5, 3, rng), random_local(5, 2, rng)
    J = joint_pauli_measurement(product_state(a, b), pair("l2", "l3"))
    pa, pb = J.marginals()
    assert np.allclose(pa, pauli_measurement(a, 2).probs)
    assert np.allclose(pb, pauli_measurement(b, 3).probs)
    assert np.allclose(J.probs, np.outer(pa, pb))


def test_mutual_information_examples():
    assert mutual_information(np.eye(5) / 5) == pytest.approx(LOG5)
    assert abs(mutual_information(np.full((5, 5), 1 / 25))) < 1e-12
    eps = 5 / 6
    table = (1 - eps) * delta_table(0) + eps / 25
    expected = 2 * LOG5 - math.log(15) / 3 - 2 * math.log(30) / 3
    assert mutual_information(table) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.0487, abs=1e-4)


def test_mutual_predictability():
    assert mutual_predictability(delta_table(3), 3) == pytest.approx(1)
    assert mutual_predictability(delta_table(3), 2) == 0
    assert mutual_predictability(np.full((5, 5), 1 / 25), 0) == pytest.approx(0.2)


# -- white noise and phase ---------------------------------------------------

@pytest.mark.parametrize("eps", [0, 0.3, 5 / 6, 1])
def test_white_noise_closed_form(phi, eps):
    rho = white_noise_state(phi, eps)
    cfg = phi_config().with_targets(extract_targets(phi, phi_config()))
    for (a, b), mu in zip(cfg.pairs, cfg.targets):
        J = joint_pauli_measurement(rho, (a, b))
        expected = (1 - eps) * delta_table(mu) + eps / 25
        assert np.abs(J.probs - expected).max() < 1e-9


def test_white_noise_range(phi):
    with pytest.raises(ValueError):
        white_noise_state(phi, 1.2)


def test_white_noise_class_weights(phi):
    w = joint_subspace_weights(white_noise_state(phi, 1.0))
    for (cA, cB), p in w.items():
        assert p == pytest.approx(cA.dim * cB.dim / 525)


def test_phase_shift(phi):
    assert np.allclose(phase_shifted_state(phi, 0).amplitudes, phi.amplitudes)
    s = phase_shifted_state(phi, 1)
    assert np.linalg.norm(s.amplitudes) == pytest.approx(1)
    J = joint_pauli_measurement(s, pair("l0"))
    assert np.abs(J.probs - delta_table(3)).max() < 1e-9


def test_cmp_linear_in_mixtures(phi):
    rng = np.random.default_rng(2)
    cfg = phi_config().with_targets((4, 0, 4, 3, 2, 1))
    other = product_state(random_local(5, 3, rng), random_local(5, 2, rng))
    mix = MixedState(((0.3, phi), (0.7, other)))
    assert cmp(mix, cfg) == pytest.approx(0.3 * cmp(phi, cfg) + 0.7 * cmp(other, cfg), abs=1e-12)


# -- configs and targets -----------------------------------------------------

def test_extracted_targets(phi):
    assert extract_targets(phi, phi_config()) == (4, 0, 4, 3, 2, 1)


def test_extract_targets_requires_eigenstate():
    s = BipartiteState.fock((1, 1, 1, 0, 0), (1, 1, 0, 0, 0))
    with pytest.raises(ConfigError):
        extract_targets(s, phi_config())


def test_separable_config_validation():
    with pytest.raises(ConfigError):
        SeparableConfig.parse(["xi:xi", "l0:l0", "l1:l1"], 4, 2, 2)
    with pytest.raises(ConfigError):
        SeparableConfig.parse(["l0:l0", "l0:l1"], 5, 3, 2)
    with pytest.raises(ConfigError):
        SeparableConfig.parse(["l0:l0"], 5, 3, 2, targets=(1, 2))
    cfg = SeparableConfig.parse(["xi:xi", "l0:l0", "l1:l1"], 4, 2, 2, override=True)
    assert cfg.gcd_case == "i"


def test_cmp_needs_targets(phi):
    with pytest.raises(ConfigError):
        cmp(phi, phi_config())


# -- CMI / CMP values and bounds ---------------------------------------------

@pytest.mark.parametrize("size", range(2, 7))
def test_phi_cmi_and_cmp(phi, size):
    cfg = phi_config(size=size)
    cfg = cfg.with_targets(extract_targets(phi, cfg))
    ri, rp = cmi_report(phi, cfg), cmp_report(phi, cfg)
    assert ri.value == pytest.approx(LOG5, abs=1e-9)
    assert rp.value == pytest.approx(1, abs=1e-9)
    few = size <= math.sqrt(5) + 1
    assert ri.bound == pytest.approx(0.5 * LOG5 if few else math.log((size + 4) / size))
    assert rp.bound == pytest.approx((size + 4) / (5 * size))
    assert ri.verdict == rp.verdict == "entangled"


def test_full_cmi_bound_value():
    assert cmi_separable_bound(phi_config()).bound == pytest.approx(math.log(5 / 3))


def test_product_state_attains_cmp_bound():
    s = BipartiteState.fock((1, 1, 1, 0, 0), (1, 1, 0, 0, 0))
    for size in range(2, 7):
        cfg = phi_config(size=size).with_targets((4, 0, 4, 3, 2, 1)[:size])
        r = cmp_report(s, cfg)
        assert abs(r.value - r.bound) < 1e-9
        assert r.verdict == "inconclusive"
        assert cmi_report(s, cfg).verdict == "undetected"


def test_case_i_bounds():
    cfg = SeparableConfig.parse(["xi:xi", "l1:l1"], 4, 2, 2)
    s = BipartiteState.fock((1, 1, 0, 0), (1, 0, 1, 0))
    w = joint_subspace_weights(s)
    assert cmi_separable_bound(cfg, w).bound == pytest.approx(math.log(4) - 0.5 * math.log(2))
    assert cmp_separable_bound(cfg, w).bound == pytest.approx(0.75)
    with pytest.raises(ValueError):
        cmi_separable_bound(cfg)


def test_verdict_slack():
    assert verdict(1.0, 1.0) == "inconclusive"
    assert verdict(1.0 + 1e-6, 1.0) == "entangled"
    assert verdict(0.5, 1.0) == "undetected"


SEPARABLE_CASES = [(5, 3, 2, n) for n in range(2, 7)] + [(4, 2, 2, 2)]


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SEPARABLE_CASES), st.integers(0, 2**31 - 1))
def test_separable_soundness(case, seed):
    M, NA, NB, size = case
    rng = np.random.default_rng(seed)
    if M == 5:
        names = ["xi:xi"] + [f"l{j}:l{j}" for j in range(size - 1)]
    else:
        names = ["xi:xi", f"l{int(rng.integers(4))}:l{int(rng.integers(4))}"]
    cfg = SeparableConfig.parse(names, M, NA, NB, targets=tuple(rng.integers(0, M, size)))
    s = product_state(random_local(M, NA, rng), random_local(M, NB, rng))
    for r in (cmi_report(s, cfg), cmp_report(s, cfg)):
        assert r.value <= r.bound + 1e-9


# -- sweeps ------------------------------------------------------------------

def test_noise_sweep_matches_direct(phi):
    cfg = phi_config().with_targets((4, 0, 4, 3, 2, 1))
    rows = sweep("noise", cfg, [0.0, 0.3, 0.9])
    for r in rows:
        rho = white_noise_state(phi, r.param)
        assert r.cmi == pytest.approx(cmi(rho, cfg), abs=1e-9)
        assert r.cmp == pytest.approx(cmp(rho, cfg), abs=1e-9)


def test_cmp_monotone_in_noise():
    rows = sweep("noise", phi_config(), np.linspace(0, 1, 21))
    vals = [r.cmp for r in rows]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(0.2)


def test_cmp_closed_form_threshold():
    rows = sweep("noise", phi_config(), [5 / 6])
    assert rows[0].cmp == pytest.approx(1 / 3, abs=1e-12)
    assert noise_threshold(phi_config(), "cmp") == pytest.approx(5 / 6, abs=1e-9)


@pytest.mark.parametrize("size", range(2, 7))
def test_cmi_crossing_before_cmp(size):
    cfg = phi_config(size=size)
    assert noise_threshold(cfg, "cmi") < noise_threshold(cfg, "cmp")


def test_phase_sweep_integer_points():
    rows = sweep("phase", phi_config(), [0, 1, 2, 3, 4, 0.5])
    for r in rows[:5]:
        assert r.cmi == pytest.approx(LOG5, abs=1e-9)
    assert rows[1].cmp <= rows[1].cmp_bound + 1e-9
    assert rows[1].cmi_verdict == "entangled" and rows[1].cmp_verdict == "undetected"
    assert rows[0].cmp_verdict == "entangled"
    assert rows[5].cmi < LOG5


def test_unknown_sweep():
    with pytest.raises(ValueError):
        sweep("temperature", phi_config(), [0])
