"""Named invariant suites run by ``lonpauli verify``.

Every suite is deterministic (fixed seeds) and returns a :class:`CheckResult`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import measurement as meas
from .bipartite import (
    SeparableConfig,
    apply_local,
    build_phi_3A2B,
    build_psi0,
    cmi_report,
    cmp_report,
    product_state,
)
from .fock import (
    SectorState,
    enumerate_basis,
    lift_unitary,
    permanent,
    permanent_naive,
    random_unitary,
)
from .pauli import (
    build_pauli_eigenstate,
    complementary_set,
    eigenphase,
    is_complementary,
    is_mutually_unbiased,
    lambda_operator,
    pauli_classes,
    phase,
)
from .quantities import ComplementaryConfig, entropy_report

TOL = 1e-9


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        self.passed = bool(self.passed)


def random_sector_state(M: int, N: int, rng) -> SectorState:
    basis = enumerate_basis(M, N)
    v = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    return SectorState(basis, v)


def check_permanent(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 5))
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        ref = permanent_naive(A)
        worst = max(worst, abs(permanent(A) - ref) / max(abs(ref), 1e-300))
    return CheckResult("permanent", worst < 1e-12, f"max relative error {worst:.2e}")


def check_unitarity(seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_u = worst_c = 0.0
    for M, N in [(3, 2), (4, 2), (4, 3), (5, 2)]:
        basis = enumerate_basis(M, N)
        U, V = random_unitary(M, rng), random_unitary(M, rng)
        LU, LV = lift_unitary(U, basis), lift_unitary(V, basis)
        worst_u = max(worst_u, np.abs(LU.conj().T @ LU - np.eye(basis.dim)).max())
        worst_c = max(worst_c, np.abs(lift_unitary(U @ V, basis) - LU @ LV).max())
    ok = worst_u < 1e-10 and worst_c < 1e-10
    return CheckResult("unitarity", ok, f"unitarity {worst_u:.2e}, composition {worst_c:.2e}")


def check_eigen() -> CheckResult:
    worst = 0.0
    for M, N in [(3, 2), (4, 2), (4, 3), (5, 2), (5, 3), (6, 2)]:
        basis = enumerate_basis(M, N)
        for j in range(M):
            L = lambda_operator(basis, j)
            for cls in pauli_classes(M, N):
                for m in cls.labels:
                    v = build_pauli_eigenstate(cls, j, m).to_state(basis).amplitudes
                    worst = max(worst, np.abs(L @ v - phase(eigenphase(cls, j, m), M) * v).max())
    return CheckResult("eigen", worst < TOL, f"max eigen-equation residual {worst:.2e}")


def check_mub() -> CheckResult:
    bad = []
    for M in range(2, 7):
        for N in range(1, 5):
            for cls in pauli_classes(M, N):
                if cls.dim == 1:
                    continue
                for j, l in itertools.combinations(range(M), 2):
                    if is_complementary(j, l, cls) != is_mutually_unbiased(cls, j, l, TOL):
                        bad.append((cls.name, j, l))
    return CheckResult("mub", not bad, f"{len(bad)} disagreements" + (f": {bad[:3]}" if bad else ""))


def check_hadamard() -> CheckResult:
    worst = 0.0
    for M, N in [(4, 2), (5, 2), (5, 3), (3, 2), (4, 3)]:
        basis = enumerate_basis(M, N)
        for j in range(M):
            for m in range(M):
                diff = meas.eigen_projector(basis, j, m) - meas.hadamard_projector(basis, j, m)
                worst = max(worst, np.abs(diff).max())
    return CheckResult("hadamard", worst < TOL, f"max projector deviation {worst:.2e}")


def _six(state):
    configs = [meas.parse_config("xi", 5)] + [meas.parse_config(f"l{j}", 5) for j in range(5)]
    return np.array([meas.measure(state, c).probs for c in configs])


def check_decoherence() -> CheckResult:
    psi0 = build_psi0()
    worst = np.abs(_six(psi0) - _six(meas.decohere(psi0))).max()
    return CheckResult("decoherence", worst < TOL, f"max distribution deviation {worst:.2e}")


def check_entropy(seed: int = 2, samples: int = 50) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = math.inf
    for M, N in [(5, 2), (4, 2), (4, 3), (3, 2)]:
        names = complementary_set(M, N)
        sets = [names] + [("xi", f"l{j}") for j in range(M)]
        for L in sets:
            cfg = ComplementaryConfig.parse(L, M, N)
            for _ in range(samples):
                r = entropy_report(random_sector_state(M, N, rng), cfg)
                worst = min(worst, r.value - r.bound)
    return CheckResult("entropy", worst >= -TOL, f"min value - bound {worst:.2e}")


def check_stabilizer() -> CheckResult:
    phi = build_phi_3A2B()
    worst = 0.0
    for j in range(5):
        LA = lambda_operator(phi.basis_A, j)
        LB = lambda_operator(phi.basis_B, j)
        out = apply_local(phi, LA, LB).amplitudes
        worst = max(worst, np.abs(out - phase(-j, 5) * phi.amplitudes).max())
    return CheckResult("stabilizer", worst < TOL, f"max stabilizer residual {worst:.2e}")


def _separable_configs():
    # M=5, (3,2): gcd case ii; M=4, (2,2): gcd case i
    out = []
    for size in range(2, 7):
        out.append(SeparableConfig.parse(["xi:xi"] + [f"l{j}:l{j}" for j in range(size - 1)], 5, 3, 2))
    out.append(SeparableConfig.parse(["xi:xi", "l1:l1"], 4, 2, 2))
    out.append(SeparableConfig.parse(["xi:xi", "l0:l0"], 4, 2, 2))
    return out


def check_separable(seed: int = 3, samples: int = 100) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = -math.inf
    cfgs = _separable_configs()
    for k in range(samples):
        cfg = cfgs[k % len(cfgs)]
        targets = rng.integers(0, cfg.M, size=len(cfg))
        cfg = cfg.with_targets(targets)
        s = product_state(
            random_sector_state(cfg.M, cfg.N_A, rng), random_sector_state(cfg.M, cfg.N_B, rng)
        )
        for rep in (cmi_report(s, cfg), cmp_report(s, cfg)):
            worst = max(worst, rep.value - rep.bound)
    return CheckResult("separable", worst <= TOL, f"max value - bound {worst:.2e}")


SUITES: dict[str, Callable[[], CheckResult]] = {
    "permanent": check_permanent,
    "unitarity": check_unitarity,
    "eigen": check_eigen,
    "mub": check_mub,
    "hadamard": check_hadamard,
    "decoherence": check_decoherence,
    "entropy": check_entropy,
    "stabilizer": check_stabilizer,
    "separable": check_separable,
}


def run_suites(only=None) -> list[CheckResult]:
    names = list(SUITES) if not only else list(only)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; choose from {list(SUITES)}")
    return [SUITES[n]() for n in names]
