"""Complementary correlations between two M-mode parties with fixed photon numbers.

Joint Pauli measurements are local: party A runs its own Hadamard (or none
for Xi/Z), party B likewise, and outcomes are post-selected on the local
photon numbers (N_A, N_B). From the joint label statistics we get the
complementary mutual information (CMI) and mutual predictability (CMP), which
are compared against their separable-state bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fock import (
    MixedState,
    ModeMismatch,
    PhotonNumberMismatch,
    SectorBasis,
    SectorState,
    enumerate_basis,
    lift_unitary,
)
from .measurement import (
    ConfigError,
    MeasurementConfig,
    parse_config,
    pauli_operator_matrix,
    readout,
)
from .pauli import (
    apply_mode_shift,
    build_pauli_eigenstate,
    partition_pauli_classes,
    pauli_class_of,
    phase,
)
from .quantities import BOUND_SLACK, BoundReport, is_complementary_set, log_factor, shannon_entropy


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BipartiteState:
    """Pure state of two M-mode parties; ``amplitudes[a, b]`` over basis_A x basis_B."""

    basis_A: SectorBasis
    basis_B: SectorBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.basis_A.M != self.basis_B.M:
            raise ModeMismatch("both parties must have the same number of modes")
        a = np.array(self.amplitudes, dtype=complex).reshape(self.basis_A.dim, self.basis_B.dim)
        nrm = np.linalg.norm(a)
        if nrm == 0:
            raise ValueError("zero state vector")
        if abs(nrm - 1) > 1e-9:
            a = a / nrm
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def M(self) -> int:
        return self.basis_A.M

    @property
    def N(self) -> tuple[int, int]:
        return (self.basis_A.N, self.basis_B.N)

    @classmethod
    def from_dict(cls, M: int, N_A: int, N_B: int, amps: dict) -> "BipartiteState":
        """``amps`` maps ``(occ_A, occ_B)`` pairs to amplitudes."""
        bA, bB = enumerate_basis(M, N_A), enumerate_basis(M, N_B)
        a = np.zeros((bA.dim, bB.dim), dtype=complex)
        for (nA, nB), amp in amps.items():
            if sum(nA) != N_A or sum(nB) != N_B:
                raise PhotonNumberMismatch(f"({nA}, {nB}) is not a ({N_A}, {N_B})-photon pair")
            a[bA.position(tuple(nA)), bB.position(tuple(nB))] += amp
        return cls(bA, bB, a)

    @classmethod
    def fock(cls, nA: Sequence[int], nB: Sequence[int]) -> "BipartiteState":
        return product_state(SectorState.fock(nA), SectorState.fock(nB))

    def amplitude(self, nA, nB) -> complex:
        return complex(self.amplitudes[self.basis_A.position(tuple(nA)), self.basis_B.position(tuple(nB))])

    def support(self, tol: float = 1e-12) -> dict:
        out = {}
        for a, b in zip(*np.nonzero(np.abs(self.amplitudes) > tol)):
            out[(self.basis_A.vectors[a], self.basis_B.vectors[b])] = complex(self.amplitudes[a, b])
        return out

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def product_state(psi_A: SectorState, psi_B: SectorState) -> BipartiteState:
    return BipartiteState(psi_A.basis, psi_B.basis, np.outer(psi_A.amplitudes, psi_B.amplitudes))


def apply_local(state: BipartiteState, op_A=None, op_B=None) -> BipartiteState:
    """Apply sector matrices locally: Psi -> A Psi B^T."""
    a = state.amplitudes
    if op_A is not None:
        a = op_A @ a
    if op_B is not None:
        a = a @ np.asarray(op_B).T
    return BipartiteState(state.basis_A, state.basis_B, a)


def evolve_local(state: BipartiteState, U_A=None, U_B=None) -> BipartiteState:
    """Evolve each party through its own mode unitary."""
    GA = None if U_A is None else lift_unitary(U_A, state.basis_A)
    GB = None if U_B is None else lift_unitary(U_B, state.basis_B)
    return apply_local(state, GA, GB)


def build_phi_3A2B() -> BipartiteState:
    """(1/sqrt 10) sum_m X^m (x) X^m (|11100>|11000> + |11010>|01001>), five modes."""
    seeds = [((1, 1, 1, 0, 0), (1, 1, 0, 0, 0)), ((1, 1, 0, 1, 0), (0, 1, 0, 0, 1))]
    amps: dict = {}
    for nA, nB in seeds:
        for m in range(5):
            key = (apply_mode_shift(nA, m), apply_mode_shift(nB, m))
            amps[key] = amps.get(key, 0) + 1 / math.sqrt(10)
    return BipartiteState.from_dict(5, 3, 2, amps)


def build_psi0() -> SectorState:
    """(|E_{11000,0}(Lambda_0)> + |E_{10100,0}(Lambda_0)>) / sqrt 2 in five modes."""
    a = build_pauli_eigenstate(pauli_class_of((1, 1, 0, 0, 0)), 0, 0).to_state()
    b = build_pauli_eigenstate(pauli_class_of((1, 0, 1, 0, 0)), 0, 0).to_state()
    return SectorState(a.basis, (a.amplitudes + b.amplitudes) / math.sqrt(2))


def white_noise_state(target: BipartiteState, eps: float) -> MixedState:
    """eps * (identity / D) + (1 - eps) |target><target| as an ensemble.

    The identity part is the uniform mixture over all D product Fock states
    of the target's (N_A, N_B) sector.
    """
    if not 0 <= eps <= 1:
        raise ValueError(f"noise level {eps} outside [0, 1]")
    bA, bB = target.basis_A, target.basis_B
    D = bA.dim * bB.dim
    comps = []
    if eps < 1:
        comps.append((1 - eps, target))
    if eps > 0:
        for a in range(bA.dim):
            for b in range(bB.dim):
                amp = np.zeros((bA.dim, bB.dim), dtype=complex)
                amp[a, b] = 1
                comps.append((eps / D, BipartiteState(bA, bB, amp)))
    return MixedState(tuple(comps))


def phase_shifted_state(target: BipartiteState, theta: float) -> BipartiteState:
    """(id (x) Z^theta) target, with Z^theta |n> = exp(2 pi i theta mu(n) / M) |n>."""
    mus = target.basis_B.mu_labels()
    return BipartiteState(
        target.basis_A,
        target.basis_B,
        target.amplitudes * phase(theta * mus, target.M)[np.newaxis, :],
    )


# ---------------------------------------------------------------------------
# joint measurements
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class JointLabelDistribution:
    """Probabilities over (mu_A, mu_B); sums to the post-selection success probability."""

    M: int
    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.shape != (self.M, self.M):
            raise ValueError(f"expected an {self.M}x{self.M} table")
        if np.any(p < -1e-12):
            raise ValueError("negative probability beyond rounding")
        p = np.clip(p, 0, None)
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def success(self) -> float:
        return float(self.probs.sum())

    def normalized(self) -> "JointLabelDistribution":
        return JointLabelDistribution(self.M, self.probs / self.success)

    def marginals(self):
        return self.probs.sum(axis=1), self.probs.sum(axis=0)


def _indicator(labels: np.ndarray, M: int) -> np.ndarray:
    out = np.zeros((M, labels.shape[0]))
    out[labels, np.arange(labels.shape[0])] = 1
    return out


def _pure_joint(state: BipartiteState, alpha: MeasurementConfig, beta: MeasurementConfig) -> np.ndarray:
    GA, labA = readout(state.basis_A, alpha)
    GB, labB = readout(state.basis_B, beta)
    amps = apply_local(state, GA, GB).amplitudes if (GA is not None or GB is not None) else state.amplitudes
    P = np.abs(amps) ** 2
    return _indicator(labA, state.M) @ P @ _indicator(labB, state.M).T


def _components(state, photons=None):
    if isinstance(state, BipartiteState):
        return ((1.0, state),)
    if isinstance(state, MixedState):
        comps = state.components
        sectors = {s.N for _, s in comps}
        if photons is None:
            if len(sectors) > 1:
                raise PhotonNumberMismatch(
                    f"ensemble spans local photon numbers {sorted(sectors)}; pass photons="
                )
            return comps
        return tuple((p, s) for p, s in comps if s.N == tuple(photons))
    raise TypeError(f"expected a bipartite state, got {type(state).__name__}")


def joint_pauli_measurement(state, pair, photons: tuple[int, int] | None = None) -> JointLabelDistribution:
    """Joint (mu_A, mu_B) statistics of the local measurement ``pair = (alpha, beta)``."""
    alpha, beta = pair
    if alpha.M != state.M or beta.M != state.M:
        raise ModeMismatch(f"measurement is for {alpha.M} modes, state has {state.M}")
    total = np.zeros((state.M, state.M))
    for p, s in _components(state, photons):
        if p:
            total += p * _pure_joint(s, alpha, beta)
    return JointLabelDistribution(state.M, total)


def mutual_information(joint, base="e") -> float:
    """I(A:B) = H(A) + H(B) - H(A, B) of a normalized joint table."""
    P = np.asarray(getattr(joint, "probs", joint), dtype=float)
    pa, pb = P.sum(axis=1), P.sum(axis=0)
    mi = shannon_entropy(pa) + shannon_entropy(pb) - shannon_entropy(P.ravel())
    return mi / log_factor(base)


def mutual_predictability(joint, target: int) -> float:
    """Probability of mu_A + mu_B = target (mod M)."""
    P = np.asarray(getattr(joint, "probs", joint), dtype=float)
    M = P.shape[0]
    a, b = np.indices((M, M))
    return float(P[(a + b) % M == target % M].sum())


def joint_subspace_weights(state) -> dict:
    """p_{E_A, E_B}: computational-basis weight of each pair of local Pauli classes."""
    out: dict = {}
    for p, s in _components(state):
        P = s.probabilities()
        clsA = partition_pauli_classes(s.basis_A)
        clsB = partition_pauli_classes(s.basis_B)
        for cA in clsA:
            ia = [s.basis_A.position(v) for v in cA.members]
            for cB in clsB:
                ib = [s.basis_B.position(v) for v in cB.members]
                w = float(P[np.ix_(ia, ib)].sum())
                if w > 0:
                    out[(cA, cB)] = out.get((cA, cB), 0.0) + p * w
    return out


# ---------------------------------------------------------------------------
# configurations and targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparableConfig:
    """Complementary separable settings {alpha_l (x) beta_l} with optional CMP targets."""

    pairs: tuple
    M: int
    N_A: int
    N_B: int
    targets: tuple | None = None
    override: bool = False

    def __post_init__(self):
        pairs = tuple(tuple(p) for p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise ConfigError("empty measurement set")
        if self.targets is not None:
            if len(self.targets) != len(pairs):
                raise ConfigError("need one target label per pair")
            object.__setattr__(self, "targets", tuple(int(t) % self.M for t in self.targets))
        if self.override:
            return
        alphas = [a for a, _ in pairs]
        betas = [b for _, b in pairs]
        for side, ops, N in (("A", alphas, self.N_A), ("B", betas, self.N_B)):
            if len({o.name for o in ops}) != len(ops):
                raise ConfigError(f"repeated local setting on party {side}")
            if not is_complementary_set(ops, N):
                raise ConfigError(
                    f"party {side} settings {[o.name for o in ops]} are not complementary "
                    f"for {N} photons in {self.M} modes"
                )

    @classmethod
    def parse(cls, spec: Sequence[str], M: int, N_A: int, N_B: int, targets=None, sigma=None, override=False):
        """``spec`` entries look like ``"z:z"``, ``"l2:l2"`` or ``"xi:l1"``."""
        pairs = []
        for item in spec:
            a, _, b = item.partition(":")
            b = b or a
            pairs.append((parse_config(a, M, sigma), parse_config(b, M, sigma)))
        return cls(tuple(pairs), M, N_A, N_B, None if targets is None else tuple(targets), override)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def names(self) -> list[str]:
        return [f"{a.name}:{b.name}" for a, b in self.pairs]

    def with_targets(self, targets) -> "SeparableConfig":
        return SeparableConfig(self.pairs, self.M, self.N_A, self.N_B, tuple(targets), self.override)

    @property
    def gcd_case(self) -> str:
        coprime = math.gcd(self.N_A, self.M) == 1 and math.gcd(self.N_B, self.M) == 1
        return "ii" if coprime else "i"


def phi_config(M: int = 5, N_A: int = 3, N_B: int = 2, size: int | None = None) -> SeparableConfig:
    """Settings Z (x) Z, Lambda_0 (x) Lambda_0, ..., Lambda_{M-1} (x) Lambda_{M-1} (first ``size``)."""
    names = ["z:z"] + [f"l{j}:l{j}" for j in range(M)]
    if size is not None:
        names = names[:size]
    return SeparableConfig.parse(names, M, N_A, N_B)


def _pauli_offset(cfg: MeasurementConfig, N: int) -> float:
    if cfg.kind == "lambda":
        return 0.5 * (cfg.M - 1) * cfg.j * N
    return 0.0


def extract_targets(target: BipartiteState, cfg: SeparableConfig, tol: float = 1e-6) -> tuple[int, ...]:
    """Correlation labels mu~_l read off the eigenphases of ``target``.

    For each pair the phase of <phi|alpha (x) beta|phi> is w^{e}; removing the
    Lambda_j phase offsets 1/2 (M-1) j N leaves w^{mu~}.
    """
    M = cfg.M
    out = []
    for alpha, beta in cfg.pairs:
        A = pauli_operator_matrix(target.basis_A, alpha)
        B = pauli_operator_matrix(target.basis_B, beta)
        psi = target.amplitudes
        expval = complex(np.vdot(psi, A @ psi @ B.T))
        if abs(abs(expval) - 1) > tol:
            raise ConfigError(
                f"target is not an eigenstate of {alpha.name} (x) {beta.name} (|<op>| = {abs(expval):.6f})"
            )
        e = np.angle(expval) * M / (2 * np.pi)
        e -= _pauli_offset(alpha, target.basis_A.N) + _pauli_offset(beta, target.basis_B.N)
        label = round(e)
        if abs(e - label) > 1e-6:
            raise ConfigError(f"eigenphase of {alpha.name} (x) {beta.name} is not a clock label")
        out.append(label % M)
    return tuple(out)


# ---------------------------------------------------------------------------
# CMI / CMP and their separable bounds
# ---------------------------------------------------------------------------

def verdict(value: float, bound: float, slack: float = BOUND_SLACK) -> str:
    if value > bound + slack:
        return "entangled"
    if value >= bound - slack:
        return "inconclusive"
    return "undetected"


def _check_state(state, cfg: SeparableConfig):
    if state.M != cfg.M:
        raise ModeMismatch(f"config is for {cfg.M} modes, state has {state.M}")


def cmi(state, cfg: SeparableConfig, base="e") -> float:
    """Average mutual information over the settings of ``cfg``."""
    _check_state(state, cfg)
    values = [mutual_information(joint_pauli_measurement(state, p).normalized()) for p in cfg.pairs]
    return float(np.mean(values)) / log_factor(base)


def _dmin_weights(weights) -> list[tuple[float, int]]:
    return [(p, min(cA.dim, cB.dim)) for (cA, cB), p in weights.items()]


def _name_weights(weights) -> dict:
    return {f"{cA.name}|{cB.name}": float(p) for (cA, cB), p in weights.items()}


def _many_settings(size: int, M: int) -> bool:
    return size > math.sqrt(M) + 1 + 1e-12


def cmi_separable_bound(cfg: SeparableConfig, weights=None, base="e") -> BoundReport:
    """Upper bound on CMI over separable states.

    Case i (gcd(N_A, M) != 1 or gcd(N_B, M) != 1):
    ``log M - 1/2 sum p_{E_A,E_B} log min(d_A, d_B)``.
    Case ii: ``1/2 log M`` for |L| <= sqrt(M)+1, else ``log((|L| + M - 1) / |L|)``.
    """
    M, L = cfg.M, len(cfg)
    weights = weights or {}
    if cfg.gcd_case == "i":
        if not weights:
            raise ValueError("case i bound needs the joint class weights")
        bound = math.log(M) - 0.5 * sum(p * math.log(d) for p, d in _dmin_weights(weights))
        case = "i"
    elif not _many_settings(L, M):
        bound, case = 0.5 * math.log(M), "ii-few"
    else:
        bound, case = math.log((L + M - 1) / L), "ii-many"
    return BoundReport(None, bound / log_factor(base), case, str(base), _name_weights(weights), kind="upper")


def cmp_separable_bound(cfg: SeparableConfig, weights=None) -> BoundReport:
    """Upper bound on CMP over separable states.

    Case i: ``1/2 + 1/2 sum p_{E_A,E_B} / min(d_A, d_B)``; case ii:
    ``(|L| + M - 1) / (|L| M)``.
    """
    M, L = cfg.M, len(cfg)
    weights = weights or {}
    if cfg.gcd_case == "i":
        if not weights:
            raise ValueError("case i bound needs the joint class weights")
        bound = 0.5 + 0.5 * sum(p / d for p, d in _dmin_weights(weights))
        case = "i"
    else:
        bound, case = (L + M - 1) / (L * M), "ii"
    return BoundReport(None, bound, case, "n/a", _name_weights(weights), kind="upper")


def cmp(state, cfg: SeparableConfig) -> float:
    """Average mutual predictability for the target labels in ``cfg``."""
    _check_state(state, cfg)
    if cfg.targets is None:
        raise ConfigError("CMP needs target labels (see extract_targets)")
    values = [
        mutual_predictability(joint_pauli_measurement(state, p).normalized(), t)
        for p, t in zip(cfg.pairs, cfg.targets)
    ]
    return float(np.mean(values))


def _finish(report: BoundReport, value: float) -> BoundReport:
    report.value = value
    report.satisfied = value <= report.bound + BOUND_SLACK
    report.verdict = verdict(value, report.bound)
    return report


def cmi_report(state, cfg: SeparableConfig, base="e") -> BoundReport:
    weights = joint_subspace_weights(state) if cfg.gcd_case == "i" else {}
    return _finish(cmi_separable_bound(cfg, weights, base), cmi(state, cfg, base))


def cmp_report(state, cfg: SeparableConfig) -> BoundReport:
    weights = joint_subspace_weights(state) if cfg.gcd_case == "i" else {}
    return _finish(cmp_separable_bound(cfg, weights), cmp(state, cfg))


# ---------------------------------------------------------------------------
# robustness sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepRow:
    param: float
    cmi: float
    cmi_bound: float
    cmp: float
    cmp_bound: float
    cmi_verdict: str
    cmp_verdict: str


SWEEP_FIELDS = ("param", "cmi", "cmi_bound", "cmp", "cmp_bound", "cmi_verdict", "cmp_verdict")


class _NoiseModel:
    """Joint tables of the white-noise family, using linearity in eps.

    rho(eps) = (1 - eps) rho(0) + eps rho(1), so every joint table and class
    weight interpolates linearly between the two endpoints.
    """

    def __init__(self, target: BipartiteState, cfg: SeparableConfig):
        noise = white_noise_state(target, 1.0)
        self.cfg = cfg
        self.clean = [joint_pauli_measurement(target, p).probs for p in cfg.pairs]
        self.noisy = [joint_pauli_measurement(noise, p).probs for p in cfg.pairs]
        self.w_clean = joint_subspace_weights(target)
        self.w_noisy = joint_subspace_weights(noise)

    def tables(self, eps):
        return [(1 - eps) * c + eps * n for c, n in zip(self.clean, self.noisy)]

    def weights(self, eps):
        keys = set(self.w_clean) | set(self.w_noisy)
        return {k: (1 - eps) * self.w_clean.get(k, 0) + eps * self.w_noisy.get(k, 0) for k in keys}

    def cmi(self, eps, base="e"):
        return float(np.mean([mutual_information(t) for t in self.tables(eps)])) / log_factor(base)

    def cmp(self, eps):
        return float(np.mean([mutual_predictability(t, mu) for t, mu in zip(self.tables(eps), self.cfg.targets)]))

    def bounds(self, eps, base="e"):
        w = self.weights(eps) if self.cfg.gcd_case == "i" else {}
        return cmi_separable_bound(self.cfg, w, base).bound, cmp_separable_bound(self.cfg, w).bound


def _row(param, vi, bi, vp, bp) -> SweepRow:
    return SweepRow(float(param), vi, bi, vp, bp, verdict(vi, bi), verdict(vp, bp))


def sweep(kind: str, cfg: SeparableConfig, grid, target: BipartiteState | None = None, base="e") -> list[SweepRow]:
    """CMI/CMP and their separable bounds along a noise or phase parameter.

    ``kind="noise"``: white-noise level eps of the target. ``kind="phase"``:
    local phase Z^theta on party B. CMP targets default to those of the
    unperturbed target state.
    """
    if target is None:
        target = build_phi_3A2B()
    if cfg.targets is None:
        cfg = cfg.with_targets(extract_targets(target, cfg))
    rows = []
    if kind == "noise":
        model = _NoiseModel(target, cfg)
        for eps in grid:
            bi, bp = model.bounds(eps, base)
            rows.append(_row(eps, model.cmi(eps, base), bi, model.cmp(eps), bp))
    elif kind == "phase":
        for theta in grid:
            state = phase_shifted_state(target, theta)
            ri, rp = cmi_report(state, cfg, base), cmp_report(state, cfg)
            rows.append(_row(theta, ri.value, ri.bound, rp.value, rp.bound))
    else:
        raise ValueError(f"unknown sweep kind {kind!r}")
    return rows


def first_crossing(rows: Sequence[SweepRow], which: str) -> float | None:
    """First grid value at which ``which`` ("cmi" or "cmp") no longer exceeds its bound."""
    for r in rows:
        if getattr(r, which) <= getattr(r, which + "_bound") + BOUND_SLACK:
            return r.param
    return None


def noise_threshold(cfg: SeparableConfig, which: str, target: BipartiteState | None = None, tol: float = 1e-12) -> float:
    """Noise level at which CMI or CMP meets its separable bound, by bisection."""
    if target is None:
        target = build_phi_3A2B()
    if cfg.targets is None:
        cfg = cfg.with_targets(extract_targets(target, cfg))
    model = _NoiseModel(target, cfg)

    def excess(eps):
        bi, bp = model.bounds(eps)
        return model.cmi(eps) - bi if which == "cmi" else model.cmp(eps) - bp

    lo, hi = 0.0, 1.0
    if excess(lo) <= 0:
        return 0.0
    if excess(hi) > 0:
        return 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
