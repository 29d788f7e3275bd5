"""Pauli measurements read out through Hadamard-transformed photon counting.

A Lambda_j measurement is the inverse Hadamard LON ``H_j^dag = F V^j``
followed by photon-number-resolving detection; the outcome label of a detected
occupation vector is its clock label mu(n). A Xi measurement is plain
computational-basis detection with the per-class Xi labelling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .fock import (
    MixedState,
    ModeMismatch,
    ModeUnitary,
    PhotonNumberMismatch,
    SectorBasis,
    SectorState,
    enumerate_basis,
    lift_unitary,
)
from .pauli import (
    build_pauli_eigenstate,
    lambda_operator,
    partition_pauli_classes,
    phase,
    pauli_class_of,
    xi_basis,
    z_compatible_sigma,
)


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasurementConfig:
    """One Pauli measurement setting.

    ``kind`` is ``"xi"`` (computational basis, Xi labels from ``sigma``),
    ``"z"`` (computational basis, labels mu(n); this is the Xi operator with
    the Z-compatible permutation) or ``"lambda"`` (inverse Hadamard ``j``).
    ``sigma`` maps class representatives to permutations; classes that are
    not listed use the identity.
    """

    kind: str
    M: int
    j: int = 0
    sigma: Mapping | None = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in ("xi", "z", "lambda"):
            raise ConfigError(f"unknown measurement kind {self.kind!r}")
        if self.kind == "lambda" and not 0 <= self.j < self.M:
            raise ConfigError(f"j = {self.j} outside 0..{self.M - 1}")

    @property
    def name(self) -> str:
        return f"l{self.j}" if self.kind == "lambda" else self.kind

    def __str__(self) -> str:
        return self.name


def parse_config(name: str, M: int, sigma: Mapping | None = None) -> MeasurementConfig:
    """Parse ``"xi"``, ``"z"`` or ``"l<j>"`` into a :class:`MeasurementConfig`."""
    key = name.strip().lower()
    if key in ("xi", "z"):
        return MeasurementConfig(key, M, sigma=sigma)
    if key.startswith("l") and key[1:].isdigit():
        return MeasurementConfig("lambda", M, int(key[1:]))
    raise ConfigError(f"cannot parse measurement {name!r}")


# ---------------------------------------------------------------------------
# Hadamard transforms
# ---------------------------------------------------------------------------

def _v_exponent(M: int, m):
    """Exponent of w in the V phase on mode m: (M - m) m / 2."""
    return 0.5 * (M - m) * m


def dft_unitary(M: int) -> ModeUnitary:
    m = np.arange(M)
    return ModeUnitary(phase(np.outer(m, m), M) / math.sqrt(M))


@lru_cache(maxsize=None)
def _hadamard_matrix(M: int, j: int) -> np.ndarray:
    m = np.arange(M)
    F = phase(np.outer(m, m), M) / math.sqrt(M)
    V = phase(j * _v_exponent(M, m), M)
    return F * V[np.newaxis, :]


def hadamard_unitary(M: int, j: int) -> ModeUnitary:
    """Inverse Hadamard ``H_j^dag = F V^j`` placed before detection.

    ``F[m', m] = w^{m' m} / sqrt(M)`` and ``V = diag(w^{(M - m) m / 2})``.
    """
    if not 0 <= j < M:
        raise ValueError(f"j must lie in 0..{M - 1}")
    return ModeUnitary(_hadamard_matrix(M, j))


@lru_cache(maxsize=None)
def lifted_hadamard(M: int, N: int, j: int) -> np.ndarray:
    """Sector matrix of ``H_j^dag`` on the N-photon sector (cached)."""
    G = lift_unitary(hadamard_unitary(M, j), enumerate_basis(M, N))
    G.setflags(write=False)
    return G


def clear_caches() -> None:
    _hadamard_matrix.cache_clear()
    lifted_hadamard.cache_clear()
    _xi_labels.cache_clear()


# ---------------------------------------------------------------------------
# label read-out
# ---------------------------------------------------------------------------

def _sigma_key(sigma: Mapping | None):
    if sigma is None:
        return None
    return tuple(sorted((tuple(k), tuple(v)) for k, v in sigma.items()))


@lru_cache(maxsize=None)
def _xi_labels(M: int, N: int, sigma_key) -> np.ndarray:
    basis = enumerate_basis(M, N)
    sigma = dict(sigma_key) if sigma_key is not None else {}
    labels = np.empty(basis.dim, dtype=int)
    for cls in partition_pauli_classes(basis):
        xb = xi_basis(cls, sigma.get(cls.representative))
        for m, v in xb.as_dict().items():
            labels[basis.position(v)] = m
    labels.setflags(write=False)
    return labels


def xi_labels(basis: SectorBasis, sigma: Mapping | None = None) -> np.ndarray:
    """Xi label of each basis vector."""
    return _xi_labels(basis.M, basis.N, _sigma_key(sigma))


def z_sigma(M: int, N: int) -> dict:
    """Per-class permutations turning Xi into the Z clock (needs gcd(N, M) = 1)."""
    return {c.representative: z_compatible_sigma(c) for c in partition_pauli_classes(enumerate_basis(M, N))}


def readout(basis: SectorBasis, config: MeasurementConfig):
    """(sector transform or None, outcome label per detected basis vector)."""
    if config.M != basis.M:
        raise ModeMismatch(f"measurement is for {config.M} modes, state has {basis.M}")
    if config.kind == "lambda":
        return lifted_hadamard(basis.M, basis.N, config.j), basis.mu_labels()
    if config.kind == "z":
        return None, basis.mu_labels()
    return None, xi_labels(basis, config.sigma)


def _check_sigma_coverage(state: SectorState, sigma: Mapping) -> None:
    for v in state.support():
        rep = pauli_class_of(v).representative
        if rep not in sigma:
            raise ConfigError(f"sigma configuration has no entry for class E{''.join(map(str, rep))}")


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LabelDistribution:
    """Probabilities of the M clock labels.

    ``probs`` are joint with the post-selection event, so they sum to the
    post-selection success probability (1 for fixed-sector inputs).
    """

    M: int
    probs: np.ndarray
    breakdown: dict | None = None

    def __post_init__(self):
        p = np.array(self.probs, dtype=float)
        if p.shape != (self.M,):
            raise ValueError(f"expected {self.M} probabilities")
        if np.any(p < -1e-12):
            raise ValueError("negative probability beyond rounding")
        p = np.clip(p, 0, None)
        if p.sum() > 1 + 1e-9:
            raise ValueError("probabilities sum above 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def success(self) -> float:
        return float(self.probs.sum())

    def normalized(self) -> "LabelDistribution":
        return LabelDistribution(self.M, self.probs / self.success)

    def __getitem__(self, m):
        return self.probs[m]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.probs, dtype=dtype)


def _pure_label_probs(state: SectorState, config: MeasurementConfig) -> np.ndarray:
    G, labels = readout(state.basis, config)
    amps = state.amplitudes if G is None else G @ state.amplitudes
    return np.bincount(labels, weights=np.abs(amps) ** 2, minlength=state.M)


def measure(state, config: MeasurementConfig, photons: int | None = None, breakdown: bool = False) -> LabelDistribution:
    """Outcome distribution of ``config`` on a pure or mixed state.

    Mixed inputs spanning several photon numbers need ``photons``: the
    measurement is post-selected on that sector and the returned
    probabilities sum to the success probability.
    """
    if isinstance(state, SectorState):
        components = ((1.0, state),)
    elif isinstance(state, MixedState):
        components = state.components
    else:
        raise TypeError(f"cannot measure {type(state).__name__}")
    if state.M != config.M:
        raise ModeMismatch(f"measurement is for {config.M} modes, state has {state.M}")
    sectors = {s.N for _, s in components}
    if photons is None:
        if len(sectors) > 1:
            raise PhotonNumberMismatch(
                f"state spans photon numbers {sorted(sectors)}; pass photons= to post-select"
            )
        photons = sectors.pop()
    if config.kind == "xi" and config.sigma is not None:
        for _, s in components:
            if s.N == photons:
                _check_sigma_coverage(s, config.sigma)
    probs = np.zeros(state.M)
    detail: dict = {}
    for p, s in components:
        if s.N != photons or p == 0:
            continue
        probs += p * _pure_label_probs(s, config)
        if breakdown and config.kind != "lambda":
            _, labels = readout(s.basis, config)
            for v, lab, pr in zip(s.basis.vectors, labels, s.probabilities()):
                if pr > 0:
                    key = (pauli_class_of(v).name, int(lab))
                    detail[key] = detail.get(key, 0.0) + float(p * pr)
    return LabelDistribution(state.M, probs, detail if breakdown else None)


def pauli_measurement(state, j: int, photons: int | None = None) -> LabelDistribution:
    """Lambda_j measurement: bin H_j^dag output occupations by mu(n)."""
    return measure(state, MeasurementConfig("lambda", state.M, j), photons)


def xi_measurement(state, sigma: Mapping | None = None, photons: int | None = None) -> LabelDistribution:
    """Computational-basis measurement binned by Xi labels (identity sigma by default)."""
    return measure(state, MeasurementConfig("xi", state.M, sigma=sigma), photons)


def fock_probabilities(state, config: MeasurementConfig) -> np.ndarray:
    """Per-occupation detection probabilities behind a label distribution."""
    components = state.components if isinstance(state, MixedState) else ((1.0, state),)
    out = 0
    for p, s in components:
        G, _ = readout(s.basis, config)
        amps = s.amplitudes if G is None else G @ s.amplitudes
        out = out + p * np.abs(amps) ** 2
    return out


# ---------------------------------------------------------------------------
# projectors, weights, decoherence
# ---------------------------------------------------------------------------

def eigen_projector(basis: SectorBasis, j: int, m: int) -> np.ndarray:
    """Sum over classes of |E_{n,m}(Lambda_j)><.| (classes lacking label m add nothing)."""
    P = np.zeros((basis.dim, basis.dim), dtype=complex)
    for cls in partition_pauli_classes(basis):
        if m in cls.labels:
            v = build_pauli_eigenstate(cls, j, m).to_state(basis).amplitudes
            P += np.outer(v, v.conj())
    return P


def z_projector(basis: SectorBasis, m: int) -> np.ndarray:
    return np.diag((basis.mu_labels() == m).astype(complex))


def hadamard_projector(basis: SectorBasis, j: int, m: int) -> np.ndarray:
    """H_j pi(Z, m) H_j^dag built from the lifted inverse Hadamard."""
    G = lifted_hadamard(basis.M, basis.N, j)
    return G.conj().T @ z_projector(basis, m) @ G


def pauli_projector_matrix(basis: SectorBasis, config: MeasurementConfig, m: int) -> np.ndarray:
    """Projector onto outcome ``m`` of ``config`` on the sector."""
    if not 0 <= m < basis.M:
        raise ValueError(f"label {m} outside 0..{basis.M - 1}")
    if config.kind == "lambda":
        return eigen_projector(basis, config.j, m)
    if config.kind == "z":
        return z_projector(basis, m)
    return np.diag((xi_labels(basis, config.sigma) == m).astype(complex))


def pauli_operator_matrix(basis: SectorBasis, config: MeasurementConfig) -> np.ndarray:
    """The operator itself: Xi = sum w^m pi_m, Z, or Lambda_j = X Z^j."""
    if config.kind == "lambda":
        return lambda_operator(basis, config.j)
    labels = basis.mu_labels() if config.kind == "z" else xi_labels(basis, config.sigma)
    return np.diag(phase(labels, basis.M))


def class_weights_pure(state: SectorState) -> dict:
    probs = state.probabilities()
    out = {}
    for cls in partition_pauli_classes(state.basis):
        out[cls] = float(sum(probs[state.basis.position(v)] for v in cls.members))
    return out


def subspace_weights(state) -> dict:
    """Probability p_E of finding the state in each Pauli subspace."""
    if isinstance(state, SectorState):
        return class_weights_pure(state)
    total: dict = {}
    for p, s in state.components:
        for cls, w in class_weights_pure(s).items():
            total[cls] = total.get(cls, 0.0) + p * w
    return total


def decohere(state) -> MixedState:
    """Pauli-subspace decoherence: sum_E Pi_E rho Pi_E, as an ensemble."""
    components = state.components if isinstance(state, MixedState) else ((1.0, state),)
    out = []
    for p, s in components:
        for cls in partition_pauli_classes(s.basis):
            idx = [s.basis.position(v) for v in cls.members]
            block = np.zeros(s.basis.dim, dtype=complex)
            block[idx] = s.amplitudes[idx]
            w = float(np.vdot(block, block).real)
            if w > 1e-15:
                out.append((p * w, SectorState(s.basis, block)))
    total = sum(w for w, _ in out)
    return MixedState(tuple((w / total, s) for w, s in out))
