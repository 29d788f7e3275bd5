"""Complementary Pauli quantities and entropic uncertainty bounds."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from itertools import combinations
from typing import Callable, Mapping, Sequence

import numpy as np

from .fock import ModeMismatch
from .measurement import ConfigError, MeasurementConfig, measure, parse_config
from .pauli import PauliClass, is_complementary, partition_pauli_classes
from .fock import enumerate_basis

NORM_TOL = 1e-9
BOUND_SLACK = 1e-9


def log_factor(base) -> float:
    """Divide natural-log quantities by this to report them in ``base``."""
    if base in (None, "e"):
        return 1.0
    return math.log(float(base))


def shannon_entropy(dist, base="e") -> float:
    """-sum p log p with 0 log 0 = 0. ``dist`` must be normalized."""
    p = np.clip(np.asarray(dist, dtype=float), 0, None)
    if abs(p.sum() - 1) > NORM_TOL:
        raise ValueError(f"distribution sums to {p.sum()}, not 1")
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum()) / log_factor(base)


# ---------------------------------------------------------------------------
# operator sets
# ---------------------------------------------------------------------------

def _z_nondegenerate(M: int, N: int) -> bool:
    return math.gcd(N, M) == 1


def pair_complementary(a: MeasurementConfig, b: MeasurementConfig, N: int) -> bool:
    """Whether two settings are complementary in every N-photon Pauli subspace."""
    M = a.M
    comp = {a.kind, b.kind}
    if a.kind != "lambda" and b.kind != "lambda":
        return False
    if comp == {"lambda"}:
        if a.j == b.j:
            return False
        return all(is_complementary(a.j, b.j, c) for c in partition_pauli_classes(enumerate_basis(M, N)))
    other = a if a.kind != "lambda" else b
    if other.kind == "z":
        return _z_nondegenerate(M, N)
    return True


def is_complementary_set(configs: Sequence[MeasurementConfig], N: int) -> bool:
    return all(pair_complementary(a, b, N) for a, b in combinations(configs, 2))


@dataclass(frozen=True)
class ComplementaryConfig:
    """A set of pairwise complementary measurements on the (M, N) sector."""

    configs: tuple
    M: int
    N: int
    override: bool = False

    def __post_init__(self):
        object.__setattr__(self, "configs", tuple(self.configs))
        if len(self.configs) < 1:
            raise ConfigError("empty measurement set")
        if any(c.M != self.M for c in self.configs):
            raise ModeMismatch("measurement mode count differs from the config")
        if len({c.name for c in self.configs}) != len(self.configs):
            raise ConfigError("duplicate measurement in the set")
        if not self.override and not is_complementary_set(self.configs, self.N):
            raise ConfigError(
                f"{[c.name for c in self.configs]} is not complementary in every "
                f"{self.N}-photon Pauli subspace of {self.M} modes"
            )

    @classmethod
    def parse(cls, names: Sequence[str], M: int, N: int, sigma=None, override=False):
        return cls(tuple(parse_config(n, M, sigma) for n in names), M, N, override)

    def __len__(self) -> int:
        return len(self.configs)

    @property
    def names(self) -> list[str]:
        return [c.name for c in self.configs]


def complementary_quantity(state, cfg: ComplementaryConfig, Q: Callable = shannon_entropy) -> float:
    """Average of ``Q(distribution)`` over the measurements in ``cfg``."""
    if state.M != cfg.M:
        raise ModeMismatch(f"config is for {cfg.M} modes, state has {state.M}")
    return float(np.mean([Q(measure(state, c).probs) for c in cfg.configs]))


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

@dataclass
class BoundReport:
    value: float | None
    bound: float
    case: str
    base: str = "e"
    weights: dict = field(default_factory=dict)
    kind: str = "lower"
    satisfied: bool | None = None
    verdict: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def _weights_by_name(weights: Mapping) -> dict:
    return {(k.name if isinstance(k, PauliClass) else str(k)): float(v) for k, v in weights.items()}


def _many_settings(size: int, M: int) -> bool:
    # |L| > sqrt(M) + 1, with slack for the boundary
    return size > math.sqrt(M) + 1 + 1e-12


def entropy_lower_bound(weights: Mapping, cfg: ComplementaryConfig, base="e") -> BoundReport:
    """Lower bound on the complementary Shannon entropy.

    gcd(N, M) != 1: ``1/2 sum_E p_E log d_E`` (only two settings allowed).
    gcd(N, M) == 1: ``1/2 log M`` for |L| <= sqrt(M)+1, otherwise
    ``-log((|L| + M - 1) / (|L| M))``.
    """
    total = sum(weights.values())
    if abs(total - 1) > NORM_TOL:
        raise ValueError(f"class weights sum to {total}")
    if not cfg.override and not is_complementary_set(cfg.configs, cfg.N):
        raise ConfigError("measurement set is not complementary")
    M, L = cfg.M, len(cfg)
    if math.gcd(cfg.N, M) != 1:
        if L != 2:
            raise ConfigError("with gcd(N, M) != 1 only pairs {Xi, Lambda_j} are complementary")
        bound = 0.5 * sum(p * math.log(c.dim) for c, p in weights.items())
        case = "i"
    elif not _many_settings(L, M):
        bound, case = 0.5 * math.log(M), "ii-few"
    else:
        bound, case = -math.log((L + M - 1) / (L * M)), "ii-many"
    return BoundReport(
        value=None,
        bound=bound / log_factor(base),
        case=case,
        base=str(base),
        weights=_weights_by_name(weights),
        kind="lower",
    )


def entropy_report(state, cfg: ComplementaryConfig, base="e") -> BoundReport:
    """Complementary entropy of ``state`` next to its adaptive lower bound."""
    from .measurement import subspace_weights

    report = entropy_lower_bound(subspace_weights(state), cfg, base)
    report.value = complementary_quantity(state, cfg, lambda p: shannon_entropy(p, base))
    report.satisfied = report.value >= report.bound - BOUND_SLACK
    return report
