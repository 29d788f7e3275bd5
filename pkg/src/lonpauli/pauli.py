"""Pauli classes, generalized Pauli eigenbases and their complementarity.

The cyclic mode shift X groups the Fock vectors of a sector into orbits
("Pauli classes"). Inside the span of one orbit, the computational basis, the
Xi relabelling of it, and the eigenbases of every Lambda_j = X Z^j are
well-defined qudit bases of dimension ``d`` (the orbit size, a divisor of M).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .fock import (
    FockVector,
    SectorBasis,
    SectorState,
    apply_mode_shift,
    enumerate_basis,
    mu_label,
)


def smallest_prime_factor(n: int) -> int:
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            return p
    return n


def is_prime(n: int) -> bool:
    return n >= 2 and smallest_prime_factor(n) == n


def phase(exponent, M: int):
    """w**exponent with w = exp(2 pi i / M), for real (possibly half-integer) exponents."""
    return np.exp(2j * np.pi * np.asarray(exponent, dtype=float) / M)


@dataclass(frozen=True)
class PauliClass:
    """Orbit of a Fock vector under the cyclic mode shift.

    ``members[k]`` is ``X^k`` applied to the representative, which is the
    lexicographically greatest vector of the orbit.
    """

    representative: FockVector
    members: tuple[FockVector, ...]

    @property
    def dim(self) -> int:
        return len(self.members)

    @property
    def M(self) -> int:
        return len(self.representative)

    @property
    def N(self) -> int:
        return sum(self.representative)

    @property
    def labels(self) -> tuple[int, ...]:
        """Admissible clock labels 0, M/d, ..., (d-1) M/d."""
        step = self.M // self.dim
        return tuple(range(0, self.M, step))

    @property
    def name(self) -> str:
        return "E" + "".join(str(k) for k in self.representative)

    def __str__(self) -> str:
        return self.name


def orbit(n: Sequence[int]) -> tuple[FockVector, ...]:
    n = tuple(n)
    members = [n]
    while True:
        nxt = apply_mode_shift(members[-1], 1)
        if nxt == n:
            return tuple(members)
        members.append(nxt)


def pauli_class_of(n: Sequence[int]) -> PauliClass:
    rep = max(orbit(n))
    return PauliClass(rep, orbit(rep))


def partition_pauli_classes(basis: SectorBasis) -> list[PauliClass]:
    """Split a sector basis into Pauli classes, ordered by representative (descending)."""
    seen: set = set()
    classes = []
    # the basis is in descending order, so the first unseen vector of an orbit
    # is its greatest member
    for v in basis.vectors:
        if v in seen:
            continue
        members = orbit(v)
        seen.update(members)
        classes.append(PauliClass(v, members))
    return classes


def pauli_classes(M: int, N: int) -> list[PauliClass]:
    return partition_pauli_classes(enumerate_basis(M, N))


# ---------------------------------------------------------------------------
# sector operators
# ---------------------------------------------------------------------------

def shift_operator(basis: SectorBasis, k: int = 1) -> np.ndarray:
    """Permutation matrix of X^k on the sector."""
    P = np.zeros((basis.dim, basis.dim), dtype=complex)
    for i, v in enumerate(basis.vectors):
        P[basis.position(apply_mode_shift(v, k)), i] = 1
    return P


def clock_operator(basis: SectorBasis, power: float = 1.0) -> np.ndarray:
    """Diagonal matrix of Z^power on the sector."""
    return np.diag(phase(power * basis.mu_labels(), basis.M))


def lambda_operator(basis: SectorBasis, j: int) -> np.ndarray:
    """Lambda_j = X Z^j acting on the sector."""
    return shift_operator(basis, 1) @ clock_operator(basis, j)


# ---------------------------------------------------------------------------
# eigenstates
# ---------------------------------------------------------------------------

def eigenphase(cls: PauliClass, j: int, m: int) -> float:
    """Exponent e such that Lambda_j has eigenvalue w**e on the (j, m) eigenstate."""
    return 0.5 * (cls.M - 1) * j * cls.N + m


@dataclass(frozen=True, eq=False)
class PauliEigenstate:
    """Lambda_j eigenstate inside one Pauli subspace.

    ``amplitudes[k]`` is the coefficient of ``cls.members[k]``.
    """

    pauli_class: PauliClass
    j: int
    m: int
    amplitudes: np.ndarray

    @property
    def eigenphase(self) -> float:
        return eigenphase(self.pauli_class, self.j, self.m)

    def to_state(self, basis: SectorBasis | None = None) -> SectorState:
        cls = self.pauli_class
        if basis is None:
            basis = enumerate_basis(cls.M, cls.N)
        a = np.zeros(basis.dim, dtype=complex)
        for member, amp in zip(cls.members, self.amplitudes):
            a[basis.position(member)] = amp
        return SectorState(basis, a)


class InvalidLabel(ValueError):
    pass


def build_pauli_eigenstate(cls: PauliClass, j: int, m: int) -> PauliEigenstate:
    """Eigenstate of Lambda_j in the span of ``cls`` with clock label ``m``.

    Uses (1/sqrt d) sum_k w^{-(e) k} Lambda_j^k |n>, with e the eigenphase
    exponent; half-integer exponents take the principal branch.
    """
    M, d = cls.M, cls.dim
    if m not in cls.labels:
        raise InvalidLabel(
            f"label {m} is not a multiple of M/d = {M // d} in {{0..{M - 1}}}"
        )
    if not 0 <= j < M:
        raise ValueError(f"j must lie in 0..{M - 1}")
    e = eigenphase(cls, j, m)
    # Lambda_j^k |n> = w^{j * sum_{t<k} mu(X^t n)} X^k |n>
    mus = np.array([mu_label(v) for v in cls.members])
    accumulated = np.concatenate([[0], np.cumsum(mus)[:-1]])
    k = np.arange(d)
    amps = phase(j * accumulated - e * k, M) / math.sqrt(d)
    amps.setflags(write=False)
    return PauliEigenstate(cls, j, m, amps)


def eigenbasis_matrix(cls: PauliClass, j: int) -> np.ndarray:
    """Columns are the Lambda_j eigenstates of ``cls`` (in label order) over its members."""
    return np.column_stack([build_pauli_eigenstate(cls, j, m).amplitudes for m in cls.labels])


# ---------------------------------------------------------------------------
# Xi labelling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class XiBasisLabel:
    """Non-degenerate labelling of a class: label m -> X^{sigma(m d / M)} |rep>."""

    pauli_class: PauliClass
    sigma: tuple[int, ...]

    def member(self, m: int) -> FockVector:
        cls = self.pauli_class
        if m not in cls.labels:
            raise InvalidLabel(f"label {m} not admissible for {cls}")
        return cls.members[self.sigma[m * cls.dim // cls.M]]

    def as_dict(self) -> dict[int, FockVector]:
        return {m: self.member(m) for m in self.pauli_class.labels}

    def label_of(self, n: Sequence[int]) -> int:
        cls = self.pauli_class
        k = cls.members.index(tuple(n))
        return self.sigma.index(k) * cls.M // cls.dim


def xi_basis(cls: PauliClass, sigma: Sequence[int] | None = None) -> XiBasisLabel:
    if sigma is None:
        sigma = range(cls.dim)
    sigma = tuple(int(s) for s in sigma)
    if sorted(sigma) != list(range(cls.dim)):
        raise ValueError(f"sigma {sigma} is not a permutation of 0..{cls.dim - 1}")
    return XiBasisLabel(cls, sigma)


def z_compatible_sigma(cls: PauliClass) -> tuple[int, ...]:
    """Permutation making the Xi labels coincide with the Z clock labels.

    Only exists when gcd(N, M) = 1, in which case every class has d = M.
    """
    M, N = cls.M, cls.N
    if math.gcd(N, M) != 1:
        raise ValueError("Z is degenerate on this sector (gcd(N, M) != 1)")
    inv = pow(N, -1, M)
    mu0 = mu_label(cls.representative)
    return tuple(((m - mu0) * inv) % M for m in range(M))


# ---------------------------------------------------------------------------
# complementarity
# ---------------------------------------------------------------------------

def is_complementary(j: int, l: int, cls: PauliClass) -> bool:
    """Whether the Lambda_j and Lambda_l eigenbases are mutually unbiased in ``cls``.

    gcd((l - j) |n| d / M, d) == 1. One-dimensional classes satisfy this
    vacuously.
    """
    d, M, N = cls.dim, cls.M, cls.N
    return math.gcd((l - j) * (N * d // M), d) == 1


def overlap_matrix(cls: PauliClass, j: int, l: int) -> np.ndarray:
    """|<E_m(Lambda_l)|E_m'(Lambda_j)>| for all label pairs."""
    return np.abs(eigenbasis_matrix(cls, l).conj().T @ eigenbasis_matrix(cls, j))


def is_mutually_unbiased(cls: PauliClass, j: int, l: int, tol: float = 1e-9) -> bool:
    """Numerical MUB test from explicitly constructed eigenstates."""
    return bool(np.all(np.abs(overlap_matrix(cls, j, l) - 1 / math.sqrt(cls.dim)) < tol))


def sector_complementary(j: int, l: int, M: int, N: int) -> bool:
    """Lambda_j, Lambda_l complementary in every N-photon class."""
    return all(is_complementary(j, l, c) for c in pauli_classes(M, N))


def complementary_set(M: int, N: int) -> tuple[str, ...]:
    """A maximal set of operators complementary in all N-photon Pauli subspaces.

    Identifiers are ``"xi"`` and ``"l<j>"``. When only pairs are available the
    representative pair ``("xi", "l0")`` is returned; any ``("xi", "l<j>")``
    is equally valid.
    """
    if M < 2 or N < 1:
        raise ValueError("need M >= 2 and N >= 1")
    if is_prime(M) and N % M != 0:
        return ("xi",) + tuple(f"l{j}" for j in range(M))
    if math.gcd(N, M) == 1:
        p1 = smallest_prime_factor(M)
        return ("xi",) + tuple(f"l{j}" for j in range(p1))
    return ("xi", "l0")


def complementarity_grid(M: int, N: int):
    """Rows (class, {(j, l): predicate}) over all pairs j < l."""
    pairs = [(j, l) for j in range(M) for l in range(j + 1, M)]
    return pairs, [(c, {p: is_complementary(*p, c) for p in pairs}) for c in pauli_classes(M, N)]


def class_listing(classes: Iterable[PauliClass]) -> list[dict]:
    return [
        {"rep": list(c.representative), "dim": c.dim, "members": [list(v) for v in c.members]}
        for c in classes
    ]
