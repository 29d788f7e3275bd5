"""Fock-space plumbing for M-mode linear optics networks.

A LON is specified by its M x M mode matrix ``u[m', m]`` (Heisenberg picture,
``U a_m^dag U^dag = sum_m' u[m', m] b_m'^dag``). Everything here works inside a
fixed total-photon-number sector; transition amplitudes between occupation
vectors are matrix permanents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

FockVector = tuple[int, ...]

MAX_PERMANENT_SIZE = 12


class PermanentSizeError(ValueError):
    """Raised when a permanent larger than the desk-scale limit is requested."""


class PhotonNumberMismatch(ValueError):
    pass


class ModeMismatch(ValueError):
    pass


def fock_vector(occupations: Sequence[int], M: int | None = None) -> FockVector:
    """Validate and normalise an occupation list into a tuple."""
    occ = tuple(int(n) for n in occupations)
    if M is not None and len(occ) != M:
        raise ModeMismatch(f"occupation vector {occ} does not have {M} modes")
    if any(n < 0 for n in occ):
        raise ValueError(f"negative occupation in {occ}")
    return occ


def mu_label(n: Sequence[int]) -> int:
    """Clock label: total mode index sum_m n_m * m, reduced mod M."""
    M = len(n)
    return sum(k * m for m, k in enumerate(n)) % M


def apply_mode_shift(n: Sequence[int], k: int = 1) -> FockVector:
    """Cyclic mode shift X^k: the photons in mode m move to mode m + k (mod M)."""
    M = len(n)
    k %= M
    if k == 0:
        return tuple(n)
    return tuple(n[-k:]) + tuple(n[:-k])


def _compositions(N: int, M: int) -> Iterator[FockVector]:
    # descending lexicographic order
    if M == 1:
        yield (N,)
        return
    for first in range(N, -1, -1):
        for rest in _compositions(N - first, M - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class SectorBasis:
    """All occupation vectors of ``N`` photons in ``M`` modes, in canonical order."""

    M: int
    N: int
    vectors: tuple[FockVector, ...] = field(repr=False)
    index: dict = field(repr=False, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.vectors)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def position(self, n: Sequence[int]) -> int:
        return self.index[tuple(n)]

    def mu_labels(self) -> np.ndarray:
        """Clock label of every basis vector, as an integer array."""
        return np.array([mu_label(v) for v in self.vectors], dtype=int)


_BASIS_CACHE: dict[tuple[int, int], SectorBasis] = {}


def enumerate_basis(M: int, N: int) -> SectorBasis:
    """Return the N-photon sector basis of an M-mode network.

    Vectors are sorted in descending lexicographic order, so ``(N, 0, ..., 0)``
    comes first and ``(0, ..., 0, N)`` last.
    """
    if M < 1:
        raise ValueError("need at least one mode")
    if N < 0:
        raise ValueError("photon number must be non-negative")
    key = (M, N)
    if key not in _BASIS_CACHE:
        vectors = tuple(_compositions(N, M))
        _BASIS_CACHE[key] = SectorBasis(
            M, N, vectors, {v: i for i, v in enumerate(vectors)}
        )
    return _BASIS_CACHE[key]


# ---------------------------------------------------------------------------
# permanents
# ---------------------------------------------------------------------------

def permanent(A) -> complex:
    """Permanent of a square matrix by Ryser's formula in Gray-code order.

    Runs in O(2^n n). Matrices larger than ``MAX_PERMANENT_SIZE`` are refused.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {A.shape}")
    n = A.shape[0]
    if n > MAX_PERMANENT_SIZE:
        raise PermanentSizeError(
            f"{n}x{n} permanent exceeds the {MAX_PERMANENT_SIZE}x{MAX_PERMANENT_SIZE} limit"
        )
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(A[0, 0])
    if n == 2:
        return complex(A[0, 0] * A[1, 1] + A[0, 1] * A[1, 0])

    cols = A.T.copy()
    row_sums = np.zeros(n, dtype=complex)
    total = 0j
    gray = 0
    for k in range(1, 1 << n):
        # the bit that flips between gray(k-1) and gray(k)
        j = (k & -k).bit_length() - 1
        gray ^= 1 << j
        if gray >> j & 1:
            row_sums += cols[j]
        else:
            row_sums -= cols[j]
        sign = -1 if bin(gray).count("1") & 1 else 1
        total += sign * np.prod(row_sums)
    return complex((-1) ** n * total)


def permanent_naive(A) -> complex:
    """Permanent by direct summation over all n! permutations."""
    from itertools import permutations

    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    total = 0j
    for perm in permutations(range(n)):
        prod = 1 + 0j
        for i, p in enumerate(perm):
            prod *= A[i, p]
        total += prod
    return total


# ---------------------------------------------------------------------------
# mode unitaries and their lifting
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ModeUnitary:
    """An M x M unitary acting on modes."""

    matrix: np.ndarray

    def __post_init__(self):
        U = np.array(self.matrix, dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ValueError("mode unitary must be square")
        if not np.allclose(U @ U.conj().T, np.eye(U.shape[0]), atol=1e-10, rtol=0):
            raise ValueError("mode matrix is not unitary within 1e-10")
        U.setflags(write=False)
        object.__setattr__(self, "matrix", U)

    @property
    def M(self) -> int:
        return self.matrix.shape[0]

    @property
    def dagger(self) -> "ModeUnitary":
        return ModeUnitary(self.matrix.conj().T)

    def __matmul__(self, other: "ModeUnitary") -> "ModeUnitary":
        return ModeUnitary(self.matrix @ other.matrix)


def shift_unitary(M: int, k: int = 1) -> ModeUnitary:
    """Mode matrix of X^k: u[m + k, m] = 1."""
    return ModeUnitary(np.roll(np.eye(M), k, axis=0))


def phase_unitary(M: int, power: float = 1.0) -> ModeUnitary:
    """Mode matrix of Z^power: diag(exp(2 pi i power m / M))."""
    m = np.arange(M)
    return ModeUnitary(np.diag(np.exp(2j * np.pi * power * m / M)))


def random_unitary(M: int, rng=None) -> ModeUnitary:
    """Haar-random mode unitary from the QR decomposition of a Ginibre matrix."""
    rng = np.random.default_rng(rng)
    Z = (rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return ModeUnitary(Q * (d / np.abs(d)))


def _as_matrix(U) -> np.ndarray:
    return U.matrix if isinstance(U, ModeUnitary) else np.asarray(U, dtype=complex)


def transition_amplitude(U, n_in: Sequence[int], n_out: Sequence[int]) -> complex:
    """<n_out| U |n_in> = per(U[n_out, n_in]) / sqrt(prod n_in! prod n_out!).

    Rows of the submatrix repeat output mode m' ``n_out[m']`` times, columns
    repeat input mode m ``n_in[m]`` times.
    """
    u = _as_matrix(U)
    M = u.shape[0]
    if len(n_in) != M or len(n_out) != M:
        raise ModeMismatch("occupation vectors must have one entry per mode")
    if sum(n_in) != sum(n_out):
        raise PhotonNumberMismatch(
            f"input has {sum(n_in)} photons but output has {sum(n_out)}"
        )
    rows = np.repeat(np.arange(M), n_out)
    cols = np.repeat(np.arange(M), n_in)
    norm = math.prod(math.factorial(k) for k in n_in) * math.prod(
        math.factorial(k) for k in n_out
    )
    return permanent(u[np.ix_(rows, cols)]) / math.sqrt(norm)


def lift_unitary(U, basis: SectorBasis) -> np.ndarray:
    """Matrix of the LON on the N-photon sector: ``G[i, k] = <v_i|U|v_k>``."""
    u = _as_matrix(U)
    if u.shape[0] != basis.M:
        raise ModeMismatch(f"unitary acts on {u.shape[0]} modes, basis has {basis.M}")
    M, N = basis.M, basis.N
    if N > MAX_PERMANENT_SIZE:
        raise PermanentSizeError(f"{N}-photon sector exceeds the permanent limit")
    dim = basis.dim
    repeats = [np.repeat(np.arange(M), v) for v in basis.vectors]
    fact = np.array(
        [math.prod(math.factorial(k) for k in v) for v in basis.vectors], dtype=float
    )
    G = np.empty((dim, dim), dtype=complex)
    for k in range(dim):
        sub_cols = u[:, repeats[k]]
        for i in range(dim):
            G[i, k] = permanent(sub_cols[repeats[i], :])
    G /= np.sqrt(np.outer(fact, fact))
    return G


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SectorState:
    """Pure state with fixed photon number, stored as amplitudes over ``basis``."""

    basis: SectorBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if a.shape[0] != self.basis.dim:
            raise ValueError(
                f"expected {self.basis.dim} amplitudes, got {a.shape[0]}"
            )
        nrm = np.linalg.norm(a)
        if nrm == 0:
            raise ValueError("zero state vector")
        if abs(nrm - 1) > 1e-9:
            a = a / nrm
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def M(self) -> int:
        return self.basis.M

    @property
    def N(self) -> int:
        return self.basis.N

    @classmethod
    def fock(cls, n: Sequence[int]) -> "SectorState":
        n = fock_vector(n)
        basis = enumerate_basis(len(n), sum(n))
        a = np.zeros(basis.dim, dtype=complex)
        a[basis.position(n)] = 1
        return cls(basis, a)

    @classmethod
    def from_dict(cls, M: int, N: int, amps: dict) -> "SectorState":
        """Build from ``{occupation tuple: amplitude}``; missing entries are 0."""
        basis = enumerate_basis(M, N)
        a = np.zeros(basis.dim, dtype=complex)
        for occ, amp in amps.items():
            occ = fock_vector(occ, M)
            if sum(occ) != N:
                raise PhotonNumberMismatch(f"{occ} is not an {N}-photon vector")
            a[basis.position(occ)] += amp
        return cls(basis, a)

    def amplitude(self, n: Sequence[int]) -> complex:
        return complex(self.amplitudes[self.basis.position(n)])

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def support(self, tol: float = 1e-12) -> dict:
        return {
            v: complex(a)
            for v, a in zip(self.basis.vectors, self.amplitudes)
            if abs(a) > tol
        }

    def overlap(self, other: "SectorState") -> complex:
        if other.basis != self.basis:
            raise ModeMismatch("states live in different sectors")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class MixedState:
    """Ensemble ``sum_k p_k |psi_k><psi_k|`` of pure sector states."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(p), s) for p, s in self.components)
        if not comps:
            raise ValueError("empty ensemble")
        weights = np.array([p for p, _ in comps])
        if np.any(weights < 0):
            raise ValueError("negative ensemble weight")
        if abs(weights.sum() - 1) > 1e-12:
            raise ValueError(f"ensemble weights sum to {weights.sum()}, not 1")
        Ms = {s.M for _, s in comps}
        if len(Ms) != 1:
            raise ModeMismatch("ensemble components have different mode counts")
        object.__setattr__(self, "components", comps)

    @property
    def M(self) -> int:
        return self.components[0][1].M

    @property
    def sectors(self) -> tuple:
        """Sorted photon numbers present in the ensemble."""
        return tuple(sorted({s.N for _, s in self.components}))

    @property
    def N(self) -> int:
        sectors = self.sectors
        if len(sectors) != 1:
            raise PhotonNumberMismatch(
                f"ensemble spans several photon numbers {sectors}"
            )
        return sectors[0]

    @property
    def basis(self) -> SectorBasis:
        return enumerate_basis(self.M, self.N)

    @classmethod
    def pure(cls, state) -> "MixedState":
        return cls(((1.0, state),))

    def density_matrix(self) -> np.ndarray:
        dim = self.basis.dim
        rho = np.zeros((dim, dim), dtype=complex)
        for p, s in self.components:
            rho += p * np.outer(s.amplitudes, s.amplitudes.conj())
        return rho


def evolve(state, U):
    """Apply a mode unitary to a pure or mixed sector state."""
    u = _as_matrix(U)
    if u.shape[0] != state.M:
        raise ModeMismatch(f"unitary acts on {u.shape[0]} modes, state has {state.M}")
    if isinstance(state, MixedState):
        return MixedState(tuple((p, evolve(s, u)) for p, s in state.components))
    G = lift_unitary(u, state.basis)
    return SectorState(state.basis, G @ state.amplitudes)


def equal_up_to_phase(a, b, atol: float = 1e-9) -> bool:
    """True when two amplitude vectors differ only by a global phase."""
    a = np.asarray(getattr(a, "amplitudes", a))
    b = np.asarray(getattr(b, "amplitudes", b))
    return bool(abs(abs(np.vdot(a, b)) - 1) < atol)
