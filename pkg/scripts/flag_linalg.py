"""
Prime-Field Flag Linear Algebra
Exact matrices over F_p, full flags, Schubert positions of subspaces, induced
flags, constrained flag sampling and subspace point counts
"""

import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import List, Sequence, Tuple, Union

import numpy as np
from dotenv import load_dotenv

from partitions import IndexSet, InvalidInputError

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_PRIME = int(os.getenv('HORNCHECK_PRIME', '1000003'))
DEFAULT_RETRIES = int(os.getenv('HORNCHECK_RETRIES', '3'))
MAX_PRIME = 2 ** 31

Seed = Union[int, np.random.Generator]


class GenericityError(RuntimeError):
    """A sampler ran out of retries without meeting its postcondition."""


@lru_cache(maxsize=64)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    p = int(p)
    if not 2 <= p < MAX_PRIME or not is_prime(p):
        raise InvalidInputError(f"{p} is not a prime below 2^31")
    return p


def make_rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(int(seed))


def derive_seed(master: int, index: int, attempt: int = 0) -> int:
    """63-bit seed for one instance attempt, replayable from the master seed."""
    state = np.random.SeedSequence([int(master), int(index), int(attempt)]).generate_state(1, np.uint64)
    return int(state[0]) >> 1


# ── Elimination ──────────────────────────────────────────────────────────────

def _matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # int64 accumulation is exact while inner * (p-1)^2 < 2^63
    if a.shape[1] * (p - 1) ** 2 < 2 ** 63:
        return (a @ b) % p
    return ((a.astype(object) @ b.astype(object)) % p).astype(np.int64)


def _row_reduce(a: np.ndarray, p: int) -> Tuple[np.ndarray, Tuple[int, ...]]:
    a = a.astype(np.int64) % p
    n_rows, n_cols = a.shape
    pivots = []
    row = 0
    for col in range(n_cols):
        if row == n_rows:
            break
        nonzero = np.nonzero(a[row:, col])[0]
        if nonzero.size == 0:
            continue
        k = row + int(nonzero[0])
        if k != row:
            a[[row, k]] = a[[k, row]]
        a[row] = (a[row] * pow(int(a[row, col]), p - 2, p)) % p
        factors = a[:, col].copy()
        factors[row] = 0
        a = (a - np.outer(factors, a[row])) % p
        pivots.append(col)
        row += 1
    return a, tuple(pivots)


@dataclass(frozen=True, eq=False)
class PrimeMatrix:
    """Immutable matrix over F_p backed by an int64 array."""

    entries: np.ndarray
    prime: int = DEFAULT_PRIME

    def __post_init__(self):
        p = check_prime(self.prime)
        entries = np.array(self.entries, dtype=np.int64)
        if entries.ndim != 2:
            raise InvalidInputError(f"Expected a 2-d array, got shape {entries.shape}")
        entries = entries.astype(np.int64) % p
        entries.setflags(write=False)
        object.__setattr__(self, 'prime', p)
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def zeros(cls, rows: int, cols: int, prime: int = DEFAULT_PRIME) -> 'PrimeMatrix':
        return cls(np.zeros((rows, cols), dtype=np.int64), prime)

    @classmethod
    def identity(cls, m: int, prime: int = DEFAULT_PRIME) -> 'PrimeMatrix':
        return cls(np.eye(m, dtype=np.int64), prime)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], prime: int = DEFAULT_PRIME) -> 'PrimeMatrix':
        return cls(np.array(rows, dtype=np.int64).reshape(len(rows), -1), prime)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @property
    def T(self) -> 'PrimeMatrix':
        return PrimeMatrix(self.entries.T, self.prime)

    def _same_field(self, other: 'PrimeMatrix'):
        if other.prime != self.prime:
            raise InvalidInputError(f"Field mismatch: F_{self.prime} vs F_{other.prime}")

    def __matmul__(self, other: 'PrimeMatrix') -> 'PrimeMatrix':
        self._same_field(other)
        if self.cols != other.rows:
            raise InvalidInputError(f"Shape mismatch {self.entries.shape} @ {other.entries.shape}")
        return PrimeMatrix(_matmul(self.entries, other.entries, self.prime), self.prime)

    def __eq__(self, other):
        if not isinstance(other, PrimeMatrix):
            return NotImplemented
        return self.prime == other.prime and np.array_equal(self.entries, other.entries)

    def hstack(self, other: 'PrimeMatrix') -> 'PrimeMatrix':
        self._same_field(other)
        return PrimeMatrix(np.hstack([self.entries, other.entries]), self.prime)

    def columns(self, idx: Sequence[int]) -> 'PrimeMatrix':
        return PrimeMatrix(self.entries[:, list(idx)].reshape(self.rows, len(idx)), self.prime)

    def row_reduce(self) -> Tuple['PrimeMatrix', Tuple[int, ...]]:
        """Reduced row echelon form and its pivot columns."""
        reduced, pivots = _row_reduce(self.entries, self.prime)
        return PrimeMatrix(reduced, self.prime), pivots

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        return len(_row_reduce(self.entries, self.prime)[1])

    def kernel(self) -> 'PrimeMatrix':
        """Columns form a basis of the right null space."""
        reduced, pivots = _row_reduce(self.entries, self.prime)
        free = [c for c in range(self.cols) if c not in pivots]
        basis = np.zeros((self.cols, len(free)), dtype=np.int64)
        for k, c in enumerate(free):
            basis[c, k] = 1
            for i, pc in enumerate(pivots):
                basis[pc, k] = (-reduced[i, c]) % self.prime
        return PrimeMatrix(basis, self.prime)

    def inverse(self) -> 'PrimeMatrix':
        m = self.rows
        if self.cols != m:
            raise InvalidInputError(f"Cannot invert a {self.rows}x{self.cols} matrix")
        augmented = np.hstack([self.entries, np.eye(m, dtype=np.int64)])
        reduced, pivots = _row_reduce(augmented, self.prime)
        if pivots[:m] != tuple(range(m)):
            raise InvalidInputError("Matrix is singular")
        return PrimeMatrix(reduced[:, m:], self.prime)

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def tolist(self) -> List[List[int]]:
        return self.entries.tolist()


def random_matrix(rows: int, cols: int, rng: np.random.Generator, prime: int) -> PrimeMatrix:
    return PrimeMatrix(rng.integers(0, prime, size=(rows, cols), dtype=np.int64), prime)


def random_invertible(m: int, rng: np.random.Generator, prime: int) -> PrimeMatrix:
    while True:
        candidate = random_matrix(m, m, rng, prime)
        if candidate.is_invertible():
            return candidate


def intersect_subspaces(A: PrimeMatrix, B: PrimeMatrix) -> PrimeMatrix:
    """Column basis of span(A) ∩ span(B); A and B have independent columns."""
    if A.cols == 0 or B.cols == 0:
        return PrimeMatrix.zeros(A.rows, 0, A.prime)
    stacked = A.hstack(PrimeMatrix((-B.entries) % B.prime, B.prime))
    null = stacked.kernel()
    coords = PrimeMatrix(null.entries[:A.cols, :], A.prime)
    return A @ coords


# ── Flags ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class PrimeFlag:
    """Full flag on F_p^m; step a is spanned by the first a basis columns."""

    basis: PrimeMatrix

    def __post_init__(self):
        if self.basis.rows != self.basis.cols or not self.basis.is_invertible():
            raise InvalidInputError("Flag basis must be an invertible square matrix")

    @property
    def m(self) -> int:
        return self.basis.rows

    @property
    def prime(self) -> int:
        return self.basis.prime

    def step(self, a: int) -> PrimeMatrix:
        return self.basis.columns(range(a))

    def same_steps(self, other: 'PrimeFlag') -> bool:
        """Step-wise equality of spans."""
        if other.m != self.m:
            return False
        for a in range(1, self.m + 1):
            if self.step(a).hstack(other.step(a)).rank() != a:
                return False
        return True


def random_flag(m: int, seed: Seed, prime: int = DEFAULT_PRIME) -> PrimeFlag:
    """Uniform invertible basis by rejection; deterministic in (m, prime, seed)."""
    if m < 0:
        raise InvalidInputError(f"Negative dimension {m}")
    prime = check_prime(prime)
    if m == 0:
        return PrimeFlag(PrimeMatrix.zeros(0, 0, prime))
    return PrimeFlag(random_invertible(m, make_rng(seed), prime))


def _flag_coordinates(R: PrimeMatrix, F: PrimeFlag) -> PrimeMatrix:
    if R.rows != F.m:
        raise InvalidInputError(f"Subspace lives in dimension {R.rows}, flag in {F.m}")
    if R.cols and R.rank() != R.cols:
        raise InvalidInputError("Subspace basis has dependent columns")
    return F.basis.inverse() @ R


def _reversed_echelon(coords: PrimeMatrix, with_combinations: bool = False):
    # Row-reducing coords^T with reversed columns puts each row's last nonzero
    # flag coordinate at a distinct pivot; those coordinates are the jumps.
    m, e = coords.rows, coords.cols
    left = coords.entries.T[:, ::-1]
    if with_combinations:
        left = np.hstack([left, np.eye(e, dtype=np.int64)])
    reduced, pivots = _row_reduce(left, coords.prime)
    return reduced, pivots


def subspace_position(R: PrimeMatrix, F: PrimeFlag) -> IndexSet:
    """H with H_b = min{a : dim(R ∩ F_a) >= b}."""
    coords = _flag_coordinates(R, F)
    if coords.cols == 0:
        return IndexSet((), F.m)
    _, pivots = _reversed_echelon(coords)
    return IndexSet(tuple(sorted(F.m - c for c in pivots)), F.m)


def intersection_dimensions(R: PrimeMatrix, F: PrimeFlag) -> List[int]:
    """[dim(R ∩ F_a) for a = 0..m] by stacked ranks."""
    dims = [0]
    for a in range(1, F.m + 1):
        step = F.step(a)
        dims.append(R.cols + a - R.hstack(step).rank())
    return dims


def induced_flag_on_subspace(F: PrimeFlag, S: PrimeMatrix) -> PrimeFlag:
    """
    Flag on S in S-basis coordinates: step b is S ∩ F_{H_b}.

    A vector x in the returned basis stands for S @ x in the ambient space.
    """
    coords = _flag_coordinates(S, F)
    f = coords.cols
    if f == 0:
        return PrimeFlag(PrimeMatrix.zeros(0, 0, F.prime))
    reduced, pivots = _reversed_echelon(coords, with_combinations=True)
    # pivots ascend in reversed coordinates, so positions descend
    order = list(range(len(pivots)))[::-1]
    basis = np.stack([reduced[i, F.m:] for i in order], axis=1)
    return PrimeFlag(PrimeMatrix(basis, F.prime))


def quotient_projection(S: PrimeMatrix) -> PrimeMatrix:
    """
    Linear map F_p^m -> F_p^(m-f) with kernel span(S).

    Coordinates of the quotient are the complement of the pivot columns of
    the reduced echelon form of S^T.
    """
    m, p = S.rows, S.prime
    if S.cols == 0:
        return PrimeMatrix.identity(m, p)
    reduced, pivots = _row_reduce(S.entries.T, p)
    if len(pivots) != S.cols:
        raise InvalidInputError("Subspace basis has dependent columns")
    complement = [c for c in range(m) if c not in pivots]
    identity = np.eye(m, dtype=np.int64)
    # v -> v - rref^T v[pivots], read off on the complement coordinates
    eliminate = (identity - _matmul(reduced[:len(pivots)].T, identity[list(pivots)], p)) % p
    return PrimeMatrix(eliminate[complement, :], p)


def induced_flag_on_quotient(F: PrimeFlag, S: PrimeMatrix) -> PrimeFlag:
    """Images of F_a in M/S with repeated steps collapsed."""
    if S.rows != F.m:
        raise InvalidInputError(f"Subspace lives in dimension {S.rows}, flag in {F.m}")
    projection = quotient_projection(S)
    images = projection @ F.basis
    kept: List[int] = []
    rank = 0
    for a in range(F.m):
        trial = images.columns(kept + [a])
        if trial.rank() > rank:
            kept.append(a)
            rank += 1
    if not kept:
        return PrimeFlag(PrimeMatrix.zeros(0, 0, F.prime))
    return PrimeFlag(images.columns(kept))


# ── Constrained sampling ─────────────────────────────────────────────────────

def _complete_basis(T: PrimeMatrix, rng: np.random.Generator) -> PrimeMatrix:
    f, g = T.rows, T.cols
    while True:
        candidate = T.hstack(random_matrix(f, f - g, rng, T.prime))
        if candidate.is_invertible():
            return candidate


def _stabilizer_element(T: PrimeMatrix, rng: np.random.Generator) -> PrimeMatrix:
    """Random invertible map of F_p^f carrying span(T) onto itself."""
    f, g, p = T.rows, T.cols, T.prime
    adapted = _complete_basis(T, rng)
    block = np.zeros((f, f), dtype=np.int64)
    if g:
        block[:g, :g] = random_invertible(g, rng, p).entries
        block[:g, g:] = rng.integers(0, p, size=(g, f - g))
    if f > g:
        block[g:, g:] = random_invertible(f - g, rng, p).entries
    return adapted @ PrimeMatrix(block, p) @ adapted.inverse()


def _random_unitriangular(f: int, rng: np.random.Generator, prime: int) -> PrimeMatrix:
    upper = np.triu(rng.integers(0, prime, size=(f, f), dtype=np.int64), k=1)
    return PrimeMatrix(upper + np.eye(f, dtype=np.int64), prime)


def sample_flag_with_position(f: int, T: PrimeMatrix, N: Sequence[IndexSet], seed: Seed,
                              retries: int = DEFAULT_RETRIES) -> Tuple[PrimeFlag, ...]:
    """
    One flag on F_p^f per entry of N, each with subspace_position(T, flag) = N^p.

    The basis of T fills the slots N^p, other slots get random vectors, and
    the result is moved by a random element fixing T followed by a random
    unitriangular change of basis (both preserve the position).
    """
    g = T.cols
    if T.rows != f:
        raise InvalidInputError(f"T lives in dimension {T.rows}, expected {f}")
    if g > f:
        raise InvalidInputError(f"Subspace dimension {g} exceeds {f}")
    if g and T.rank() != g:
        raise InvalidInputError("T has dependent columns")
    for Np in N:
        if len(Np) != g or Np.ambient != f:
            raise InvalidInputError(f"Position {Np} is not a {g}-subset of [{f}]")

    rng = make_rng(seed)
    p = T.prime
    flags = []
    for Np in N:
        for attempt in range(retries + 1):
            basis = rng.integers(0, p, size=(f, f), dtype=np.int64)
            if g:
                slots = [x - 1 for x in Np]
                basis[:, slots] = (T @ random_invertible(g, rng, p)).entries
            candidate = PrimeMatrix(basis, p)
            candidate = _stabilizer_element(T, rng) @ candidate @ _random_unitriangular(f, rng, p)
            if not candidate.is_invertible():
                continue
            flag = PrimeFlag(candidate)
            if subspace_position(T, flag) == Np:
                flags.append(flag)
                break
            logger.debug(f"  ! position miss for {Np}, attempt {attempt + 1}")
        else:
            raise GenericityError(f"No flag with position {Np} after {retries + 1} attempts")
    return tuple(flags)


# ── Point counts ─────────────────────────────────────────────────────────────

def enumerate_subspaces(d: int, r: int, prime: int) -> List[PrimeMatrix]:
    """Every d-dimensional subspace of F_p^r, as a d x r reduced echelon basis."""
    found = []
    for pivots in combinations(range(r), d):
        free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, r) if c not in pivots]
        for values in product(range(prime), repeat=len(free)):
            basis = np.zeros((d, r), dtype=np.int64)
            for i, pc in enumerate(pivots):
                basis[i, pc] = 1
            for (i, c), v in zip(free, values):
                basis[i, c] = v
            found.append(PrimeMatrix(basis.reshape(d, r), prime))
    return found


def count_subspace_triples(r: int, f: int, g: int, prime: int) -> int:
    """#{(S, S') f-dimensional in F_p^r with dim(S ∩ S') = g}; T = S ∩ S' is determined."""
    spaces = enumerate_subspaces(f, r, prime)
    count = 0
    for S in spaces:
        for S2 in spaces:
            stacked = PrimeMatrix(np.vstack([S.entries, S2.entries]), prime)
            if 2 * f - stacked.rank() == g:
                count += 1
    return count


def _poly_mul(a: List[int], b: List[int]) -> List[int]:
    output = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            output[i + j] += x * y
    return output


def gaussian_binomial(n: int, k: int) -> List[int]:
    """Coefficients in q of the Gaussian binomial [n, k]_q, constant first."""
    if k < 0 or k > n:
        return [0]
    numerator, denominator = [1], [1]
    for i in range(k):
        numerator = _poly_mul(numerator, [-1] + [0] * (n - i - 1) + [1])
        denominator = _poly_mul(denominator, [-1] + [0] * i + [1])
    # exact division of integer polynomials, highest degree first
    quotient = [0] * (len(numerator) - len(denominator) + 1)
    remainder = list(numerator)
    for i in range(len(quotient) - 1, -1, -1):
        c = remainder[i + len(denominator) - 1] // denominator[-1]
        quotient[i] = c
        for j, d in enumerate(denominator):
            remainder[i + j] -= c * d
    return quotient


def subspace_triple_count_polynomial(r: int, f: int, g: int) -> List[int]:
    """[r,g]_q [r-g,f-g]_q q^((f-g)^2) [r-f,f-g]_q, constant term first."""
    d = f - g
    poly = _poly_mul(gaussian_binomial(r, g), gaussian_binomial(r - g, d))
    poly = _poly_mul(poly, [0] * (d * d) + [1])
    poly = _poly_mul(poly, gaussian_binomial(r - f, d))
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return poly


def evaluate_polynomial(coefficients: Sequence[int], x: int) -> int:
    return sum(c * x ** i for i, c in enumerate(coefficients))
