"""
Partitions and index sets
Young diagrams, index sets in [n], Schubert problems, and the conversions
between them (λ(I), duals, composition and factoring of index sets)
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence, Tuple


class InvalidInputError(ValueError):
    """Input violates an operation's precondition."""


class NotASubsetError(InvalidInputError):
    """An index set is not contained in the set it is factored through."""


class IdentityViolation(AssertionError):
    """A computed quantity disagrees with a closed formula it must satisfy."""


@dataclass(frozen=True)
class Partition:
    """
    Weakly decreasing sequence of nonnegative row lengths.

    Trailing zeros are stripped on construction, so equality ignores them;
    use padded() when a fixed number of rows is needed.
    """

    rows: Tuple[int, ...] = ()

    def __post_init__(self):
        rows = tuple(int(x) for x in self.rows)
        for a, x in enumerate(rows):
            if x < 0:
                raise InvalidInputError(f"Negative row length {x} in {rows}")
            if a > 0 and rows[a - 1] < x:
                raise InvalidInputError(f"Rows are not weakly decreasing: {rows}")
        while rows and rows[-1] == 0:
            rows = rows[:-1]
        object.__setattr__(self, 'rows', rows)

    @property
    def weight(self) -> int:
        return sum(self.rows)

    @property
    def length(self) -> int:
        """Number of nonzero rows."""
        return len(self.rows)

    @property
    def width(self) -> int:
        return self.rows[0] if self.rows else 0

    def row(self, a: int) -> int:
        """1-based row access; rows past the end are 0."""
        return self.rows[a - 1] if 1 <= a <= len(self.rows) else 0

    def padded(self, length: int) -> Tuple[int, ...]:
        if self.length > length:
            raise InvalidInputError(f"{self} has more than {length} rows")
        return self.rows + (0,) * (length - self.length)

    def fits_box(self, r: int, width: int) -> bool:
        return self.length <= r and self.width <= width

    def contains(self, other: 'Partition') -> bool:
        """True if the diagram of other lies inside this one."""
        if other.length > self.length:
            return False
        return all(x <= y for x, y in zip(other.rows, self.rows))

    def scaled(self, factor: int) -> 'Partition':
        return Partition(tuple(factor * x for x in self.rows))

    def sl_normalized(self, r: int) -> 'Partition':
        """Subtract the r-th row from every row (same SL_r weight)."""
        rows = self.padded(r)
        last = rows[-1] if rows else 0
        return Partition(tuple(x - last for x in rows))

    def __str__(self):
        return format_partition(self)


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing subset of [ambient], 1-based."""

    elements: Tuple[int, ...]
    ambient: int

    def __post_init__(self):
        elements = tuple(int(x) for x in self.elements)
        object.__setattr__(self, 'elements', elements)
        if self.ambient < 0:
            raise InvalidInputError(f"Negative ambient {self.ambient}")
        for a, x in enumerate(elements):
            if not 1 <= x <= self.ambient:
                raise InvalidInputError(f"Index {x} outside [1, {self.ambient}]")
            if a > 0 and elements[a - 1] >= x:
                raise InvalidInputError(f"Index set is not strictly increasing: {elements}")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def at(self, a: int) -> int:
        """The a-th element, 1-based."""
        if not 1 <= a <= len(self.elements):
            raise InvalidInputError(f"Position {a} outside [1, {len(self.elements)}]")
        return self.elements[a - 1]

    def __str__(self):
        return ','.join(str(x) for x in self.elements)

    @classmethod
    def full(cls, n: int) -> 'IndexSet':
        return cls(tuple(range(1, n + 1)), n)

    @classmethod
    def last(cls, r: int, n: int) -> 'IndexSet':
        """(n-r+1, ..., n): the index set of the zero partition."""
        return cls(tuple(range(n - r + 1, n + 1)), n)


@dataclass(frozen=True)
class SchubertProblem:
    """An s-tuple of r-element index sets in [n], s >= 3."""

    n: int
    r: int
    sets: Tuple[IndexSet, ...]

    def __post_init__(self):
        object.__setattr__(self, 'sets', tuple(self.sets))
        if self.r < 1 or self.n < self.r:
            raise InvalidInputError(f"Need n >= r >= 1, got n={self.n}, r={self.r}")
        if len(self.sets) < 3:
            raise InvalidInputError(f"Need at least 3 index sets, got {len(self.sets)}")
        for I in self.sets:
            if len(I) != self.r or I.ambient != self.n:
                raise InvalidInputError(
                    f"Index set {I} is not an {self.r}-subset of [{self.n}]")

    @property
    def s(self) -> int:
        return len(self.sets)

    @property
    def q(self) -> int:
        """n - r, the width of the box."""
        return self.n - self.r

    def partitions(self) -> Tuple[Partition, ...]:
        return tuple(partition_from_index_set(I, self.n, self.r) for I in self.sets)

    def key(self) -> Tuple:
        return (self.n, self.r, tuple(I.elements for I in self.sets))

    def __str__(self):
        return f"Gr({self.r},{self.n}) {format_tuple(self.sets)}"

    @classmethod
    def from_elements(cls, n: int, r: int, sets: Iterable[Sequence[int]]) -> 'SchubertProblem':
        return cls(n, r, tuple(IndexSet(tuple(I), n) for I in sets))


# ── Conversions ──────────────────────────────────────────────────────────────

def partition_from_index_set(I: IndexSet, n: int, r: int) -> Partition:
    """λ(I) with λ_a = n - r + a - I_a."""
    if len(I) != r or I.ambient != n:
        raise InvalidInputError(f"{I} is not an {r}-subset of [{n}]")
    return Partition(tuple(n - r + a - I.at(a) for a in range(1, r + 1)))


def index_set_from_partition(lam: Partition, n: int, r: int) -> IndexSet:
    """Inverse of partition_from_index_set: I_a = n - r + a - λ_a."""
    if not lam.fits_box(r, n - r):
        raise InvalidInputError(f"{lam} does not fit in a {r}x{n - r} box")
    return IndexSet(tuple(n - r + a - lam.row(a) for a in range(1, r + 1)), n)


def dual_partition(nu: Partition, r: int, width: int) -> Partition:
    """Box complement: (ν^∨)_a = width - ν_{r-a+1}."""
    if not nu.fits_box(r, width):
        raise InvalidInputError(f"{nu} does not fit in a {r}x{width} box")
    return Partition(tuple(width - nu.row(r - a + 1) for a in range(1, r + 1)))


def compose_index(K: IndexSet, N: IndexSet) -> IndexSet:
    """J with J_a = K_{N_a}."""
    if N.ambient != len(K):
        raise InvalidInputError(f"{N} must live in [{len(K)}] to index into {K}")
    return IndexSet(tuple(K.at(x) for x in N), K.ambient)


def factor_index(K: IndexSet, J: IndexSet) -> IndexSet:
    """N with compose_index(K, N) = J."""
    positions = {x: b for b, x in enumerate(K, start=1)}
    missing = [x for x in J if x not in positions]
    if missing or J.ambient != K.ambient:
        raise NotASubsetError(f"{J} is not contained in {K} (missing {missing})")
    return IndexSet(tuple(positions[x] for x in J), len(K))


def kernel_position_shift(H: IndexSet, E: IndexSet) -> IndexSet:
    """
    Y with Y_a = H_{E_a} - E_a + a.

    H is an m-subset of [q+m] and E an e-subset of [m]; Y is an e-subset
    of [q+e].
    """
    m = len(H)
    if E.ambient != m:
        raise InvalidInputError(f"{E} must live in [{m}] to index into {H}")
    q = H.ambient - m
    e = len(E)
    return IndexSet(tuple(H.at(x) - x + a for a, x in enumerate(E, start=1)), q + e)


def total_codimension(problem: SchubertProblem) -> int:
    return sum(lam.weight for lam in problem.partitions())


def codim_condition_holds(problem: SchubertProblem) -> bool:
    """Σ_p |λ(I^p)| = r(n - r)."""
    return total_codimension(problem) == problem.r * problem.q


def tilde_index_sets(I: Sequence[IndexSet], K: Sequence[IndexSet]) -> Tuple[IndexSet, ...]:
    """Ĩ^p_a = I^p_{K^p_a} - K^p_a + a, factor by factor."""
    return tuple(kernel_position_shift(Ip, Kp) for Ip, Kp in zip(I, K))


def lifted_positions(K: Sequence[IndexSet], J: Sequence[IndexSet]) -> Tuple[IndexSet, ...]:
    """(K_J)^p_a = K^p_{J^p_a}, factor by factor."""
    return tuple(compose_index(Kp, Jp) for Kp, Jp in zip(K, J))


# ── Text encoding ────────────────────────────────────────────────────────────

def format_partition(lam: Partition) -> str:
    return ','.join(str(x) for x in lam.rows) if lam.rows else '0'


def parse_partition(text: str) -> Partition:
    """Parse '3,2,1'; '0' or '' is the empty partition."""
    text = text.strip()
    if not text:
        return Partition()
    try:
        rows = tuple(int(tok) for tok in text.split(','))
    except ValueError:
        raise InvalidInputError(f"Malformed partition '{text}'")
    return Partition(rows)


def parse_index_set(text: str, ambient: int) -> IndexSet:
    text = text.strip()
    if not text:
        return IndexSet((), ambient)
    try:
        elements = tuple(int(tok) for tok in text.split(','))
    except ValueError:
        raise InvalidInputError(f"Malformed index set '{text}'")
    return IndexSet(elements, ambient)


def format_tuple(items: Iterable) -> str:
    """Join partitions or index sets with ':'."""
    return ':'.join(format_partition(x) if isinstance(x, Partition) else str(x) for x in items)


def parse_partition_tuple(text: str) -> Tuple[Partition, ...]:
    return tuple(parse_partition(tok) for tok in text.split(':'))


def parse_index_tuple(text: str, ambient: int) -> Tuple[IndexSet, ...]:
    return tuple(parse_index_set(tok, ambient) for tok in text.split(':'))


# ── Enumeration ──────────────────────────────────────────────────────────────

def index_sets(n: int, r: int) -> Tuple[IndexSet, ...]:
    """All r-subsets of [n] in lexicographic order."""
    return tuple(IndexSet(c, n) for c in combinations(range(1, n + 1), r))


def partitions_in_box(r: int, width: int) -> Tuple[Partition, ...]:
    """All partitions fitting an r x width box, ordered by weight then reverse-lex."""
    found = []

    def extend(prefix, cap):
        if len(prefix) == r:
            found.append(Partition(tuple(prefix)))
            return
        for x in range(cap, -1, -1):
            extend(prefix + [x], x)

    extend([], width)
    return tuple(sorted(found, key=lambda lam: (lam.weight, tuple(-x for x in lam.padded(r)))))
