"""
Littlewood-Richardson Engine
LR coefficients by skew-tableau enumeration, Schubert multiplication in
H*(Gr(r,n)), intersection numbers, invariant dimensions and stretched sequences
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Dict, List, Sequence, Tuple

from partitions import (
    IdentityViolation,
    InvalidInputError,
    Partition,
    SchubertProblem,
    codim_condition_holds,
    dual_partition,
    index_set_from_partition,
    partitions_in_box,
)

logger = logging.getLogger(__name__)

# Optional on-disk store, see attach_cache()
_disk_cache = None


def attach_cache(cache) -> None:
    """Route computed coefficients through an LRCache (None detaches)."""
    global _disk_cache
    _disk_cache = cache
    _lr_memo.cache_clear()


# ── LR coefficients ──────────────────────────────────────────────────────────

def _count_lr_tableaux(lam: Tuple[int, ...], mu: Tuple[int, ...], nu: Tuple[int, ...]) -> int:
    """
    Count LR tableaux of shape ν/λ and content μ.

    Cells are filled in reverse reading order (rows top to bottom, each row
    right to left) so the lattice condition can be checked on every prefix.
    """
    lam_rows = list(lam) + [0] * (len(nu) - len(lam))
    cells = [(i, j) for i in range(len(nu)) for j in range(nu[i] - 1, lam_rows[i] - 1, -1)]
    filling: Dict[Tuple[int, int], int] = {}
    counts = [0] * (len(mu) + 1)

    def place(k: int) -> int:
        if k == len(cells):
            return 1
        i, j = cells[k]
        right = filling.get((i, j + 1))
        above = filling.get((i - 1, j))
        total = 0
        hi = len(mu) if right is None else right
        lo = 1 if above is None else above + 1
        for v in range(lo, hi + 1):
            if counts[v] >= mu[v - 1]:
                continue
            if v > 1 and counts[v] >= counts[v - 1]:
                continue
            counts[v] += 1
            filling[(i, j)] = v
            total += place(k + 1)
            del filling[(i, j)]
            counts[v] -= 1
        return total

    return place(0)


@lru_cache(maxsize=None)
def _lr_memo(lam: Tuple[int, ...], mu: Tuple[int, ...], nu: Tuple[int, ...]) -> int:
    key = (lam, mu, nu)
    if _disk_cache is not None:
        known = _disk_cache.get(key)
        if known is not None:
            return known
    value = _count_lr_tableaux(lam, mu, nu)
    if _disk_cache is not None:
        _disk_cache.record(key, value)
    return value


def lr_coefficient(lam: Partition, mu: Partition, nu: Partition) -> int:
    """c^ν_{λμ}; 0 when weights mismatch or λ, μ ⊄ ν."""
    if lam.weight + mu.weight != nu.weight:
        return 0
    if not nu.contains(lam) or not nu.contains(mu):
        return 0
    if mu.weight == 0 or lam.weight == 0:
        return 1
    return _lr_memo(lam.rows, mu.rows, nu.rows)


# ── Schubert classes ─────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def _box_by_weight(r: int, width: int) -> Dict[int, Tuple[Partition, ...]]:
    grouped: Dict[int, List[Partition]] = {}
    for lam in partitions_in_box(r, width):
        grouped.setdefault(lam.weight, []).append(lam)
    return {w: tuple(group) for w, group in grouped.items()}


@dataclass
class SchubertClassExpansion:
    """Integer combination of Schubert classes σ_λ in an r x width box."""

    r: int
    width: int
    terms: Dict[Partition, int] = field(default_factory=dict)

    def __post_init__(self):
        for lam, c in self.terms.items():
            if not lam.fits_box(self.r, self.width):
                raise InvalidInputError(f"{lam} does not fit in a {self.r}x{self.width} box")
            if c < 0:
                raise InvalidInputError(f"Negative coefficient {c} for {lam}")
        self.terms = {lam: c for lam, c in self.terms.items() if c != 0}

    @classmethod
    def schubert_class(cls, lam: Partition, r: int, width: int) -> 'SchubertClassExpansion':
        return cls(r, width, {lam: 1})

    @classmethod
    def identity(cls, r: int, width: int) -> 'SchubertClassExpansion':
        return cls(r, width, {Partition(): 1})

    def coefficient(self, lam: Partition) -> int:
        return self.terms.get(lam, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return '0'
        return ' + '.join(f"{c}*s[{lam}]" for lam, c in sorted(self.terms.items(), key=lambda t: t[0].rows))


def schubert_multiply(A: SchubertClassExpansion, B: SchubertClassExpansion) -> SchubertClassExpansion:
    """Product in H*(Gr(r, r+width)), truncated to the box."""
    if (A.r, A.width) != (B.r, B.width):
        raise InvalidInputError(
            f"Box mismatch: {A.r}x{A.width} vs {B.r}x{B.width}")
    by_weight = _box_by_weight(A.r, A.width)
    product: Dict[Partition, int] = {}
    for lam, a in A.terms.items():
        for mu, b in B.terms.items():
            for nu in by_weight.get(lam.weight + mu.weight, ()):
                c = lr_coefficient(lam, mu, nu)
                if c:
                    product[nu] = product.get(nu, 0) + c * a * b
    return SchubertClassExpansion(A.r, A.width, product)


def _partial_product(lams: Sequence[Partition], r: int, width: int) -> SchubertClassExpansion:
    expansion = SchubertClassExpansion.identity(r, width)
    for lam in lams:
        expansion = schubert_multiply(expansion, SchubertClassExpansion.schubert_class(lam, r, width))
        if expansion.is_zero():
            break
    return expansion


def intersection_number(problem: SchubertProblem) -> int:
    """Coefficient of the point class in Π_p σ_{λ(I^p)}."""
    if not codim_condition_holds(problem):
        raise InvalidInputError(f"Codimension condition fails for {problem}")
    r, q = problem.r, problem.q
    lams = problem.partitions()
    last_dual = dual_partition(lams[-1], r, q)
    head = _partial_product(lams[:-2], r, q)
    return sum(c * lr_coefficient(nu, lams[-2], last_dual) for nu, c in head.terms.items())


def product_nonzero_oracle(problem: SchubertProblem) -> bool:
    return not _partial_product(problem.partitions(), problem.r, problem.q).is_zero()


# ── Invariant dimensions ─────────────────────────────────────────────────────

def _sl_normalize(lams: Sequence[Partition], r: int) -> Tuple[Partition, ...]:
    if len(lams) < 3:
        raise InvalidInputError(f"Need at least 3 partitions, got {len(lams)}")
    for lam in lams:
        if lam.length > r:
            raise InvalidInputError(f"{lam} has more than {r} rows")
    return tuple(lam.sl_normalized(r) for lam in lams)


def invariant_dimension(lams: Sequence[Partition], r: int) -> int:
    """
    dim (V_{λ^1} ⊗ ... ⊗ V_{λ^s})^{SL_r} via the point-class coefficient.

    After SL_r normalization the total weight W must be r*q; the problem
    then lives in Gr(r, r+q) with I^p = I(λ^p).
    """
    normalized = _sl_normalize(lams, r)
    total = sum(lam.weight for lam in normalized)
    if total % r:
        return 0
    q = total // r
    if any(lam.width > q for lam in normalized):
        return 0
    if q == 0:
        return 1
    n = r + q
    problem = SchubertProblem(n, r, tuple(index_set_from_partition(lam, n, r) for lam in normalized))
    return intersection_number(problem)


def _gl_multiply(terms: Dict[Partition, int], mu: Partition, r: int) -> Dict[Partition, int]:
    """Tensor product of GL_r representations, no box truncation."""
    product: Dict[Partition, int] = {}
    for lam, a in terms.items():
        by_weight = _box_by_weight(r, lam.width + mu.width)
        for nu in by_weight.get(lam.weight + mu.weight, ()):
            c = lr_coefficient(lam, mu, nu)
            if c:
                product[nu] = product.get(nu, 0) + c * a
    return product


def invariant_dimension_by_contraction(lams: Sequence[Partition], r: int) -> int:
    """Same quantity as invariant_dimension, by iterated GL_r tensor expansion."""
    normalized = _sl_normalize(lams, r)
    total = sum(lam.weight for lam in normalized)
    if total % r:
        return 0
    q = total // r
    last = normalized[-1]
    if last.width > q:
        return 0
    terms: Dict[Partition, int] = {Partition(): 1}
    for lam in normalized[:-1]:
        terms = _gl_multiply(terms, lam, r)
    complement = Partition(tuple(q - last.row(r - a + 1) for a in range(1, r + 1)))
    return terms.get(complement, 0)


def embed_as_codim_problem(lam: Partition, mu: Partition, nu: Partition, r: int) -> SchubertProblem:
    """(I_λ, I_μ, I_{ν^∨}) in Gr(r, n) with n = r + max(λ_1, μ_1, ν_1)."""
    if lam.weight + mu.weight != nu.weight:
        raise InvalidInputError(f"|{lam}| + |{mu}| != |{nu}|")
    for x in (lam, mu, nu):
        if x.length > r:
            raise InvalidInputError(f"{x} has more than {r} rows")
    q = max(lam.width, mu.width, nu.width)
    n = r + q
    sets = (
        index_set_from_partition(lam, n, r),
        index_set_from_partition(mu, n, r),
        index_set_from_partition(dual_partition(nu, r, q), n, r),
    )
    return SchubertProblem(n, r, sets)


# ── Stretching ───────────────────────────────────────────────────────────────

def _poly_mul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    output = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            output[i + j] += x * y
    return output


@dataclass(frozen=True)
class StretchReport:
    """
    P(1..N_max) with its exact interpolating polynomial.

    differences[k] is the k-th forward difference at N=1, so
    P(N) = Σ_k differences[k] * C(N-1, k); coefficients are the monomial
    coefficients in N, constant term first.
    """

    values: Tuple[int, ...]
    differences: Tuple[int, ...]
    coefficients: Tuple[Fraction, ...]
    degree: int

    def evaluate(self, N: int) -> int:
        return sum(d * comb(N - 1, k) for k, d in enumerate(self.differences))

    def to_dict(self) -> Dict:
        return {
            'values': list(self.values),
            'differences': list(self.differences),
            'coefficients': [str(c) for c in self.coefficients],
            'degree': self.degree,
        }


def fit_stretch_polynomial(values: Sequence[int]) -> StretchReport:
    """Newton forward differences plus monomial expansion, exact."""
    values = tuple(int(v) for v in values)
    differences = []
    row = list(values)
    while row:
        differences.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    nonzero = [k for k, d in enumerate(differences) if d]
    degree = nonzero[-1] if nonzero else 0
    differences = differences[:degree + 1]

    coefficients = [Fraction(0)] * (degree + 1)
    basis = [Fraction(1)]
    for k, d in enumerate(differences):
        # basis == C(N-1, k) as a polynomial in N
        for i, c in enumerate(basis):
            coefficients[i] += d * c
        basis = _poly_mul(basis, [Fraction(-1 - k, k + 1), Fraction(1, k + 1)])

    report = StretchReport(values, tuple(differences), tuple(coefficients), degree)
    for N, v in enumerate(values, start=1):
        if report.evaluate(N) != v:
            raise IdentityViolation(f"Fit gives {report.evaluate(N)} at N={N}, expected {v}")
        if sum(c * N ** i for i, c in enumerate(coefficients)) != v:
            raise IdentityViolation(f"Monomial fit disagrees with value {v} at N={N}")
    return report


def stretch_sequence(lams: Sequence[Partition], r: int, N_max: int) -> StretchReport:
    """values[N-1] = invariant_dimension(N·λ^1, ..., N·λ^s)."""
    if N_max < 1:
        raise InvalidInputError(f"N_max must be >= 1, got {N_max}")
    values = [invariant_dimension([lam.scaled(N) for lam in lams], r) for N in range(1, N_max + 1)]
    logger.debug(f"  stretch {' '.join(str(v) for v in values)}")
    return fit_stretch_polynomial(values)
