"""
Horn Recursion
Inequality evaluation and the recursive nonvanishing test for Schubert
products, expected Hom dimensions, and the relative-dimension ledger
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from partitions import (
    IndexSet,
    InvalidInputError,
    SchubertProblem,
    compose_index,
    factor_index,
    index_sets,
    partition_from_index_set,
    total_codimension,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HornInequality:
    """One inequality Σ_p Σ_a (n-r+K^p_a-I^p_{K^p_a}) - f(n-r) <= 0, evaluated."""

    K: Tuple[IndexSet, ...]
    lhs_value: int

    @property
    def f(self) -> int:
        return len(self.K[0])

    @property
    def holds(self) -> bool:
        return self.lhs_value <= 0

    def to_dict(self) -> Dict:
        return {'K': [list(Kp.elements) for Kp in self.K], 'value': self.lhs_value}


def _check_positions(K: Sequence[IndexSet], ambient: int, s: int) -> int:
    if len(K) != s:
        raise InvalidInputError(f"Expected {s} position sets, got {len(K)}")
    sizes = {len(Kp) for Kp in K}
    if len(sizes) != 1:
        raise InvalidInputError(f"Position sets have different sizes {sorted(sizes)}")
    f = sizes.pop()
    if not 0 < f <= ambient:
        raise InvalidInputError(f"Position size {f} outside [1, {ambient}]")
    for Kp in K:
        if Kp.ambient != ambient:
            raise InvalidInputError(f"{Kp} must live in [{ambient}]")
    return f


def position_inequality_value(I: Sequence[IndexSet], X: Sequence[IndexSet], q: int) -> int:
    """Σ_p Σ_a (q + X^p_a - I^p_{X^p_a}) - |X^p| q for index sets I^p of size dim."""
    f = _check_positions(X, len(I[0]), len(I))
    total = sum(q + Xp.at(a) - Ip.at(Xp.at(a)) for Ip, Xp in zip(I, X) for a in range(1, f + 1))
    return total - f * q


def horn_inequality_value(problem: SchubertProblem, K: Sequence[IndexSet]) -> int:
    return position_inequality_value(problem.sets, K, problem.q)


def intersection_dimension(H: Sequence[IndexSet], m: int, q: int) -> int:
    """m*q minus the total codimension of the Schubert conditions H in Gr(m, m+q)."""
    for Hp in H:
        if len(Hp) != m or Hp.ambient != q + m:
            raise InvalidInputError(f"{Hp} is not an {m}-subset of [{q + m}]")
    return m * q - sum(partition_from_index_set(Hp, q + m, m).weight for Hp in H)


def expected_hom_dim(H: Sequence[IndexSet], m: int, q: int) -> int:
    """m q - Σ_p Σ_a (q + a - H^p_a); never clamped."""
    return intersection_dimension(H, m, q)


# ── Recursion ────────────────────────────────────────────────────────────────

@lru_cache(maxsize=None)
def enumerate_essential_positions(r: int, f: int, s: int) -> Tuple[Tuple[IndexSet, ...], ...]:
    """K-tuples in ([r] choose f)^s with nonzero product in Gr(f, r), lexicographic."""
    if not 0 < f <= r:
        raise InvalidInputError(f"Need 0 < f <= r, got f={f}, r={r}")
    if f == r:
        return ((IndexSet.full(r),) * s,)
    return tuple(K for K in product(index_sets(r, f), repeat=s)
                 if horn_nonzero(SchubertProblem(r, f, K)))


def horn_inequalities(problem: SchubertProblem):
    """Yield every inequality the recursion checks, f ascending then K lexicographic."""
    for f in range(1, problem.r + 1):
        for K in enumerate_essential_positions(problem.r, f, problem.s):
            yield HornInequality(K, horn_inequality_value(problem, K))


def first_violated_inequality(problem: SchubertProblem) -> Optional[HornInequality]:
    for inequality in horn_inequalities(problem):
        if not inequality.holds:
            return inequality
    return None


@lru_cache(maxsize=None)
def _horn_nonzero(problem: SchubertProblem) -> bool:
    if problem.n == problem.r:
        return True
    if problem.r == 1:
        # H*(P^(n-1)) = Z[h]/h^n
        return total_codimension(problem) <= problem.n - 1
    return first_violated_inequality(problem) is None


def horn_nonzero(problem: SchubertProblem) -> bool:
    """True iff Π_p σ_{λ(I^p)} != 0 in H*(Gr(r, n)), by the Horn recursion."""
    return _horn_nonzero(problem)


# ── Relative dimensions ──────────────────────────────────────────────────────

def flag_variety_dim(d: int) -> int:
    return d * (d - 1) // 2


def _weight(I: IndexSet) -> int:
    return partition_from_index_set(I, I.ambient, len(I)).weight


def ledger_kernel_flags(m: int, E: Sequence[IndexSet]) -> int:
    """s dim Fl(k^m) - Σ_p |λ(E^p)|."""
    return len(E) * flag_variety_dim(m) - sum(_weight(Ep) for Ep in E)


def ledger_kernel_homs(m: int, q: int, E: Sequence[IndexSet], H: Sequence[IndexSet]) -> int:
    """(m-e) q + s dim Fl(k^q) + Σ_p Σ_{a<=e} (q + E^p_a - H^p_{E^p_a}) - Σ_p |λ(H^p)|."""
    e = len(E[0])
    shifted = sum(q + Ep.at(a) - Hp.at(Ep.at(a)) for Ep, Hp in zip(E, H) for a in range(1, e + 1))
    return (m - e) * q + len(H) * flag_variety_dim(q) + shifted - sum(_weight(Hp) for Hp in H)


def ledger_subspace_triples(r: int, f: int, g: int) -> int:
    """2(f-g)(r-f) + g(r-g); g = f collapses to the Grassmannian, f(r-f)."""
    if not 0 <= g <= f <= r:
        raise InvalidInputError(f"Need 0 <= g <= f <= r, got g={g}, f={f}, r={r}")
    return 2 * (f - g) * (r - f) + g * (r - g)


def ledger_paired_positions(r: int, K: Sequence[IndexSet], J: Sequence[IndexSet]) -> int:
    """s dim Fl(k^r) + Σ|λ(J)| - 2Σ|λ(K)| - 2Σ|λ(N)|, N^p = factor(K^p, J^p)."""
    total = len(K) * flag_variety_dim(r)
    for Kp, Jp in zip(K, J):
        Np = factor_index(Kp, Jp)
        total += _weight(Jp) - 2 * _weight(Kp) - 2 * _weight(Np)
    return total


def ledger_paired_homs(n: int, r: int, I: Sequence[IndexSet], K: Sequence[IndexSet]) -> int:
    """2(r-f) q + 2 s dim Fl(k^q) + 2Σ(|λ(L)| - |λ(I)| - |λ(K)|), L^p = I^p composed with K^p."""
    q = n - r
    f = len(K[0])
    total = 2 * (r - f) * q + 2 * len(I) * flag_variety_dim(q)
    for Ip, Kp in zip(I, K):
        Lp = compose_index(Ip, Kp)
        total += 2 * (_weight(Lp) - _weight(Ip) - _weight(Kp))
    return total


@dataclass(frozen=True)
class LedgerInputs:
    """
    Data for the five relative dimensions.

    E ⊆ [m] and H ⊆ [q+m] describe a kernel inside M; I ⊆ [n] (size r),
    K ⊆ [r] (size f) and J ⊆ [r] (size g) describe the paired construction.
    """

    m: int
    q: int
    E: Tuple[IndexSet, ...]
    H: Tuple[IndexSet, ...]
    n: int
    r: int
    I: Tuple[IndexSet, ...]
    K: Tuple[IndexSet, ...]
    J: Tuple[IndexSet, ...]

    @property
    def s(self) -> int:
        return len(self.H)

    @property
    def f(self) -> int:
        return len(self.K[0])

    @property
    def g(self) -> int:
        return len(self.J[0]) if self.J else 0


@dataclass(frozen=True)
class DimensionLedger:
    inputs: LedgerInputs
    kernel_flags: int
    kernel_homs: int
    subspace_triples: int
    paired_positions: int
    paired_homs: int

    def values(self) -> List[int]:
        return [self.kernel_flags, self.kernel_homs, self.subspace_triples,
                self.paired_positions, self.paired_homs]

    def to_dict(self) -> Dict:
        return {
            'kernel_flags': self.kernel_flags,
            'kernel_homs': self.kernel_homs,
            'subspace_triples': self.subspace_triples,
            'paired_positions': self.paired_positions,
            'paired_homs': self.paired_homs,
        }


def dim_ledger(inputs: LedgerInputs) -> DimensionLedger:
    f, g, r = inputs.f, inputs.g, inputs.r
    if not 0 <= g < f < r:
        raise InvalidInputError(f"Need 0 <= g < f < r, got g={g}, f={f}, r={r}")
    s = inputs.s
    for name, tup in (('E', inputs.E), ('I', inputs.I), ('K', inputs.K), ('J', inputs.J)):
        if len(tup) != s:
            raise InvalidInputError(f"{name} has {len(tup)} entries, expected {s}")
    e = len(inputs.E[0])
    for Ep, Hp in zip(inputs.E, inputs.H):
        if len(Ep) != e or Ep.ambient != inputs.m:
            raise InvalidInputError(f"{Ep} is not an {e}-subset of [{inputs.m}]")
        if len(Hp) != inputs.m or Hp.ambient != inputs.q + inputs.m:
            raise InvalidInputError(f"{Hp} is not an {inputs.m}-subset of [{inputs.q + inputs.m}]")
    for Ip, Kp, Jp in zip(inputs.I, inputs.K, inputs.J):
        if len(Ip) != r or Ip.ambient != inputs.n:
            raise InvalidInputError(f"{Ip} is not an {r}-subset of [{inputs.n}]")
        if len(Kp) != f or Kp.ambient != r or len(Jp) != g or Jp.ambient != r:
            raise InvalidInputError(f"Positions {Kp}, {Jp} do not fit [{r}]")
    return DimensionLedger(
        inputs=inputs,
        kernel_flags=ledger_kernel_flags(inputs.m, inputs.E),
        kernel_homs=ledger_kernel_homs(inputs.m, inputs.q, inputs.E, inputs.H),
        subspace_triples=ledger_subspace_triples(r, f, g),
        paired_positions=ledger_paired_positions(r, inputs.K, inputs.J),
        paired_homs=ledger_paired_homs(inputs.n, r, inputs.I, inputs.K),
    )


# ── Filtration identity ──────────────────────────────────────────────────────

def filtration_rank_sum(rho: int, L: IndexSet) -> int:
    """Σ_{t=1}^{ρ-1} c_t with c_t = #{a : ℓ_a <= t}."""
    return sum(sum(1 for x in L if x <= t) for t in range(1, rho))


def filtration_codim_identity(rho: int, L: IndexSet) -> bool:
    """kρ - Σℓ_a = |λ(L)| + k(k-1)/2 = filtration_rank_sum(ρ, L)."""
    if L.ambient != rho:
        raise InvalidInputError(f"{L} must live in [{rho}]")
    k = len(L)
    lhs = k * rho - sum(L)
    rhs = _weight(L) + flag_variety_dim(k)
    return lhs == rhs == filtration_rank_sum(rho, L)
