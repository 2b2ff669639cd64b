"""
Two-Step Complexes
The map γ: Hom(M,Q) -> ⊕_p Hom(M,Q)/P_θ^p over F_p, its h⁰/h¹/χ, Hom_H
spaces and their generic data, and the sampled checks built on them
"""

import logging
import os
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from dotenv import load_dotenv

from flag_linalg import (
    DEFAULT_PRIME,
    DEFAULT_RETRIES,
    PrimeFlag,
    PrimeMatrix,
    Seed,
    derive_seed,
    induced_flag_on_subspace,
    intersect_subspaces,
    make_rng,
    random_flag,
    random_matrix,
    sample_flag_with_position,
    subspace_position,
)
from horn import (
    enumerate_essential_positions,
    expected_hom_dim,
    horn_nonzero,
    position_inequality_value,
)
from partitions import (
    IdentityViolation,
    IndexSet,
    InvalidInputError,
    SchubertProblem,
    format_tuple,
    index_sets,
    kernel_position_shift,
)

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = int(os.getenv('HORNCHECK_TRIALS', '8'))


@dataclass(frozen=True)
class StepProfile:
    """θ^p: nondecreasing sequences of length m with entries in [0, q]."""

    theta: Tuple[Tuple[int, ...], ...]
    q: int

    def __post_init__(self):
        theta = tuple(tuple(int(x) for x in seq) for seq in self.theta)
        object.__setattr__(self, 'theta', theta)
        lengths = {len(seq) for seq in theta}
        if len(lengths) > 1:
            raise InvalidInputError(f"Step sequences have different lengths {sorted(lengths)}")
        for seq in theta:
            if any(not 0 <= x <= self.q for x in seq) or any(a > b for a, b in zip(seq, seq[1:])):
                raise InvalidInputError(f"{seq} is not a nondecreasing sequence in [0, {self.q}]")

    @property
    def m(self) -> int:
        return len(self.theta[0]) if self.theta else 0

    @property
    def s(self) -> int:
        return len(self.theta)


@dataclass(frozen=True)
class TwoStepReport:
    h0: int
    h1: int
    chi: int
    rank: int

    def to_dict(self) -> Dict:
        return {'h0': self.h0, 'h1': self.h1, 'chi': self.chi, 'rank': self.rank}


@dataclass(frozen=True)
class HomData:
    """(D, e, E) of a general element of Hom_H; kernel is its column basis."""

    D: int
    e: int
    E: Tuple[IndexSet, ...]
    kernel: Optional[PrimeMatrix] = field(default=None, compare=False, repr=False)

    def to_dict(self) -> Dict:
        return {'D': self.D, 'e': self.e, 'E': [list(Ep.elements) for Ep in self.E]}


def theta_from_index(H: Sequence[IndexSet]) -> StepProfile:
    """θ^p_a = H^p_a - a."""
    m = len(H[0])
    q = H[0].ambient - m
    for Hp in H:
        if len(Hp) != m or Hp.ambient != q + m:
            raise InvalidInputError(f"{Hp} is not an {m}-subset of [{q + m}]")
    return StepProfile(tuple(tuple(Hp.at(a) - a for a in range(1, m + 1)) for Hp in H), q)


def p_theta_dim(theta: Sequence[int]) -> int:
    return sum(theta)


def chi_formula(m: int, profile: StepProfile) -> int:
    """m q - Σ_p Σ_a (q - θ^p_a)."""
    return m * profile.q - sum(profile.q - x for seq in profile.theta for x in seq)


def _check_dimensions(F: Sequence[PrimeFlag], G: Sequence[PrimeFlag], profile: StepProfile):
    if not len(F) == len(G) == profile.s:
        raise InvalidInputError(
            f"Need one flag pair per step sequence, got {len(F)}, {len(G)}, {profile.s}")
    for Fp, Gp in zip(F, G):
        if Fp.m != profile.m or Gp.m != profile.q:
            raise InvalidInputError(
                f"Flags on dimensions ({Fp.m}, {Gp.m}) do not match (m, q) = ({profile.m}, {profile.q})")
        if Fp.prime != Gp.prime:
            raise InvalidInputError("Flags live over different fields")


def gamma_matrix(F: Sequence[PrimeFlag], G: Sequence[PrimeFlag], profile: StepProfile) -> PrimeMatrix:
    """
    γ as a matrix on vec(φ) (row-major, φ is q x m).

    Block p reads the coordinates (G^p)^{-1} φ F^p at rows i >= θ^p_j of
    column j, i.e. the part of φ(F^p_j) outside G^p_{θ^p_j}.
    """
    _check_dimensions(F, G, profile)
    m, q = profile.m, profile.q
    p = F[0].prime if F else DEFAULT_PRIME
    blocks = [np.zeros((0, m * q), dtype=np.int64)]
    for Fp, Gp, seq in zip(F, G, profile.theta):
        full = np.kron(Gp.basis.inverse().entries, Fp.basis.entries.T) % p
        rows = [i * m + j for j in range(m) for i in range(seq[j], q)]
        blocks.append(full[rows].reshape(len(rows), m * q))
    return PrimeMatrix(np.vstack(blocks), p)


def two_step_report(F: Sequence[PrimeFlag], G: Sequence[PrimeFlag], profile: StepProfile) -> TwoStepReport:
    gamma = gamma_matrix(F, G, profile)
    rank = gamma.rank()
    h0 = profile.m * profile.q - rank
    h1 = gamma.rows - rank
    report = TwoStepReport(h0=h0, h1=h1, chi=h0 - h1, rank=rank)
    expected = chi_formula(profile.m, profile)
    if report.chi != expected:
        raise IdentityViolation(f"chi {report.chi} from elimination, formula gives {expected}")
    return report


def hom_space_dim(F: Sequence[PrimeFlag], G: Sequence[PrimeFlag], H: Sequence[IndexSet]) -> int:
    return two_step_report(F, G, theta_from_index(H)).h0


def theta_section_vanishes(F: Sequence[PrimeFlag], G: Sequence[PrimeFlag], I: Sequence[IndexSet]) -> bool:
    return hom_space_dim(F, G, I) > 0


def hom_data(F: Sequence[PrimeFlag], G: Sequence[PrimeFlag], H: Sequence[IndexSet],
             trials: int = DEFAULT_TRIALS, seed: Seed = 0) -> HomData:
    """
    Kernel data of a general element of Hom_H(M, Q, F, G).

    The general element is the highest-rank map among `trials` random
    combinations of a kernel basis of γ.
    """
    if trials < 1:
        raise InvalidInputError(f"Need trials >= 1, got {trials}")
    profile = theta_from_index(H)
    m, q = profile.m, profile.q
    p = F[0].prime
    solutions = gamma_matrix(F, G, profile).kernel()
    D = solutions.cols
    if D == 0:
        return HomData(0, m, tuple(IndexSet.full(m) for _ in H), PrimeMatrix.identity(m, p))

    rng = make_rng(seed)
    best, best_rank = None, -1
    for _ in range(trials):
        vec = solutions @ random_matrix(D, 1, rng, p)
        phi = PrimeMatrix(vec.entries.reshape(q, m), p)
        rank = phi.rank()
        if rank > best_rank:
            best, best_rank = phi, rank
        if best_rank == min(m, q):
            break
    kernel = best.kernel()
    E = tuple(subspace_position(kernel, Fp) for Fp in F)
    return HomData(D, m - best_rank, E, kernel)


@dataclass(frozen=True)
class HomPairData:
    """Two general elements for independent Q-flags and their common kernel."""

    first: HomData
    second: HomData
    t: int
    T: Tuple[IndexSet, ...]

    def octuple(self) -> Tuple:
        return (self.first.D, self.second.D, self.first.e, self.second.e,
                self.t, self.first.E, self.second.E, self.T)

    def to_dict(self) -> Dict:
        return {
            'first': self.first.to_dict(),
            'second': self.second.to_dict(),
            't': self.t,
            'T': [list(Tp.elements) for Tp in self.T],
        }


def hom_pair_data(F: Sequence[PrimeFlag], G1: Sequence[PrimeFlag], G2: Sequence[PrimeFlag],
                  H: Sequence[IndexSet], trials: int = DEFAULT_TRIALS, seed: Seed = 0) -> HomPairData:
    rng = make_rng(seed)
    first = hom_data(F, G1, H, trials, rng)
    second = hom_data(F, G2, H, trials, rng)
    common = intersect_subspaces(first.kernel, second.kernel)
    T = tuple(subspace_position(common, Fp) for Fp in F)
    return HomPairData(first, second, common.cols, T)


# ── Sampled checks ───────────────────────────────────────────────────────────

def sample_flag_pair(m: int, q: int, s: int, seed: Seed,
                     prime: int = DEFAULT_PRIME) -> Tuple[Tuple[PrimeFlag, ...], Tuple[PrimeFlag, ...]]:
    rng = make_rng(seed)
    F = tuple(random_flag(m, rng, prime) for _ in range(s))
    G = tuple(random_flag(q, rng, prime) for _ in range(s))
    return F, G


@dataclass(frozen=True)
class SampleRecord:
    index: int
    attempt: int
    seed: int
    passed: bool
    values: Dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> Dict:
        return {'index': self.index, 'attempt': self.attempt, 'seed': self.seed,
                'passed': self.passed, **self.values}


@dataclass
class SampledCheckReport:
    """Per-instance outcome of a reseeded sampling check."""

    name: str
    params: Dict
    records: List[SampleRecord] = field(default_factory=list)

    @property
    def instances(self) -> int:
        return len({rec.index for rec in self.records})

    @property
    def first_seed_passes(self) -> int:
        return sum(1 for rec in self.records if rec.attempt == 0 and rec.passed)

    @property
    def passes_within_budget(self) -> int:
        return len({rec.index for rec in self.records if rec.passed})

    @property
    def verdict(self) -> bool:
        return self.passes_within_budget == self.instances

    def to_dict(self) -> Dict:
        return {
            'check': self.name,
            'params': self.params,
            'instances': self.instances,
            'first_seed_passes': self.first_seed_passes,
            'passes_within_budget': self.passes_within_budget,
            'verdict': 'pass' if self.verdict else 'fail',
            'records': [rec.to_dict() for rec in self.records],
        }


def _run_with_retries(report: SampledCheckReport, n_instances: int, seed: int, retries: int, attempt_fn):
    for index in range(n_instances):
        for attempt in range(retries + 1):
            inst_seed = derive_seed(seed, index, attempt)
            passed, values = attempt_fn(inst_seed)
            report.records.append(SampleRecord(index, attempt, inst_seed, passed, values))
            if passed:
                break
            logger.info(f"  ! {report.name} instance {index} failed on attempt {attempt + 1}, reseeding")
    return report


def prop11_check(H: Sequence[IndexSet], m: int, q: int, n_instances: int = 1,
                 trials: int = DEFAULT_TRIALS, seed: int = 0,
                 prime: int = DEFAULT_PRIME, retries: int = DEFAULT_RETRIES) -> SampledCheckReport:
    """
    Sampled dim Hom_H against expected_hom_dim and the Horn decision.

    Nonzero product: the sampled dimension must equal the expected one.
    Zero product: it must differ from it, or the expected value is negative.
    """
    H = tuple(H)
    expected = expected_hom_dim(H, m, q)
    nonzero = horn_nonzero(SchubertProblem(q + m, m, H))

    def attempt(inst_seed):
        F, G = sample_flag_pair(m, q, len(H), inst_seed, prime)
        report = two_step_report(F, G, theta_from_index(H))
        dim = report.h0
        if nonzero:
            passed = dim == expected
        else:
            passed = dim != expected or expected < 0
        return passed, {'dim': dim, **report.to_dict()}

    params = {'H': format_tuple(H), 'm': m, 'q': q, 'expected': expected,
              'horn': 'nonzero' if nonzero else 'zero', 'prime': prime, 'seed': seed}
    return _run_with_retries(SampledCheckReport('prop11', params), n_instances, seed, retries, attempt)


def restricted_h1(F: Sequence[PrimeFlag], G: Sequence[PrimeFlag], H: Sequence[IndexSet], data: HomData) -> int:
    """h¹ of the complex on R = ker φ with induced flags and Y^p = shift(H^p, E^p)."""
    Y = tuple(kernel_position_shift(Hp, Ep) for Hp, Ep in zip(H, data.E))
    FR = tuple(induced_flag_on_subspace(Fp, data.kernel) for Fp in F)
    return two_step_report(FR, G, theta_from_index(Y)).h1


def h1_transfer_check(F: Sequence[PrimeFlag], G: Sequence[PrimeFlag], H: Sequence[IndexSet],
                      trials: int = DEFAULT_TRIALS, seed: Seed = 0) -> Dict:
    """
    Compare h¹(C) with h¹(C(R)) for the kernel R of a general element.

    R = 0 gives h¹(C(R)) = 0, so the check fails exactly when h¹(C) != 0.
    """
    H = tuple(H)
    full = two_step_report(F, G, theta_from_index(H))
    data = hom_data(F, G, H, trials, seed)
    if data.e == 0:
        restricted = 0
    else:
        restricted = restricted_h1(F, G, H, data)
    return {
        'h1': full.h1,
        'h1_restricted': restricted,
        'e': data.e,
        'E': format_tuple(data.E) if data.e else '',
        'agree': full.h1 == restricted,
    }


def h1_transfer_campaign(H: Sequence[IndexSet], m: int, q: int, n_instances: int = 1,
                         trials: int = DEFAULT_TRIALS, seed: int = 0,
                         prime: int = DEFAULT_PRIME, retries: int = DEFAULT_RETRIES) -> SampledCheckReport:
    H = tuple(H)

    def attempt(inst_seed):
        rng = make_rng(inst_seed)
        F, G = sample_flag_pair(m, q, len(H), rng, prime)
        result = h1_transfer_check(F, G, H, trials, rng)
        return result['agree'], result

    params = {'H': format_tuple(H), 'm': m, 'q': q, 'prime': prime, 'seed': seed}
    return _run_with_retries(SampledCheckReport('h1check', params), n_instances, seed, retries, attempt)


# ── Restricted-position vanishing ────────────────────────────────────────────

def position_hypotheses(I_tilde: Sequence[IndexSet], q: int) -> Tuple[bool, bool]:
    """
    (generic, strong) evaluations of the subspace inequalities.

    generic ranges over positions with nonzero product in Gr(e, f), which
    are the positions general flags realize; strong ranges over every
    position and so covers any flags.
    """
    f, s = len(I_tilde[0]), len(I_tilde)
    generic = strong = True
    for e in range(1, f + 1):
        for X in enumerate_essential_positions(f, e, s):
            if position_inequality_value(I_tilde, X, q) > 0:
                generic = False
                break
        for X in product(index_sets(f, e), repeat=s):
            if position_inequality_value(I_tilde, X, q) > 0:
                strong = False
                break
    return generic, strong


def random_subspace(f: int, g: int, seed: Seed, prime: int = DEFAULT_PRIME) -> PrimeMatrix:
    rng = make_rng(seed)
    while True:
        T = random_matrix(f, g, rng, prime)
        if T.rank() == g:
            return T


def new_horn_check(I_tilde: Sequence[IndexSet], q: int, T: PrimeMatrix, N: Sequence[IndexSet],
                   seed: Seed = 0) -> Dict:
    """
    h¹ for flags on S with T in position N and general Q-flags.

    h¹ = 0 is required whenever the strong certificate holds, or when the
    generic hypothesis holds and T = 0.
    """
    I_tilde = tuple(I_tilde)
    f, g = T.rows, T.cols
    for Ip in I_tilde:
        if len(Ip) != f or Ip.ambient != q + f:
            raise InvalidInputError(f"{Ip} is not an {f}-subset of [{q + f}]")
    rng = make_rng(seed)
    FS = sample_flag_with_position(f, T, N, rng)
    G = tuple(random_flag(q, rng, T.prime) for _ in I_tilde)
    report = two_step_report(FS, G, theta_from_index(I_tilde))
    generic, strong = position_hypotheses(I_tilde, q)
    applicable = strong or (g == 0 and generic)
    return {
        'h1': report.h1,
        'generic_hypothesis': generic,
        'strong_certificate': strong,
        'applicable': applicable,
        'passed': not applicable or report.h1 == 0,
    }
