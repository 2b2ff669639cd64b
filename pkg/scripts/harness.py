"""
Verification Harness
Corpus enumeration, the stretching scan, the Horn-vs-oracle scan and the
sampling campaigns, merged into versioned JSON reports
"""

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence

import numpy as np
from dotenv import load_dotenv

from complexes import DEFAULT_TRIALS, h1_transfer_campaign, new_horn_check, prop11_check, random_subspace
from flag_linalg import DEFAULT_PRIME, DEFAULT_RETRIES, PrimeMatrix, derive_seed
from horn import enumerate_essential_positions, horn_nonzero
from lr_engine import intersection_number, product_nonzero_oracle, stretch_sequence
from parabolic import ParabolicWeights, generic_semistable
from partitions import (
    IdentityViolation,
    IndexSet,
    InvalidInputError,
    SchubertProblem,
    codim_condition_holds,
    format_tuple,
    index_sets,
    tilde_index_sets,
)

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_WORKERS = int(os.getenv('HORNCHECK_WORKERS', '1'))
REPORT_SCHEMA = 1
# slot 0 draws H, m, q; slot 1 seeds the instance check
INSTANCE_SEED_SLOT = 1


def setup_logging(log_file=None, verbose=False):
    """Console (stderr) plus optional file logging with bare messages."""
    logger = logging.getLogger()
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    logger.handlers = []

    formatter = logging.Formatter('%(message)s')

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file, encoding='utf-8', mode='w')
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def parallel_map(fn: Callable, items: Sequence, workers: int = DEFAULT_WORKERS) -> List:
    """Order-preserving map, threaded when workers > 1."""
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass
class VerificationReport:
    """Outcome of one scan; every failure carries what is needed to replay it."""

    corpus: Dict
    counts: Dict[str, int] = field(default_factory=dict)
    instances: List[Dict] = field(default_factory=list)
    failures: List[Dict] = field(default_factory=list)
    seeds: List[int] = field(default_factory=list)
    primes: List[int] = field(default_factory=list)
    summary: Dict = field(default_factory=dict)

    @property
    def verdict(self) -> bool:
        return not self.failures and self.summary.get('threshold_met', True)

    def count(self, key) -> None:
        key = str(key)
        self.counts[key] = self.counts.get(key, 0) + 1

    def merge(self, other: 'VerificationReport') -> 'VerificationReport':
        """Concatenate then stable-sort by instance key; verdict is the conjunction."""
        merged = VerificationReport(corpus={'parts': [self.corpus, other.corpus]})
        for report in (self, other):
            for key, value in report.counts.items():
                merged.counts[key] = merged.counts.get(key, 0) + value
        merged.instances = sorted(self.instances + other.instances, key=lambda x: x.get('key', ''))
        merged.failures = sorted(self.failures + other.failures, key=lambda x: x.get('key', ''))
        merged.seeds = sorted(set(self.seeds) | set(other.seeds))
        merged.primes = sorted(set(self.primes) | set(other.primes))
        merged.summary = {'threshold_met': self.summary.get('threshold_met', True)
                          and other.summary.get('threshold_met', True)}
        return merged

    def to_dict(self) -> Dict:
        return {
            'schema': REPORT_SCHEMA,
            'corpus': self.corpus,
            'counts': dict(sorted(self.counts.items())),
            'summary': self.summary,
            'verdict': 'pass' if self.verdict else 'fail',
            'seeds': self.seeds,
            'primes': self.primes,
            'failures': self.failures,
            'instances': self.instances,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)


# ── Corpora ──────────────────────────────────────────────────────────────────

def enumerate_problems(r: int, n: int, s: int) -> Iterator[SchubertProblem]:
    """All s-multisets of r-subsets of [n], lexicographic."""
    if not 1 <= r <= n or s < 3:
        raise InvalidInputError(f"Need n >= r >= 1 and s >= 3, got n={n}, r={r}, s={s}")
    for sets in combinations_with_replacement(index_sets(n, r), s):
        yield SchubertProblem(n, r, sets)


def enumerate_codim_problems(r: int, n: int, s: int) -> Iterator[SchubertProblem]:
    """Problems meeting the codimension condition, one per factor permutation class."""
    for problem in enumerate_problems(r, n, s):
        if codim_condition_holds(problem):
            yield problem


def random_problems(count: int, r_max: int, n_max: int, s: int, seed: int) -> List[SchubertProblem]:
    """Seeded problems with 1 <= r <= r_max, r < n <= n_max and s factors."""
    found = []
    for index in range(count):
        rng = np.random.default_rng(derive_seed(seed, index))
        r = int(rng.integers(1, r_max + 1))
        n = int(rng.integers(r + 1, max(n_max, r + 1) + 1))
        sets = tuple(IndexSet(tuple(sorted(int(x) + 1 for x in rng.choice(n, size=r, replace=False))), n)
                     for _ in range(s))
        found.append(SchubertProblem(n, r, sets))
    return found


# ── Scans ────────────────────────────────────────────────────────────────────

def _ktt_instance(problem: SchubertProblem, N_max: int) -> Dict:
    d1 = intersection_number(problem)
    record = {'key': str(problem), 'problem': str(problem), 'd1': d1}
    if d1 == 0:
        return record
    lams = problem.partitions()
    record['semistable'] = generic_semistable(ParabolicWeights.from_partitions(lams, problem.r))
    stretch = stretch_sequence(lams, problem.r, N_max)
    values = list(stretch.values)
    record['values'] = values
    drops = [N for N in range(1, N_max) if values[N] < values[N - 1]]
    if not record['semistable']:
        record['error'] = "weights not generically semistable"
    elif values[0] != d1:
        record['error'] = f"invariant_dimension {values[0]} != intersection number {d1}"
    elif drops:
        record['error'] = f"stretch drops from N={drops[0]} to N={drops[0] + 1}: {values}"
    elif d1 in (1, 2):
        expected = [1] * N_max if d1 == 1 else [N + 1 for N in range(1, N_max + 1)]
        record['expected'] = expected
        if values != expected:
            bad = next(N for N, (v, x) in enumerate(zip(values, expected), start=1) if v != x)
            record['error'] = f"N={bad}: expected {expected[bad - 1]}, got {values[bad - 1]}"
    return record


def ktt_scan(r: int, n: int, s: int, N_max: int, workers: int = DEFAULT_WORKERS) -> VerificationReport:
    """
    Stretch every codimension-condition problem with a nonzero intersection number.

    Value 1 must stay 1, value 2 must become N+1, every stretch must be
    nondecreasing in N, and the λ(I) weights must be generically semistable.
    """
    problems = list(enumerate_codim_problems(r, n, s))
    logger.info(f"ktt scan Gr({r},{n}) s={s}: {len(problems)} problems, N <= {N_max}")
    report = VerificationReport(corpus={'scan': 'ktt', 'r': r, 'n': n, 's': s, 'N_max': N_max})
    for record in parallel_map(lambda P: _ktt_instance(P, N_max), problems, workers):
        report.count(record['d1'])
        report.instances.append(record)
        if 'error' in record:
            report.failures.append(record)
            logger.info(f"  ✗ {record['problem']}: {record['error']}")
    logger.info(f"{'✓' if report.verdict else '✗'} ktt scan: {len(report.failures)} failures")
    return report


def _horn_instance(problem: SchubertProblem) -> Dict:
    horn = horn_nonzero(problem)
    oracle = product_nonzero_oracle(problem)
    record = {'key': str(problem), 'problem': str(problem), 'horn': horn, 'oracle': oracle}
    if horn != oracle:
        record['error'] = f"horn says {'nonzero' if horn else 'zero'}, oracle says {'nonzero' if oracle else 'zero'}"
    return record


def horn_vs_oracle_scan(r_max: int, n_max: int, s: int, workers: int = DEFAULT_WORKERS,
                        sample: Optional[int] = None, seed: int = 0) -> VerificationReport:
    """Horn recursion against the expansion oracle, exhaustive or on `sample` random problems."""
    if sample is None:
        problems: Iterable[SchubertProblem] = [
            P for r in range(1, r_max + 1) for n in range(r + 1, n_max + 1)
            for P in enumerate_problems(r, n, s)]
        corpus = {'scan': 'horn', 'r_max': r_max, 'n_max': n_max, 's': s}
    else:
        problems = random_problems(sample, r_max, n_max, s, seed)
        corpus = {'scan': 'horn', 'r_max': r_max, 'n_max': n_max, 's': s, 'sample': sample}
    problems = list(problems)
    logger.info(f"horn scan: {len(problems)} problems")
    report = VerificationReport(corpus=corpus, seeds=[seed] if sample is not None else [])
    for record in parallel_map(_horn_instance, problems, workers):
        report.count('nonzero' if record['oracle'] else 'zero')
        report.instances.append(record)
        if 'error' in record:
            report.failures.append(record)
            logger.info(f"  ✗ {record['problem']}: {record['error']}")
    logger.info(f"{'✓' if report.verdict else '✗'} horn scan: {len(report.failures)} mismatches")
    return report


def _position_instances(problem: SchubertProblem, seed: int, prime: int) -> List[Dict]:
    """new_horn_check on Ĩ = tilde(I, K) for every essential kernel position K of a nonzero problem."""
    found = []
    s = problem.s
    for f in range(1, problem.r):
        for K in enumerate_essential_positions(problem.r, f, s):
            I_tilde = tilde_index_sets(problem.sets, K)
            for g in range(f):
                key = f"{problem} K={format_tuple(K)} g={g}"
                inst_seed = derive_seed(seed, len(found))
                rng = np.random.default_rng(inst_seed)
                if g == 0:
                    T = PrimeMatrix.zeros(f, 0, prime)
                else:
                    T = random_subspace(f, g, rng, prime)
                choices = index_sets(f, g)
                N = tuple(choices[int(rng.integers(len(choices)))] for _ in range(s))
                result = new_horn_check(I_tilde, problem.q, T, N, rng)
                record = {'key': key, 'problem': str(problem), 'K': format_tuple(K), 'g': g,
                          'N': format_tuple(N), 'seed': inst_seed, **result}
                if not result['passed']:
                    record['error'] = f"h1 = {result['h1']} although the position hypothesis holds"
                found.append(record)
    return found


def position_hypothesis_scan(r: int, n: int, s: int, seed: int = 0, prime: int = DEFAULT_PRIME,
                             workers: int = DEFAULT_WORKERS) -> VerificationReport:
    """
    Kernel-position h¹ check on the nonzero problems of a codimension corpus.

    Each nonzero problem contributes Ĩ for its essential kernel positions,
    paired with a subspace T of every dimension g < f in a random position.
    """
    problems = [P for P in enumerate_codim_problems(r, n, s) if horn_nonzero(P)]
    logger.info(f"position scan Gr({r},{n}) s={s}: {len(problems)} nonzero problems")
    report = VerificationReport(corpus={'scan': 'positions', 'r': r, 'n': n, 's': s},
                                seeds=[seed], primes=[prime])
    batches = parallel_map(lambda item: _position_instances(item[1], derive_seed(seed, item[0]), prime),
                           list(enumerate(problems)), workers)
    for record in (rec for batch in batches for rec in batch):
        report.count('applicable' if record['applicable'] else 'not_applicable')
        report.instances.append(record)
        if 'error' in record:
            report.failures.append(record)
            logger.info(f"  ✗ {record['key']}: {record['error']}")
    logger.info(f"{'✓' if report.verdict else '✗'} position scan: {len(report.instances)} checks, "
                f"{len(report.failures)} failures")
    return report


# ── Sampling campaigns ───────────────────────────────────────────────────────

def random_hom_instance(index: int, m_max: int, q_max: int, s: int, seed: int):
    rng = np.random.default_rng(derive_seed(seed, index))
    m = int(rng.integers(1, m_max + 1))
    q = int(rng.integers(1, q_max + 1))
    H = tuple(IndexSet(tuple(sorted(int(x) + 1 for x in rng.choice(q + m, size=m, replace=False))), q + m)
              for _ in range(s))
    return H, m, q


def _campaign(name: str, check: Callable, n_instances: int, m_max: int, q_max: int, s: int,
              trials: int, seed: int, prime: int, retries: int, workers: int,
              min_first_seed_rate: float) -> VerificationReport:
    def run(index):
        H, m, q = random_hom_instance(index, m_max, q_max, s, seed)
        inst_seed = derive_seed(seed, index, INSTANCE_SEED_SLOT)
        try:
            result = check(H, m, q, 1, trials, inst_seed, prime, retries).to_dict()
        except IdentityViolation as e:
            result = {'params': {'m': m, 'q': q}, 'verdict': 'fail', 'first_seed_passes': 0, 'error': str(e)}
        result['key'] = f"{index:06d}"
        result['index'] = index
        result['seed'] = inst_seed
        return result

    report = VerificationReport(
        corpus={'campaign': name, 'instances': n_instances, 'm_max': m_max, 'q_max': q_max, 's': s},
        seeds=[seed], primes=[prime])
    for result in parallel_map(run, list(range(n_instances)), workers):
        report.instances.append(result)
        report.count(result['verdict'])
        if result['verdict'] != 'pass':
            report.failures.append(result)
            logger.info(f"  ✗ {name} instance {result['index']}: {result.get('error', result.get('params'))}")
    first = sum(res['first_seed_passes'] for res in report.instances)
    report.summary = {
        'first_seed_passes': first,
        'passes_within_budget': n_instances - len(report.failures),
        'threshold_met': first >= min_first_seed_rate * n_instances,
    }
    logger.info(f"{'✓' if report.verdict else '✗'} {name}: {first}/{n_instances} on first seed, "
                f"{n_instances - len(report.failures)}/{n_instances} within {retries} retries")
    return report


def prop11_campaign(n_instances: int = 100, m_max: int = 4, q_max: int = 4, s: int = 3,
                    trials: int = DEFAULT_TRIALS, seed: int = 0, prime: int = DEFAULT_PRIME,
                    retries: int = DEFAULT_RETRIES, workers: int = DEFAULT_WORKERS,
                    min_first_seed_rate: float = 0.99) -> VerificationReport:
    return _campaign('prop11', prop11_check, n_instances, m_max, q_max, s,
                     trials, seed, prime, retries, workers, min_first_seed_rate)


def h1_campaign(n_instances: int = 200, m_max: int = 3, q_max: int = 3, s: int = 3,
                trials: int = DEFAULT_TRIALS, seed: int = 0, prime: int = DEFAULT_PRIME,
                retries: int = DEFAULT_RETRIES, workers: int = DEFAULT_WORKERS,
                min_first_seed_rate: float = 0.99) -> VerificationReport:
    return _campaign('h1check', h1_transfer_campaign, n_instances, m_max, q_max, s,
                     trials, seed, prime, retries, workers, min_first_seed_rate)

