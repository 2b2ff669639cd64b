#!/usr/bin/env python3
"""
Tests for the verification harness
Corpus enumeration, the stretching and Horn scans, campaigns and reports
"""

import json
import sys
from itertools import product

import pytest

from harness import (
    REPORT_SCHEMA,
    VerificationReport,
    enumerate_codim_problems,
    enumerate_problems,
    h1_campaign,
    horn_vs_oracle_scan,
    ktt_scan,
    parallel_map,
    position_hypothesis_scan,
    prop11_campaign,
    random_problems,
)
from partitions import InvalidInputError, codim_condition_holds, index_sets


def test_enumerate_codim_problems_p1():
    problems = list(enumerate_codim_problems(1, 2, 3))
    assert len(problems) == 1
    assert [I.elements for I in problems[0].sets] == [(1,), (2,), (2,)]


def test_enumerate_codim_problems_trivial_grassmannian():
    problems = list(enumerate_codim_problems(2, 2, 3))
    assert len(problems) == 1
    assert all(I.elements == (1, 2) for I in problems[0].sets)


def test_enumerate_codim_problems_matches_brute_force():
    brute = set()
    for sets in product(index_sets(4, 2), repeat=3):
        key = tuple(sorted(I.elements for I in sets))
        total = sum(2 + a - x for I in sets for a, x in enumerate(I.elements, start=1))
        if total == 4:
            brute.add(key)
    found = [tuple(I.elements for I in P.sets) for P in enumerate_codim_problems(2, 4, 3)]
    assert len(found) == len(set(found)), "Each multiset must appear once"
    assert set(found) == brute
    assert all(codim_condition_holds(P) for P in enumerate_codim_problems(2, 4, 3))


def test_enumerate_problems_validation():
    with pytest.raises(InvalidInputError):
        list(enumerate_problems(3, 2, 3))
    with pytest.raises(InvalidInputError):
        list(enumerate_problems(1, 2, 2))


def test_random_problems_deterministic():
    first = random_problems(20, 3, 6, 4, seed=7)
    second = random_problems(20, 3, 6, 4, seed=7)
    assert [P.key() for P in first] == [P.key() for P in second]
    assert all(P.s == 4 and P.r <= 3 and P.n <= 6 for P in first)


def test_parallel_map_preserves_order():
    items = list(range(20))
    assert parallel_map(lambda x: x * x, items, workers=4) == [x * x for x in items]
    assert parallel_map(lambda x: x + 1, items, workers=1) == [x + 1 for x in items]


# ── Scans ────────────────────────────────────────────────────────────────────

def test_ktt_scan_gr24_four_factors():
    report = ktt_scan(2, 4, 4, 5)
    assert report.verdict, f"Failures: {report.failures}"
    four_points = [rec for rec in report.instances if rec['problem'] == 'Gr(2,4) 2,4:2,4:2,4:2,4']
    assert len(four_points) == 1
    assert four_points[0]['d1'] == 2 and four_points[0]['values'] == [2, 3, 4, 5, 6]
    assert report.counts.get('2') == 1


def test_ktt_scan_gr24_three_factors():
    report = ktt_scan(2, 4, 3, 4)
    assert report.verdict
    assert sum(report.counts.values()) == len(report.instances)


def test_ktt_scan_stretches_every_nonzero_problem():
    report = ktt_scan(2, 5, 6, 2)
    assert report.verdict, f"Failures: {report.failures[:3]}"
    assert report.counts.get('5', 0) >= 1, "sigma_1^6 has five points"
    nonzero = [rec for rec in report.instances if rec['d1'] >= 1]
    assert any(rec['d1'] >= 3 for rec in nonzero), "Corpus should reach intersection numbers above 2"
    for rec in nonzero:
        values = rec['values']
        assert values[0] == rec['d1']
        assert all(a <= b for a, b in zip(values, values[1:])), f"{rec['problem']}: {values}"
    assert all('values' not in rec for rec in report.instances if rec['d1'] == 0)


@pytest.mark.slow
def test_ktt_scan_acceptance_corpora():
    corpora = [(2, n, s) for n in (3, 4, 5) for s in (3, 4)] + [(3, n, 3) for n in (4, 5, 6)]
    for r, n, s in corpora:
        report = ktt_scan(r, n, s, 6)
        assert report.verdict, f"Gr({r},{n}) s={s}: {report.failures[:3]}"


def test_horn_vs_oracle_scan_small():
    report = horn_vs_oracle_scan(2, 5, 3)
    assert report.verdict, f"Mismatches: {report.failures}"
    assert report.counts['zero'] > 0 and report.counts['nonzero'] > 0


def test_horn_vs_oracle_scan_workers_agree():
    one = horn_vs_oracle_scan(2, 4, 3, workers=1)
    many = horn_vs_oracle_scan(2, 4, 3, workers=3)
    assert one.to_dict() == many.to_dict()


@pytest.mark.slow
def test_horn_vs_oracle_random_sample():
    report = horn_vs_oracle_scan(3, 7, 4, sample=500, seed=0)
    assert report.verdict
    assert report.seeds == [0]


def test_position_hypothesis_scan_on_corpus():
    report = position_hypothesis_scan(3, 5, 3, seed=2)
    assert report.verdict, f"Failures: {report.failures[:3]}"
    assert report.counts.get('applicable', 0) > 0
    assert {rec['g'] for rec in report.instances} == {0, 1}
    again = position_hypothesis_scan(3, 5, 3, seed=2, workers=2)
    assert [rec['h1'] for rec in again.instances] == [rec['h1'] for rec in report.instances]


# ── Campaigns ────────────────────────────────────────────────────────────────

def test_prop11_campaign_small():
    report = prop11_campaign(n_instances=10, m_max=3, q_max=3, seed=1, min_first_seed_rate=0.9)
    assert report.verdict, f"Failures: {report.failures}"
    assert report.summary['passes_within_budget'] == 10


def test_campaign_instances_do_not_depend_on_retry_budget():
    few = prop11_campaign(n_instances=6, m_max=2, q_max=2, seed=3, retries=1, min_first_seed_rate=0.5)
    many = prop11_campaign(n_instances=6, m_max=2, q_max=2, seed=3, retries=5, min_first_seed_rate=0.5)
    assert [rec['seed'] for rec in few.instances] == [rec['seed'] for rec in many.instances]
    assert [rec['params'] for rec in few.instances] == [rec['params'] for rec in many.instances]


@pytest.mark.slow
def test_prop11_campaign_acceptance():
    report = prop11_campaign()
    assert report.verdict
    assert report.summary['first_seed_passes'] >= 99


@pytest.mark.slow
def test_h1_campaign_acceptance():
    report = h1_campaign()
    assert report.verdict
    assert report.summary['first_seed_passes'] >= 198


# ── Reports ──────────────────────────────────────────────────────────────────

def test_report_merge_and_schema():
    a = VerificationReport(corpus={'scan': 'a'}, seeds=[3], primes=[7])
    a.instances = [{'key': 'b'}, {'key': 'd'}]
    a.count('x')
    b = VerificationReport(corpus={'scan': 'b'}, seeds=[1, 3], primes=[7])
    b.instances = [{'key': 'a'}, {'key': 'c'}]
    b.failures = [{'key': 'c', 'error': 'boom'}]
    b.count('x')
    b.count('y')

    merged = a.merge(b)
    assert [rec['key'] for rec in merged.instances] == ['a', 'b', 'c', 'd']
    assert merged.counts == {'x': 2, 'y': 1}
    assert merged.seeds == [1, 3] and merged.primes == [7]
    assert not merged.verdict

    payload = json.loads(merged.to_json())
    assert payload['schema'] == REPORT_SCHEMA
    assert payload['verdict'] == 'fail'
    assert payload['failures'][0]['error'] == 'boom'


def test_report_threshold_controls_verdict():
    report = VerificationReport(corpus={}, summary={'threshold_met': False})
    assert not report.verdict
    assert VerificationReport(corpus={}).verdict


if __name__ == '__main__':
    sys.exit(pytest.main([__file__, '-v']))
