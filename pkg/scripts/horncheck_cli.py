#!/usr/bin/env python3
"""
horncheck command line
Subcommands for LR numbers, invariant dimensions, the Horn test, slopes,
sampled Hom data and the verification scans
"""

import argparse
import json
import logging
import os
import sys
from typing import List, Optional, Tuple

from dotenv import load_dotenv

import lr_engine
from complexes import (
    DEFAULT_TRIALS,
    h1_transfer_campaign,
    hom_data,
    prop11_check,
    sample_flag_pair,
    theta_from_index,
    two_step_report,
)
from flag_linalg import (
    DEFAULT_PRIME,
    DEFAULT_RETRIES,
    GenericityError,
    check_prime,
    count_subspace_triples,
    subspace_triple_count_polynomial,
)
from harness import (
    DEFAULT_WORKERS,
    h1_campaign,
    horn_vs_oracle_scan,
    ktt_scan,
    position_hypothesis_scan,
    prop11_campaign,
    setup_logging,
)
from horn import (
    LedgerInputs,
    dim_ledger,
    expected_hom_dim,
    filtration_codim_identity,
    first_violated_inequality,
    horn_inequality_value,
    horn_nonzero,
    intersection_dimension,
    ledger_subspace_triples,
)
from lr_cache import CacheConflictError, LRCache
from parabolic import ParabolicWeights, first_destabilizing_position, full_slope, generic_semistable
from partitions import (
    IdentityViolation,
    InvalidInputError,
    Partition,
    SchubertProblem,
    format_tuple,
    parse_index_set,
    parse_index_tuple,
    parse_partition,
    parse_partition_tuple,
)

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_SEED = int(os.getenv('HORNCHECK_SEED', '0'))
DEFAULT_CACHE = os.getenv('HORNCHECK_CACHE') or None
DEFAULT_LOG_FILE = os.getenv('HORNCHECK_LOG_FILE') or None

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


# ── Argument types ───────────────────────────────────────────────────────────

def partition_arg(text: str) -> Partition:
    try:
        return parse_partition(text)
    except InvalidInputError as e:
        raise argparse.ArgumentTypeError(str(e))


def partition_tuple_arg(text: str) -> Tuple[Partition, ...]:
    try:
        return parse_partition_tuple(text)
    except InvalidInputError as e:
        raise argparse.ArgumentTypeError(str(e))


def prime_arg(text: str) -> int:
    try:
        return check_prime(int(text))
    except (ValueError, InvalidInputError):
        raise argparse.ArgumentTypeError(f"not a usable prime '{text}'")


# ── Output ───────────────────────────────────────────────────────────────────

def _emit(args, text: str, payload: Optional[dict] = None):
    if args.json:
        print(json.dumps(payload if payload is not None else {'result': text}, indent=2, ensure_ascii=False))
    else:
        print(text)


# ── Subcommands ──────────────────────────────────────────────────────────────

def cmd_lr(args) -> int:
    value = lr_engine.lr_coefficient(args.lam, args.mu, args.nu)
    _emit(args, str(value), {'lambda': str(args.lam), 'mu': str(args.mu), 'nu': str(args.nu), 'value': value})
    return EXIT_OK


def cmd_invdim(args) -> int:
    value = lr_engine.invariant_dimension(args.partitions, args.r)
    _emit(args, str(value), {'r': args.r, 'partitions': format_tuple(args.partitions), 'value': value})
    return EXIT_OK


def cmd_stretch(args) -> int:
    report = lr_engine.stretch_sequence(args.partitions, args.r, args.max_n)
    _emit(args, ' '.join(str(v) for v in report.values),
          {'r': args.r, 'partitions': format_tuple(args.partitions), **report.to_dict()})
    return EXIT_OK


def cmd_horn(args) -> int:
    problem = SchubertProblem(args.n, args.r, parse_index_tuple(args.sets, args.n))
    decision = 'nonzero' if horn_nonzero(problem) else 'zero'
    payload = {'problem': str(problem), 'decision': decision}
    lines = [decision]
    if args.explain:
        witness = first_violated_inequality(problem)
        payload['dimension'] = intersection_dimension(problem.sets, problem.r, problem.q)
        lines.append(f"dimension {payload['dimension']}")
        if witness is not None:
            payload['violated'] = witness.to_dict()
            lines.append(f"violated K={format_tuple(witness.K)} value={witness.lhs_value}")
    _emit(args, '\n'.join(lines), payload)
    return EXIT_OK


def cmd_ineq(args) -> int:
    problem = SchubertProblem(args.n, args.r, parse_index_tuple(args.sets, args.n))
    K = parse_index_tuple(args.positions, args.r)
    value = horn_inequality_value(problem, K)
    _emit(args, str(value), {'problem': str(problem), 'K': format_tuple(K), 'value': value, 'holds': value <= 0})
    return EXIT_OK


def cmd_semistable(args) -> int:
    if args.level is not None:
        m = len(args.weights.split(':')[0].split(','))
        W = ParabolicWeights.from_index_sets(parse_index_tuple(args.weights, args.level + m), args.level)
    else:
        W = ParabolicWeights.parse(args.weights)
    stable = generic_semistable(W)
    payload = {'m': W.m, 'slope': str(full_slope(W)), 'semistable': stable}
    if not stable:
        payload['destabilizing'] = format_tuple(first_destabilizing_position(W))
    _emit(args, 'semistable' if stable else 'unstable', payload)
    return EXIT_OK


def cmd_homdim(args) -> int:
    H = parse_index_tuple(args.sets, args.q + args.m)
    F, G = sample_flag_pair(args.m, args.q, len(H), args.seed, args.prime)
    report = two_step_report(F, G, theta_from_index(H))
    data = hom_data(F, G, H, args.trials, args.seed)
    expected = expected_hom_dim(H, args.m, args.q)
    _emit(args, str(report.h0), {
        'H': format_tuple(H), 'm': args.m, 'q': args.q, 'expected': expected,
        'seed': args.seed, 'prime': args.prime, **report.to_dict(), 'hom_data': data.to_dict(),
    })
    return EXIT_OK


def _sampled(args, name: str, single, campaign) -> int:
    if args.sets is None:
        report = campaign(n_instances=args.campaign, seed=args.seed, prime=args.prime,
                          trials=args.trials, retries=args.retries, workers=args.workers)
        payload = report.to_dict()
        verdict = report.verdict
        text = f"{name}: {payload['summary']['passes_within_budget']}/{args.campaign} pass"
    else:
        H = parse_index_tuple(args.sets, args.q + args.m)
        report = single(H, args.m, args.q, args.instances, args.trials, args.seed, args.prime, args.retries)
        payload = report.to_dict()
        verdict = report.verdict
        text = f"{name}: {report.passes_within_budget}/{report.instances} pass"
    _emit(args, text, payload)
    return EXIT_OK if verdict else EXIT_FAIL


def cmd_prop11(args) -> int:
    return _sampled(args, 'prop11', prop11_check, prop11_campaign)


def cmd_h1check(args) -> int:
    return _sampled(args, 'h1check', h1_transfer_campaign, h1_campaign)


def cmd_dims(args) -> int:
    payload = {'r': args.r, 'f': args.f, 'g': args.g}
    lines = []
    if args.I is not None:
        missing = [name for name in ('m', 'q', 'n', 'E', 'H', 'K') if getattr(args, name) is None]
        if missing:
            raise InvalidInputError(f"--I needs --{', --'.join(missing)} as well")
        s = len(args.I.split(':'))
        inputs = LedgerInputs(
            m=args.m, q=args.q,
            E=parse_index_tuple(args.E, args.m), H=parse_index_tuple(args.H, args.q + args.m),
            n=args.n, r=args.r, I=parse_index_tuple(args.I, args.n),
            K=parse_index_tuple(args.K, args.r), J=parse_index_tuple(args.J or ':' * (s - 1), args.r))
        ledger = dim_ledger(inputs)
        payload['ledger'] = ledger.to_dict()
        lines.append(' '.join(str(v) for v in ledger.values()))
    else:
        item = ledger_subspace_triples(args.r, args.f, args.g)
        payload['subspace_triples'] = item
        lines.append(str(item))
    if args.count:
        count = count_subspace_triples(args.r, args.f, args.g, args.count)
        poly = subspace_triple_count_polynomial(args.r, args.f, args.g)
        payload['count'] = {'field': args.count, 'value': count, 'polynomial': poly}
        lines.append(f"count over F_{args.count}: {count}, polynomial {poly}")
    if args.rho is not None:
        L = parse_index_set(args.L, args.rho)
        ok = filtration_codim_identity(args.rho, L)
        payload['filtration_identity'] = ok
        lines.append(f"filtration identity {'holds' if ok else 'FAILS'}")
    _emit(args, '\n'.join(lines), payload)
    return EXIT_OK


def cmd_verify_ktt(args) -> int:
    report = ktt_scan(args.r, args.n, args.s, args.max_n, args.workers)
    _emit(args, f"{'pass' if report.verdict else 'fail'} {dict(sorted(report.counts.items()))}", report.to_dict())
    return EXIT_OK if report.verdict else EXIT_FAIL


def cmd_verify_horn(args) -> int:
    report = horn_vs_oracle_scan(args.r_max, args.n_max, args.s, args.workers, args.sample, args.seed)
    _emit(args, f"{'pass' if report.verdict else 'fail'} {dict(sorted(report.counts.items()))}", report.to_dict())
    return EXIT_OK if report.verdict else EXIT_FAIL


def cmd_verify_positions(args) -> int:
    report = position_hypothesis_scan(args.r, args.n, args.s, args.seed, args.prime, args.workers)
    _emit(args, f"{'pass' if report.verdict else 'fail'} {dict(sorted(report.counts.items()))}", report.to_dict())
    return EXIT_OK if report.verdict else EXIT_FAIL


# ── Parser ───────────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='horncheck',
        description='Exact Littlewood-Richardson, Schubert calculus and Horn recursion checks',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # LR coefficient c^{321}_{21,21}
  python3 horncheck.py lr 2,1 2,1 3,2,1

  # Stretched SL_2 invariants of four copies of the standard representation
  python3 horncheck.py stretch --r 2 1:1:1:1 --max-n 5

  # Horn decision for sigma_1^3 in Gr(2,4), with the first violated inequality
  python3 horncheck.py horn --n 4 --r 2 2,4:2,4:2,4 --explain

  # Full stretching scan, JSON report
  python3 horncheck.py --json verify-ktt --r 3 --n 6 --s 3 --max-n 6
"""
    )
    parser.add_argument('--prime', type=prime_arg, default=DEFAULT_PRIME,
                        help=f'Field characteristic for sampling (default: {DEFAULT_PRIME})')
    parser.add_argument('--seed', type=int, default=DEFAULT_SEED,
                        help=f'Master seed (default: {DEFAULT_SEED})')
    parser.add_argument('--trials', type=int, default=DEFAULT_TRIALS,
                        help=f'General-element samples (default: {DEFAULT_TRIALS})')
    parser.add_argument('--retries', type=int, default=DEFAULT_RETRIES,
                        help=f'Reseeding budget per instance (default: {DEFAULT_RETRIES})')
    parser.add_argument('--workers', type=int, default=DEFAULT_WORKERS,
                        help=f'Threads for scans (default: {DEFAULT_WORKERS})')
    parser.add_argument('--json', action='store_true', help='Print JSON instead of plain values')
    parser.add_argument('--cache', default=DEFAULT_CACHE, help='LR coefficient cache file')
    parser.add_argument('--log-file', default=DEFAULT_LOG_FILE, help='Also write logs to this file')
    parser.add_argument('--verbose', '-v', action='store_true', help='Debug logging')

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('lr', help='LR coefficient c^nu_{lambda mu}')
    p.add_argument('lam', type=partition_arg)
    p.add_argument('mu', type=partition_arg)
    p.add_argument('nu', type=partition_arg)
    p.set_defaults(func=cmd_lr)

    p = sub.add_parser('invdim', help='dim of SL_r invariants in a tensor product')
    p.add_argument('--r', type=int, required=True)
    p.add_argument('partitions', type=partition_tuple_arg)
    p.set_defaults(func=cmd_invdim)

    p = sub.add_parser('stretch', help='Stretched invariant dimensions P(1..N)')
    p.add_argument('--r', type=int, required=True)
    p.add_argument('--max-n', type=int, default=6)
    p.add_argument('partitions', type=partition_tuple_arg)
    p.set_defaults(func=cmd_stretch)

    p = sub.add_parser('horn', help='Horn decision for a Schubert product')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--r', type=int, required=True)
    p.add_argument('--explain', action='store_true', help='Show the first violated inequality')
    p.add_argument('sets')
    p.set_defaults(func=cmd_horn)

    p = sub.add_parser('ineq', help='Evaluate one Horn inequality')
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--r', type=int, required=True)
    p.add_argument('sets')
    p.add_argument('positions')
    p.set_defaults(func=cmd_ineq)

    p = sub.add_parser('semistable', help='Generic-flag parabolic semistability')
    p.add_argument('--level', type=int, default=None,
                   help='Read WEIGHTS as index sets in [level+m] and use lambda(I)')
    p.add_argument('weights')
    p.set_defaults(func=cmd_semistable)

    p = sub.add_parser('homdim', help='Sampled dim Hom_H(M, Q, F, G)')
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--q', type=int, required=True)
    p.add_argument('sets')
    p.set_defaults(func=cmd_homdim)

    for name, func, default_campaign in (('prop11', cmd_prop11, 100), ('h1check', cmd_h1check, 200)):
        p = sub.add_parser(name, help=f'{name} sampling check (single H or random campaign)')
        p.add_argument('--m', type=int, default=2)
        p.add_argument('--q', type=int, default=2)
        p.add_argument('--instances', type=int, default=10)
        p.add_argument('--campaign', type=int, default=default_campaign,
                       help='Random instances when no index sets are given')
        p.add_argument('sets', nargs='?', default=None)
        p.set_defaults(func=func)

    p = sub.add_parser('dims', help='Relative dimensions and point counts')
    p.add_argument('--r', type=int, required=True)
    p.add_argument('--f', type=int, required=True)
    p.add_argument('--g', type=int, required=True)
    p.add_argument('--count', type=prime_arg, default=None, help='Enumerate subspace pairs over F_p')
    p.add_argument('--m', type=int)
    p.add_argument('--q', type=int)
    p.add_argument('--n', type=int)
    p.add_argument('--E')
    p.add_argument('--H')
    p.add_argument('--I')
    p.add_argument('--K')
    p.add_argument('--J')
    p.add_argument('--rho', type=int)
    p.add_argument('--L', default='')
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser('verify-ktt', help='Stretching scan over a codimension corpus')
    p.add_argument('--r', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--s', type=int, default=3)
    p.add_argument('--max-n', type=int, default=6)
    p.set_defaults(func=cmd_verify_ktt)

    p = sub.add_parser('verify-positions', help='Kernel-position h1 check on a codimension corpus')
    p.add_argument('--r', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--s', type=int, default=3)
    p.set_defaults(func=cmd_verify_positions)

    p = sub.add_parser('verify-horn', help='Horn recursion against the expansion oracle')
    p.add_argument('--r-max', type=int, required=True)
    p.add_argument('--n-max', type=int, required=True)
    p.add_argument('--s', type=int, default=3)
    p.add_argument('--sample', type=int, default=None, help='Random problems instead of all')
    p.set_defaults(func=cmd_verify_horn)

    return parser


def cli_main(argv: Optional[List[str]] = None) -> int:
    """Exit status: 0 pass, 1 failed assertion, 2 usage error."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK

    setup_logging(args.log_file, args.verbose)
    cache = None
    try:
        if args.cache:
            cache = LRCache(args.cache)
            lr_engine.attach_cache(cache)
        return args.func(args)
    except InvalidInputError as e:
        logger.error(f"✗ Invalid input: {e}")
        return EXIT_USAGE
    except (IdentityViolation, GenericityError, CacheConflictError) as e:
        logger.error(f"✗ {type(e).__name__}: {e}")
        return EXIT_FAIL
    finally:
        if cache is not None:
            lr_engine.attach_cache(None)


if __name__ == '__main__':
    sys.exit(cli_main())
