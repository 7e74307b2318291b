import logging

from elliptic_qdr.commands import EXIT_FAILED, EXIT_INCONSISTENT, EXIT_OK, EXIT_USAGE, budget_from_args
from elliptic_qdr.serialization import render, write_output
from elliptic_qdr.verify import Suite, run_suite

logger = logging.getLogger(__name__)

NAME = 'verify'


def add_parser(subparsers, parents):
    parser = subparsers.add_parser(
        NAME,
        parents=parents,
        help='Run a verification suite; exit code 0 iff every identity holds exactly',
    )
    parser.add_argument(
        'suite',
        metavar='SUITE',
        help='Suite to run: ' + ', '.join(str(s) for s in Suite),
        type=Suite.from_string,
        choices=list(Suite),
    )
    parser.add_argument(
        '--modes',
        dest='modes',
        type=int,
        default=8,
        help='mode window K of the brute-force oracle',
    )
    parser.add_argument(
        '--count',
        dest='count',
        type=int,
        default=None,
        help='number of random cases (100 Lie triples, 50 oracle pairs by default)',
    )
    parser.add_argument(
        '--seed',
        dest='seed',
        type=int,
        default=0,
        help='seed of the random cases',
    )
    return parser


def run(args, stream):
    budget = budget_from_args(args)
    if args.modes < 1 or (args.count is not None and args.count < 0):
        logger.error('--modes must be positive and --count nonnegative, got %d and %s', args.modes, args.count)
        return EXIT_USAGE
    results = run_suite(args.suite, budget, modes=args.modes, count=args.count, seed=args.seed)
    write_output(render(args.format, NAME, budget, [], results), args.out, stream)
    return exit_code(results)


def exit_code(results):
    """Oracle disagreement outranks a plain failed identity."""
    if any(r.inconsistent and not r.ok for r in results):
        return EXIT_INCONSISTENT
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAILED
