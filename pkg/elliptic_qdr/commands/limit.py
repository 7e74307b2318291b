import logging

from elliptic_qdr.commands import EXIT_FAILED, EXIT_OK, budget_from_args
from elliptic_qdr.diffpoly import COLORS
from elliptic_qdr.drhell.limits import LimitKind, limit, verify_classical_recursion
from elliptic_qdr.serialization import Result, render, write_output
from elliptic_qdr.verify import truth

logger = logging.getLogger(__name__)

NAME = 'limit'


def add_parser(subparsers, parents):
    parser = subparsers.add_parser(
        NAME,
        parents=parents,
        help='Dispersionless, trigonometric or double scaling limit of the potential',
    )
    parser.add_argument(
        'kind',
        metavar='KIND',
        help='Limit: ' + ', '.join(str(k) for k in LimitKind),
        type=LimitKind.from_string,
        choices=list(LimitKind),
    )
    return parser


def run(args, stream):
    budget = budget_from_args(args)
    value = limit(args.kind, budget)
    checks = []
    if args.kind == LimitKind.DS_DISPERSIONLESS:
        for alpha in COLORS:
            check = verify_classical_recursion(alpha)
            detail = check.residue.text_lines()[0] if check.residue else ''
            checks.append(truth('classical recursion color %d' % alpha, check.ok, detail))
    text = render(args.format, NAME, budget, [Result(str(args.kind), value)], checks)
    write_output(text, args.out, stream)
    return EXIT_OK if all(c.ok for c in checks) else EXIT_FAILED
