import logging

from elliptic_qdr.commands import EXIT_FAILED, EXIT_OK, budget_from_args
from elliptic_qdr.drhell.potential import AssemblyMismatchError, ClosedForm, potential_closed, potential_direct
from elliptic_qdr.serialization import Result, render, write_output
from elliptic_qdr.verify import CheckResult, EXACT_ZERO, functional_zero

logger = logging.getLogger(__name__)

NAME = 'potential'


def add_parser(subparsers, parents):
    potential = subparsers.add_parser(
        NAME,
        parents=parents,
        help='Assemble the potential of the hierarchy and compare its assemblies',
    )
    potential.add_argument(
        '--closed-form',
        dest='closed_form',
        metavar='FORM',
        help='Closed form compared against: ' + ', '.join(str(f) for f in ClosedForm),
        type=ClosedForm.from_string,
        choices=list(ClosedForm),
        default=None,
    )
    return potential


def run(args, stream):
    budget = budget_from_args(args)
    forms = [args.closed_form] if args.closed_form else list(ClosedForm)
    try:
        direct = potential_direct(budget)
    except AssemblyMismatchError as e:
        logger.error('%s', e)
        checks = [CheckResult('double sum = intersection assembly', False, str(e))]
        write_output(render(args.format, NAME, budget, [], checks), args.out, stream)
        return EXIT_FAILED

    checks = [CheckResult('double sum = intersection assembly', True, EXACT_ZERO)]
    for form in forms:
        closed = potential_closed(budget, form)
        checks.append(functional_zero('double sum = closed %s form' % form, direct.density - closed.density))

    text = render(args.format, NAME, budget, [Result('potential', direct)], checks)
    write_output(text, args.out, stream)
    return EXIT_OK if all(c.ok for c in checks) else EXIT_FAILED
