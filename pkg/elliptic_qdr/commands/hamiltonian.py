import logging

from elliptic_qdr.commands import EXIT_FAILED, EXIT_OK, EXIT_USAGE, budget_from_args
from elliptic_qdr.diffpoly import COLORS, LocalFunctional
from elliptic_qdr.drhell.hierarchy import first_lossy_step, hamiltonian
from elliptic_qdr.fock import Kind
from elliptic_qdr.serialization import Result, render, write_output
from elliptic_qdr.verify import CheckResult

logger = logging.getLogger(__name__)

NAME = 'hamiltonian'

NOTE = 'Casimir components are normalized to zero; densities are defined modulo total derivatives and Casimirs'


def add_parser(subparsers, parents):
    parser = subparsers.add_parser(
        NAME,
        parents=parents,
        help='Hamiltonian density G_{alpha,d}: Casimir, primary, dilaton or recursion',
    )
    parser.add_argument('alpha', type=int, choices=COLORS, help='color 1..4')
    parser.add_argument('index', type=int, help='index d >= -1')
    parser.add_argument(
        '--kind',
        dest='kind',
        metavar='KIND',
        help='Write the density or the functional it integrates to: ' + ', '.join(str(k) for k in Kind),
        type=Kind.from_string,
        choices=list(Kind),
        default=Kind.DENSITY,
    )
    return parser


def run(args, stream):
    budget = budget_from_args(args)
    if args.index < -1:
        logger.error('Hamiltonian index must be >= -1, got %d', args.index)
        return EXIT_USAGE
    h = hamiltonian(args.alpha, args.index, budget)
    value = LocalFunctional(h.density) if args.kind == Kind.FUNCTIONAL else h.density
    checks = []
    if h.density.loss:
        step = first_lossy_step(args.alpha, args.index, budget)
        detail = 'G_{%d,%d} lost %d monomials to dx_degree %d' % (
            step.alpha,
            step.index,
            step.density.loss,
            budget.dx_degree,
        )
        logger.error('Budget exhausted: %s', detail)
        checks.append(CheckResult('budget', False, detail))
    name = 'G_{%d,%d}' % (args.alpha, args.index)
    write_output(render(args.format, NAME, budget, [Result(name, value)], checks, NOTE), args.out, stream)
    return EXIT_FAILED if checks else EXIT_OK
