"""
Quantum Hamiltonians G_{a,p}: reconstruction from the Casimirs by the
recursion d_x (D - 1) G_{a,p+1} = (1/hbar)[G_{a,p}, G_11], and the
commutativity verifier.

Every Hamiltonian carries the weight (u-degree + 2 hbar-power) through
which it is exact. The star product preserves this weight, so a
commutator of inputs exact through W_f, W_g with lowest weights m_f, m_g
is exact through min(W_f + m_g, W_g + m_f); everything above is dropped.
"""
import math
import logging

from collections import namedtuple
from functools import lru_cache

from elliptic_qdr.diffpoly import DiffPoly, LocalFunctional, integrate_by_parts, is_zero_functional
from elliptic_qdr.drhell.pairing import casimir_density
from elliptic_qdr.drhell.potential import g11, primary_hamiltonian
from elliptic_qdr.fock import commutator_density, reduced_commutator, solve_dx_and_degree

logger = logging.getLogger(__name__)

Hamiltonian = namedtuple('Hamiltonian', ['alpha', 'index', 'density', 'weight'])

CommutativityReport = namedtuple(
    'CommutativityReport', ['alpha', 'p', 'beta', 's', 'ok', 'offending', 'weight', 'budget', 'loss']
)


def exact_weight(f_weight, f_density, g_weight, g_density):
    m_f = f_density.min_weight()
    m_g = g_density.min_weight()
    if m_f is None or m_g is None:
        return math.inf
    return min(f_weight + m_g, g_weight + m_f)


def potential_weight(budget):
    return budget.u_degree + 2


def g11_hamiltonian(budget):
    return Hamiltonian(1, 1, g11(budget).density, potential_weight(budget))


def casimir_hamiltonian(alpha, budget):
    return Hamiltonian(alpha, -1, casimir_density(alpha, budget), math.inf)


def primary(alpha, budget):
    return Hamiltonian(alpha, 0, primary_hamiltonian(alpha, budget).density, potential_weight(budget) - 1)


def recursion_step(h, generator, budget):
    """G_{a,p+1} from G_{a,p} against the Hamiltonian generator G_11."""
    weight = exact_weight(h.weight, h.density, generator.weight, generator.density) - 2
    rhs = reduced_commutator(h.density, generator.density, budget).truncate_weight(weight)
    logger.debug('Recursion step for color %d, index %d: %d monomials on the right', h.alpha, h.index + 1, len(rhs))
    density = solve_dx_and_degree(rhs, h.alpha)
    if density.loss:
        logger.warning(
            'G_{%d,%d} lost %d monomials to dx_degree %d', h.alpha, h.index + 1, density.loss, budget.dx_degree
        )
    return Hamiltonian(h.alpha, h.index + 1, density, weight)


@lru_cache(maxsize=None)
def reconstruct(alpha, p_max, budget):
    """Densities G_{a,-1}, ..., G_{a,p_max}, each with its Casimir component set to zero."""
    logger.info('Reconstructing color %d up to index %d at %s', alpha, p_max, budget)
    generator = g11_hamiltonian(budget)
    chain = [casimir_hamiltonian(alpha, budget)]
    for _ in range(p_max + 1):
        chain.append(recursion_step(chain[-1], generator, budget))
    return tuple(chain)


def hamiltonian(alpha, index, budget):
    """G_{a,d}: Casimir, primary or G_11 directly, the recursion otherwise."""
    if index < -1:
        raise ValueError('Hamiltonian index must be >= -1, got %d' % index)
    if index == -1:
        return casimir_hamiltonian(alpha, budget)
    if index == 0:
        return primary(alpha, budget)
    if index == 1 and alpha == 1:
        return g11_hamiltonian(budget)
    return reconstruct(alpha, index, budget)[-1]


def modulo_casimirs(density):
    """Drop linear monomials, which are Casimir densities or total derivatives."""
    return DiffPoly({w: s for w, s in density.items() if len(w) != 1}, density.budget, density.loss)


def reconstruction_matches_primary(alpha, budget):
    """reconstruct(a, 0) and the primary Hamiltonian agree modulo Casimirs and total derivatives."""
    rebuilt = reconstruct(alpha, 0, budget)[-1]
    direct = primary(alpha, budget)
    weight = min(rebuilt.weight, direct.weight)
    difference = modulo_casimirs(rebuilt.density - direct.density).truncate_weight(weight)
    return is_zero_functional(difference), difference


def first_surviving(density):
    lines = integrate_by_parts(density).text_lines()
    return lines[0] if lines else None


def verify_commutativity(alpha, p, beta, s, budget):
    """
    [G_{a,p}, G_{b,s}] as a functional, exact through hbar^hbar_order: the
    inputs are only needed one hbar order lower.
    """
    inner = budget.replace(hbar_order=max(budget.hbar_order - 1, 0))
    f = hamiltonian(alpha, p, inner)
    g = hamiltonian(beta, s, inner)
    weight = exact_weight(f.weight, f.density, g.weight, g.density)
    bracket = commutator_density(f.density, g.density, budget).truncate_weight(weight)
    loss = f.density.loss + g.density.loss + bracket.loss
    zero = is_zero_functional(bracket)
    ok = zero and not loss
    offending = None if zero else first_surviving(bracket)
    if not ok:
        logger.warning('[G_{%d,%d}, G_{%d,%d}] failed: %s (loss %d)', alpha, p, beta, s, offending, loss)
    return CommutativityReport(alpha, p, beta, s, ok, offending, weight, budget, loss)


def as_functional(h):
    return LocalFunctional(h.density)


def first_lossy_step(alpha, index, budget):
    """The earliest Hamiltonian on the way to G_{a,d} that lost monomials to the budget, or None."""
    if index < 1 or (alpha == 1 and index == 1):
        chain = (hamiltonian(alpha, index, budget),)
    else:
        chain = reconstruct(alpha, index, budget)
    return next((h for h in chain if h.density.loss), None)
