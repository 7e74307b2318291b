import logging

from elliptic_qdr.diffpoly import COLORS, DiffPoly, PARITY

logger = logging.getLogger(__name__)


class EllipticPairing(object):
    """
    Pairing on (e1, e2, e3, e4): e1 pairs with e4, and the odd classes
    pair skew-symmetrically, eta_23 = 1 = -eta_32.
    """

    LOWER = {(1, 4): 1, (4, 1): 1, (2, 3): 1, (3, 2): -1}

    def __init__(self):
        self.lower = dict(self.LOWER)
        self.upper = {(1, 4): 1, (4, 1): 1, (2, 3): -1, (3, 2): 1}
        self.partner = {1: 4, 4: 1, 2: 3, 3: 2}

    def eta(self, alpha, beta):
        return self.lower.get((alpha, beta), 0)

    def eta_inverse(self, alpha, beta):
        return self.upper.get((alpha, beta), 0)

    def is_graded_symmetric(self):
        return all(
            self.eta(a, b) == (-1) ** (PARITY[a] * PARITY[b]) * self.eta(b, a) for a in COLORS for b in COLORS
        )

    def check_inverse(self):
        for a in COLORS:
            for b in COLORS:
                total = sum(self.eta_inverse(a, m) * self.eta(m, b) for m in COLORS)
                if total != (1 if a == b else 0):
                    return False
        return True


PAIRING = EllipticPairing()
ETA_UP = PAIRING.upper
PARTNER = PAIRING.partner


def casimir_density(alpha, budget=None):
    """G_{alpha,-1} = eta_{alpha mu} u^mu."""
    if alpha not in COLORS:
        raise ValueError('Color must be one of %s, got %r' % (COLORS, alpha))
    mu = PARTNER[alpha]
    return DiffPoly.letter(mu, 0, PAIRING.eta(alpha, mu), budget)
