"""Elliptic-curve layer: pairing, potential, Hamiltonians and limits."""
