"""Right-hand sides of the product formulas, as unions of products of factor
spectra.

``TENSOR[kind]`` lists ``(left, right)`` pairs such that the ``kind`` spectrum
of ``(S (x) I, I (x) T)`` is the union over the pairs of
``left(S) x right(T)``; ``MULT`` does the same for the multiplication tuple
``(L_S, R_T)``.  On Hilbert and finite-dimensional spaces these unions are
equalities.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .chains import SPECTRUM_KINDS
from .regions import product, union

TENSOR = {
    "delta": [("delta", "delta")],
    "pi": [("pi", "pi")],
    "phi_minus": [("phi_minus", "delta"), ("delta", "phi_minus")],
    "phi_plus": [("phi_plus", "pi"), ("pi", "phi_plus")],
    "browder_minus": [("browder_minus", "delta"), ("delta", "browder_minus")],
    "browder_plus": [("browder_plus", "pi"), ("pi", "browder_plus")],
    "sp_delta": [("sp_delta", "sp_delta")],
    "sp_pi": [("sp_pi", "sp_pi")],
    "sp_delta_e": [("sp_delta_e", "sp_delta"), ("sp_delta", "sp_delta_e")],
    "sp_pi_e": [("sp_pi_e", "sp_pi"), ("sp_pi", "sp_pi_e")],
    "sp_browder_minus": [("sp_browder_minus", "sp_delta"), ("sp_delta", "sp_browder_minus")],
    "sp_browder_plus": [("sp_browder_plus", "sp_pi"), ("sp_pi", "sp_browder_plus")],
}

MULT = {
    "delta": [("delta", "pi")],
    "pi": [("pi", "delta")],
    "phi_minus": [("phi_minus", "pi"), ("delta", "phi_plus")],
    "phi_plus": [("phi_plus", "delta"), ("pi", "phi_minus")],
    "browder_minus": [("browder_minus", "pi"), ("delta", "browder_plus")],
    "browder_plus": [("browder_plus", "delta"), ("pi", "browder_minus")],
    "sp_delta": [("sp_delta", "sp_pi")],
    "sp_pi": [("sp_pi", "sp_delta")],
    "sp_delta_e": [("sp_delta_e", "sp_pi"), ("sp_delta", "sp_pi_e")],
    "sp_pi_e": [("sp_pi_e", "sp_delta"), ("sp_pi", "sp_delta_e")],
    "sp_browder_minus": [("sp_browder_minus", "sp_pi"), ("sp_delta", "sp_browder_plus")],
    "sp_browder_plus": [("sp_browder_plus", "sp_delta"), ("sp_pi", "sp_browder_minus")],
}

FAMILIES = {"tensor": TENSOR, "mult": MULT}

assert set(TENSOR) == set(MULT) == set(SPECTRUM_KINDS)


def finite_rhs(table: dict, kind: str, left: Callable, right: Callable) -> frozenset:
    """Finite-set right-hand side; ``left(k)``/``right(k)`` give factor sets of points."""
    out = set()
    for a, b in table[kind]:
        for p in left(a):
            for q in right(b):
                out.add(tuple(p) + tuple(q))
    return frozenset(out)


def region_rhs(table: dict, kind: str, left: Callable, right: Callable, n: int):
    """Region right-hand side from factor regions."""
    return union(*(product(left(a), right(b)) for a, b in table[kind]), n=n)


def grid_rhs(table: dict, kind: str, left: Callable, right: Callable):
    """Grid right-hand side from factor membership arrays (outer products)."""
    out = None
    for a, b in table[kind]:
        g = np.logical_and.outer(left(a), right(b))
        out = g if out is None else out | g
    return out


# split twin of each non-split kind; the inclusion chains read
# left(sigma) <= sigma(product) <= sp(product) <= right(sp)
SPLIT_TWIN = {
    "delta": "sp_delta",
    "pi": "sp_pi",
    "phi_minus": "sp_delta_e",
    "phi_plus": "sp_pi_e",
    "browder_minus": "sp_browder_minus",
    "browder_plus": "sp_browder_plus",
}
