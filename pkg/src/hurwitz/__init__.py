"""Hurwitz polynomials of the n-cycle and their graph expansions.

Submodules:

    permgroup  permutations, transpositions, cycle types
    wring      exact polynomials in the edge variables w_ij and graph classes
    oracle     brute-force enumeration of transposition factorizations
    spectral   Laplacian, tree polynomial, r_g / R_g and the closed forms
    surfaces   rotation systems, faces, decorations
    cutjoin    truncated generating function and the cut-and-join equation
    cli        command line front end
"""

from .permgroup import CycleType, Permutation
from .wring import GraphClass, GraphSeries, WPolynomial, collect, project
from .oracle import BudgetExceeded, hurwitz_number, hurwitz_poly, hurwitz_poly_lambda
from .spectral import R_part, closed_form, hurwitz_closed, r_part, tree_poly, verify_div

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CycleType",
    "GraphClass",
    "GraphSeries",
    "Permutation",
    "R_part",
    "WPolynomial",
    "closed_form",
    "collect",
    "hurwitz_closed",
    "hurwitz_number",
    "hurwitz_poly",
    "hurwitz_poly_lambda",
    "project",
    "r_part",
    "tree_poly",
    "verify_div",
]
