"""Exact matrix groups over Laurent polynomial rings and their cyclotomic quotients."""

__version__ = "0.1.0"

from .laurent import LaurentPoly, format_poly, parse_poly
from .matrix import IntegerSpecialization, LaurentRing, RingMatrix
from .words import GroupWord, comm, parse_word
from .groups import decompose_uN, element_order, evaluate_word, make_generators, power_formula
from .ideals import BurnsideParams, saturate_ideal_lattice
from .quotient import SRing, build_quotient_S

__all__ = [
    "LaurentPoly", "format_poly", "parse_poly", "IntegerSpecialization", "LaurentRing", "RingMatrix",
    "GroupWord", "comm", "parse_word", "decompose_uN", "element_order", "evaluate_word",
    "make_generators", "power_formula", "BurnsideParams", "saturate_ideal_lattice", "SRing",
    "build_quotient_S",
]
