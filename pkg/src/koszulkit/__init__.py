"""Quadratic algebras, Koszul duality and oriented pro-p groups over F_p."""

from .errors import KoszulkitError
from .fpfield import FpMatrix, PrimeField, Subspace, annihilator, rank, rref
from .ncpoly import NcPoly, magnus_expand, parse_word, psi2
from .quadalg import QuadraticPresentation, component, hilbert, koszul_dual
from .koszul import bar_tor, hilbert_criterion, is_koszul_up_to
from .progroup import (Demushkin, FibreProduct, Free, FreeProduct, ThetaAbelian,
                       cohomology_ring, gr_algebra, invariants, presentation_of,
                       verify_koszul_duality, zassenhaus_dims)
from .cocycle import CrossedHom, Orientation, PadicApprox, cyclotomic_obstruction, evaluate

__version__ = "0.1.0"

__all__ = [
    "KoszulkitError", "FpMatrix", "PrimeField", "Subspace", "annihilator", "rank", "rref",
    "NcPoly", "magnus_expand", "parse_word", "psi2",
    "QuadraticPresentation", "component", "hilbert", "koszul_dual",
    "bar_tor", "hilbert_criterion", "is_koszul_up_to",
    "Demushkin", "FibreProduct", "Free", "FreeProduct", "ThetaAbelian",
    "cohomology_ring", "gr_algebra", "invariants", "presentation_of",
    "verify_koszul_duality", "zassenhaus_dims",
    "CrossedHom", "Orientation", "PadicApprox", "cyclotomic_obstruction", "evaluate",
]
