"""Discrete magnetic Hodge calculus on weighted triangulations.

Submodules: :mod:`~maghodge.complex` (cells, weights, JSON documents),
:mod:`~maghodge.cochains`, :mod:`~maghodge.field` (potentials),
:mod:`~maghodge.operators`, :mod:`~maghodge.completeness`,
:mod:`~maghodge.generators`, :mod:`~maghodge.spectral`,
:mod:`~maghodge.verify` and :mod:`~maghodge.cli`.
"""

__version__ = "0.1.0"

from .complex import (ComplexError, ParseError, ValidationError, WeightedTriangulation,
                      degree_edge, degree_vertex, from_cells, load, loads, dumps, save, validate)
from .cochains import Cochain0, Cochain1, Cochain2, gauge_act, inner, norm
from .field import MagneticPotential, face_flux, holonomy, is_trivial
from .operators import d0, d1, delta0, delta1, gauss_bonnet, laplacian, wedge_alpha
from .spectral import assemble, hermitize_and_check, lemma_constant_probe, spectrum

__all__ = [
    "ComplexError", "ParseError", "ValidationError", "WeightedTriangulation",
    "degree_edge", "degree_vertex", "from_cells", "load", "loads", "dumps", "save", "validate",
    "Cochain0", "Cochain1", "Cochain2", "gauge_act", "inner", "norm",
    "MagneticPotential", "face_flux", "holonomy", "is_trivial",
    "d0", "d1", "delta0", "delta1", "gauss_bonnet", "laplacian", "wedge_alpha",
    "assemble", "hermitize_and_check", "lemma_constant_probe", "spectrum",
]
