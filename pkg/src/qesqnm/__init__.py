"""Exact and quasi-exact spectra, bound states and quasinormal modes of
one-dimensional Schroedinger models built from a prepotential."""

from .model import (
    ModelError,
    ModelSpec,
    PolyP,
    PolyQ,
    Solvability,
    UnsupportedModelError,
    classify_solvability,
    validate_model,
)
from .coordinates import canonical_coordinate, canonicalize, x_of_z, z_of_x
from .bethe import algebraize, bae_residuals, conjugation_closure, qes_levels
from .spectrum import assemble_potential, eigenfunction, exact_spectrum, level_energy, spectral_levels

__version__ = "0.1.0"
