"""Leray spectral sequences, Leray cosheaves, level-set barcodes and Reeb spaces
of finite simplicial maps, over F_p or Q."""
from .cosheaf import Cosheaf, LerayData, constant_cosheaf, cosheaf_homology, leray_cosheaf, verify_prop2
from .io import InputError, JobSpec, parse_input, serialize
from .levelset import (
    Barcode,
    IntervalCosheaf,
    LineTriangulation,
    bar_homology,
    decompose,
    homology_from_barcodes,
    leray_barcodes,
    zigzag_of,
)
from .linalg import F2, QQ, Field, QuotientSpace, Subspace
from .maps import SimplicialMap, fiber
from .reeb import ReebCells, fiber_components, reeb_compare, reeb_space
from .simplicial import SimplicialComplex, betti_numbers, boundary_matrix, close_under_faces, homology
from .spectral import LeraySpectralSequence, spectral_sequence

__version__ = "0.1.0"
