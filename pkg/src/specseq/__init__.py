"""Exact spectral sequences of filtered complexes, double complexes and group extensions."""

from .rings import F2, GF, QQ, ZZ, Ring
from .linalg import (ExactMatrix, FgModulePresentation, Submodule, image_basis, intersect, kernel_basis,
                     preimage, smith_normal_form, subquotient)
from .complexes import BasedComplex, GradedModule, homology, poincare_series
from .filtered import (FilteredComplex, SpectralPage, boundaries_B, cycles_Z, edge_maps, extension_tower,
                       graded_homology, induced_differential, infinity_page, page, stabilization_index)
from .double import DoubleComplex, column_filtration, row_filtration, totalize
from .groups import (GroupModule, cochain_complex, cohomology_range, cyclic_group, dihedral_group,
                     group_cohomology, group_extension, inflation_rank, lhs_double_complex,
                     lhs_row_spectral_sequence, lhs_spectral_sequence, load_group, restriction_rank,
                     tensor_over_group)
from .formal import (FormalPage, check_target, diagonal_extensions, edge_injectivity_constraint,
                     forced_zero_scan, from_spectral_page, turn_page)
from .cellio import chain_complex_of, parse_semisimplicial, render_chart

__version__ = "0.1.0"

__all__ = [
    "F2",
    "GF",
    "QQ",
    "ZZ",
    "Ring",
    "ExactMatrix",
    "FgModulePresentation",
    "Submodule",
    "image_basis",
    "intersect",
    "kernel_basis",
    "preimage",
    "smith_normal_form",
    "subquotient",
    "BasedComplex",
    "GradedModule",
    "homology",
    "poincare_series",
    "FilteredComplex",
    "SpectralPage",
    "boundaries_B",
    "cycles_Z",
    "edge_maps",
    "extension_tower",
    "graded_homology",
    "induced_differential",
    "infinity_page",
    "page",
    "stabilization_index",
    "DoubleComplex",
    "column_filtration",
    "row_filtration",
    "totalize",
    "GroupModule",
    "cochain_complex",
    "cohomology_range",
    "cyclic_group",
    "dihedral_group",
    "group_cohomology",
    "group_extension",
    "inflation_rank",
    "lhs_double_complex",
    "lhs_row_spectral_sequence",
    "lhs_spectral_sequence",
    "load_group",
    "restriction_rank",
    "tensor_over_group",
    "FormalPage",
    "check_target",
    "diagonal_extensions",
    "edge_injectivity_constraint",
    "forced_zero_scan",
    "from_spectral_page",
    "turn_page",
    "chain_complex_of",
    "parse_semisimplicial",
    "render_chart",
]
