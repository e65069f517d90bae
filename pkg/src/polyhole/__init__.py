"""Exact tools for lattice polytopes: facets, lattice points, holes of the
graded semigroup, normality, very ampleness and toric Gröbner bases."""
from .families import (
    PhdSpec,
    build_expected_hrep,
    build_f0_configuration,
    build_ogata_p2,
    build_phd,
    build_qk,
    expected_holes,
)
from .linalg import (
    IntMatrix,
    hermite_normal_form,
    is_totally_unimodular,
    is_unimodular_simplex,
    smith_normal_form,
)
from .polytope import HRep, Halfspace, LatticePolytope, contains, facet_enumeration, lattice_points
from .report import TheoremReport, run_theorem_report
from .semigroup import (
    GradedSemigroup,
    Verdict,
    certify_very_ample,
    enumerate_holes,
    hilbert_basis,
    is_k_normal,
    is_member,
    is_normal,
)

__version__ = "0.1.0"

__all__ = [
    "PhdSpec",
    "build_expected_hrep",
    "build_f0_configuration",
    "build_ogata_p2",
    "build_phd",
    "build_qk",
    "expected_holes",
    "IntMatrix",
    "hermite_normal_form",
    "is_totally_unimodular",
    "is_unimodular_simplex",
    "smith_normal_form",
    "HRep",
    "Halfspace",
    "LatticePolytope",
    "contains",
    "facet_enumeration",
    "lattice_points",
    "TheoremReport",
    "run_theorem_report",
    "GradedSemigroup",
    "Verdict",
    "certify_very_ample",
    "enumerate_holes",
    "hilbert_basis",
    "is_k_normal",
    "is_member",
    "is_normal",
]
