"""Exact computer algebra for chiral vertex algebras with a conformal
action and their reconstructions in even dimension."""

from .scalar import I, ONE, ZERO, Rational, Scalar, as_scalar
from .linalg import SolveResult, nullspace, solve_exact
from .graded import BlockMap, GradedSpace, WeightLabel, adjoint, compose
from .polyharm import (
    HarmonicBasis,
    PolyD,
    chiral_basis,
    equivariant_line_extension,
    euler,
    gegenbauer_h,
    harmonic_basis,
    harmonic_decompose,
    laplacian,
)
from .conformal import CLieElement, CLieRep, bracket, exp_neg_ad_zT, star, validate_rep
from .chiral import (
    LocalEndo,
    ModeTable,
    check_c1d_action,
    check_commutator_formula,
    check_locality_1d,
    check_pseudoderivation,
    check_translation,
    make_local_endo,
    mode_apply,
)
from .series import SeriesZ, residue_extract, restrict_to_line, taylor_shift
from .reconstruct import (
    MuDTable,
    assemble_series,
    check_covariance_D,
    check_locality_D,
    isotypic_crosscheck,
    pole_bound,
    reconstruct_d2,
    reconstruct_general,
)
from .models import build_gegenbauer4, build_heisenberg, build_tensor_2d

__all__ = [name for name in dir() if not name.startswith("_")]
