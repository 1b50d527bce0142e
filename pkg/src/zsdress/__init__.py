"""Dressing-method soliton solutions over the classical Lie algebras."""
from .closed_form import (
    Example2Params,
    Example3Params,
    Example4Params,
    example2_eval,
    example3_eval,
    example4_delta_involution,
    example4_eval,
)
from .dressing import (
    DressedPotential,
    DressingState,
    SeedVectors,
    SingularPointError,
    asymptotic_data,
    degenerate_limit,
    double_dress_sl2,
    dress,
    dress_bd_rank1,
    dress_c_rank1,
    dress_rank_r,
    dress_sl_rank1,
    dressing_factor_eval,
)
from .fields import Grid, MatrixField
from .kernels import BACKEND
from .lie_algebra import (
    AlgebraBasis,
    AlgebraSeries,
    CartanElement,
    Root,
    ad_j_inverse,
    build_algebra,
    cartan_element,
    commutator,
    projector_p0,
    root_components,
    verify_cartan_weyl,
)
from .nlee import NWaveData, nls_residual, nls_sl2_residual, nwave_c2_components, nwave_residual
from .report import Check, VerificationReport
from .spectral import DispersionData, SpectralPair, c_factor, nls_dispersion, nwave_dispersion, seed_fas, \
    seed_fas_lambda_derivative

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "AlgebraBasis", "AlgebraSeries", "CartanElement", "Root", "ad_j_inverse", "build_algebra",
    "cartan_element", "commutator", "projector_p0", "root_components", "verify_cartan_weyl",
    "Check", "VerificationReport", "DispersionData", "SpectralPair", "c_factor", "nls_dispersion",
    "nwave_dispersion", "seed_fas", "seed_fas_lambda_derivative", "Grid", "MatrixField",
    "DressedPotential", "DressingState", "SeedVectors", "SingularPointError", "asymptotic_data",
    "degenerate_limit", "double_dress_sl2", "dress", "dress_bd_rank1", "dress_c_rank1", "dress_rank_r",
    "dress_sl_rank1", "dressing_factor_eval", "NWaveData", "nls_residual", "nls_sl2_residual",
    "nwave_c2_components", "nwave_residual", "Example2Params", "Example3Params", "Example4Params",
    "example2_eval", "example3_eval", "example4_delta_involution", "example4_eval",
]
