"""beamforge: closed-form steady states of elastically coupled
extensible double-beam systems, with residual verification and a
brute-force Galerkin cross-check."""

from .bimodal import (
    BimodalInvariants,
    CircleEllipseSolutions,
    bstar_pairs,
    compute_invariants,
    enumerate_general_bimodal,
    solve_circle_ellipse,
)
from .convert import ConversionDiagnostics, PhysicalParams, dimensionless_params
from .core import (
    CubicReport,
    ModalSolution,
    Params,
    ResidualReport,
    axial_coefficients,
    cubic_check,
    is_ee,
    modal_residual,
)
from .ee_families import EEFamily, ee_family, enumerate_ee_families, sample_family
from .errors import ValidationError, VerificationError
from .modesets import (
    ModeSetPartition,
    dirichlet_mode_count,
    ee_bimodal_membership,
    ee_trimodal_membership,
    effective_modes,
    required_k,
)
from .oracle import MatchReport, OracleResult, galerkin_solve, match_against
from .single_beam import SingleBeamSolutionSet, enumerate_foundation, enumerate_plain
from .spectrum import Spectrum
from .unimodal import UAmplitudeSet, enumerate_unimodal, u_amplitudes

__version__ = "0.1.0"

__all__ = [
    "BimodalInvariants",
    "CircleEllipseSolutions",
    "ConversionDiagnostics",
    "CubicReport",
    "EEFamily",
    "MatchReport",
    "ModalSolution",
    "ModeSetPartition",
    "OracleResult",
    "Params",
    "PhysicalParams",
    "ResidualReport",
    "SingleBeamSolutionSet",
    "Spectrum",
    "UAmplitudeSet",
    "ValidationError",
    "VerificationError",
    "axial_coefficients",
    "bstar_pairs",
    "compute_invariants",
    "cubic_check",
    "dimensionless_params",
    "dirichlet_mode_count",
    "ee_bimodal_membership",
    "ee_family",
    "ee_trimodal_membership",
    "effective_modes",
    "enumerate_ee_families",
    "enumerate_foundation",
    "enumerate_general_bimodal",
    "enumerate_plain",
    "enumerate_unimodal",
    "galerkin_solve",
    "is_ee",
    "match_against",
    "modal_residual",
    "required_k",
    "sample_family",
    "solve_circle_ellipse",
    "u_amplitudes",
]
