"""Generalized sampling: stable recovery of a function in an arbitrary basis
from finitely many of its Fourier samples."""

from .bases import BasisFamily, fourier_exponentials, haar_system, legendre
from .constants import (
    ConstantsReport,
    ThresholdQuery,
    constants_report,
    k_lower,
    k_tilde,
    k_upper,
    phi_bracket,
    psi_tilde,
    residual_norm,
)
from .numerics import DimensionError, DomainError, SingularSystemError
from .sections import NyquistError, SamplingScheme, build_section, build_square_section
from .solver import (
    ReconstructionResult,
    SampleVector,
    Signal,
    eval_reconstruction,
    solve_consistent,
    solve_uneven,
    synthesize_samples,
)

__all__ = [
    "BasisFamily",
    "ConstantsReport",
    "DimensionError",
    "DomainError",
    "NyquistError",
    "ReconstructionResult",
    "SampleVector",
    "SamplingScheme",
    "Signal",
    "SingularSystemError",
    "ThresholdQuery",
    "build_section",
    "build_square_section",
    "constants_report",
    "eval_reconstruction",
    "fourier_exponentials",
    "haar_system",
    "k_lower",
    "k_tilde",
    "k_upper",
    "legendre",
    "phi_bracket",
    "psi_tilde",
    "residual_norm",
    "solve_consistent",
    "solve_uneven",
    "synthesize_samples",
]
