"""Tropical eigenspaces and the k -> infinity limit of Perron vectors of exp(kA).

Matrix entries and points may be ints, Fractions, decimal strings such as
"-2.5" or "7/3", or floats (read through their shortest decimal repr).
Exact results come back as fractions.Fraction. Node indices are 0-based.
"""

from . import _core
from ._core import (
    ConvergenceError,
    FloatRangeError,
    InputError,
    NumericalError,
    conjecture1,
    conjecture2,
    derive_seed,
    figure,
    figure_ids,
    geometric_schedule,
    hadamard_lemma_check,
    in_span,
    kleene_star,
    log_perron_eigenpair,
    max_cycle_mean,
    minplus_schur,
    normalized_trajectory,
    p_infinity,
    perron_float_oracle,
    project_onto_span,
    random_matrix,
    schur_candidates,
    spectral_data,
    translation_chain,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "FloatRangeError",
    "InputError",
    "NumericalError",
    "conjecture1",
    "conjecture2",
    "derive_seed",
    "figure",
    "figure_ids",
    "geometric_schedule",
    "hadamard_lemma_check",
    "in_span",
    "kleene_star",
    "log_perron_eigenpair",
    "max_cycle_mean",
    "minplus_schur",
    "normalized_trajectory",
    "p_infinity",
    "perron_float_oracle",
    "project_onto_span",
    "random_matrix",
    "schur_candidates",
    "spectral_data",
    "translation_chain",
]
