"""Effective degrees of freedom for weighted sums of variance components."""

from ._effdof import (
    AllZeroWeights,
    DegenerateComponents,
    DfEstimate,
    DfVariant,
    EffdofError,
    LengthMismatch,
    NumericalError,
    SimCell,
    SimConfig,
    ValidationError,
    __version__,
    boardman_df,
    corrected_df,
    design_effect,
    jackknife_df,
    kish_neff,
    mi_total_df,
    mi_total_variance,
    relvariance,
    run_cell,
    run_grid,
    sample_component_variances,
    satterthwaite_df,
    satterthwaite_df_harmonic,
    weighted_mean,
    weighted_variance,
    welch_corrected_df,
    welch_satterthwaite_df,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
