"""Modal transmissivities and decoy-state QKD rates for free-space links."""

from ._core import (
    QkdSystemParams,
    binary_entropy,
    coherence_length,
    decoy_bb84_rate,
    derive,
    fb_envelope,
    fb_turb_matrix,
    fb_vacuum_matrix,
    gaussian_pib_53,
    gaussian_pib_turb,
    lg_envelope,
    lg_hg_unitary,
    lg_mode_count,
    lg_turb_matrix,
    lg_vacuum_eta,
    matched_square_side,
    mode_rate,
    optimize_allocation,
    qkd_capacity,
    rates_csv,
    transmissivity_csv,
    validate_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
