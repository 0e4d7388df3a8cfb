"""Python bindings for the scuw SC-FDE / UW DFT-s-OFDM waveform library."""

from ._scuw import (  # noqa: F401
    Numerology,
    ber_bound,
    circ_shift,
    circular_convolve,
    default_numerology,
    demap_hard,
    design_fd_window,
    design_rrc,
    dft,
    downsample_dft,
    downsample_time,
    golay_pair,
    idft,
    linear_convolve,
    map_bits,
    aligned_tx_offset,
    papr_db,
    run_link,
    sc_packet,
    sc_tx_eigenvalues,
    sc_modulate_block_dft,
    upsample_dft,
    upsample_time,
    uw_modulate_symbol,
    uw_w_modulate,
    validate_numerology,
    waveform_mse_db,
)

__version__ = "0.1.0"
