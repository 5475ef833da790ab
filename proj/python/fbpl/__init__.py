"""Filtered back-projection with a learnable frequency-domain filter."""

from ._core import (
    DivergenceError,
    GridSpec,
    ScanGeometry,
    SpectralFilter,
    ValidationError,
    abs_diff_stats,
    apply_filter,
    back_project,
    cupping_index,
    default_geometry,
    forward_project,
    frequency_of_bin,
    grad_check,
    gradient,
    line_profile,
    load_filter,
    load_image,
    load_sinogram,
    make_disc,
    make_filter,
    make_held_out,
    make_training_set,
    objective,
    ramlak_kernel,
    reconstruct,
    save_filter,
    save_image,
    save_sinogram,
    spectrum_distance,
    train,
    training_radius,
)

__all__ = [name for name in dir() if not name.startswith("_")]
