"""LED MIMO link simulator and receiver bench.

Thin re-export of the compiled core: optical channel construction, drive
curve fitting, PAM utilities, the output-weight solver, the circulant
transform product, and the sweep/dump harness driven by config files.
"""

from ._core import (
    apply_nonlinearity,
    channel_csv,
    circulant_matvec,
    complexity,
    constellation_dump,
    detect,
    fit_nonlinearity,
    grid_channel,
    lambertian,
    pam_levels,
    ser_sweep,
    ser_sweep_csv,
    train_output_weights,
)

__all__ = [
    "apply_nonlinearity",
    "channel_csv",
    "circulant_matvec",
    "complexity",
    "constellation_dump",
    "detect",
    "fit_nonlinearity",
    "grid_channel",
    "lambertian",
    "pam_levels",
    "ser_sweep",
    "ser_sweep_csv",
    "train_output_weights",
]
