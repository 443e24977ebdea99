"""Polarization entanglement seen through tilted polarizers and multi-mode detection."""
from .chsh import (
    TSIRELSON,
    CHSHSettings,
    Extremum,
    beta_optimal,
    chsh_operator,
    chsh_value,
    closed_form_b,
    degradation_curve,
    optimize_settings,
)
from .errors import ConfigurationError, DomainError, NormalizationError, SingularGeometryError
from .modes import Direction, LocalFrame, ModeSet, cap_grid, local_frame
from .onephoton import effective_density, scatter_single
from .polarizer import Polarizer, jones_matrix, orthogonality_angle, state_overlap, w_matrix
from .scatter import ScatterModel, amplitude_block
from .twophoton import BellInitial, bell_density, effective_density_2, momentum_mixture, scatter_pair, tilt_mixture

__all__ = [
    "TSIRELSON",
    "BellInitial",
    "CHSHSettings",
    "ConfigurationError",
    "Direction",
    "DomainError",
    "Extremum",
    "LocalFrame",
    "ModeSet",
    "NormalizationError",
    "Polarizer",
    "ScatterModel",
    "SingularGeometryError",
    "amplitude_block",
    "bell_density",
    "beta_optimal",
    "cap_grid",
    "chsh_operator",
    "chsh_value",
    "closed_form_b",
    "degradation_curve",
    "effective_density",
    "effective_density_2",
    "jones_matrix",
    "local_frame",
    "momentum_mixture",
    "optimize_settings",
    "orthogonality_angle",
    "scatter_pair",
    "scatter_single",
    "state_overlap",
    "tilt_mixture",
    "w_matrix",
]
