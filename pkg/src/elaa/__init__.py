"""Radiative near-field channels, beams, and multiplexing for planar apertures.

Core API re-exported here; experiments and the CLI live in
:mod:`elaa.experiments` and :mod:`elaa.cli`.
"""

__version__ = "0.1.0"

from elaa.beams import (
    DepthOfFocus,
    FocusProfile,
    depth_of_focus,
    focus_gain_factor,
    fresnel_c,
    fresnel_s,
    gain_at_focus,
    gain_off_focus,
)
from elaa.field import ChannelVector, channel_vector, electric_field
from elaa.gain import (
    GainReport,
    alpha_total,
    farfield_gain,
    friis_gain,
    partial_property_gain,
    scaling_law_sweep,
    snr_mf,
    xi_total,
    zeta_bound,
)
from elaa.geometry import ArraySpec, SourcePoint, antenna_center, source_from_polar
from elaa.multiplexing import (
    FocalLadder,
    dof_limit,
    focal_ladder,
    mf_precoder,
    sum_se,
    waterfilling,
    zf_precoders,
)
from elaa.regions import (
    RegionReport,
    amplitude_distance,
    fraunhofer_array_distance,
    fraunhofer_distance,
    normalized_antenna_gain,
    normalized_array_gain,
    region_report,
    spherical_power_loss,
)

__all__ = [
    "ArraySpec",
    "SourcePoint",
    "ChannelVector",
    "DepthOfFocus",
    "FocalLadder",
    "FocusProfile",
    "GainReport",
    "RegionReport",
    "__version__",
    "alpha_total",
    "amplitude_distance",
    "antenna_center",
    "channel_vector",
    "depth_of_focus",
    "dof_limit",
    "electric_field",
    "farfield_gain",
    "focal_ladder",
    "focus_gain_factor",
    "fraunhofer_array_distance",
    "fraunhofer_distance",
    "fresnel_c",
    "fresnel_s",
    "friis_gain",
    "gain_at_focus",
    "gain_off_focus",
    "mf_precoder",
    "normalized_antenna_gain",
    "normalized_array_gain",
    "partial_property_gain",
    "region_report",
    "scaling_law_sweep",
    "snr_mf",
    "source_from_polar",
    "spherical_power_loss",
    "sum_se",
    "waterfilling",
    "xi_total",
    "zeta_bound",
    "zf_precoders",
]
