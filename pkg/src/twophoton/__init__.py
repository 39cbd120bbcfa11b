"""Two-photon absorption cross sections for classical, entangled, and
color-superposed photon pairs, from sum-over-states excited-state data."""

__version__ = "0.1.0"

from .amplitudes import (
    LinewidthParams,
    McsConfig,
    PhotonPairConfig,
    lineshape,
    resolvent_factor,
    s_amplitude,
    transition_tensor,
    w_amplitude,
    w_superposed,
)
from .averaging import (
    PolarizationScheme,
    bilinear_isotropic_average,
    quadrature_average,
    scheme_for_polarizations,
)
from .constants import (
    CODATA2018,
    PhysicalConstants,
    cm4s_to_gm,
    cross_section_prefactor,
    ev_to_hartree,
    fs_to_au_time,
    au_time_to_fs,
    hartree_to_ev,
)
from .engine import (
    CrossSectionResult,
    ScanGrid,
    bloch_scan,
    classical_linewidths,
    ctpa_cross_section,
    default_linewidths,
    etpa_cross_section,
    mcs_cross_section,
    spectrum,
    te_sweep,
)
from .errors import DomainError, MoleculeError
from .molecule import (
    ExcitedStateSet,
    load_molecule_file,
    parse_molecule_file,
    render_molecule_file,
    synthetic_ladder,
)

__all__ = [
    "CODATA2018",
    "CrossSectionResult",
    "DomainError",
    "ExcitedStateSet",
    "LinewidthParams",
    "McsConfig",
    "MoleculeError",
    "PhotonPairConfig",
    "PhysicalConstants",
    "PolarizationScheme",
    "ScanGrid",
    "bilinear_isotropic_average",
    "bloch_scan",
    "classical_linewidths",
    "cm4s_to_gm",
    "cross_section_prefactor",
    "ctpa_cross_section",
    "default_linewidths",
    "etpa_cross_section",
    "ev_to_hartree",
    "fs_to_au_time",
    "au_time_to_fs",
    "hartree_to_ev",
    "lineshape",
    "load_molecule_file",
    "mcs_cross_section",
    "parse_molecule_file",
    "quadrature_average",
    "render_molecule_file",
    "resolvent_factor",
    "s_amplitude",
    "scheme_for_polarizations",
    "spectrum",
    "synthetic_ladder",
    "te_sweep",
    "transition_tensor",
    "w_amplitude",
    "w_superposed",
]
