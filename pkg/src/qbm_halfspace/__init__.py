"""Harmonic atoms coupled to a scalar field above a dispersive dielectric half-space.

Late-time Gaussian covariances of the atom's internal oscillator and the
entanglement measures derived from them. Units: hbar = c = 1, frequencies in
units of the atom's physical frequency, lengths in units of its inverse.
"""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    DomainError,
    InsufficientDataError,
    NearPoleError,
    PoleError,
    QuadratureError,
    ScanError,
    UncertaintyViolationError,
)
from .medium import LorentzMedium, dielectric_atom_propagator, epsilon, plasma_frequency
from .field_greens import (
    Geometry,
    SommerfeldSpec,
    g_conductor,
    g_free,
    g_free_sommerfeld,
    g_medium,
)
from .atom_dynamics import (
    AtomArray,
    AtomParams,
    coupling_from_gamma,
    g_atom,
    g_atom_free,
    g_atom_matrix,
    gamma_from_coupling,
    order_reduce_coupling,
    schwinger_dyson_residual,
    tau_consistency,
)
from .covariance import (
    CovarianceMatrix,
    CovarianceResult,
    QuadratureSpec,
    covariance,
    covariance_matrix,
    v_perturbative,
    v_pp,
    v_xp,
    v_xx,
)
from .measures import (
    MeasureSet,
    detect_extremum,
    measures_from_covariance,
    mechanical_energy,
    purity,
    symplectic_eigenvalue,
    von_neumann,
)
from .fdr import (
    FdrReport,
    atom_fdr_residual,
    atom_im_identity_residual,
    fdr_report,
    field_fdr_residual,
)
from .scan_engine import ScanRequest, ScanResult, ScanRow, run_scan

