"""Fluctuation-dissipation checks for the consistently order-reduced atom (no medium).

The noise (Hadamard) side is assembled from the free-field mode sum, with occupation
numbers from ``expm1``; the dissipation side uses coth(beta omega / 2) times the
imaginary part of the retarded function. The two constructions share no code, so
agreement is a real check rather than a tautology.

In negative-control mode the noise kernel keeps the un-reduced weight, an extra
factor omega**2 / Omega**2, which is what an inconsistent reduction produces.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .atom_dynamics import g_atom_free

FIELD_TOL = 1e-12
ATOM_TOL = 1e-12
FDR_TOL = 1e-10


def default_grid():
    return 0.05 * np.arange(1, 201)


def _occupation(omega, beta):
    if math.isinf(beta):
        return 0.0
    return 1.0 / math.expm1(beta * omega)


def _coth_half(omega, beta):
    if math.isinf(beta):
        return 1.0
    return 1.0 / math.tanh(0.5 * beta * omega)


def _mode_density(omega):
    """Free-field modes per unit frequency and volume, omega**2 / (2 pi**2)."""
    return omega * omega / (2.0 * math.pi**2)


def field_hadamard(omega, beta):
    """Coincident free-field Hadamard function from the mode sum with thermal occupation."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    per_mode = math.pi * (1.0 + 2.0 * _occupation(omega, beta)) / (2.0 * omega)
    return _mode_density(omega) * per_mode


def field_im_retarded(omega):
    """Coincident spectral density of the free scalar field, omega / (4 pi)."""
    return omega / (4.0 * math.pi)


def field_fdr_residual(omega, beta):
    """Relative |G_H,0 - coth(beta w/2) Im G_R,0| for the free field."""
    rhs = _coth_half(omega, beta) * field_im_retarded(omega)
    return abs(field_hadamard(omega, beta) - rhs) / abs(rhs)


def atom_im_identity_residual(omega, params):
    """Relative |Im G - |G|**2 2 M gamma omega| for the unbounded-space dressed propagator."""
    g = g_atom_free(omega, params)
    rhs = abs(g) ** 2 * 2.0 * params.mass * params.gamma * omega
    return abs(g.imag - rhs) / abs(g.imag)


def atom_fdr_residual(omega, beta, params, inconsistent=False):
    """Relative |g'**2 |G|**2 G_H,0 - coth(beta w/2) Im G| for the atom.

    ``inconsistent=True`` builds the noise with the un-reduced weight omega**2/Omega**2.
    """
    g = g_atom_free(omega, params)
    noise = params.coupling**2 * abs(g) ** 2 * field_hadamard(omega, beta)
    if inconsistent:
        noise *= (omega / params.omega_a) ** 2
    rhs = _coth_half(omega, beta) * g.imag
    return abs(noise - rhs) / abs(rhs)


@dataclass
class FdrReport:
    omega_grid: list
    residual_field: list
    residual_atom: list
    residual_fdr: list
    beta: float = math.inf
    inconsistent: bool = False
    max_residual: float = field(init=False)

    def __post_init__(self):
        self.max_residual = max(max(self.residual_field), max(self.residual_atom),
                                max(self.residual_fdr))

    @property
    def passed(self):
        return (max(self.residual_field) <= FIELD_TOL and max(self.residual_atom) <= ATOM_TOL
                and max(self.residual_fdr) <= FDR_TOL)


def fdr_report(params, beta=math.inf, inconsistent=False, grid=None):
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    ws = [float(w) for w in grid]
    return FdrReport(
        omega_grid=ws,
        residual_field=[field_fdr_residual(w, beta) for w in ws],
        residual_atom=[atom_im_identity_residual(w, params) for w in ws],
        residual_fdr=[atom_fdr_residual(w, beta, params, inconsistent) for w in ws],
        beta=beta,
        inconsistent=inconsistent,
    )
