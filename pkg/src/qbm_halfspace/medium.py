"""Lorentz-oscillator model of a dispersive, absorptive dielectric.

The susceptibility is written with the shifted resonance ``w = sqrt(varpi**2 - gamma**2)``
of the damped lattice oscillators, i.e. ``chi = omega_p**2 / (w**2 - (omega + i gamma)**2)``.
An alternative form with the bare frequency ``varpi`` in place of ``w`` differs only at
O(gamma**2); this module uses ``w`` everywhere.

The microscopic coupling, mass and lattice spacing of the bound charges only enter
through the plasma frequency, so :class:`LorentzMedium` never stores them.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, PoleError


@dataclass(frozen=True)
class LorentzMedium:
    """Single-species Lorentz dielectric (all frequencies in units of the atom frequency).

    ``conductor=True`` selects the perfect-conductor idealization; the remaining
    fields are then ignored.
    """

    plasma_freq: float = 1.0
    resonance: float = 1.0
    damping: float = 0.1
    conductor: bool = False

    def __post_init__(self):
        if self.conductor:
            return
        if not self.plasma_freq >= 0:
            raise DomainError(f"plasma_freq must be >= 0, got {self.plasma_freq}")
        if not self.resonance > 0:
            raise DomainError(f"resonance must be > 0, got {self.resonance}")
        if not self.damping >= 0:
            raise DomainError(f"damping must be >= 0, got {self.damping}")

    @classmethod
    def perfect_conductor(cls):
        return cls(conductor=True)

    @classmethod
    def vacuum(cls):
        return cls(plasma_freq=0.0)

    @property
    def is_vacuum(self):
        return not self.conductor and self.plasma_freq == 0.0

    def scaled(self, susceptibility_factor):
        """Copy with omega_p**2 multiplied by ``susceptibility_factor``."""
        return LorentzMedium(
            plasma_freq=self.plasma_freq * math.sqrt(susceptibility_factor),
            resonance=self.resonance,
            damping=self.damping,
        )


def plasma_frequency(g_m, m, a):
    """omega_p = sqrt(g_m**2 / (m a**3)) for a cubic lattice of spacing ``a``."""
    if not m > 0 or not a > 0:
        raise DomainError(f"mass and lattice spacing must be positive (m={m}, a={a})")
    return math.sqrt(g_m**2 / (m * a**3))


def dielectric_atom_propagator(medium, omega):
    """Mass-normalized retarded propagator 1 / (w**2 - (omega + i gamma)**2).

    Accepts scalars or arrays. Raises :class:`PoleError` when evaluated exactly on the
    undamped resonance.
    """
    if medium.conductor:
        raise DomainError("the perfect conductor has no finite susceptibility")
    omega = np.asarray(omega, dtype=float)
    denom = medium.resonance**2 - (omega + 1j * medium.damping) ** 2
    if np.any(denom == 0):
        raise PoleError(f"undamped Lorentz resonance hit at omega={medium.resonance}")
    out = 1.0 / denom
    return complex(out) if out.ndim == 0 else out


def epsilon(medium, omega):
    """Relative permittivity eps(omega) = 1 + omega_p**2 * propagator(omega), real omega."""
    if medium.conductor:
        raise DomainError("eps is infinite for the perfect conductor; use g_conductor")
    omega = np.asarray(omega, dtype=float)
    if medium.plasma_freq == 0.0:
        out = np.ones_like(omega, dtype=complex)
        return complex(out) if out.ndim == 0 else out
    out = 1.0 + medium.plasma_freq**2 * np.asarray(dielectric_atom_propagator(medium, omega))
    return complex(out) if out.ndim == 0 else out
