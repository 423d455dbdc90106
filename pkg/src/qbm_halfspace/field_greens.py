"""Retarded Green's functions of the scalar field above a half-space.

The plane-wave (Sommerfeld) integral over the transverse wavenumber k_rho is split at
the branch point k_rho = omega:

* propagating segment, k_rho in [0, omega]: with k_rho = omega sin(theta) the 1/k_z
  endpoint singularity cancels against the Jacobian; we integrate in u = cos(theta),
  i.e. in k_z / omega itself, where the phase exp(i k_z h) is uniformly oscillating.
* evanescent segment, k_rho > omega: k_z = i kappa and k_rho dk_rho / k_z = -i dkappa,
  so the integrand is the reflection coefficient times a real decaying exponential.
  The kappa tail is cut where exp(-kappa h) drops by ``evanescent_decade_cap`` decades.

Both roots k_z and K_z use the branch with non-negative imaginary part. In terms of
k_z the medium root is K_z = sqrt(omega**2 (eps - 1) + k_z**2) on both segments.

For rho = 0 the reflected integral is, in the k_z variable,
(i/4 pi) int R(k_z) exp(i k_z h) dk_z along i*inf -> 0 -> omega. In the quadrant
0 <= Re k_z <= omega, Im k_z >= 0 we have Im K_z**2 = omega**2 Im eps + 2 Re k_z Im k_z > 0
for a passive medium, so R is analytic there and the path can be moved to
k_z = omega + i kappa. That route has no oscillation at all,
exp(i omega h)/(4 pi) int_0^inf R(omega + i kappa) exp(-kappa h) dkappa, and is the
default for coincident points; the split route above remains the general one.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import j0

from .errors import DomainError
from .medium import epsilon
from .quadrature import integrate, split_breakpoints

FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class Geometry:
    """Source height ``z``, field height ``z_prime`` (both > 0) and transverse distance ``rho``."""

    z: float
    z_prime: float
    rho: float = 0.0

    def __post_init__(self):
        if not (self.z > 0 and self.z_prime > 0):
            raise DomainError(f"both points must lie in vacuum (z={self.z}, z'={self.z_prime})")
        if not self.rho >= 0:
            raise DomainError(f"rho must be >= 0, got {self.rho}")

    @classmethod
    def coincident(cls, ell):
        return cls(ell, ell, 0.0)

    @property
    def distance(self):
        return math.hypot(self.rho, self.z - self.z_prime)

    @property
    def image_distance(self):
        return math.hypot(self.rho, self.z + self.z_prime)

    @property
    def is_coincident(self):
        return self.rho == 0.0 and self.z == self.z_prime


@dataclass(frozen=True)
class SommerfeldSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-15
    evanescent_decade_cap: int = 16
    max_panels: int = 200000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.evanescent_decade_cap < 1:
            raise DomainError("evanescent_decade_cap must be >= 1")


def branch_sqrt(x):
    """Square root on the branch Im >= 0 (outgoing or decaying waves)."""
    s = np.sqrt(np.asarray(x, dtype=complex))
    return np.where(s.imag < 0, -s, s)


def vertical_wavenumber(omega, k_rho):
    """k_z = sqrt(omega**2 - k_rho**2), Im k_z >= 0."""
    return branch_sqrt(np.asarray(omega, dtype=float) ** 2 - np.asarray(k_rho, dtype=float) ** 2 + 0j)


def reflection_coefficient(omega, kz, medium):
    """Half-space reflection (k_z - K_z)/(k_z + K_z) as a function of k_z (broadcasts).

    Evaluated as -omega**2 chi / (k_z + K_z)**2, which avoids the cancellation in
    k_z - K_z when the reflection is weak.
    """
    chi = epsilon(medium, omega) - 1.0
    w2chi = np.asarray(omega) ** 2 * chi
    big_kz = branch_sqrt(w2chi + kz**2)
    return -w2chi / (kz + big_kz) ** 2


def g_free(omega, r):
    """Free retarded Green's function exp(i omega r) / (4 pi r)."""
    if not np.all(np.asarray(r) > 0):
        raise DomainError("free Green's function diverges at coincidence; the local part "
                          "is absorbed into the renormalized frequency and damping")
    out = np.exp(1j * np.asarray(omega) * r) / (FOUR_PI * np.asarray(r))
    return complex(out) if np.ndim(out) == 0 else out


def g_conductor(omega, ell):
    """Coincident perfect-conductor correction -exp(2 i omega ell) / (8 pi ell)."""
    if not ell > 0:
        raise DomainError(f"height must be positive, got {ell}")
    out = -np.exp(2j * np.asarray(omega) * ell) / (8.0 * math.pi * ell)
    return complex(out) if np.ndim(out) == 0 else out


def _conductor_image(omega, geom):
    rbar = geom.image_distance
    return -np.exp(1j * np.asarray(omega) * rbar) / (FOUR_PI * rbar)


def _sommerfeld(omegas, rho, h, medium, spec):
    """Plane-wave integral for positive ``omegas`` (1-D array); returns (values, errors).

    ``medium=None`` gives the free-space expansion (no reflection, vertical offset h).
    """
    omegas = np.asarray(omegas, dtype=float)
    if medium is None:
        coef = lambda w, kz: 1.0
    else:
        coef = lambda w, kz: reflection_coefficient(w, kz, medium)
    w_max = float(omegas.max())

    def propagating(u):
        kz = u[:, None] * omegas[None, :]
        val = coef(omegas[None, :], kz + 0j) * np.exp(1j * kz * h)
        if rho > 0:
            val = val * j0(rho * omegas[None, :] * np.sqrt(1.0 - u[:, None] ** 2))
        return val

    n_osc = w_max * (h + rho) / math.pi
    u_pts = np.linspace(0.0, 1.0, max(2, int(math.ceil(n_osc)) + 2))
    prop = integrate(propagating, u_pts, rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                     max_panels=spec.max_panels)

    kappa_max = spec.evanescent_decade_cap * math.log(10.0) / h

    def evanescent(kappa):
        kz = 1j * kappa[:, None] + 0 * omegas[None, :]
        val = coef(omegas[None, :], kz) * np.exp(-kappa[:, None] * h)
        if rho > 0:
            val = val * j0(rho * np.sqrt(omegas[None, :] ** 2 + kappa[:, None] ** 2))
        return val

    k_pts = [0.0, kappa_max]
    k_pts += list(np.geomspace(1e-3 * kappa_max, kappa_max, 10))
    if medium is not None:
        feat = np.abs(omegas) * np.sqrt(np.abs(epsilon(medium, omegas) - 1.0))
        k_pts += [float(x) for x in np.quantile(feat, [0.0, 0.5, 1.0]) if 0 < x < kappa_max]
    k_pts = split_breakpoints(k_pts, math.pi / rho if rho > 0 else None)
    evan = integrate(evanescent, k_pts, rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                     max_panels=spec.max_panels)

    values = (1j * omegas * prop.value + evan.value) / FOUR_PI
    errors = (omegas * prop.error + evan.error) / FOUR_PI
    return values, errors


def _deformed(omegas, h, medium, spec):
    """rho = 0 reflected integral along k_z = omega + i kappa; returns (values, errors)."""
    omegas = np.asarray(omegas, dtype=float)
    kappa_max = spec.evanescent_decade_cap * math.log(10.0) / h

    def fun(kappa):
        kz = omegas[None, :] + 1j * kappa[:, None]
        return reflection_coefficient(omegas[None, :], kz, medium) * np.exp(-kappa[:, None] * h)

    k_pts = [0.0, kappa_max] + list(np.geomspace(1e-4 * kappa_max, kappa_max, 12))
    feat = np.abs(omegas) * np.sqrt(np.abs(epsilon(medium, omegas) - 1.0))
    k_pts += [float(x) for x in np.quantile(feat, [0.0, 0.25, 0.5, 0.75, 1.0]) if 0 < x < kappa_max]
    res = integrate(fun, np.unique(k_pts), rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                    max_panels=spec.max_panels)
    phase = np.exp(1j * omegas * h) / FOUR_PI
    return phase * res.value, res.error / FOUR_PI


def _batched(omegas, rho, h, medium, spec, chunk=48, route="auto"):
    """Evaluate on |omega| in sorted chunks (similar oscillation per chunk), conj for omega < 0."""
    omegas = np.asarray(omegas, dtype=float)
    flat = omegas.ravel()
    mag = np.abs(flat)
    values = np.zeros(flat.shape, dtype=complex)
    errors = np.zeros(flat.shape)
    live = np.nonzero(mag > 0)[0]
    order = live[np.argsort(mag[live])]
    for start in range(0, order.size, chunk):
        idx = order[start:start + chunk]
        if medium is not None and rho == 0 and route in ("auto", "deformed"):
            v, e = _deformed(mag[idx], h, medium, spec)
        else:
            v, e = _sommerfeld(mag[idx], rho, h, medium, spec)
        values[idx] = v
        errors[idx] = e
    neg = flat < 0
    values[neg] = np.conj(values[neg])
    return values.reshape(omegas.shape), errors.reshape(omegas.shape)


def g_free_sommerfeld(omega, geom, spec=SommerfeldSpec()):
    """Free Green's function from its plane-wave expansion (oracle for the quadrature).

    Needs a nonzero vertical offset: the evanescent tail is cut using exp(-kappa |z - z'|).
    """
    dz = abs(geom.z - geom.z_prime)
    if dz == 0:
        raise DomainError("plane-wave expansion needs z != z' (vertical offset sets the tail decay)")
    if not np.all(np.asarray(omega) > 0):
        raise DomainError("omega must be positive")
    vals, _ = _batched(np.atleast_1d(omega), geom.rho, dz, None, spec)
    return complex(vals[0]) if np.ndim(omega) == 0 else vals


def g_medium(omega, geom, medium, spec=SommerfeldSpec(), return_error=False, route="auto"):
    """Reflected (medium) part of the field Green's function; finite at coincidence.

    Scalar or array ``omega``; satisfies g_medium(-omega) = conj(g_medium(omega)).
    ``route="split"`` forces the propagating/evanescent split even when rho = 0.
    """
    scalar = np.ndim(omega) == 0
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    if medium is None or medium.is_vacuum:
        vals, errs = np.zeros(w.shape, dtype=complex), np.zeros(w.shape)
    elif medium.conductor:
        vals, errs = _conductor_image(w, geom), np.zeros(w.shape)
    else:
        vals, errs = _batched(w, geom.rho, geom.z + geom.z_prime, medium, spec, route=route)
    if scalar:
        vals, errs = complex(vals[0]), float(errs[0])
    return (vals, errs) if return_error else vals
