"""Physical parameters of the atom's internal oscillator and its dressed retarded propagator.

Only physical (renormalized) parameters appear here: mass M_A, frequency Omega_A, damping
gamma'_A and the order-reduced coupling g'_F, tied together by gamma'_A = g'_F**2/(8 pi M_A).
The free-field coincident divergence is already absorbed into Omega_A and gamma'_A, so the
only field input is the finite medium part of the Green's function.
"""

from dataclasses import dataclass, field
import math
import warnings

import numpy as np

from .errors import DomainError, NearPoleError, PoleError
from .field_greens import Geometry, SommerfeldSpec, g_free, g_medium

NEAR_POLE = 1e-14


def order_reduce_coupling(g_f, omega):
    """Physical coupling g'_F = g_F * Omega of the consistently order-reduced equation."""
    if not omega > 0:
        raise DomainError(f"frequency must be positive, got {omega}")
    return g_f * omega


def gamma_from_coupling(coupling, mass=1.0):
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    return coupling**2 / (8.0 * math.pi * mass)


def coupling_from_gamma(gamma, mass=1.0):
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    if gamma < 0:
        raise DomainError(f"damping must be >= 0, got {gamma}")
    return math.sqrt(8.0 * math.pi * mass * gamma)


def tau_consistency(omega_a, tau_a, omega, tau):
    """Check the bookkeeping identity Omega_A**2 tau_A == Omega**2 tau (rel. 1e-12)."""
    if min(omega_a, tau_a, omega, tau) <= 0:
        raise DomainError("all arguments must be positive")
    return abs(omega_a**2 * tau_a - omega**2 * tau) <= 1e-12 * omega**2 * tau


@dataclass(frozen=True)
class AtomParams:
    """Internal oscillator of a polarizable atom.

    Give either ``gamma`` or ``coupling`` (the other is derived); giving both requires
    them to satisfy gamma = coupling**2 / (8 pi mass).
    """

    gamma: float = None
    mass: float = 1.0
    omega_a: float = 1.0
    coupling: float = None

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not self.omega_a > 0:
            raise DomainError(f"omega_a must be positive, got {self.omega_a}")
        if self.gamma is None and self.coupling is None:
            raise DomainError("need gamma or coupling")
        if self.coupling is None:
            object.__setattr__(self, "coupling", coupling_from_gamma(self.gamma, self.mass))
        elif self.gamma is None:
            object.__setattr__(self, "gamma", gamma_from_coupling(self.coupling, self.mass))
        else:
            expected = gamma_from_coupling(self.coupling, self.mass)
            if abs(expected - self.gamma) > 1e-12 * max(abs(self.gamma), 1e-300):
                raise DomainError(
                    f"gamma={self.gamma} inconsistent with coupling={self.coupling} "
                    f"(expected gamma={expected})"
                )
        if self.gamma < 0:
            raise DomainError(f"damping must be >= 0, got {self.gamma}")
        if self.gamma >= self.omega_a:
            warnings.warn(f"gamma={self.gamma} >= omega_a: outside the underdamped regime",
                          stacklevel=3)


@dataclass(frozen=True)
class AtomArray:
    params: AtomParams
    positions: tuple = field(default_factory=tuple)

    def __post_init__(self):
        pos = tuple(tuple(float(c) for c in p) for p in self.positions)
        if not pos:
            raise DomainError("need at least one atom")
        if any(len(p) != 3 for p in pos):
            raise DomainError("positions must be 3-vectors")
        if any(p[2] <= 0 for p in pos):
            raise DomainError("all atoms must sit above the interface (z > 0)")
        if len(set(pos)) != len(pos):
            raise DomainError("atom positions must be pairwise distinct")
        object.__setattr__(self, "positions", pos)

    @property
    def n(self):
        return len(self.positions)

    def geometry(self, m, n):
        pm, pn = self.positions[m], self.positions[n]
        rho = math.hypot(pm[0] - pn[0], pm[1] - pn[1])
        return Geometry(pm[2], pn[2], rho)


def _bare_bracket(omega, params):
    """-omega**2 + Omega_A**2 - 2 i gamma omega (no medium)."""
    omega = np.asarray(omega, dtype=float)
    # factored form keeps relative accuracy next to the resonance
    return (params.omega_a - omega) * (params.omega_a + omega) - 2j * params.gamma * omega


def g_atom_free(omega, params):
    """Damped-oscillator propagator 1 / (M (-omega**2 + Omega**2 - 2 i gamma omega))."""
    d = _bare_bracket(omega, params)
    if np.any(d == 0):
        raise PoleError("undamped atom evaluated on resonance")
    out = 1.0 / (params.mass * d)
    return complex(out) if out.ndim == 0 else out


def dressed_propagator(omega, params, gm):
    """Dressed propagator from a precomputed medium Green's function ``gm`` (arrays ok)."""
    d = _bare_bracket(omega, params) - (params.coupling**2 / params.mass) * np.asarray(gm)
    small = np.abs(d) < NEAR_POLE
    if np.any(small):
        w = np.asarray(omega, dtype=float)
        bad = float(np.broadcast_to(w, d.shape)[small].flat[0])
        raise NearPoleError(f"dressed propagator near a pole at omega={bad}", omega=bad)
    out = 1.0 / (params.mass * d)
    return complex(out) if out.ndim == 0 else out


def g_atom(omega, params, medium, ell, spec=SommerfeldSpec()):
    """Retarded propagator of a single atom at height ``ell`` above the medium."""
    if not ell > 0:
        raise DomainError(f"height must be positive, got {ell}")
    gm = g_medium(omega, Geometry.coincident(ell), medium, spec)
    return dressed_propagator(omega, params, gm)


def field_green_matrix(omega, array, medium, spec=SommerfeldSpec()):
    """Off-diagonal full field Green's function and diagonal medium part, shape (..., N, N).

    The free coincident part of the diagonal is not included: it lives in the
    renormalized frequency and the damping term of the bare bracket.
    """
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    n = array.n
    out = np.zeros(w.shape + (n, n), dtype=complex)
    for m in range(n):
        for k in range(m, n):
            geom = array.geometry(m, k)
            val = g_medium(w, geom, medium, spec)
            if m != k:
                pm, pk = np.array(array.positions[m]), np.array(array.positions[k])
                val = val + g_free(w, float(np.linalg.norm(pm - pk)))
            out[..., m, k] = val
            out[..., k, m] = val
    return out if np.ndim(omega) else out[0]


def propagator_matrix(omega, array, field_matrix):
    """[M(-w**2 + Omega**2 - 2 i gamma w) I - g'**2 G_field]**-1 for a stack of frequencies."""
    p = array.params
    w = np.asarray(omega, dtype=float)
    eye = np.eye(array.n)
    diag = p.mass * _bare_bracket(w, p)
    bracket = diag[..., None, None] * eye - p.coupling**2 * field_matrix
    sv_min = np.linalg.svd(bracket, compute_uv=False)[..., -1]
    small = sv_min < NEAR_POLE * p.mass
    if np.any(small):
        bad = float(np.broadcast_to(w, small.shape)[small].flat[0])
        raise NearPoleError(f"propagator matrix singular at omega={bad}", omega=bad)
    return np.linalg.inv(bracket)


def g_atom_matrix(omega, array, medium, spec=SommerfeldSpec()):
    """N x N dressed propagator of identical atoms sharing the medium-modified field."""
    return propagator_matrix(omega, array, field_green_matrix(omega, array, medium, spec))


def schwinger_dyson_residual(omega, params, medium, ell, spec=SommerfeldSpec()):
    """Relative residual of G = G0 + g'**2 G G_M G0 (zero up to roundoff)."""
    gm = g_medium(omega, Geometry.coincident(ell), medium, spec)
    g = dressed_propagator(omega, params, gm)
    g0 = g_atom_free(omega, params)
    resid = abs(g - g0 - params.coupling**2 * g * gm * g0)
    return resid / abs(g)
