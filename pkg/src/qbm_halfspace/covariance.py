"""Late-time covariances of the atom's internal oscillator.

    V_XX = Im int_0^inf (dw/pi) coth(beta w/2) G(w)
    V_PP = M**2 Im int_0^Lambda (dw/pi) w**2 coth(beta w/2) G(w)
    V_XP = 0

V_PP diverges logarithmically with the damping kernel, so it is integrated to a hard
cutoff Lambda that is reported with every result, together with the relative change
|V_PP(Lambda) - V_PP(Lambda/2)| / V_PP(Lambda). V_XX converges; its tail beyond Lambda is
added with the medium-free propagator (the medium correction there is O(gamma/Lambda**4)).

Frequency panels: a resonance zone around the bare frequency and around every zero of
Re of the dressed bracket (the surface shifts and narrows the peak), panels no wider
than pi/(4 ell) where the medium part oscillates like exp(2 i w ell), log-spaced panels
out to Lambda, plus a breakpoint at Lambda/2 for the cutoff diagnostic. Both covariances
come out of one pass over a shared node set, so the medium Green's function is computed
once per node.
"""

from dataclasses import dataclass, field
import logging
import math

import numpy as np
from scipy.optimize import brentq

from .atom_dynamics import AtomArray, dressed_propagator, field_green_matrix, g_atom_free, propagator_matrix
from .errors import DomainError
from .field_greens import Geometry, SommerfeldSpec, g_medium
from .quadrature import integrate, split_breakpoints

log = logging.getLogger(__name__)

CUTOFF_SENSITIVITY_LIMIT = 0.05


@dataclass(frozen=True)
class QuadratureSpec:
    cutoff: float = 100.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-13
    max_panels: int = 200000
    beta: float = math.inf
    sommerfeld: SommerfeldSpec = field(default_factory=lambda: SommerfeldSpec(rel_tol=1e-10))

    def __post_init__(self):
        if not self.cutoff > 10.0:
            raise DomainError(f"cutoff must exceed 10 (units of the atom frequency), got {self.cutoff}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise DomainError("tolerances must be positive")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive (math.inf for vacuum), got {self.beta}")


@dataclass(frozen=True)
class CovarianceResult:
    vxx: float
    vpp: float
    cutoff: float
    err_vxx: float
    err_vpp: float
    vpp_half_cutoff: float
    vxp: float = 0.0

    @property
    def cutoff_sensitivity(self):
        """|V_PP(Lambda) - V_PP(Lambda/2)| / V_PP(Lambda)."""
        return abs(self.vpp - self.vpp_half_cutoff) / abs(self.vpp)

    @property
    def cutoff_warning(self):
        return self.cutoff_sensitivity > CUTOFF_SENSITIVITY_LIMIT

    @property
    def err_estimate(self):
        return max(self.err_vxx, self.err_vpp)


@dataclass(frozen=True)
class CovarianceMatrix:
    vxx: np.ndarray
    vpp: np.ndarray
    vxp: np.ndarray
    cutoff: float
    err_estimate: float


def thermal_weight(omega, beta):
    """coth(beta w / 2) for w > 0; exactly 1 in the vacuum (beta = inf)."""
    omega = np.asarray(omega, dtype=float)
    if math.isinf(beta):
        return np.ones_like(omega)
    return 1.0 / np.tanh(0.5 * beta * omega)


def v_xp(*_args, n=None):
    """Late-time X-P covariance: identically zero (odd integrand); an N x N zero matrix if ``n``."""
    return 0.0 if n is None else np.zeros((n, n))


def _has_medium(medium, ell):
    return medium is not None and not medium.is_vacuum and math.isfinite(ell)


class _MediumCache:
    """Medium Green's function at one geometry, memoized on the frequency nodes."""

    def __init__(self, medium, ell, spec):
        self.medium = medium
        self.geom = Geometry.coincident(ell) if math.isfinite(ell) else None
        self.spec = spec
        self.active = _has_medium(medium, ell)
        self._store = {}

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        if not self.active:
            return np.zeros(omega.shape, dtype=complex)
        missing = np.array([w for w in np.unique(omega) if w not in self._store])
        if missing.size:
            vals = g_medium(missing, self.geom, self.medium, self.spec)
            self._store.update(zip(missing.tolist(), vals.tolist()))
        return np.array([self._store[w] for w in omega.tolist()], dtype=complex)


def _re_bracket(omega, params, cache):
    gm = cache(np.atleast_1d(omega))
    w = np.asarray(omega, dtype=float)
    return (params.omega_a - w) * (params.omega_a + w) - (params.coupling**2 / params.mass) * gm.real


def _resonances(params, cache, cutoff):
    """(center, half-width) of dressed peaks: zeros of Re bracket, width from Im bracket."""
    zones = [(params.omega_a, params.gamma)]
    if not cache.active:
        return zones
    w_hi = 2.0 * params.omega_a
    while _re_bracket(w_hi, params, cache)[0] > 0 and w_hi < cutoff:
        w_hi *= 2.0
    w_hi = min(w_hi, cutoff)
    grid = np.linspace(1e-6, w_hi, 257)
    vals = _re_bracket(grid, params, cache)
    f = lambda w: float(_re_bracket(w, params, cache)[0])
    for lo, hi, flo, fhi in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if flo == 0 or np.sign(flo) == np.sign(fhi):
            continue
        center = brentq(f, lo, hi, xtol=1e-14, rtol=1e-12)
        gm = cache(np.array([center]))[0]
        im_d = 2.0 * params.gamma * center + (params.coupling**2 / params.mass) * gm.imag
        zones.append((center, abs(im_d) / (2.0 * center)))
    return zones


def _breakpoints(params, ell_min, cache, cutoff, oscillating):
    width_floor = 1e-12
    pts = [0.0, cutoff / 2.0, cutoff]
    pts += list(np.geomspace(0.5, cutoff, 24))
    fine = []
    for center, half in _resonances(params, cache, cutoff):
        half = max(half, width_floor)
        lo, hi = max(center - 10.0 * half, 0.0), min(center + 10.0 * half, cutoff)
        zone = split_breakpoints([lo, hi], half / 4.0)
        fine.append(zone)
        # shoulders: geometric spacing away from the zone edges
        for k in range(1, 12):
            pts += [center - 10.0 * half * 2**k, center + 10.0 * half * 2**k]
    pts = [p for p in pts if 0.0 <= p <= cutoff]
    coarse = np.unique(np.concatenate([np.asarray(pts)] + fine))
    max_width = math.pi / (4.0 * ell_min) if oscillating else None
    return split_breakpoints(coarse, max_width)


def _integrate_zone(fun, pts, quad, lo, hi):
    sel = pts[(pts >= lo) & (pts <= hi)]
    sel = np.unique(np.concatenate([[lo], sel, [hi]]))
    return integrate(fun, sel, rel_tol=quad.rel_tol, abs_tol=quad.abs_tol,
                     max_panels=quad.max_panels)


def _free_tail_vxx(params, quad):
    """int_Lambda^inf (dw/pi) coth Im G0, via w = Lambda/t."""
    lam = quad.cutoff

    def fun(t):
        w = lam / t
        return np.imag(g_atom_free(w, params)) * thermal_weight(w, quad.beta) * lam / t**2 / math.pi

    return integrate(fun, [0.0, 0.5, 1.0], rel_tol=1e-10, abs_tol=1e-16)


def _integrate_covariances(fun, pts, params, quad):
    """Run the shared-node integration; ``fun`` returns (k, 2, c) = (V_XX, V_PP) components."""
    flat = lambda w: fun(w).reshape(np.size(w), -1)
    half = quad.cutoff / 2.0
    low = _integrate_zone(flat, pts, quad, 0.0, half)
    high = _integrate_zone(flat, pts, quad, half, quad.cutoff)
    tail = _free_tail_vxx(params, quad)
    c = low.value.size // 2
    value = (low.value + high.value).reshape(2, c)
    error = (low.error + high.error).reshape(2, c)
    return value, error, low.value.reshape(2, c)[1], tail


def _kernel_integrand(kernel, source, params, quad):
    m2 = params.mass**2

    def fun(omega):
        g = np.asarray(kernel(omega, source(omega)))
        weight = thermal_weight(omega, quad.beta) / math.pi
        im = np.imag(g).reshape(omega.size, -1) * weight[:, None]
        return np.stack([im, m2 * omega[:, None] ** 2 * im], axis=1)

    return fun


def _covariance_from(kernel, params, medium, ell, quad):
    """Single-atom driver; ``kernel(omega, gm)`` returns the dressed or perturbative propagator."""
    if not ell > 0:
        raise DomainError(f"height must be positive, got {ell}")
    cache = _MediumCache(medium, ell, quad.sommerfeld)
    pts = _breakpoints(params, ell, cache, quad.cutoff, cache.active)
    fun = _kernel_integrand(kernel, cache, params, quad)
    value, error, vpp_half, tail = _integrate_covariances(fun, pts, params, quad)
    result = CovarianceResult(
        vxx=float(value[0, 0] + tail.value), vpp=float(value[1, 0]), cutoff=quad.cutoff,
        err_vxx=float(error[0, 0] + tail.error), err_vpp=float(error[1, 0]),
        vpp_half_cutoff=float(vpp_half[0]),
    )
    if result.cutoff_warning:
        log.warning("V_PP cutoff sensitivity %.3g exceeds %.0f%% (Lambda=%g, shift %.4g)",
                    result.cutoff_sensitivity, 100 * CUTOFF_SENSITIVITY_LIMIT, quad.cutoff,
                    result.vpp - result.vpp_half_cutoff)
    return result


def covariance(params, medium, ell, quad=QuadratureSpec()):
    """V_XX and V_PP of one atom at height ``ell`` (``math.inf`` or vacuum medium: no surface)."""
    return _covariance_from(lambda w, gm: dressed_propagator(w, params, gm),
                            params, medium, ell, quad)


def v_xx(params, medium, ell, quad=QuadratureSpec()):
    return covariance(params, medium, ell, quad).vxx


def v_pp(params, medium, ell, quad=QuadratureSpec()):
    return covariance(params, medium, ell, quad).vpp


def v_perturbative(params, medium, ell, quad=QuadratureSpec()):
    """Lowest-order (g'**2) covariances: the propagator is replaced by G0 + g'**2 G0 G_M G0."""
    k = params.coupling**2

    def kernel(w, gm):
        g0 = g_atom_free(w, params)
        return g0 + k * g0 * gm * g0

    res = _covariance_from(kernel, params, medium, ell, quad)
    return res.vxx, res.vpp


def covariance_matrix(array: AtomArray, medium, quad=QuadratureSpec()):
    """N x N blocks V_XX, V_PP (and the zero V_XP) for identical atoms.

    Uses the same frequency panels as the single-atom path (set by the lowest atom, and by
    half the smallest separation for the free-space oscillation between atoms).
    """
    params = array.params
    n = array.n
    heights = [p[2] for p in array.positions]
    spec = quad.sommerfeld
    store = {}

    def field_at(omega):
        missing = np.array([w for w in np.unique(omega) if w not in store])
        if missing.size:
            mats = field_green_matrix(missing, array, medium, spec)
            store.update(zip(missing.tolist(), mats))
        return np.stack([store[w] for w in omega.tolist()])

    ell = min(heights)
    cache = _MediumCache(medium, ell, spec)
    scale = ell
    oscillating = cache.active
    if n > 1:
        pos = np.array(array.positions)
        dists = [np.linalg.norm(pos[i] - pos[j]) for i in range(n) for j in range(i)]
        scale = min(scale, min(dists) / 2.0) if oscillating else min(dists) / 2.0
        oscillating = True
    pts = _breakpoints(params, scale, cache, quad.cutoff, oscillating)
    fun = _kernel_integrand(lambda w, fm: propagator_matrix(w, array, fm), field_at, params, quad)
    value, error, _, tail = _integrate_covariances(fun, pts, params, quad)
    vxx = value[0].reshape(n, n) + tail.value * np.eye(n)
    vpp = value[1].reshape(n, n)
    return CovarianceMatrix(vxx=0.5 * (vxx + vxx.T), vpp=0.5 * (vpp + vpp.T),
                            vxp=np.zeros((n, n)), cutoff=quad.cutoff,
                            err_estimate=float(np.max(error)))
