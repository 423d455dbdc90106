"""Independent reference implementations used only by the tests.

They share no code with the package: scipy's QUADPACK instead of the package's panel
engine, and different integration variables.
"""

import math
import warnings

import numpy as np
from scipy import integrate
from scipy.special import j0


def _cquad(f, a, b, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return _cquad_raw(f, a, b, **kw)


def _cquad_raw(f, a, b, **kw):
    re = integrate.quad(lambda x: f(x).real, a, b, limit=800, epsabs=1e-15, epsrel=1e-12, **kw)[0]
    im = integrate.quad(lambda x: f(x).imag, a, b, limit=800, epsabs=1e-15, epsrel=1e-12, **kw)[0]
    return re + 1j * im


def eps_lorentz(w, wp, ws, gs):
    return 1 + wp**2 / (ws**2 - (w + 1j * gs) ** 2)


def g_medium_krho(w, z, zp, rho, wp, ws, gs, t_max=None):
    """(i/4pi) int k dk/k_z R J0(k rho) exp(i k_z h) in k_rho itself.

    Propagating part with k_rho = w sin(theta); evanescent part with k_rho = w cosh(t).
    """
    h = z + zp
    eps = eps_lorentz(w, wp, ws, gs)

    def refl(kz, krho):
        big = np.sqrt(w * w * eps - krho * krho + 0j)
        if big.imag < 0:
            big = -big
        return (kz - big) / (kz + big)

    def prop(theta):
        kr, kz = w * math.sin(theta), w * math.cos(theta)
        return w * math.sin(theta) * refl(kz, kr) * j0(kr * rho) * np.exp(1j * kz * h)

    def evan(t):
        kr, kz = w * math.cosh(t), 1j * w * math.sinh(t)
        return -1j * w * math.cosh(t) * refl(kz, kr) * j0(kr * rho) * np.exp(1j * kz * h)

    if t_max is None:
        t_max = math.asinh(40.0 / (w * h))
    return 1j / (4 * math.pi) * (_cquad(prop, 0, math.pi / 2) + _cquad(evan, 0, t_max))


def dense_covariance_conductor(gamma, ell, cutoff, mass=1.0, omega_a=1.0, n=2**20):
    """V_XX and V_PP for a single atom above a perfect conductor (vacuum), by dense
    trapezoid sums with one Richardson step, plus a QUADPACK tail for V_XX.

    ``ell=math.inf`` drops the surface."""
    coupling2 = 8 * math.pi * mass * gamma

    def im_g(w):
        gm = 0.0 if math.isinf(ell) else -np.exp(2j * w * ell) / (8 * math.pi * ell)
        d = omega_a**2 - w * w - 2j * gamma * w - coupling2 / mass * gm
        return np.imag(1.0 / (mass * d))

    def trap(f, m):
        x = np.linspace(0.0, cutoff, m + 1)
        y = f(x)
        return (cutoff / m) * (y.sum() - 0.5 * (y[0] + y[-1]))

    def rich(f):
        t1, t2 = trap(f, n // 2), trap(f, n)
        return (4 * t2 - t1) / 3

    vxx = rich(lambda w: im_g(w) / math.pi)
    vpp = rich(lambda w: mass**2 * w * w * im_g(w) / math.pi)

    def free_tail(w):
        return (1.0 / (mass * (omega_a**2 - w * w - 2j * gamma * w))).imag / math.pi

    vxx += integrate.quad(free_tail, cutoff, np.inf, epsabs=1e-16, epsrel=1e-12)[0]
    return vxx, vpp
