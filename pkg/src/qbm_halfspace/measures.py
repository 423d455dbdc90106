"""Single-mode Gaussian-state measures built from the late-time covariances.

With V_XP = 0 the symplectic eigenvalue is nu = sqrt(V_XX V_PP); purity, the
Robertson-Schroedinger function and the von Neumann entropy all follow from nu.
"""

from dataclasses import dataclass
import math
import warnings

from .errors import DomainError, InsufficientDataError, UncertaintyViolationError

UNCERTAINTY_TOL = 1e-10
PURITY_CLAMP_TOL = 1e-8


def _check_det(vxx, vpp):
    if not (vxx > 0 and vpp > 0):
        raise DomainError(f"variances must be positive (vxx={vxx}, vpp={vpp})")
    det = vxx * vpp
    if det < 0.25 - UNCERTAINTY_TOL:
        raise UncertaintyViolationError(
            f"vxx*vpp = {det:.12g} < 1/4: covariances violate the uncertainty relation"
        )
    return det


def symplectic_eigenvalue(vxx, vpp):
    return math.sqrt(_check_det(vxx, vpp))


def purity(vxx, vpp):
    """Tr rho**2 = 1 / (2 sqrt(vxx vpp)), clamped to 1 inside the noise tolerance."""
    mu = 1.0 / (2.0 * math.sqrt(_check_det(vxx, vpp)))
    if mu > 1.0:
        if mu > 1.0 + PURITY_CLAMP_TOL:
            warnings.warn(f"purity {mu:.12g} exceeds 1 beyond the clamp tolerance; clamping",
                          stacklevel=2)
        mu = 1.0
    return mu


def von_neumann(nu):
    """(nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2); zero for a pure state."""
    if not nu >= 0.5:
        raise DomainError(f"symplectic eigenvalue must be >= 1/2, got {nu}")
    lo = nu - 0.5
    tail = lo * math.log(lo) if lo > 0 else 0.0
    return (nu + 0.5) * math.log(nu + 0.5) - tail


def mechanical_energy(vxx, vpp, params):
    """Mean oscillator energy vpp / (2M) + M Omega**2 vxx / 2."""
    if not (vxx > 0 and vpp > 0):
        raise DomainError(f"variances must be positive (vxx={vxx}, vpp={vpp})")
    m, w = params.mass, params.omega_a
    return vpp / (2.0 * m) + 0.5 * m * w**2 * vxx


@dataclass(frozen=True)
class MeasureSet:
    purity: float
    nu: float
    rs: float
    svn: float
    energy: float

    def as_dict(self):
        return {"purity": self.purity, "nu": self.nu, "rs": self.rs, "svn": self.svn,
                "energy": self.energy}


def measures_from_covariance(vxx, vpp, params):
    """All measures at one parameter point; nu is clamped to 1/2 together with the purity."""
    det = _check_det(vxx, vpp)
    nu = max(math.sqrt(det), 0.5)
    return MeasureSet(
        purity=1.0 / (2.0 * nu),
        nu=nu,
        rs=nu * nu,
        svn=von_neumann(nu),
        energy=mechanical_energy(vxx, vpp, params),
    )


def detect_extremum(scan):
    """Interior local extrema of a sorted (z, value) scan from sign changes of first differences.

    Returns a list of (z, "min" | "max"). Flat steps inherit the sign of the previous step.
    """
    pts = list(scan)
    if len(pts) < 5:
        raise InsufficientDataError(f"need at least 5 scan points, got {len(pts)}")
    zs = [float(p[0]) for p in pts]
    if any(b <= a for a, b in zip(zs, zs[1:])):
        raise DomainError("scan must be sorted by strictly increasing z")
    vals = [float(p[1]) for p in pts]
    signs = []
    for a, b in zip(vals, vals[1:]):
        d = b - a
        signs.append(1 if d > 0 else -1 if d < 0 else (signs[-1] if signs else 0))
    out = []
    for i in range(1, len(signs)):
        if signs[i - 1] > 0 and signs[i] < 0:
            out.append((zs[i], "max"))
        elif signs[i - 1] < 0 and signs[i] > 0:
            out.append((zs[i], "min"))
    return out
