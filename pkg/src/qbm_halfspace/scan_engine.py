"""Parameter sweeps over atom-surface distance or damping.

Each row is an independent covariance evaluation followed by the measures, so rows
can go to a process pool; results are always returned in grid order. Failures stay
inside their row.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
import hashlib
import json
import math

from .atom_dynamics import AtomParams
from .covariance import QuadratureSpec, covariance
from .errors import DomainError, QbmError, ScanError
from .measures import measures_from_covariance
from .medium import LorentzMedium

AXES = ("distance", "damping")
MEASURES = ("purity", "svn", "rs", "energy", "vxx", "vpp")
DEFAULT_GAMMAS = (0.05, 0.15, 0.25, 0.35, 0.45)


@dataclass(frozen=True)
class ScanRequest:
    """One sweep. ``z`` is ignored on a distance axis and ``gamma`` on a damping axis."""

    axis: str
    grid: tuple
    gamma: float = None
    z: float = math.inf
    medium: LorentzMedium = None
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    mass: float = 1.0
    omega_a: float = 1.0
    measures: tuple = MEASURES

    def __post_init__(self):
        grid = tuple(float(g) for g in self.grid)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "measures", tuple(self.measures))
        if self.axis not in AXES:
            raise DomainError(f"axis must be one of {AXES}, got {self.axis!r}")
        if len(grid) < 2:
            raise DomainError("scan grid needs at least two points")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise DomainError("scan grid must be strictly increasing")
        if self.axis == "distance":
            if grid[0] <= 0:
                raise DomainError("distance grid values must be positive")
            if self.gamma is None:
                raise DomainError("a distance scan needs a fixed gamma")
        elif not self.z > 0:
            raise DomainError(f"fixed distance must be positive, got {self.z}")
        unknown = set(self.measures) - set(MEASURES)
        if unknown:
            raise DomainError(f"unknown measures {sorted(unknown)}")

    def point(self, value):
        """(AtomParams, height) for one grid value."""
        gamma, z = (self.gamma, value) if self.axis == "distance" else (value, self.z)
        return AtomParams(gamma=gamma, mass=self.mass, omega_a=self.omega_a), z


@dataclass(frozen=True)
class ScanRow:
    value: float
    vxx: float = math.nan
    vpp: float = math.nan
    purity: float = math.nan
    nu: float = math.nan
    rs: float = math.nan
    svn: float = math.nan
    energy: float = math.nan
    cutoff: float = math.nan
    err_estimate: float = math.nan
    cutoff_sensitivity: float = math.nan
    error: str = ""

    @property
    def ok(self):
        return not self.error


@dataclass
class ScanResult:
    request: ScanRequest
    rows: list
    provenance: dict

    def column(self, name):
        return [getattr(r, name) for r in self.rows]

    def series(self, name):
        """(grid value, measure) pairs of the successful rows."""
        return [(r.value, getattr(r, name)) for r in self.rows if r.ok]


def _canonical(obj):
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _canonical(v) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    return obj


def config_hash(mapping):
    """Short SHA-256 of a canonical JSON rendering (floats by repr, keys sorted)."""
    blob = json.dumps(_canonical(mapping), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def evaluate_row(request, value):
    """Covariances and measures at one grid value; physics errors are stored in the row."""
    try:
        params, z = request.point(value)
        res = covariance(params, request.medium, z, request.quad)
        ms = measures_from_covariance(res.vxx, res.vpp, params)
    except QbmError as exc:
        return ScanRow(value=value, error=f"{type(exc).__name__}: {exc}")
    return ScanRow(
        value=value, vxx=res.vxx, vpp=res.vpp, purity=ms.purity, nu=ms.nu, rs=ms.rs,
        svn=ms.svn, energy=ms.energy, cutoff=res.cutoff, err_estimate=res.err_estimate,
        cutoff_sensitivity=res.cutoff_sensitivity,
    )


def _row_task(args):
    return evaluate_row(*args)


def run_scan(request, threads=1):
    """Evaluate every grid point; ``threads=1`` runs in-process (bitwise reproducible)."""
    from . import __version__

    tasks = [(request, v) for v in request.grid]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(_row_task, tasks))
    else:
        rows = [_row_task(t) for t in tasks]
    if not any(r.ok for r in rows):
        raise ScanError(f"all {len(rows)} scan rows failed; first: {rows[0].error}")
    provenance = {"config_hash": config_hash(asdict(request)), "version": __version__}
    return ScanResult(request=request, rows=rows, provenance=provenance)
