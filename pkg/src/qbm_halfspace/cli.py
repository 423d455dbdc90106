"""Command-line front end: ``qbm-halfspace {greens,measures,scan,fdr-check}``.

Configuration is a flat ``key = value`` map (file via --config, overrides via --set).
Exit codes: 0 success, 1 physics-check failure, 2 configuration error.
"""

import argparse
import csv
import io
import logging
import math
import sys

import numpy as np

from . import __version__
from .atom_dynamics import AtomParams
from .covariance import QuadratureSpec, covariance
from .errors import ConfigError, QbmError
from .fdr import fdr_report
from .field_greens import Geometry, SommerfeldSpec, g_free, g_medium
from .measures import measures_from_covariance
from .medium import LorentzMedium
from .scan_engine import DEFAULT_GAMMAS, ScanRequest, config_hash, run_scan

DEFAULTS = {
    "medium.conductor": "false",
    "medium.omega_p": "1.0",
    "medium.w_sigma": "1.0",
    "medium.gamma_sigma": "0.1",
    "medium.scale": "1.0",
    "atom.gamma": "0.05",
    "atom.mass": "1.0",
    "atom.omega_a": "1.0",
    "geometry.z": "1.0",
    "geometry.z_prime": "",
    "geometry.rho": "0.0",
    "quad.cutoff": "100",
    "quad.rel_tol": "1e-8",
    "quad.abs_tol": "1e-13",
    "quad.evanescent_decades": "16",
    "quad.beta": "inf",
    "scan.axis": "distance",
    "scan.min": "0.02",
    "scan.max": "10",
    "scan.n": "40",
    "scan.spacing": "log",
    "scan.values": "",
}
TRUE, FALSE = ("true", "yes", "1", "on"), ("false", "no", "0", "off")

MEASURE_COLUMNS = ["vxx", "vpp", "purity", "nu", "rs", "svn", "energy", "cutoff",
                   "err_estimate", "cutoff_sensitivity"]
SCAN_COLUMNS = ["axis_value"] + MEASURE_COLUMNS + ["error"]
GREENS_COLUMNS = ["omega", "re_g_free", "im_g_free", "re_g_medium", "im_g_medium"]
FDR_COLUMNS = ["omega", "residual_field", "residual_atom", "residual_fdr"]


# ---------------------------------------------------------------- config

def parse_config_text(text, source="<config>"):
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def build_config(config_path=None, overrides=()):
    cfg = dict(DEFAULTS)
    merged = {}
    if config_path:
        with open(config_path) as fh:
            merged.update(parse_config_text(fh.read(), config_path))
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}", key=item)
        key, value = (s.strip() for s in item.split("=", 1))
        merged[key] = value
    for key in merged:
        if key not in DEFAULTS:
            raise ConfigError(f"unknown config key {key!r}", key=key)
    cfg.update(merged)
    return cfg


def get_float(cfg, key):
    text = cfg[key].strip().lower()
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {cfg[key]!r}", key=key) from None
    if math.isnan(value):
        raise ConfigError(f"{key}: nan is not allowed", key=key)
    return value


def get_int(cfg, key):
    try:
        return int(cfg[key])
    except ValueError:
        raise ConfigError(f"{key}: not an integer: {cfg[key]!r}", key=key) from None


def get_bool(cfg, key):
    text = cfg[key].strip().lower()
    if text in TRUE:
        return True
    if text in FALSE:
        return False
    raise ConfigError(f"{key}: expected true/false, got {cfg[key]!r}", key=key)


def medium_from(cfg):
    """Lorentz medium (omega_p = 0 is vacuum) or the perfect conductor."""
    if get_bool(cfg, "medium.conductor"):
        return LorentzMedium.perfect_conductor()
    try:
        med = LorentzMedium(get_float(cfg, "medium.omega_p"), get_float(cfg, "medium.w_sigma"),
                            get_float(cfg, "medium.gamma_sigma"))
        scale = get_float(cfg, "medium.scale")
        return med if scale == 1.0 else med.scaled(scale)
    except QbmError as exc:
        raise ConfigError(f"medium: {exc}", key="medium") from None


def atom_from(cfg, gamma=None):
    try:
        return AtomParams(gamma=get_float(cfg, "atom.gamma") if gamma is None else gamma,
                          mass=get_float(cfg, "atom.mass"), omega_a=get_float(cfg, "atom.omega_a"))
    except ConfigError:
        raise
    except QbmError as exc:
        raise ConfigError(f"atom: {exc}", key="atom") from None


def sommerfeld_from(cfg):
    """Inner (plane-wave) tolerances are kept 100x tighter than the frequency integral's."""
    try:
        return SommerfeldSpec(rel_tol=get_float(cfg, "quad.rel_tol") * 1e-2,
                              abs_tol=get_float(cfg, "quad.abs_tol") * 1e-2,
                              evanescent_decade_cap=get_int(cfg, "quad.evanescent_decades"))
    except ConfigError:
        raise
    except QbmError as exc:
        raise ConfigError(f"quad: {exc}", key="quad") from None


def quad_from(cfg, beta=None):
    try:
        return QuadratureSpec(cutoff=get_float(cfg, "quad.cutoff"), rel_tol=get_float(cfg, "quad.rel_tol"),
                              abs_tol=get_float(cfg, "quad.abs_tol"),
                              beta=get_float(cfg, "quad.beta") if beta is None else beta,
                              sommerfeld=sommerfeld_from(cfg))
    except ConfigError:
        raise
    except QbmError as exc:
        raise ConfigError(f"quad: {exc}", key="quad") from None


def grid_from(cfg):
    if cfg["scan.values"].strip():
        try:
            return [float(v) for v in cfg["scan.values"].split(",") if v.strip()]
        except ValueError:
            raise ConfigError("scan.values: expected comma-separated numbers", key="scan.values") from None
    lo, hi, n = get_float(cfg, "scan.min"), get_float(cfg, "scan.max"), get_int(cfg, "scan.n")
    if n < 1:
        raise ConfigError("scan.n must be >= 1", key="scan.n")
    spacing = cfg["scan.spacing"].strip().lower()
    if spacing == "log":
        if not (lo > 0 and hi > 0):
            raise ConfigError("log spacing needs positive scan.min and scan.max", key="scan.min")
        return list(np.geomspace(lo, hi, n))
    if spacing == "linear":
        return list(np.linspace(lo, hi, n))
    raise ConfigError(f"scan.spacing must be 'log' or 'linear', got {spacing!r}", key="scan.spacing")


# ---------------------------------------------------------------- csv

def _fmt(v):
    if isinstance(v, str):
        return v
    return repr(float(v))


def write_csv(fh, columns, rows, cfg_hash):
    fh.write(f"# config-hash: {cfg_hash}\n")
    fh.write(f"# version: {__version__}\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])


def read_csv(source):
    """Parse a CSV written by this tool; returns (meta, rows) with numeric cells as floats."""
    text = source.read() if hasattr(source, "read") else open(source).read()
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    rows = []
    for rec in csv.DictReader(io.StringIO("\n".join(body))):
        row = {}
        for k, v in rec.items():
            try:
                row[k] = float(v)
            except ValueError:
                row[k] = v
        rows.append(row)
    return meta, rows


# ---------------------------------------------------------------- commands

def cmd_greens(cfg):
    medium = medium_from(cfg)
    z = get_float(cfg, "geometry.z")
    zp = get_float(cfg, "geometry.z_prime") if cfg["geometry.z_prime"].strip() else z
    try:
        geom = Geometry(z, zp, get_float(cfg, "geometry.rho"))
    except QbmError as exc:
        raise ConfigError(f"geometry: {exc}", key="geometry") from None
    omegas = np.asarray(grid_from(cfg))
    gm = g_medium(omegas, geom, medium, sommerfeld_from(cfg))
    if geom.is_coincident:
        # the real part diverges at coincidence (absorbed into Omega_A); Im keeps its limit w/4pi
        gf = np.full(omegas.shape, math.nan) + 1j * omegas / (4.0 * math.pi)
    else:
        gf = g_free(omegas, geom.distance)
    return GREENS_COLUMNS, [
        {"omega": w, "re_g_free": f.real, "im_g_free": f.imag, "re_g_medium": m.real,
         "im_g_medium": m.imag}
        for w, f, m in zip(omegas, gf, gm)
    ], 0


def _no_surface(medium, z):
    return medium is None or math.isinf(z)


def cmd_measures(cfg):
    params, medium, quad = atom_from(cfg), medium_from(cfg), quad_from(cfg)
    z = get_float(cfg, "geometry.z")
    res = covariance(params, None if _no_surface(medium, z) else medium, z, quad)
    ms = measures_from_covariance(res.vxx, res.vpp, params)
    row = dict(vxx=res.vxx, vpp=res.vpp, cutoff=res.cutoff, err_estimate=res.err_estimate,
               cutoff_sensitivity=res.cutoff_sensitivity, **ms.as_dict())
    return MEASURE_COLUMNS, [row], 0


def scan_request(cfg):
    axis = cfg["scan.axis"].strip().lower()
    if axis not in ("distance", "damping"):
        raise ConfigError(f"scan.axis must be 'distance' or 'damping', got {axis!r}", key="scan.axis")
    grid = list(DEFAULT_GAMMAS) if axis == "damping" and not cfg["scan.values"].strip() else grid_from(cfg)
    if not grid:
        raise ConfigError("scan grid is empty", key="scan.n")
    params = atom_from(cfg)
    z = get_float(cfg, "geometry.z")
    medium = medium_from(cfg)
    if axis == "damping" and _no_surface(medium, z):
        medium, z = None, math.inf
    try:
        return ScanRequest(axis=axis, grid=tuple(grid), gamma=params.gamma, z=z, medium=medium,
                           quad=quad_from(cfg), mass=params.mass, omega_a=params.omega_a)
    except ConfigError:
        raise
    except QbmError as exc:
        raise ConfigError(f"scan: {exc}", key="scan") from None


def cmd_scan(cfg, threads=1):
    result = run_scan(scan_request(cfg), threads=threads)
    rows = []
    for r in result.rows:
        row = {c: getattr(r, c) for c in MEASURE_COLUMNS}
        row["axis_value"] = r.value
        row["error"] = r.error
        rows.append(row)
    failed = sum(not r.ok for r in result.rows)
    if failed:
        print(f"warning: {failed} of {len(rows)} rows failed", file=sys.stderr)
    return SCAN_COLUMNS, rows, 0


def cmd_fdr_check(cfg, inconsistent=False, beta=None):
    params = atom_from(cfg)
    beta = get_float(cfg, "quad.beta") if beta is None else beta
    if not beta > 0:
        raise ConfigError("beta must be positive", key="quad.beta")
    rep = fdr_report(params, beta=beta, inconsistent=inconsistent)
    rows = [{"omega": w, "residual_field": a, "residual_atom": b, "residual_fdr": c}
            for w, a, b, c in zip(rep.omega_grid, rep.residual_field, rep.residual_atom,
                                  rep.residual_fdr)]
    verdict = "PASS" if rep.passed else "FAIL"
    print(f"{verdict}: max residual {rep.max_residual:.3e} (beta={beta}, "
          f"inconsistent={inconsistent})", file=sys.stderr)
    return FDR_COLUMNS, rows, 0 if rep.passed else 1


# ---------------------------------------------------------------- entry point

def build_parser():
    p = argparse.ArgumentParser(prog="qbm-halfspace", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("greens", "measures", "scan", "fdr-check"):
        s = sub.add_parser(name)
        s.add_argument("--config", help="flat key = value file")
        s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key (repeatable)")
        s.add_argument("--out", help="output path (default stdout)")
        if name == "scan":
            s.add_argument("--threads", type=int, default=1)
            s.add_argument("--single-thread", action="store_true")
        if name == "fdr-check":
            s.add_argument("--inconsistent", action="store_true",
                           help="negative control: un-reduced noise weight (must FAIL)")
            s.add_argument("--beta", type=float, default=None)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = build_config(args.config, args.set)
        if args.command == "greens":
            columns, rows, code = cmd_greens(cfg)
        elif args.command == "measures":
            columns, rows, code = cmd_measures(cfg)
        elif args.command == "scan":
            threads = 1 if args.single_thread else max(1, args.threads)
            columns, rows, code = cmd_scan(cfg, threads)
        else:
            columns, rows, code = cmd_fdr_check(cfg, args.inconsistent, args.beta)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QbmError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    cfg_hash = config_hash({"command": args.command, **cfg})
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_csv(fh, columns, rows, cfg_hash)
    else:
        write_csv(sys.stdout, columns, rows, cfg_hash)
    return code


if __name__ == "__main__":
    sys.exit(main())
