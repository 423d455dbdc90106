"""Write the scan data behind the distance and damping figures as CSV files.

    python scripts/reproduce_figures.py --out figures/ [--threads 4] [--quick]

One file per curve; each carries a config-hash line so reruns diff cleanly. The
extremum summary for the Lorentz scans is printed at the end.
"""

import argparse
from dataclasses import asdict
import logging
import math
from pathlib import Path

import numpy as np

from qbm_halfspace.cli import SCAN_COLUMNS, write_csv
from qbm_halfspace.measures import detect_extremum
from qbm_halfspace.medium import LorentzMedium
from qbm_halfspace.scan_engine import DEFAULT_GAMMAS, ScanRequest, config_hash, run_scan

COND = LorentzMedium.perfect_conductor()
DIEL = LorentzMedium()


def figure_requests(n_points):
    zs = tuple(np.geomspace(0.02, 10, n_points))
    near = tuple(np.geomspace(0.02, 0.3, n_points))
    reqs = {}
    for g in DEFAULT_GAMMAS:
        reqs[f"fig1_conductor_distance_g{g:.2f}"] = ScanRequest("distance", zs, gamma=g, medium=COND)
        reqs[f"fig3_lorentz_distance_g{g:.2f}"] = ScanRequest("distance", zs, gamma=g, medium=DIEL)
        reqs[f"fig4_lorentz_near_g{g:.2f}"] = ScanRequest("distance", near, gamma=g, medium=DIEL)
        reqs[f"fig6_lorentz_x100_near_g{g:.2f}"] = ScanRequest("distance", near, gamma=g,
                                                               medium=DIEL.scaled(100))
    for z in (0.05, 0.2, 1.0, math.inf):
        tag = "inf" if math.isinf(z) else f"{z:g}"
        medium = None if math.isinf(z) else COND
        reqs[f"fig2_conductor_damping_z{tag}"] = ScanRequest(
            "damping", DEFAULT_GAMMAS, z=z, medium=medium)
    return reqs


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--quick", action="store_true", help="10 points per curve instead of 40")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.ERROR)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, req in figure_requests(10 if args.quick else 40).items():
        res = run_scan(req, threads=args.threads)
        rows = []
        for r in res.rows:
            row = {c: getattr(r, c) for c in SCAN_COLUMNS if c not in ("axis_value",)}
            row["axis_value"] = r.value
            rows.append(row)
        with open(out / f"{name}.csv", "w", newline="") as fh:
            write_csv(fh, SCAN_COLUMNS, rows, config_hash(asdict(req)))
        if name.startswith(("fig4", "fig6")):
            ext = detect_extremum(res.series("purity"))
            print(f"{name}: purity extrema {[(round(z, 4), k) for z, k in ext]}")
        else:
            print(f"{name}: {len(rows)} rows")


if __name__ == "__main__":
    main()
