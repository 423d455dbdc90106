import math

import numpy as np
import pytest

from qbm_halfspace.errors import DomainError, ScanError
from qbm_halfspace.medium import LorentzMedium
from qbm_halfspace.scan_engine import ScanRequest, config_hash, evaluate_row, run_scan

COND = LorentzMedium.perfect_conductor()


def test_request_validation():
    with pytest.raises(DomainError):
        ScanRequest("height", (1, 2), gamma=0.1)
    with pytest.raises(DomainError):
        ScanRequest("distance", (1.0,), gamma=0.1)
    with pytest.raises(DomainError):
        ScanRequest("distance", (2.0, 1.0), gamma=0.1)
    with pytest.raises(DomainError):
        ScanRequest("distance", (0.0, 1.0), gamma=0.1)
    with pytest.raises(DomainError):
        ScanRequest("distance", (0.1, 1.0))


def test_distance_scan_conductor_purity_rises_toward_surface():
    grid = tuple(np.geomspace(0.05, 4, 30))
    res = run_scan(ScanRequest("distance", grid, gamma=0.25, medium=COND))
    pur = res.column("purity")
    assert all(r.ok for r in res.rows)
    assert pur[0] > pur[-1]
    assert all(r.err_estimate >= 0 and r.cutoff == 100.0 for r in res.rows)
    assert res.provenance["config_hash"] and res.provenance["version"]


def test_damping_scan_no_medium_purity_decreasing():
    res = run_scan(ScanRequest("damping", (0.05, 0.15, 0.25, 0.35, 0.45)))
    pur = res.column("purity")
    assert all(b < a for a, b in zip(pur, pur[1:]))


def test_row_failures_are_recorded():
    req = ScanRequest("damping", (0.0, 0.1), z=1.0, medium=LorentzMedium.vacuum())
    res = run_scan(req)
    assert not res.rows[0].ok and "Error" in res.rows[0].error
    assert math.isnan(res.rows[0].purity)
    assert res.rows[1].ok


def test_all_rows_failed():
    with pytest.raises(ScanError):
        run_scan(ScanRequest("damping", (0.0, 1e-300), z=1.0, medium=LorentzMedium.vacuum()))


def test_determinism_and_row_independence():
    grid = (0.05, 0.2, 1.0)
    req = ScanRequest("distance", grid, gamma=0.15, medium=LorentzMedium())
    a, b = run_scan(req), run_scan(req)
    assert a.rows == b.rows
    sub = run_scan(ScanRequest("distance", grid[1:], gamma=0.15, medium=LorentzMedium()))
    assert sub.rows == a.rows[1:]
    assert evaluate_row(req, 0.2) == a.rows[1]


def test_parallel_matches_serial():
    req = ScanRequest("distance", (0.1, 0.5, 2.0), gamma=0.25, medium=COND)
    assert run_scan(req, threads=2).rows == run_scan(req).rows


def test_config_hash_stable():
    assert config_hash({"a": 1.0, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1.0})
    assert config_hash({"a": 1.0}) != config_hash({"a": 1.0000000001})
