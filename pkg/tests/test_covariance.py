import logging
import math

import numpy as np
import pytest

from oracles import dense_covariance_conductor
from qbm_halfspace.atom_dynamics import AtomArray, AtomParams
from qbm_halfspace.covariance import (
    QuadratureSpec,
    covariance,
    covariance_matrix,
    thermal_weight,
    v_perturbative,
    v_pp,
    v_xp,
    v_xx,
)
from qbm_halfspace.errors import DomainError
from qbm_halfspace.medium import LorentzMedium

COND = LorentzMedium.perfect_conductor()
DIEL = LorentzMedium()


def test_decoupled_vacuum():
    p = AtomParams(gamma=1e-6, mass=2.0, omega_a=1.5)
    r = covariance(p, None, math.inf)
    assert r.vxx == pytest.approx(1 / (2 * 2.0 * 1.5), rel=1e-4)
    assert r.vpp == pytest.approx(2.0 * 1.5 / 2, rel=1e-4)
    assert r.vxp == 0.0


@pytest.mark.parametrize("beta", [1.0, 10.0])
def test_decoupled_thermal(beta):
    p = AtomParams(gamma=1e-6)
    q = QuadratureSpec(beta=beta)
    coth = 1 / math.tanh(beta / 2)
    assert v_xx(p, None, math.inf, q) == pytest.approx(coth / 2, rel=1e-4)
    assert v_pp(p, None, math.inf, q) == pytest.approx(coth / 2, rel=1e-3)


@pytest.mark.parametrize("ell", [1.0, math.inf])
def test_dense_oracle(ell):
    p = AtomParams(gamma=0.05)
    r = covariance(p, COND if math.isfinite(ell) else None, ell)
    vxx, vpp = dense_covariance_conductor(0.05, ell, 100.0)
    assert r.vxx == pytest.approx(vxx, rel=1e-6)
    assert r.vpp == pytest.approx(vpp, rel=1e-6)


def test_v_xp_is_zero():
    assert v_xp() == 0.0
    assert v_xp(AtomParams(gamma=0.1), DIEL, 1.0, QuadratureSpec(beta=1.0)) == 0.0
    assert np.array_equal(v_xp(n=3), np.zeros((3, 3)))


def test_thermal_weight():
    assert np.all(thermal_weight(np.array([0.1, 5.0]), math.inf) == 1.0)
    assert thermal_weight(np.array([1.0]), 2.0)[0] == pytest.approx(1 / math.tanh(1.0))


def test_perturbative_without_medium_is_exact():
    p = AtomParams(gamma=0.05)
    r = covariance(p, None, math.inf)
    assert v_perturbative(p, LorentzMedium.vacuum(), 1.0) == (r.vxx, r.vpp)


def test_perturbative_second_order():
    errs = []
    for g in (0.02, 0.01):
        p = AtomParams(gamma=g)
        r = covariance(p, COND, 1.0)
        errs.append(abs(v_perturbative(p, COND, 1.0)[0] - r.vxx))
    assert 3.4 < errs[0] / errs[1] < 4.6


@pytest.mark.parametrize("med", [COND, DIEL])
@pytest.mark.parametrize("gamma, ell", [(0.05, 0.02), (0.45, 0.02), (0.25, 1.0), (0.45, 10.0)])
def test_positivity_and_rs_bound(med, gamma, ell):
    r = covariance(AtomParams(gamma=gamma), med, ell)
    assert r.vxx > 0 and r.vpp > 0
    assert r.vxx * r.vpp >= 0.25 - 1e-10


@pytest.mark.parametrize("med", [COND, DIEL])
def test_far_from_surface(med):
    p = AtomParams(gamma=0.05)
    free = v_xx(p, None, math.inf)
    assert abs(v_xx(p, med, 50.0) - free) <= 1e-3 * free


def test_thermal_monotonicity():
    p = AtomParams(gamma=0.05)
    vals = [v_xx(p, COND, 1.0, QuadratureSpec(beta=b)) for b in (math.inf, 10.0, 1.0)]
    assert vals[0] < vals[1] < vals[2]


def test_conductor_near_surface_vxx_closer_to_decoupled():
    """Literal form of the near-surface suppression property; see the decisions ledger.

    Fails for this model: the image term raises the effective frequency, so vxx drops
    to about 1/(2 Omega_eff) and moves away from 1/2 even though the damping is suppressed.
    """
    p = AtomParams(gamma=0.25)
    near, far = v_xx(p, COND, 0.05), v_xx(p, COND, 1.0)
    assert abs(near - 0.5) < abs(far - 0.5)


def test_conductor_near_surface_state_is_purer():
    p = AtomParams(gamma=0.25)
    rn, rf = covariance(p, COND, 0.05), covariance(p, COND, 1.0)
    assert rn.vxx * rn.vpp < rf.vxx * rf.vpp


def test_cutoff_diagnostic_reported(caplog):
    with caplog.at_level(logging.WARNING):
        r = covariance(AtomParams(gamma=0.25), COND, 1.0)
    assert r.cutoff == 100.0
    assert r.cutoff_warning
    assert r.cutoff_sensitivity == pytest.approx(abs(r.vpp - r.vpp_half_cutoff) / r.vpp)
    assert any("cutoff sensitivity" in rec.message for rec in caplog.records)
    # the shift is the log tail of the Ohmic damping: (2 gamma M / pi) ln 2
    assert r.vpp - r.vpp_half_cutoff == pytest.approx(2 * 0.25 / math.pi * math.log(2), rel=2e-2)


def test_matrix_single_atom_equals_scalar():
    p = AtomParams(gamma=0.05)
    m = covariance_matrix(AtomArray(p, [(0, 0, 0.5)]), COND)
    r = covariance(p, COND, 0.5)
    assert m.vxx[0, 0] == pytest.approx(r.vxx, rel=1e-12)
    assert m.vpp[0, 0] == pytest.approx(r.vpp, rel=1e-12)
    assert np.all(m.vxp == 0)


def test_matrix_two_atoms_symmetric_positive():
    p = AtomParams(gamma=0.05)
    m = covariance_matrix(AtomArray(p, [(-0.5, 0, 0.5), (0.5, 0, 0.5)]), COND)
    assert np.allclose(m.vxx, m.vxx.T) and np.allclose(m.vpp, m.vpp.T)
    assert np.all(np.linalg.eigvalsh(m.vxx) > 0) and np.all(np.linalg.eigvalsh(m.vpp) > 0)
    assert m.vxx[0, 0] == pytest.approx(m.vxx[1, 1], rel=1e-10)
    assert abs(m.vxx[0, 1]) > 1e-6


def test_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(cutoff=5.0)
    with pytest.raises(DomainError):
        QuadratureSpec(beta=0.0)
    with pytest.raises(DomainError):
        covariance(AtomParams(gamma=0.05), COND, 0.0)
