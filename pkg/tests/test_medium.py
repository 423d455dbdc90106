import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qbm_halfspace.errors import DomainError, PoleError
from qbm_halfspace.medium import LorentzMedium, dielectric_atom_propagator, epsilon, plasma_frequency

freq = st.floats(min_value=-50, max_value=50, allow_nan=False)
media = st.builds(LorentzMedium, st.one_of(st.just(0.0), st.floats(1e-3, 10)), st.floats(0.1, 5), st.floats(1e-3, 2))


@pytest.mark.parametrize("g, m, a, expected", [(1, 1, 1, 1.0), (2, 1, 1, 2.0), (1, 4, 1, 0.5)])
def test_plasma_frequency(g, m, a, expected):
    assert plasma_frequency(g, m, a) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("m, a", [(0, 1), (1, 0), (-1, 1)])
def test_plasma_frequency_domain(m, a):
    with pytest.raises(DomainError):
        plasma_frequency(1, m, a)


def test_propagator_static_and_pole():
    assert dielectric_atom_propagator(LorentzMedium(1, 1, 0.0), 0.0) == 1.0 + 0j
    with pytest.raises(PoleError):
        dielectric_atom_propagator(LorentzMedium(1, 1, 0.0), 1.0)


def test_propagator_damped_resonance_matches_expansion():
    w, g = 1.0, 0.1
    val = dielectric_atom_propagator(LorentzMedium(1, w, g), 1.0)
    # 1 / (w^2 - (1 + i g)^2) = 1 / (g^2 - 2 i g) for w = 1
    assert val == pytest.approx(1.0 / (g * g - 2j * g), rel=1e-14)
    assert val.imag > 0


def test_epsilon_examples():
    assert epsilon(LorentzMedium(1, 1, 0.0), 0.0) == pytest.approx(2.0)
    assert epsilon(LorentzMedium(0.0, 1, 0.1), 3.7) == 1.0 + 0j
    eps = epsilon(LorentzMedium(1, 1, 0.1), 20.0)
    # leading correction is 2 gamma omega_p^2 / omega^3 = 2.5e-5
    assert abs(eps - (1 - 1 / 400)) < 1 / 20**3


def test_epsilon_static_value_includes_damping():
    med = LorentzMedium(1.3, 0.8, 0.3)
    assert epsilon(med, 0.0) == pytest.approx(1 + 1.3**2 / (0.8**2 + 0.3**2), rel=1e-14)


def test_high_frequency_transparency_is_third_order():
    med = LorentzMedium()
    w = np.geomspace(10, 1000, 30)
    dev = np.abs(epsilon(med, w) - 1 + med.plasma_freq**2 / w**2)
    c = np.max(dev * w**3)
    assert c < 1.0  # 2 gamma omega_p^2 = 0.2 at leading order
    assert np.all(dev <= c / w**3 * (1 + 1e-12))


@given(media, freq)
def test_crossing(med, w):
    assert epsilon(med, -w) == pytest.approx(np.conj(epsilon(med, w)), rel=1e-12, abs=1e-300)


@given(media, st.floats(1e-3, 50))
def test_passivity(med, w):
    if med.plasma_freq > 0:
        assert epsilon(med, w).imag > 0


def test_conductor_and_validation():
    cond = LorentzMedium.perfect_conductor()
    assert cond.conductor and not cond.is_vacuum
    with pytest.raises(DomainError):
        epsilon(cond, 1.0)
    with pytest.raises(DomainError):
        LorentzMedium(plasma_freq=-1)
    with pytest.raises(DomainError):
        LorentzMedium(resonance=0)
    assert LorentzMedium.vacuum().is_vacuum


def test_scaled_multiplies_susceptibility():
    med = LorentzMedium(1.0, 1.0, 0.1)
    w = 0.7
    chi = epsilon(med, w) - 1
    assert epsilon(med.scaled(100), w) - 1 == pytest.approx(100 * chi, rel=1e-13)
    assert med.scaled(100).plasma_freq == pytest.approx(10.0)
