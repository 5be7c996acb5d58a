import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discord_lab.covariance import TwoModeCovariance, invariants, validate_physicality
from discord_lab.errors import DomainError, UnphysicalSqueezer
from discord_lab.states import (
    ModulationSpec,
    SqueezerSpec,
    mean_photon_number,
    split_thermal,
    tmsv,
    tmsv_from_photons,
    two_mode_from_squeezers,
    two_mode_squeezing_db,
)

from conftest import brute_pt_nu_minus


def test_zero_db_squeezers_give_vacuum():
    assert two_mode_from_squeezers(SqueezerSpec(0, 0)) == TwoModeCovariance.identity()


def test_experimental_squeezers():
    sigma = two_mode_from_squeezers(SqueezerSpec(3.2, 6.7))
    v_sq, v_anti = 10 ** -0.32, 10 ** 0.67
    assert v_sq == pytest.approx(0.479, abs=5e-4)
    assert v_anti == pytest.approx(4.677, abs=5e-4)
    assert sigma.a_xx == pytest.approx(2.578, abs=1e-3)
    assert abs(sigma.c_x) == pytest.approx(2.099, abs=1e-3)
    assert sigma.c_p == -sigma.c_x
    nu_pt = brute_pt_nu_minus(sigma.matrix())
    assert nu_pt == pytest.approx(0.479, abs=5e-4)
    assert invariants(sigma).nu_tilde_minus == pytest.approx(nu_pt, rel=1e-9)
    assert validate_physicality(sigma)


@pytest.mark.parametrize("r", np.linspace(0.05, 2.0, 10))
def test_pure_squeezers_reproduce_tmsv(r):
    db = 10 * math.log10(math.exp(2 * r))
    sigma = two_mode_from_squeezers(SqueezerSpec(db, db))
    ref = tmsv(r)
    assert sigma.a_xx == pytest.approx(math.cosh(2 * r), rel=1e-12)
    assert abs(sigma.c_x) == pytest.approx(abs(ref.c_x), rel=1e-12)
    assert sigma.c_x * sigma.c_p == pytest.approx(ref.c_x * ref.c_p, rel=1e-12)
    # recombining on the beamsplitter recovers the input squeezing
    assert invariants(sigma).nu_tilde_minus == pytest.approx(10 ** (-db / 10), abs=1e-9)


def test_unphysical_squeezer():
    with pytest.raises(UnphysicalSqueezer):
        two_mode_from_squeezers(SqueezerSpec(6.0, 3.0))
    with pytest.raises(DomainError):
        SqueezerSpec(-1.0, 2.0)


@given(st.floats(0.0, 10.0), st.floats(0.0, 10.0))
def test_squeezer_outputs(sq, extra):
    sigma = two_mode_from_squeezers(SqueezerSpec(sq, sq + extra))
    assert validate_physicality(sigma)
    assert invariants(sigma).nu_tilde_minus == pytest.approx(brute_pt_nu_minus(sigma.matrix()), rel=1e-6)


def test_tmsv_examples():
    assert tmsv(0.0) == TwoModeCovariance.identity()
    for r in np.linspace(0, 2, 9):
        assert invariants(tmsv(r)).i4 == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        tmsv(-0.1)


def test_photon_number_calibration():
    # 1 and 10 photons correspond to 5.7 dB and 13.4 dB of two-mode squeezing
    assert two_mode_squeezing_db(tmsv_from_photons(1)) == pytest.approx(5.7, abs=0.05)
    assert two_mode_squeezing_db(tmsv_from_photons(10)) == pytest.approx(13.4, abs=0.05)
    # the rejected per-mode reading would give 7.7 dB for one photon
    per_mode = tmsv(math.asinh(1.0))
    assert two_mode_squeezing_db(per_mode) == pytest.approx(7.66, abs=0.05)


def test_mean_photon_number():
    assert mean_photon_number(TwoModeCovariance.identity()) == 0
    r = math.asinh(math.sqrt(0.5))
    assert mean_photon_number(tmsv(r)) == pytest.approx(1.0, rel=1e-12)
    assert mean_photon_number(split_thermal(6.0)) == pytest.approx(3.0)


def test_mean_photon_number_additive():
    sigma = two_mode_from_squeezers(SqueezerSpec(3.2, 6.7))
    a_only = sigma.replace(b_xx=1.0, b_pp=1.0, c_x=0.0, c_p=0.0)
    b_only = sigma.replace(a_xx=1.0, a_pp=1.0, c_x=0.0, c_p=0.0)
    assert mean_photon_number(a_only) + mean_photon_number(b_only) == pytest.approx(mean_photon_number(sigma))


def test_split_thermal_examples():
    assert split_thermal(0.0) == TwoModeCovariance.identity()
    sigma = split_thermal(ModulationSpec(2.0))
    assert (sigma.a_xx, sigma.c_x, sigma.c_p) == (2.0, 1.0, 1.0)
    nu_pt = brute_pt_nu_minus(sigma.matrix())
    assert nu_pt == pytest.approx(math.sqrt(3.0))
    assert invariants(sigma).nu_tilde_minus == pytest.approx(nu_pt, rel=1e-12)
    assert nu_pt >= 1
    with pytest.raises(DomainError):
        split_thermal(-1.0)


@given(st.floats(0.0, 1e4))
def test_split_thermal_is_separable_and_physical(m):
    sigma = split_thermal(m)
    assert validate_physicality(sigma)
    assert invariants(sigma).nu_tilde_minus >= 1 - 1e-9
