import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discord_lab.covariance import (
    TwoModeCovariance,
    coerce_standard_form,
    from_json_obj,
    invariants,
    read_covariance,
    validate_physicality,
    write_covariance,
)
from discord_lab.errors import ComplexEigenvalue, NonPositiveMatrix, NotStandardForm
from discord_lab.sampler import sample
from discord_lab.states import split_thermal, tmsv, two_mode_from_squeezers, SqueezerSpec

from _states import random_state, state_from_parts
from conftest import brute_pt_nu_minus, brute_symplectic


def test_invariants_split_thermal_m2():
    inv = invariants(split_thermal(2.0))
    assert (inv.i1, inv.i2, inv.i3, inv.i4) == (4.0, 4.0, 1.0, 9.0)
    assert inv.nu_plus == pytest.approx(3.0, abs=1e-14)
    assert inv.nu_minus == pytest.approx(1.0, abs=1e-14)
    m = split_thermal(2.0).matrix()
    assert np.linalg.det(m) == pytest.approx(9.0)
    assert brute_symplectic(m) == pytest.approx((1.0, 3.0))


def test_invariants_vacuum():
    inv = invariants(TwoModeCovariance.identity())
    assert (inv.i1, inv.i2, inv.i3, inv.i4) == (1.0, 1.0, 0.0, 1.0)
    assert inv.nu_minus == inv.nu_plus == 1.0


@pytest.mark.parametrize("r", [0.0, 0.3, 1.0, 2.0])
def test_tmsv_is_pure(r):
    inv = invariants(tmsv(r))
    assert inv.i4 == pytest.approx(1.0, abs=1e-12)
    assert inv.nu_minus == pytest.approx(1.0, abs=1e-10)
    assert inv.nu_plus == pytest.approx(1.0, abs=1e-10)


def test_closed_form_i4_matches_generic_determinant(rng):
    for _ in range(200):
        sigma, _ = random_state(rng)
        assert invariants(sigma).i4 == pytest.approx(np.linalg.det(sigma.matrix()), rel=1e-9)


def test_symplectic_identities_on_random_states(rng):
    for _ in range(1000):
        sigma, (nu1, nu2) = random_state(rng)
        inv = invariants(sigma)
        lo, hi = inv.nu_minus**2, inv.nu_plus**2
        assert lo * hi == pytest.approx(inv.i4, rel=1e-9)
        assert lo + hi == pytest.approx(inv.delta, rel=1e-9)
        assert inv.nu_minus <= inv.nu_plus
        # construction fixes the spectrum independently of the invariant route
        assert (inv.nu_minus, inv.nu_plus) == pytest.approx((nu1, nu2), rel=1e-8)
        assert inv.nu_tilde_minus == pytest.approx(brute_pt_nu_minus(sigma.matrix()), rel=1e-7)


def test_xp_swap_preserves_invariants(rng):
    for _ in range(50):
        sigma, _ = random_state(rng)
        swapped = coerce_standard_form(
            sigma.matrix()[np.ix_([1, 0, 3, 2], [1, 0, 3, 2])], tol=1e-12
        )
        assert (swapped.c_x, swapped.c_p) == (sigma.c_p, sigma.c_x)
        a, b = invariants(sigma), invariants(swapped)
        assert (a.i1, a.i2, a.i3, a.i4) == pytest.approx((b.i1, b.i2, b.i3, b.i4), rel=1e-12)


@given(
    st.floats(1.0, 50.0), st.floats(1.0, 50.0), st.floats(1.0, 50.0), st.floats(1.0, 50.0)
)
def test_product_state_pt_eigenvalue(ax, ap, bx, bp):
    sigma = TwoModeCovariance(ax, ap, bx, bp, 0.0, 0.0)
    if ax * ap < 1 or bx * bp < 1:
        return
    inv = invariants(sigma)
    assert inv.nu_tilde_minus == pytest.approx(min(math.sqrt(ax * ap), math.sqrt(bx * bp)), rel=1e-12)
    assert inv.nu_tilde_minus >= 1 - 1e-12


def test_invariants_rejects_non_positive():
    with pytest.raises(NonPositiveMatrix):
        invariants(TwoModeCovariance(1, 1, 1, 1, 2, 0))
    with pytest.raises(NonPositiveMatrix):
        invariants(TwoModeCovariance(-1, 1, 1, 1, 0, 0))


def test_complex_eigenvalue_guard():
    # Williamson's theorem makes this unreachable for positive definite input;
    # the guard is exercised on the helper directly.
    from fractions import Fraction

    from discord_lab.covariance import _symplectic_pair

    with pytest.raises(ComplexEigenvalue):
        _symplectic_pair(Fraction(2), Fraction(2), 1e-9)
    assert _symplectic_pair(Fraction(2), Fraction(1), 1e-9) == (1.0, 1.0)


def test_validate_physicality_examples():
    assert validate_physicality(TwoModeCovariance.identity())
    bad = validate_physicality(TwoModeCovariance(0.5, 0.5, 1, 1, 0, 0))
    assert not bad
    assert bad.nu_minus == pytest.approx(0.5)
    assert "physicality" in bad.reason
    assert validate_physicality(two_mode_from_squeezers(SqueezerSpec(3.2, 6.7)))
    assert not validate_physicality(TwoModeCovariance(1, 1, 1, 1, 3, 0))


def test_coerce_exact_standard_form():
    sigma = split_thermal(3.0)
    assert coerce_standard_form(sigma.matrix(), 1e-12) == sigma


def test_coerce_rejects_perturbation():
    m = split_thermal(3.0).matrix()
    tol = 1e-6
    m[0, 3] = m[3, 0] = 10 * tol
    with pytest.raises(NotStandardForm) as info:
        coerce_standard_form(m, tol)
    assert info.value.index == (0, 3)


def test_coerce_sampled_covariance():
    s = sample(split_thermal(2.0), 100_000, seed=11)
    cov = np.cov(s.data, rowvar=False)
    sigma = coerce_standard_form(cov, 0.05)
    assert sigma.a_xx == pytest.approx(2.0, abs=0.05)
    assert sigma.c_p == pytest.approx(1.0, abs=0.05)


def test_json_round_trip(tmp_path):
    sigma = state_from_parts(np.array([[1.2, 0.3], [-0.4, 0.9]]), 1.5, 2.5)
    path = tmp_path / "cov.json"
    write_covariance(sigma, path)
    assert read_covariance(path) == sigma
    assert from_json_obj(sigma.matrix().tolist()) == sigma
    assert from_json_obj({"matrix": sigma.matrix().tolist()}) == sigma
    with pytest.raises(NotStandardForm):
        from_json_obj({"a_xx": 1.0})
