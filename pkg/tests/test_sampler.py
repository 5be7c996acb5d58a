import math

import numpy as np
import pytest

from discord_lab.channels import attenuate_mode_b
from discord_lab.covariance import TwoModeCovariance
from discord_lab.errors import FactorizationFailure, InsufficientData
from discord_lab.sampler import QuadratureSamples, read_samples, sample, write_samples
from discord_lab.states import SqueezerSpec, split_thermal, tmsv, two_mode_from_squeezers


def _se(cov, n):
    d = np.diag(cov)
    return np.sqrt((np.outer(d, d) + cov**2) / n)


def test_identity_variances():
    s = sample(TwoModeCovariance.identity(), 100_000, seed=5)
    var = s.data.var(axis=0, ddof=1)
    assert np.all((var > 0.98) & (var < 1.02))


def test_determinism(tmp_path):
    sigma = two_mode_from_squeezers(SqueezerSpec(3.2, 6.7))
    a, b = sample(sigma, 1000, 42), sample(sigma, 1000, 42)
    assert a.data.tobytes() == b.data.tobytes()
    assert sample(sigma, 1000, 43).data.tobytes() != a.data.tobytes()
    write_samples(a, tmp_path / "a.csv")
    write_samples(b, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_tmsv_cross_covariance():
    n = 100_000
    s = sample(tmsv(0.5), n, seed=9)
    cov = np.cov(s.data, rowvar=False)
    se = math.sqrt((math.cosh(1) ** 2 + math.sinh(1) ** 2) / n)
    assert abs(cov[0, 2] - math.sinh(1)) < 3 * se
    assert abs(cov[1, 3] + math.sinh(1)) < 3 * se


def test_convergence_rate():
    sigma = split_thermal(3.0)
    truth = sigma.matrix()
    for n in (1_000, 10_000, 100_000):
        errs = [np.abs(np.cov(sample(sigma, n, seed).data, rowvar=False) - truth).max() for seed in range(5)]
        bound = 5 * _se(truth, n).max()
        assert max(errs) < bound


def test_attenuation_on_samples_matches_channel():
    n, t = 100_000, 0.4
    sigma = split_thermal(2.0)
    s = sample(sigma, n, seed=21).data.copy()
    vac = np.random.default_rng(99).standard_normal((n, 2))
    s[:, 2:] = math.sqrt(t) * s[:, 2:] + math.sqrt(1 - t) * vac
    expected = attenuate_mode_b(sigma, t).matrix()
    cov = np.cov(s, rowvar=False)
    assert np.all(np.abs(cov - expected) < 3.5 * _se(expected, n))


def test_errors():
    with pytest.raises(FactorizationFailure):
        sample(TwoModeCovariance(0.5, 0.5, 1, 1, 0, 0), 10, 1)
    with pytest.raises(InsufficientData):
        sample(TwoModeCovariance.identity(), 1, 1)
    with pytest.raises(InsufficientData):
        QuadratureSamples(np.zeros((1, 4)))


def test_csv_round_trip(tmp_path):
    s = sample(tmsv(0.3), 50, seed=3)
    path = tmp_path / "s.csv"
    sidecar = write_samples(s, path)
    assert path.read_text().splitlines()[0] == "x_a,p_a,x_b,p_b"
    back = read_samples(path)
    assert np.array_equal(back.data, s.data)
    assert back.seed == 3
    assert sidecar.endswith("s.json")
