"""Synthetic simultaneous quadrature records drawn from a covariance matrix."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .covariance import TwoModeCovariance, validate_physicality
from .errors import DomainError, FactorizationFailure, InsufficientData

CSV_HEADER = "x_a,p_a,x_b,p_b"


@dataclass(frozen=True, eq=False)
class QuadratureSamples:
    """Rows of ``(x_A, p_A, x_B, p_B)`` in shot-noise units."""

    data: np.ndarray
    seed: int | None = None
    source: TwoModeCovariance | None = None

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[1] != 4:
            raise DomainError(f"samples must have shape (n, 4), got {data.shape}")
        if data.shape[0] < 2:
            raise InsufficientData(f"InsufficientData: need at least 2 samples, got {data.shape[0]}")
        if not np.all(np.isfinite(data)):
            raise DomainError("samples contain non-finite values")
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return self.data.shape[0]


def sample(sigma: TwoModeCovariance, n: int, seed: int) -> QuadratureSamples:
    """Zero-mean Gaussian draws with covariance ``sigma`` (Cholesky factor, PCG64 stream)."""
    if n < 2:
        raise InsufficientData(f"InsufficientData: need n >= 2, got {n}")
    if not validate_physicality(sigma):
        raise FactorizationFailure("refusing to sample from an unphysical covariance")
    try:
        chol = np.linalg.cholesky(sigma.matrix())
    except np.linalg.LinAlgError as exc:
        raise FactorizationFailure(f"covariance is numerically non-positive: {exc}") from exc
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, 4))
    return QuadratureSamples(z @ chol.T, seed=seed, source=sigma)


def write_samples(samples: QuadratureSamples, path) -> str:
    """Write the CSV and a ``.json`` sidecar next to it. Returns the sidecar path."""
    path = os.fspath(path)
    tmp = path + ".tmp"
    np.savetxt(tmp, samples.data, delimiter=",", header=CSV_HEADER, comments="", fmt="%.17g")
    os.replace(tmp, path)
    sidecar = os.path.splitext(path)[0] + ".json"
    meta = {
        "n": samples.n,
        "seed": samples.seed,
        "generator": "numpy.random.PCG64",
        "state": None if samples.source is None else samples.source.to_dict(),
    }
    with open(sidecar + ".tmp", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    os.replace(sidecar + ".tmp", sidecar)
    return sidecar


def read_samples(path) -> QuadratureSamples:
    path = os.fspath(path)
    with open(path) as fh:
        header = fh.readline().strip()
    if header.replace(" ", "") != CSV_HEADER:
        raise DomainError(f"{path}: expected header {CSV_HEADER!r}, got {header!r}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        data = np.empty((0, 4))
    seed = None
    sidecar = os.path.splitext(path)[0] + ".json"
    if os.path.exists(sidecar):
        with open(sidecar) as fh:
            seed = json.load(fh).get("seed")
    return QuadratureSamples(data, seed=seed)
