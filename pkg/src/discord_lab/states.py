"""Constructors for the two state families and a few reference states."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .covariance import TwoModeCovariance
from .errors import DomainError, UnphysicalSqueezer


def db_to_variance(db: float) -> float:
    """Variance relative to shot noise for a level given in dB above shot noise."""
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SqueezerSpec:
    """Squeezed and anti-squeezed quadrature levels of one OPA output, both in positive dB."""

    squeezing_db: float
    antisqueezing_db: float

    def __post_init__(self):
        if self.squeezing_db < 0 or self.antisqueezing_db < 0:
            raise DomainError("squeezing and anti-squeezing levels are given as non-negative dB")

    @property
    def v_sq(self) -> float:
        return db_to_variance(-self.squeezing_db)

    @property
    def v_anti(self) -> float:
        return db_to_variance(self.antisqueezing_db)


@dataclass(frozen=True)
class ModulationSpec:
    depth: float

    def __post_init__(self):
        if not self.depth >= 0:
            raise DomainError(f"modulation depth must be >= 0, got {self.depth}")


def two_mode_from_squeezers(spec: SqueezerSpec) -> TwoModeCovariance:
    """Two identical amplitude squeezers, one rotated by pi/2, mixed on a 50:50 beamsplitter.

    Raises:
        UnphysicalSqueezer: if ``V_sq * V_anti < 1``.
    """
    v_sq, v_anti = spec.v_sq, spec.v_anti
    # 1e-12 slack so that exactly pure specs given in dB are not rejected by rounding.
    if v_sq * v_anti < 1 - 1e-12:
        raise UnphysicalSqueezer(
            f"V_sq * V_anti = {v_sq * v_anti:.6g} < 1 violates the uncertainty relation"
        )
    diag = (v_sq + v_anti) / 2
    c = (v_sq - v_anti) / 2
    return TwoModeCovariance(diag, diag, diag, diag, c, -c)


def tmsv(r: float) -> TwoModeCovariance:
    """Ideal two-mode squeezed vacuum with squeezing parameter ``r``."""
    if r < 0:
        raise DomainError(f"squeezing parameter must be >= 0, got {r}")
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    return TwoModeCovariance(c, c, c, c, s, -s)


def tmsv_from_photons(total_photons: float) -> TwoModeCovariance:
    """TMSV whose total photon number over both modes is ``total_photons``."""
    if total_photons < 0:
        raise DomainError("photon number must be >= 0")
    return tmsv(math.asinh(math.sqrt(total_photons / 2)))


def split_thermal(mod: ModulationSpec | float) -> TwoModeCovariance:
    """Thermal-like mode of variance ``1 + M`` split with vacuum on a 50:50 beamsplitter."""
    if not isinstance(mod, ModulationSpec):
        mod = ModulationSpec(float(mod))
    m = mod.depth
    return TwoModeCovariance(1 + m / 2, 1 + m / 2, 1 + m / 2, 1 + m / 2, m / 2, m / 2)


def split_thermal_from_photons(total_photons: float) -> TwoModeCovariance:
    # total photons = M / 2
    return split_thermal(2.0 * total_photons)


def mean_photon_number(sigma: TwoModeCovariance) -> float:
    """Total mean photon number of both modes."""
    return (sigma.a_xx + sigma.a_pp + sigma.b_xx + sigma.b_pp - 4) / 4


def two_mode_squeezing_db(sigma: TwoModeCovariance) -> float:
    """Best two-mode squeezing, ``-10 log10`` of the smallest joint quadrature variance.

    Joint variances are ``var((q_A +/- q_B)/sqrt 2)`` for ``q`` in ``{x, p}``.
    """
    candidates = []
    for va, vb, c in ((sigma.a_xx, sigma.b_xx, sigma.c_x), (sigma.a_pp, sigma.b_pp, sigma.c_p)):
        candidates.append((va + vb - 2 * abs(c)) / 2)
    return -10 * math.log10(min(candidates))
