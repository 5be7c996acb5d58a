"""Gaussian channels on mode B and the homodyne detector imperfection model."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .covariance import TwoModeCovariance
from .errors import DomainError


@dataclass(frozen=True)
class ChannelSpec:
    transmittance: float = 1.0
    added_noise: float = 0.0

    def __post_init__(self):
        _check_transmittance(self.transmittance)
        _check_noise(self.added_noise)

    def apply(self, sigma: TwoModeCovariance) -> TwoModeCovariance:
        """Noise addition followed by attenuation, both on mode B."""
        return attenuate_mode_b(add_classical_noise_mode_b(sigma, self.added_noise), self.transmittance)


@dataclass(frozen=True)
class DetectorSpec:
    """Homodyne detector pair.

    ``electronic_noise_db`` is relative to shot noise (``-inf`` means none);
    ``cmr_db`` is the common-mode rejection ratio (``inf`` means perfect balancing).
    """

    efficiency: float = 1.0
    electronic_noise_db: float = -math.inf
    cmr_db: float = math.inf

    def __post_init__(self):
        if not 0 < self.efficiency <= 1:
            raise DomainError(f"detector efficiency must lie in (0, 1], got {self.efficiency}")
        if math.isnan(self.electronic_noise_db) or math.isnan(self.cmr_db):
            raise DomainError("detector levels must not be NaN")

    @property
    def electronic_noise(self) -> float:
        return 10.0 ** (self.electronic_noise_db / 10.0)

    @property
    def leak_coefficient(self) -> float:
        return 10.0 ** (-self.cmr_db / 10.0)

    @classmethod
    def ideal(cls) -> "DetectorSpec":
        return cls()


def _check_transmittance(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"transmittance must lie in [0, 1], got {t}")


def _check_noise(kappa: float) -> None:
    if not kappa >= 0.0:
        raise DomainError(f"added noise must be >= 0, got {kappa}")


def attenuate_mode_b(sigma: TwoModeCovariance, transmittance: float) -> TwoModeCovariance:
    """Pure-loss channel (vacuum environment) on mode B."""
    _check_transmittance(transmittance)
    t = transmittance
    root_t = math.sqrt(t)
    return sigma.replace(
        b_xx=t * sigma.b_xx + (1 - t),
        b_pp=t * sigma.b_pp + (1 - t),
        c_x=root_t * sigma.c_x,
        c_p=root_t * sigma.c_p,
    )


def add_classical_noise_mode_b(sigma: TwoModeCovariance, kappa: float) -> TwoModeCovariance:
    """Random Gaussian displacements of variance ``kappa`` on each quadrature of mode B."""
    _check_noise(kappa)
    return sigma.replace(b_xx=sigma.b_xx + kappa, b_pp=sigma.b_pp + kappa)


def detector_map(sigma: TwoModeCovariance, det: DetectorSpec, modulation_depth: float = 0.0) -> TwoModeCovariance:
    """Apparent covariance recorded by an imperfect detector pair.

    Stages, in order: efficiency loss on both modes, the CMR leak
    ``M * 10**(-cmr_db/10)`` and the electronic noise floor, the last two added
    to every variance. Cross-covariances only see the efficiency.
    """
    if not modulation_depth >= 0:
        raise DomainError(f"modulation depth must be >= 0, got {modulation_depth}")
    eta = det.efficiency
    extra = modulation_depth * det.leak_coefficient + det.electronic_noise

    def var(v):
        return eta * v + (1 - eta) + extra

    return TwoModeCovariance(
        var(sigma.a_xx),
        var(sigma.a_pp),
        var(sigma.b_xx),
        var(sigma.b_pp),
        eta * sigma.c_x,
        eta * sigma.c_p,
    )


def attenuation_to_transmittance(attenuation: float) -> float:
    """Fractional attenuation ``1 - T`` to transmittance."""
    return 1.0 - attenuation


def db_to_transmittance(attenuation_db: float) -> float:
    return 10.0 ** (-attenuation_db / 10.0)
