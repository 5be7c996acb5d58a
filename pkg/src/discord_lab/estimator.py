"""Covariance estimation from quadrature records, with bootstrap error bars."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import ordered_map
from .covariance import TwoModeCovariance, coerce_standard_form, invariants
from .errors import ComplexEigenvalue, DegenerateBootstrap, InsufficientData, NonPositiveMatrix
from .measures import MeasureReport, measure_report
from .sampler import QuadratureSamples

DEFAULT_RESAMPLES = 200
MAX_PROJECTED_FRACTION = 0.2
COERCION_STANDARD_ERRORS = 6.0
ERROR_FIELDS = {
    "I": "mutual_info_I",
    "J": "classical_info_J",
    "D": "discord_D",
    "E_N": "log_negativity",
    "e_min": "e_min",
}


def estimate_covariance(samples: QuadratureSamples | np.ndarray) -> np.ndarray:
    """Unbiased sample covariance (divisor ``n - 1``, sample mean removed)."""
    data = samples.data if isinstance(samples, QuadratureSamples) else np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[0] < 2:
        raise InsufficientData(f"InsufficientData: need at least 2 samples, got {len(data)}")
    return np.cov(data, rowvar=False, ddof=1)


def covariance_standard_errors(cov: np.ndarray, n: int) -> np.ndarray:
    """Gaussian standard error of every sample-covariance entry."""
    d = np.diag(cov)
    return np.sqrt((np.outer(d, d) + cov**2) / (n - 1))


def standard_form_estimate(cov: np.ndarray, n: int) -> TwoModeCovariance:
    """Coerce an estimated matrix, allowing 6 standard errors on the dropped entries."""
    return coerce_standard_form(cov, COERCION_STANDARD_ERRORS * covariance_standard_errors(cov, n))


def _nu_minus(sigma: TwoModeCovariance) -> float:
    try:
        return invariants(sigma).nu_minus
    except (NonPositiveMatrix, ComplexEigenvalue):
        return 0.0


def _loaded(sigma: TwoModeCovariance, delta: float) -> TwoModeCovariance:
    return sigma.replace(
        a_xx=sigma.a_xx + delta, a_pp=sigma.a_pp + delta, b_xx=sigma.b_xx + delta, b_pp=sigma.b_pp + delta
    )


def project_physical(sigma: TwoModeCovariance) -> tuple[TwoModeCovariance, float]:
    """Smallest uniform diagonal loading that restores ``nu_minus = 1``.

    Returns the (possibly unchanged) state and the loading applied.
    """
    if _nu_minus(sigma) >= 1:
        return sigma, 0.0

    def gap(delta):
        return _nu_minus(_loaded(sigma, delta)) - 1

    lo, hi = 0.0, 1.0
    while gap(hi) < 0:
        lo, hi = hi, 2 * hi
    # bisection keeps gap(hi) >= 0, so the returned state is never below the boundary
    while hi - lo > 1e-15 * hi:
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if gap(mid) < 0:
            lo = mid
        else:
            hi = mid
    delta = hi
    return _loaded(sigma, delta), float(delta)


@dataclass(frozen=True)
class EstimateReport:
    value: MeasureReport
    sigma: dict
    n: int
    resamples: int
    projected: int
    covariance: TwoModeCovariance
    point_projected: bool = False
    bootstrap: list = field(default_factory=list, repr=False)

    def error(self, key: str) -> float:
        return self.sigma[key]

    def to_dict(self) -> dict:
        out = {}
        for key, attr in ERROR_FIELDS.items():
            out[key] = {"value": getattr(self.value, attr), "sigma": self.sigma[key]}
        out["separable"] = self.value.separable
        out["branch"] = self.value.branch
        out["n"] = self.n
        out["resamples"] = self.resamples
        out["projected_resamples"] = self.projected
        out["point_estimate_projected"] = self.point_projected
        out["covariance"] = self.covariance.to_dict()
        return out


def measures_with_errors(
    samples: QuadratureSamples,
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = 0,
    base: float = 2.0,
) -> EstimateReport:
    """Point estimates from the full record, error bars from a row bootstrap.

    Each resample draws its own index set from a child of ``SeedSequence(seed)``,
    so results do not depend on evaluation order. Resamples whose covariance
    violates the uncertainty relation are loaded back onto the boundary.

    Raises:
        InsufficientData: fewer than 100 rows or 50 resamples.
        DegenerateBootstrap: more than 20% of resamples violate the uncertainty
            relation by more than their statistical resolution.
    """
    n = samples.n
    if n < 100:
        raise InsufficientData(f"InsufficientData: bootstrap needs n >= 100, got {n}")
    if resamples < 50:
        raise InsufficientData(f"InsufficientData: bootstrap needs at least 50 resamples, got {resamples}")
    data = samples.data
    cov = estimate_covariance(data)
    point_state = standard_form_estimate(cov, n)
    point_state, point_load = project_physical(point_state)
    point = measure_report(point_state, base)

    # A violation is only counted against the data if it exceeds ~3 standard
    # errors of nu_minus; states on the boundary (pure) sit there half the time.
    slack = 3.0 * math.sqrt(2.0 / n) * float(np.max(np.diag(cov)))

    children = np.random.SeedSequence(seed).spawn(resamples)

    def one(child):
        rng = np.random.default_rng(child)
        idx = rng.integers(0, n, n)
        state = coerce_standard_form(np.cov(data[idx], rowvar=False, ddof=1), math.inf)
        nu = _nu_minus(state)
        state, _ = project_physical(state)
        return measure_report(state, base), nu

    results = ordered_map(one, children)
    reports = [r for r, _ in results]
    flagged = sum(1 for _, nu in results if 1 - nu > slack)
    projected = sum(1 for _, nu in results if nu < 1)
    if flagged > MAX_PROJECTED_FRACTION * resamples:
        raise DegenerateBootstrap(
            f"DegenerateBootstrap: {flagged}/{resamples} resamples are unphysical beyond statistical "
            f"resolution; n = {n} is too small for this state"
        )
    errors = {
        key: float(np.std([getattr(r, attr) for r in reports], ddof=1)) for key, attr in ERROR_FIELDS.items()
    }
    return EstimateReport(
        value=point,
        sigma=errors,
        n=n,
        resamples=resamples,
        projected=projected,
        covariance=point_state,
        point_projected=point_load > 0,
        bootstrap=reports,
    )
