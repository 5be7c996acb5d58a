"""Correlation measures of two-mode Gaussian states.

All entropic quantities are reported in bits unless ``base`` is changed
(``base=math.e`` gives nats). The discord is the one-way Gaussian discord with
the optimal Gaussian measurement performed on mode B.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
from scipy import optimize

from .covariance import (
    PHYSICALITY_TOL,
    ExactInvariants,
    SymplecticInvariants,
    TwoModeCovariance,
    invariants,
)
from .errors import DomainError, SingularMatrix

ZERO_CLAMP = 1e-9
DEGENERATE_TOL = 1e-12

UNIT_BASES = {"bits": 2.0, "nats": math.e}


def base_for_units(units: str) -> float:
    try:
        return UNIT_BASES[units]
    except KeyError:
        raise DomainError(f"unknown units {units!r}; expected one of {sorted(UNIT_BASES)}") from None


def entropy_f(x: float, base: float = 2.0, tol: float = PHYSICALITY_TOL) -> float:
    """Von Neumann entropy of a single-mode thermal state with symplectic eigenvalue ``x``.

    ``f(x) = (x+1)/2 log((x+1)/2) - (x-1)/2 log((x-1)/2)``, with ``f(1) = 0``.
    """
    if x < 1 - tol:
        raise DomainError(f"entropy_f needs x >= 1, got {x!r}")
    if x <= 1:
        return 0.0
    b = (x - 1) / 2
    # (1 + b) log(1 + b) - b log b, regrouped to avoid cancellation at both ends
    nats = math.log1p(b) + b * math.log1p(1 / b)
    return nats / math.log(base)


@dataclass(frozen=True)
class MeasurementCovariance:
    """Pure general-dyne measurement ``R(phi) diag(lam, 1/lam) R(phi)^T`` on mode B."""

    lam: float
    phi: float = 0.0

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"measurement squeezing must be > 0, got {self.lam}")

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.phi), math.sin(self.phi)
        rot = np.array([[c, -s], [s, c]])
        return rot @ np.diag([self.lam, 1 / self.lam]) @ rot.T


@dataclass(frozen=True)
class MeasureReport:
    mutual_info_I: float
    classical_info_J: float
    discord_D: float
    log_negativity: float
    separable: bool
    e_min: float
    branch: str

    def to_dict(self) -> dict:
        return asdict(self)

    def csv_fields(self) -> list:
        return [
            self.mutual_info_I,
            self.classical_info_J,
            self.discord_D,
            self.log_negativity,
            str(self.separable).lower(),
            self.branch,
        ]


CSV_COLUMNS = ["I", "J", "D", "E_N", "separable", "branch"]


def _inv(sigma_or_inv) -> SymplecticInvariants:
    if isinstance(sigma_or_inv, SymplecticInvariants):
        return sigma_or_inv
    return invariants(sigma_or_inv)


def mutual_information(sigma: TwoModeCovariance, base: float = 2.0) -> float:
    """Von Neumann mutual information ``S(A) + S(B) - S(AB)``."""
    inv = _inv(sigma)
    value = (
        entropy_f(math.sqrt(inv.i1), base)
        + entropy_f(math.sqrt(inv.i2), base)
        - entropy_f(inv.nu_minus, base)
        - entropy_f(inv.nu_plus, base)
    )
    return 0.0 if abs(value) < ZERO_CLAMP else value


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a non-negative rational, or None if it is irrational."""
    if q < 0:
        return None
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def e_min(inv: SymplecticInvariants) -> tuple[float, str]:
    """Minimal conditional determinant of mode A over Gaussian measurements on B.

    Returns ``(value, branch)`` where ``branch`` is ``"a"``, ``"b"`` or
    ``"degenerate"`` (mode B pure and uncorrelated, value ``I1``).
    """
    ex = inv.exact
    if ex is None:
        ex = ExactInvariants(*(Fraction(v) for v in (inv.i1, inv.i2, inv.i3, inv.i4)))
    i1, i2, i3, i4 = ex
    if abs(i2 - 1) < DEGENERATE_TOL and abs(i3) < DEGENERATE_TOL:
        return float(i1), "degenerate"

    if i2 != 1 and (i4 - i1 * i2) ** 2 <= i3 * i3 * (i2 + 1) * (i1 + i4):
        # (2 I3^2 + X + 2|I3| sqrt(I3^2 + X)) / (I2-1)^2 is a perfect square:
        # ((|I3| + sqrt(I3^2 + X)) / (I2 - 1))^2 with X = (I2-1)(I4-I1).
        radicand = i3 * i3 + (i2 - 1) * (i4 - i1)
        exact_root = _rational_sqrt(radicand)
        if exact_root is not None:
            return float(((abs(i3) + exact_root) / (i2 - 1)) ** 2), "a"
        root = math.sqrt(radicand) if radicand > 0 else 0.0
        value = ((abs(float(i3)) + root) / float(i2 - 1)) ** 2
        return value, "a"

    # Rationalised numerator: P^2 - R = 4 I1 I2 I4, so (P - sqrt R)/(2 I2) = 2 I1 I4 / (P + sqrt R).
    p = i1 * i2 - i3 * i3 + i4
    radicand = i3**4 + (i4 - i1 * i2) ** 2 - 2 * i3 * i3 * (i4 + i1 * i2)
    root = math.sqrt(radicand) if radicand > 0 else 0.0
    value = 2 * float(i1 * i4) / (float(p) + root)
    return value, "b"


def _discord_from(inv: SymplecticInvariants, emin: float, base: float) -> float:
    value = (
        entropy_f(math.sqrt(inv.i2), base)
        - entropy_f(inv.nu_minus, base)
        - entropy_f(inv.nu_plus, base)
        + entropy_f(math.sqrt(emin), base)
    )
    return 0.0 if abs(value) < ZERO_CLAMP else value


def gaussian_discord(sigma: TwoModeCovariance, base: float = 2.0) -> float:
    inv = _inv(sigma)
    emin, _ = e_min(inv)
    return _discord_from(inv, emin, base)


def log_negativity(sigma: TwoModeCovariance, base: float = 2.0) -> float:
    inv = _inv(sigma)
    if inv.nu_tilde_minus >= 1:
        return 0.0
    return -math.log(inv.nu_tilde_minus) / math.log(base)


def is_separable_ppt(sigma: TwoModeCovariance, tol: float = PHYSICALITY_TOL) -> bool:
    return _inv(sigma).nu_tilde_minus >= 1 - tol


def measure_report(sigma: TwoModeCovariance, base: float = 2.0) -> MeasureReport:
    """Every measure of one state, sharing a single invariant evaluation."""
    inv = _inv(sigma)
    emin, branch = e_min(inv)
    mutual = mutual_information(inv, base)
    discord = _discord_from(inv, emin, base)
    classical = mutual - discord
    if -ZERO_CLAMP < classical < 0:
        classical, discord = 0.0, mutual
    return MeasureReport(
        mutual_info_I=mutual,
        classical_info_J=classical,
        discord_D=discord,
        log_negativity=log_negativity(inv, base),
        separable=is_separable_ppt(inv),
        e_min=emin,
        branch=branch,
    )


# -- brute-force measurement optimisation -------------------------------------


def conditional_a_determinant(sigma: TwoModeCovariance, m: MeasurementCovariance) -> float:
    """``det(alpha - gamma (beta + sigma_M)^-1 gamma^T)`` for one measurement."""
    bm = sigma.beta + m.matrix()
    d = np.linalg.det(bm)
    if not np.isfinite(d) or abs(d) < 1e-300:
        raise SingularMatrix("beta + sigma_M is singular")
    cond = sigma.alpha - sigma.gamma @ np.linalg.solve(bm, sigma.gamma.T)
    return float(np.linalg.det(cond))


def _conditional_det_grid(sigma: TwoModeCovariance, log_lam, phi):
    """Vectorised conditional determinant; ``log_lam`` is base-10."""
    lam = 10.0 ** np.asarray(log_lam, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c2, s2, cs = np.cos(phi) ** 2, np.sin(phi) ** 2, np.cos(phi) * np.sin(phi)
    inv_lam = 1.0 / lam
    m11 = lam * c2 + inv_lam * s2
    m22 = lam * s2 + inv_lam * c2
    m12 = (lam - inv_lam) * cs
    b1, b2 = sigma.b_xx, sigma.b_pp
    # det(sigma_M) = 1 exactly; expanding avoids cancellation for extreme lam.
    det_b = b1 * b2 + b1 * m22 + b2 * m11 + 1.0
    cx, cp = sigma.c_x, sigma.c_p
    a11 = sigma.a_xx - cx * cx * (b2 + m22) / det_b
    a22 = sigma.a_pp - cp * cp * (b1 + m11) / det_b
    a12 = cx * cp * m12 / det_b
    return a11 * a22 - a12 * a12


@dataclass(frozen=True)
class OracleResult:
    value: float
    lam: float
    phi: float


LOG_LAM_BOUNDS = (-8.0, 8.0)


def minimize_oracle(
    sigma: TwoModeCovariance, grid_size: int = 48, refine_iters: int = 400, starts: int = 3
) -> OracleResult:
    """Minimise the conditional determinant over pure Gaussian measurements.

    Coarse grid over ``log10(lam) in [-8, 8]`` and ``phi in [0, pi)``, then
    Nelder-Mead from the ``starts`` best grid points. Deterministic for fixed
    arguments.
    """
    lo, hi = LOG_LAM_BOUNDS
    ll = np.linspace(lo, hi, grid_size)
    ph = np.linspace(0.0, np.pi, grid_size, endpoint=False)
    LL, PH = np.meshgrid(ll, ph, indexing="ij")
    values = _conditional_det_grid(sigma, LL, PH)
    flat = np.argsort(values, axis=None)[:starts]

    def objective(v):
        return float(_conditional_det_grid(sigma, np.clip(v[0], lo, hi), v[1]))

    best = OracleResult(float(values.flat[flat[0]]), 10.0 ** LL.flat[flat[0]], float(PH.flat[flat[0]]))
    for k in flat:
        res = optimize.minimize(
            objective,
            x0=[LL.flat[k], PH.flat[k]],
            method="Nelder-Mead",
            bounds=[(lo, hi), (None, None)],
            options={"maxiter": refine_iters, "xatol": 1e-10, "fatol": 1e-15},
        )
        if res.fun < best.value:
            best = OracleResult(float(res.fun), 10.0 ** float(np.clip(res.x[0], lo, hi)), float(res.x[1] % np.pi))
    return best
