"""Two-mode covariance matrices in standard form and their symplectic invariants.

Units are shot-noise units throughout: the vacuum has quadrature variance 1,
so the uncertainty relation reads ``nu_minus >= 1``. Quadrature ordering of the
full 4x4 matrix is ``(x_A, p_A, x_B, p_B)``.

The invariant polynomials are evaluated exactly on the binary values of the
matrix entries (``fractions.Fraction``) before any square root is taken. For
nearly pure states the discriminants involved are tiny differences of large
numbers, and rounding them first would destroy the entropies near ``x = 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from os import PathLike
from typing import NamedTuple, Union

import numpy as np

from .errors import ComplexEigenvalue, NonPositiveMatrix, NotStandardForm

PHYSICALITY_TOL = 1e-9

# (row, col) positions of the six standard-form entries in the 4x4 matrix.
_STANDARD_SLOTS = {
    "a_xx": (0, 0),
    "a_pp": (1, 1),
    "b_xx": (2, 2),
    "b_pp": (3, 3),
    "c_x": (0, 2),
    "c_p": (1, 3),
}
_OFF_STANDARD = [(0, 1), (0, 3), (1, 2), (2, 3)]


@dataclass(frozen=True)
class TwoModeCovariance:
    """Standard-form covariance of a two-mode Gaussian state.

    ``alpha = diag(a_xx, a_pp)``, ``beta = diag(b_xx, b_pp)`` and
    ``gamma = diag(c_x, c_p)``.
    """

    a_xx: float
    a_pp: float
    b_xx: float
    b_pp: float
    c_x: float
    c_p: float

    def __post_init__(self):
        for name in ("a_xx", "a_pp", "b_xx", "b_pp", "c_x", "c_p"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise NonPositiveMatrix(f"{name} is not finite: {value!r}")
            object.__setattr__(self, name, value)

    @property
    def alpha(self) -> np.ndarray:
        return np.diag([self.a_xx, self.a_pp])

    @property
    def beta(self) -> np.ndarray:
        return np.diag([self.b_xx, self.b_pp])

    @property
    def gamma(self) -> np.ndarray:
        return np.diag([self.c_x, self.c_p])

    def matrix(self) -> np.ndarray:
        """Full 4x4 matrix in ``(x_A, p_A, x_B, p_B)`` ordering."""
        m = np.zeros((4, 4))
        for name, (i, j) in _STANDARD_SLOTS.items():
            m[i, j] = m[j, i] = getattr(self, name)
        return m

    def swap_modes(self) -> "TwoModeCovariance":
        return TwoModeCovariance(self.b_xx, self.b_pp, self.a_xx, self.a_pp, self.c_x, self.c_p)

    def replace(self, **changes) -> "TwoModeCovariance":
        return TwoModeCovariance(**{**asdict(self), **changes})

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def identity(cls) -> "TwoModeCovariance":
        return cls(1.0, 1.0, 1.0, 1.0, 0.0, 0.0)


class ExactInvariants(NamedTuple):
    i1: Fraction
    i2: Fraction
    i3: Fraction
    i4: Fraction


@dataclass(frozen=True)
class SymplecticInvariants:
    i1: float
    i2: float
    i3: float
    i4: float
    delta: float
    nu_minus: float
    nu_plus: float
    nu_tilde_minus: float
    exact: ExactInvariants | None = field(default=None, repr=False, compare=False)


def exact_invariants(sigma: TwoModeCovariance) -> ExactInvariants:
    """I1..I4 as exact rationals of the stored float entries."""
    ax, ap, bx, bp, cx, cp = (
        Fraction(v) for v in (sigma.a_xx, sigma.a_pp, sigma.b_xx, sigma.b_pp, sigma.c_x, sigma.c_p)
    )
    # Closed form of the 4x4 determinant for standard-form matrices.
    return ExactInvariants(ax * ap, bx * bp, cx * cp, (ax * bx - cx * cx) * (ap * bp - cp * cp))


def _symplectic_pair(delta: Fraction, i4: Fraction, tol: float) -> tuple[float, float]:
    disc = delta * delta - 4 * i4
    if disc < 0:
        if float(-disc) > tol * max(1.0, float(delta * delta)):
            raise ComplexEigenvalue(
                f"delta^2 - 4 I4 = {float(disc):.3e} < 0; the input is not a physical covariance"
            )
        disc = Fraction(0)
    root = math.sqrt(disc)
    d = float(delta)
    nu_plus_sq = (d + root) / 2
    # Product form avoids cancellation when nu_minus << nu_plus.
    nu_minus_sq = 2 * float(i4) / (d + root) if d + root > 0 else 0.0
    return math.sqrt(max(nu_minus_sq, 0.0)), math.sqrt(nu_plus_sq)


def _check_positive(sigma: TwoModeCovariance) -> None:
    # Leading principal minors of the standard-form matrix, evaluated per quadrature block.
    if sigma.a_xx <= 0 or sigma.a_pp <= 0 or sigma.b_xx <= 0 or sigma.b_pp <= 0:
        raise NonPositiveMatrix("all variances must be positive")
    ax, ap, bx, bp, cx, cp = (
        Fraction(v) for v in (sigma.a_xx, sigma.a_pp, sigma.b_xx, sigma.b_pp, sigma.c_x, sigma.c_p)
    )
    if ax * bx - cx * cx <= 0 or ap * bp - cp * cp <= 0:
        raise NonPositiveMatrix("covariance matrix is not positive definite (|c| too large for the variances)")


def invariants(sigma: TwoModeCovariance, tol: float = PHYSICALITY_TOL) -> SymplecticInvariants:
    """Symplectic invariants, symplectic eigenvalues and partial-transpose eigenvalue.

    Raises:
        NonPositiveMatrix: the 4x4 matrix is not positive definite.
        ComplexEigenvalue: ``delta**2 - 4*I4`` is negative beyond rounding.
    """
    _check_positive(sigma)
    ex = exact_invariants(sigma)
    delta = ex.i1 + ex.i2 + 2 * ex.i3
    delta_pt = ex.i1 + ex.i2 - 2 * ex.i3
    nu_minus, nu_plus = _symplectic_pair(delta, ex.i4, tol)
    nu_tilde_minus, _ = _symplectic_pair(delta_pt, ex.i4, tol)
    return SymplecticInvariants(
        i1=float(ex.i1),
        i2=float(ex.i2),
        i3=float(ex.i3),
        i4=float(ex.i4),
        delta=float(delta),
        nu_minus=nu_minus,
        nu_plus=nu_plus,
        nu_tilde_minus=nu_tilde_minus,
        exact=ex,
    )


@dataclass(frozen=True)
class PhysicalityVerdict:
    ok: bool
    reason: str = ""
    nu_minus: float | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_physicality(sigma: TwoModeCovariance, tol: float = PHYSICALITY_TOL) -> PhysicalityVerdict:
    """Check positivity and the uncertainty relation ``nu_minus >= 1 - tol``.

    Never raises; the verdict carries the violated quantity.
    """
    try:
        inv = invariants(sigma, tol=tol)
    except NonPositiveMatrix as exc:
        return PhysicalityVerdict(False, f"physicality: {exc}")
    except ComplexEigenvalue as exc:
        return PhysicalityVerdict(False, f"physicality: {exc}")
    if inv.nu_minus < 1 - tol:
        return PhysicalityVerdict(
            False, f"physicality: nu_minus = {inv.nu_minus:.6g} < 1 (uncertainty relation)", inv.nu_minus
        )
    return PhysicalityVerdict(True, "", inv.nu_minus)


def coerce_standard_form(full, tol) -> TwoModeCovariance:
    """Read a symmetric 4x4 matrix as a standard-form state.

    ``tol`` is a scalar or a 4x4 array of per-entry tolerances; every x-p cross
    term must satisfy ``|entry| <= tol``.

    Raises:
        NotStandardForm: an off-standard entry (or the asymmetry) exceeds tolerance.
    """
    m = np.asarray(full, dtype=float)
    if m.shape != (4, 4):
        raise NotStandardForm(f"expected a 4x4 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotStandardForm("matrix contains non-finite entries")
    tol_m = np.broadcast_to(np.asarray(tol, dtype=float), (4, 4))
    asym = np.abs(m - m.T)
    if np.any(asym > 2 * tol_m):
        i, j = np.unravel_index(np.argmax(asym - 2 * tol_m), (4, 4))
        raise NotStandardForm(f"matrix is not symmetric at ({i}, {j})", (int(i), int(j)), float(asym[i, j]))
    sym = (m + m.T) / 2
    worst = None
    for i, j in _OFF_STANDARD:
        excess = abs(sym[i, j]) - tol_m[i, j]
        if excess > 0 and (worst is None or excess > worst[0]):
            worst = (excess, i, j)
    if worst is not None:
        _, i, j = worst
        raise NotStandardForm(
            f"off-standard entry ({i}, {j}) = {sym[i, j]:.3g} exceeds tolerance {tol_m[i, j]:.3g}",
            (i, j),
            float(sym[i, j]),
        )
    return TwoModeCovariance(**{name: sym[i, j] for name, (i, j) in _STANDARD_SLOTS.items()})


def from_json_obj(obj, tol: float = 1e-9) -> TwoModeCovariance:
    """Accept the six named fields, ``{"matrix": [[...]]}`` or a bare 4x4 array."""
    if isinstance(obj, dict) and "matrix" in obj:
        obj = obj["matrix"]
    if isinstance(obj, dict):
        missing = [k for k in _STANDARD_SLOTS if k not in obj]
        if missing:
            raise NotStandardForm(f"missing covariance fields: {', '.join(missing)}")
        try:
            return TwoModeCovariance(**{k: float(obj[k]) for k in _STANDARD_SLOTS})
        except (TypeError, ValueError) as exc:
            raise NotStandardForm(f"bad covariance field: {exc}") from exc
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise NotStandardForm(f"cannot read covariance matrix: {exc}") from exc
    return coerce_standard_form(arr, tol)


def read_covariance(path: Union[str, PathLike], tol: float = 1e-9) -> TwoModeCovariance:
    with open(path) as fh:
        return from_json_obj(json.load(fh), tol=tol)


def write_covariance(sigma: TwoModeCovariance, path: Union[str, PathLike]) -> None:
    with open(path, "w") as fh:
        json.dump(sigma.to_dict(), fh, indent=2)
        fh.write("\n")
