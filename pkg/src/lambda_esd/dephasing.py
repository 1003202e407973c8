"""Independent broadband dephasing of two qubits.

Each qubit's coherences decay with factor ``gamma_i(t) = exp(-Gamma_i t / 2)``;
an element ``rho[i, j]`` picks up ``gamma_A`` when the A indices of ``i`` and
``j`` differ and ``gamma_B`` when the B indices differ.  Populations are
untouched.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import InvalidParams, NegativeTime, UnsupportedParams
from .state import DensityMatrix, XStateParams, as_density

# bit pattern of the A and B index for basis states pp, pm, mp, mm
_A_BIT = np.array([0, 0, 1, 1])
_B_BIT = np.array([0, 1, 0, 1])
_A_DIFF = _A_BIT[:, None] != _A_BIT[None, :]
_B_DIFF = _B_BIT[:, None] != _B_BIT[None, :]


@dataclasses.dataclass(frozen=True)
class DephasingParams:
    gamma_a: float
    gamma_b: float

    def __post_init__(self):
        for name in ("gamma_a", "gamma_b"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise InvalidParams(f"{name} must be a finite rate >= 0, got {v!r}")

    @classmethod
    def equal(cls, gamma: float) -> "DephasingParams":
        return cls(gamma, gamma)


def decay_factors(p: DephasingParams, t: float) -> np.ndarray:
    """The 4x4 element-wise multiplier applied to the initial density matrix."""
    if t < 0:
        raise NegativeTime(f"t must be >= 0, got {t!r}")
    ga = math.exp(-0.5 * p.gamma_a * t)
    gb = math.exp(-0.5 * p.gamma_b * t)
    return np.where(_A_DIFF, ga, 1.0) * np.where(_B_DIFF, gb, 1.0)


def dephase(rho0, p: DephasingParams, t: float) -> DensityMatrix:
    rho0 = as_density(rho0)
    if rho0.dim != 4:
        raise InvalidParams("dephasing acts on two-qubit states")
    return DensityMatrix(rho0.mat * decay_factors(p, t))


def _require_w_zero(p0: XStateParams) -> XStateParams:
    p0 = XStateParams.create(p0.a, p0.b, p0.c, p0.d, p0.z, p0.w)
    if p0.w != 0:
        raise UnsupportedParams("closed form needs w = 0; use the full pipeline")
    return p0


def lambda_dephasing_closed(p0: XStateParams, gamma: float, t: float) -> float:
    """Lambda(t) = 2|z| exp(-gamma t) - 2 sqrt(ad) for an X state with w = 0.

    Exact while ``|z(t)| + sqrt(bc) >= sqrt(ad)``.  Past that point the true
    value is pinned at ``-2 sqrt(bc)``; both are negative there, so the sign and
    the zero crossing are always right.
    """
    p0 = _require_w_zero(p0)
    if t < 0:
        raise NegativeTime(f"t must be >= 0, got {t!r}")
    return 2.0 * abs(p0.z) * math.exp(-gamma * t) - 2.0 * math.sqrt(p0.a * p0.d)


@dataclasses.dataclass(frozen=True)
class ESDTime:
    time: float | None
    initially_separable: bool = False


def esd_time_dephasing(p0: XStateParams, gamma: float) -> ESDTime:
    """Time at which Lambda reaches zero under equal-rate dephasing.

    ``time`` is None when ``ad = 0`` (the state only approaches the
    boundary as t goes to infinity) or when ``gamma = 0``.  States already
    on the separable side at t = 0 report ``time = 0`` with
    ``initially_separable`` set.
    """
    p0 = _require_w_zero(p0)
    if not (math.isfinite(gamma) and gamma >= 0):
        raise InvalidParams(f"gamma must be a finite rate >= 0, got {gamma!r}")
    ad = p0.a * p0.d
    if ad == 0:
        return ESDTime(None)
    root = math.sqrt(ad)
    z = abs(p0.z)
    if z <= root:
        return ESDTime(0.0, initially_separable=True)
    if gamma == 0:
        return ESDTime(None)
    return ESDTime(math.log(z / root) / gamma)
