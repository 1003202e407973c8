"""Signed separability distance (Lambda), concurrence and negativity."""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import config
from .errors import InvalidState
from .linalg import eig4_general, eig_hermitian, kron
from .state import DensityMatrix, XStateParams, as_density, partial_transpose

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
SPIN_FLIP = kron(SIGMA_Y, SIGMA_Y)

# eigenvalues of rho below this (relative to the largest) are rank-deficiency noise
_RANK_FLOOR = 1e-14


@dataclasses.dataclass(frozen=True)
class LambdaResult:
    lam: float
    concurrence: float
    sqrt_eigs: tuple[float, float, float, float]
    residual: float
    zeta_eigs: tuple[float, float, float, float] = ()

    def as_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "concurrence": self.concurrence,
            "sqrt_eigs": list(self.sqrt_eigs),
            "residual": self.residual,
        }


def _two_qubit(rho) -> DensityMatrix:
    rho = as_density(rho)
    if rho.dim != 4:
        raise InvalidState("shape", f"two-qubit state expected, got dimension {rho.dim}")
    return rho


def spin_flip_product(rho) -> np.ndarray:
    """``rho (sy x sy) rho* (sy x sy)`` in the standard basis."""
    m = _two_qubit(rho).mat
    return m @ SPIN_FLIP @ m.conj() @ SPIN_FLIP


def zeta_eigenvalues(rho) -> tuple[np.ndarray, float]:
    """Eigenvalues of the spin-flip product, clamped, with the largest imaginary part seen.

    Raises :class:`InvalidState` (invariant ``"spectrum"``) if an eigenvalue
    has an imaginary part or a negative real part beyond the configured
    tolerances.
    """
    tol = config.get()
    eigs = eig4_general(spin_flip_product(rho))
    residual = float(np.max(np.abs(eigs.imag)))
    if residual > tol.eig_imag_reject:
        raise InvalidState("spectrum", f"spin-flip eigenvalue has imaginary part {residual:.3e}")
    re = eigs.real
    if re.min() < -tol.eig_negative_clamp:
        raise InvalidState("spectrum", f"spin-flip eigenvalue {re.min():.3e} is negative")
    return np.sort(np.maximum(re, 0.0))[::-1], residual


def spin_flip_singular_values(rho) -> np.ndarray:
    """Square roots of the spin-flip eigenvalues, descending.

    They are the singular values of ``sqrt(rho) S sqrt(rho)^T`` and are read
    off the Hermitian dilation ``[[0, B], [B^dagger, 0]]``, which keeps the
    small ones accurate to machine precision instead of to its square root.
    """
    m = _two_qubit(rho).mat
    w, v = eig_hermitian(m, tol=np.inf)
    w = np.where(w > _RANK_FLOOR * max(w[0], 1e-300), w, 0.0)
    root = (v * np.sqrt(w)) @ v.conj().T
    b = root @ SPIN_FLIP @ root.conj()
    dil = np.zeros((8, 8), dtype=complex)
    dil[:4, 4:] = b
    dil[4:, :4] = b.conj().T
    s, _ = eig_hermitian(dil, tol=np.inf)
    return np.maximum(s[:4], 0.0)


def lambda_distance(rho) -> LambdaResult:
    """Lambda = sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4) and the concurrence max(0, Lambda)."""
    rho = _two_qubit(rho)
    zeta, residual = zeta_eigenvalues(rho)
    s = spin_flip_singular_values(rho)
    lam = float(s[0] - s[1] - s[2] - s[3])
    return LambdaResult(
        lam=lam,
        concurrence=max(0.0, lam),
        sqrt_eigs=tuple(float(x) for x in s),
        residual=residual,
        zeta_eigs=tuple(float(x) for x in zeta),
    )


def concurrence(rho) -> float:
    return lambda_distance(rho).concurrence


def lambda_x_closed(p: XStateParams) -> float:
    """Closed-form Lambda of an X state: ``2 max(|z| - sqrt(ad), |w| - sqrt(bc))``."""
    if not isinstance(p, XStateParams):
        p = XStateParams.create(*p)
    else:
        p = XStateParams.create(p.a, p.b, p.c, p.d, p.z, p.w)
    return 2.0 * max(abs(p.z) - math.sqrt(p.a * p.d), abs(p.w) - math.sqrt(p.b * p.c))


def negativity(rho) -> float:
    """``max(0, -2 * min eig(rho^T_B))``; zero exactly for separable two-qubit states."""
    pt = partial_transpose(_two_qubit(rho).mat, "B")
    w, _ = eig_hermitian(pt, tol=np.inf)
    return max(0.0, -2.0 * float(w[-1]))
