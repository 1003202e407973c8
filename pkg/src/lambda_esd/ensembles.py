"""Seeded random states and matrices for property checks and sweeps.

All samplers take a ``numpy.random.Generator``.
"""

from __future__ import annotations

import math

import numpy as np

from .state import XStateParams


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def ginibre_state(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    """``G G^dagger / Tr(G G^dagger)`` with ``G`` a complex Gaussian matrix."""
    g = complex_gaussian(rng, (dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def haar_ket(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    v = complex_gaussian(rng, dim)
    return v / np.linalg.norm(v)


def product_ket(rng: np.random.Generator) -> np.ndarray:
    return np.kron(haar_ket(rng, 2), haar_ket(rng, 2))


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(complex_gaussian(rng, (dim, dim)))
    d = np.diag(r)
    return q * (d / np.abs(d))


def su2(rng: np.random.Generator) -> np.ndarray:
    u = haar_unitary(rng, 2)
    return u / np.sqrt(np.linalg.det(u))


def random_x_params(rng: np.random.Generator, *, w_zero: bool = False,
                    z_zero: bool = False) -> XStateParams:
    """Populations from a flat Dirichlet; coherences uniform in the allowed discs."""
    a, b, c, d = rng.dirichlet(np.ones(4))

    def coherence(bound: float) -> complex:
        r = bound * math.sqrt(rng.uniform())
        phi = rng.uniform(0, 2 * math.pi)
        return r * complex(math.cos(phi), math.sin(phi))

    z = 0j if z_zero else coherence(math.sqrt(b * c))
    w = 0j if w_zero else coherence(math.sqrt(a * d))
    return XStateParams.create(a, b, c, d, z, w)


def well_conditioned_matrix(rng: np.random.Generator, dim: int = 4,
                            cond_cap: float = 1e6) -> np.ndarray:
    while True:
        m = complex_gaussian(rng, (dim, dim))
        if np.linalg.cond(m) <= cond_cap:
            return m
