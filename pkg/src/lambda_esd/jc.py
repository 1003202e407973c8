"""Two independent resonant Jaynes-Cummings atom-mode pairs.

The simulator works on the tensor space A x B x a x b (atoms first, then
their cavity modes), each mode truncated to photon numbers 0..n_max.  The
atomic basis follows the package convention: ``|+>`` (excited) is index 0,
``|->`` index 1.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import config
from .errors import InvalidParams, NegativeTime, NotNormalized, TruncationLeak
from .linalg import dagger, eig_hermitian, kron
from .state import DensityMatrix, bell_phi, bell_psi, reduced_from_pure

SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)   # |+><-|
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |-><+|

FAMILIES = ("phi", "psi")
_BOUNDARY = 1e-12


@dataclasses.dataclass(frozen=True)
class JCParams:
    g: float
    omega0: float = 0.0
    omega: float = 0.0
    n_max: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.g) and self.g > 0):
            raise InvalidParams(f"coupling g must be > 0, got {self.g!r}")
        if not (math.isfinite(self.omega0) and math.isfinite(self.omega)):
            raise InvalidParams("frequencies must be finite")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise InvalidParams(f"n_max must be an integer >= 1, got {self.n_max!r}")

    @property
    def resonant(self) -> bool:
        return self.omega0 == self.omega


@dataclasses.dataclass(frozen=True)
class JCInitialFamily:
    family: str
    alpha: float

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParams(f"family must be one of {FAMILIES}, got {self.family!r}")
        if not (math.isfinite(self.alpha) and 0 <= self.alpha < 2 * math.pi):
            raise InvalidParams(f"alpha must lie in [0, 2*pi), got {self.alpha!r}")

    def atomic_ket(self) -> np.ndarray:
        return bell_phi(self.alpha) if self.family == "phi" else bell_psi(self.alpha)


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1)), k=1).astype(complex)


def pair_hamiltonian(p: JCParams) -> np.ndarray:
    """One atom-mode pair on atom x mode: (w0/2) sz + (g/2)(a^dag s- + s+ a) + w a^dag a."""
    a = annihilation(p.n_max)
    eye_m = np.eye(p.n_max + 1)
    eye_q = np.eye(2)
    return (
        0.5 * p.omega0 * kron(SIGMA_Z, eye_m)
        + 0.5 * p.g * (kron(SIGMA_MINUS, dagger(a)) + kron(SIGMA_PLUS, a))
        + p.omega * kron(eye_q, dagger(a) @ a)
    )


def _reorder_AaBb_to_ABab(m: np.ndarray, nm: int) -> np.ndarray:
    dims = [2, nm, 2, nm]
    t = m.reshape(dims + dims)
    perm = [0, 2, 1, 3]
    t = t.transpose(perm + [4 + i for i in perm])
    n = 4 * nm * nm
    return t.reshape(n, n)


def build_hamiltonian(p: JCParams) -> np.ndarray:
    """Total Hamiltonian ordered A x B x a x b; equals H_Aa x I + I x H_Bb up to that reordering."""
    h = pair_hamiltonian(p)
    eye = np.eye(h.shape[0])
    return _reorder_AaBb_to_ABab(kron(h, eye) + kron(eye, h), p.n_max + 1)


def initial_ket(init: JCInitialFamily, n_max: int) -> np.ndarray:
    vac = np.zeros(n_max + 1, dtype=complex)
    vac[0] = 1.0
    return np.kron(init.atomic_ket(), np.kron(vac, vac))


class JCSimulator:
    """Exact propagation by diagonalizing the truncated Hamiltonian once.

    Calling the simulator at a time ``t`` returns the two-atom density
    matrix with both modes traced out.
    """

    def __init__(self, init: JCInitialFamily, p: JCParams):
        self.init = init
        self.params = p
        self.hamiltonian = build_hamiltonian(p)
        self.energies, self.vectors = eig_hermitian(self.hamiltonian)
        self.psi0 = initial_ket(init, p.n_max)
        self._coeffs = dagger(self.vectors) @ self.psi0
        nm = p.n_max + 1
        self._dims = [2, 2, nm, nm]

    def ket(self, t: float) -> np.ndarray:
        if t < 0:
            raise NegativeTime(f"t must be >= 0, got {t!r}")
        psi = self.vectors @ (np.exp(-1j * self.energies * t) * self._coeffs)
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > config.get().pure_norm:
            raise NotNormalized(f"evolved state has norm {norm!r}")
        return psi

    def top_sector_population(self, psi: np.ndarray) -> float:
        """Probability that either mode sits in its highest retained Fock level."""
        n = self.params.n_max
        t = np.abs(psi.reshape(self._dims)) ** 2
        return float(t[:, :, n, :].sum() + t[:, :, :, n].sum() - t[:, :, n, n].sum())

    def atoms(self, t: float) -> DensityMatrix:
        psi = self.ket(t)
        if self.params.n_max > 1:
            leak = self.top_sector_population(psi)
            if leak > config.get().truncation_leak:
                raise TruncationLeak(f"population {leak:.3e} in the n = {self.params.n_max} sector")
        return DensityMatrix(reduced_from_pure(psi, self._dims, [0, 1]))

    __call__ = atoms


def simulate(init: JCInitialFamily, p: JCParams, t: float) -> DensityMatrix:
    return JCSimulator(init, p).atoms(t)


def lambda_jc_phi(alpha: float, g: float, t: float) -> float:
    """Lambda(t) for the cos(a)|++> + sin(a)|--> family, modes in vacuum, at resonance."""
    if t < 0:
        raise NegativeTime(f"t must be >= 0, got {t!r}")
    c2 = math.cos(0.5 * g * t) ** 2
    s2 = math.sin(0.5 * g * t) ** 2
    ca, sa = math.cos(alpha), math.sin(alpha)
    return c2 * (2 * abs(ca * sa) - 2 * s2 * abs(ca) ** 2)


def lambda_jc_psi(alpha: float, g: float, t: float) -> float:
    """Lambda(t) for the cos(a)|+-> + sin(a)|-+> family; never negative."""
    if t < 0:
        raise NegativeTime(f"t must be >= 0, got {t!r}")
    return abs(math.sin(2 * alpha)) * math.cos(0.5 * g * t) ** 2


def lambda_jc_closed(family: str, alpha: float, g: float, t: float) -> float:
    if family == "phi":
        return lambda_jc_phi(alpha, g, t)
    if family == "psi":
        return lambda_jc_psi(alpha, g, t)
    raise InvalidParams(f"family must be one of {FAMILIES}, got {family!r}")


def esd_onset_jc_phi(alpha: float, g: float) -> float | None:
    """First time Lambda turns negative for the phi family, or None if it never does.

    Negative values need sin^2(gt/2) > |tan(alpha)|, reachable only for
    |tan(alpha)| < 1.  ``alpha = 0`` is a product state and yields None.
    Ratios within 1e-12 of 1 count as the boundary case, whose dip below zero
    is pure rounding.
    """
    if not (math.isfinite(g) and g > 0):
        raise InvalidParams(f"coupling g must be > 0, got {g!r}")
    ca, sa = abs(math.cos(alpha)), abs(math.sin(alpha))
    if sa == 0.0 or not sa < ca * (1.0 - _BOUNDARY):
        return None
    return (2.0 / g) * math.asin(math.sqrt(sa / ca))
