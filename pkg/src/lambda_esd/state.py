"""Two-qubit density matrices and the constructors built on them.

Basis ordering is fixed everywhere to |+,+>, |+,->, |-,+>, |-,->, i.e. the
first qubit (A) is the most significant index and ``+`` is index 0.
"""

from __future__ import annotations

import dataclasses
import math
from collections.abc import Sequence

import numpy as np

from . import config
from .errors import DimensionMismatch, InvalidState, InvalidXParams, NonFiniteEntry, NotNormalized
from .linalg import as_matrix, dagger, eig_hermitian, hermiticity_error, kron

BASIS_LABELS = ("pp", "pm", "mp", "mm")
BASIS_STRING = ",".join(BASIS_LABELS)

PLUS = np.array([1, 0], dtype=complex)
MINUS = np.array([0, 1], dtype=complex)


class DensityMatrix:
    """A validated density matrix (Hermitian, unit trace, positive semidefinite).

    The underlying array is read-only; use ``.mat`` to access it.
    """

    __slots__ = ("mat",)

    def __init__(self, mat, *, validate: bool = True):
        try:
            a = as_matrix(mat, square=True)
        except NonFiniteEntry as exc:
            raise InvalidState("finite", str(exc)) from None
        except DimensionMismatch as exc:
            raise InvalidState("shape", str(exc)) from None
        a = a.copy()
        if validate:
            _validate(a)
        a.setflags(write=False)
        self.mat = a

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def nqubits(self) -> int | None:
        n = self.dim.bit_length() - 1
        return n if 1 << n == self.dim else None

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


def _validate(a: np.ndarray) -> None:
    tol = config.get()
    err = hermiticity_error(a)
    if err > tol.state_hermitian:
        raise InvalidState("hermitian", f"max |rho - rho^dagger| = {err:.3e}")
    tr = np.trace(a)
    if abs(tr - 1.0) > tol.state_trace:
        raise InvalidState("trace", f"trace = {tr.real:.12g}{tr.imag:+.3g}j, expected 1")
    w, _ = eig_hermitian(0.5 * (a + dagger(a)), tol=np.inf)
    if w[-1] < -tol.state_psd:
        raise InvalidState("psd", f"minimum eigenvalue {w[-1]:.3e} below -{tol.state_psd:.0e}")


def as_density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


# ---------------------------------------------------------------------------
# pure states
# ---------------------------------------------------------------------------

def ket(*amps) -> np.ndarray:
    return np.array(amps, dtype=complex)


def normalize(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    n = np.linalg.norm(psi)
    if n == 0:
        raise NotNormalized("zero vector cannot be normalized")
    return psi / n


def from_pure(psi) -> DensityMatrix:
    """``|psi><psi|`` for a unit-norm state vector."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if not np.all(np.isfinite(psi)):
        raise NotNormalized("state vector contains NaN or Inf")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > config.get().pure_norm:
        raise NotNormalized(f"|psi| = {norm:.15g}, expected 1")
    return DensityMatrix(np.outer(psi, psi.conj()))


def product_ket(a, b) -> np.ndarray:
    """``a|+>_A + ...`` times ``c|+>_B + ...`` for single-qubit amplitude pairs."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def bell_phi(alpha: float) -> np.ndarray:
    """``cos(alpha)|+,+> + sin(alpha)|-,->``."""
    return ket(math.cos(alpha), 0, 0, math.sin(alpha))


def bell_psi(alpha: float) -> np.ndarray:
    """``cos(alpha)|+,-> + sin(alpha)|-,+>``."""
    return ket(0, math.cos(alpha), math.sin(alpha), 0)


PHI_PLUS = bell_phi(math.pi / 4)


# ---------------------------------------------------------------------------
# X states
# ---------------------------------------------------------------------------

@dataclasses.dataclass(frozen=True)
class XStateParams:
    """Populations ``a, b, c, d`` and coherences ``z`` (|+-><-+|), ``w`` (|++><--|).

    Use :meth:`create` to validate; it rescales populations whose sum is
    within ``x_renormalize`` of one and records that in ``renormalized``.
    """

    a: float
    b: float
    c: float
    d: float
    z: complex = 0j
    w: complex = 0j
    renormalized: bool = False

    @classmethod
    def create(cls, a, b, c, d, z=0j, w=0j) -> "XStateParams":
        tol = config.get()
        vals = [float(a), float(b), float(c), float(d)]
        z, w = complex(z), complex(w)
        if not all(math.isfinite(v) for v in vals) or not (np.isfinite(z) and np.isfinite(w)):
            raise InvalidXParams("parameters must be finite")
        if min(vals) < 0:
            raise InvalidXParams(f"populations must be nonnegative, got {vals}")
        total = math.fsum(vals)
        renorm = False
        if abs(total - 1.0) > tol.x_trace:
            if abs(total - 1.0) > tol.x_renormalize:
                raise InvalidXParams(f"a+b+c+d = {total!r}, expected 1")
            vals = [v / total for v in vals]
            renorm = True
        a, b, c, d = vals
        slack = tol.x_positivity
        if abs(z) ** 2 > b * c + slack:
            raise InvalidXParams(f"|z|^2 = {abs(z) ** 2:.6g} exceeds b*c = {b * c:.6g}")
        if abs(w) ** 2 > a * d + slack:
            raise InvalidXParams(f"|w|^2 = {abs(w) ** 2:.6g} exceeds a*d = {a * d:.6g}")
        return cls(a, b, c, d, z, w, renorm)

    def as_dict(self) -> dict:
        return {
            "a": self.a, "b": self.b, "c": self.c, "d": self.d,
            "z": [self.z.real, self.z.imag], "w": [self.w.real, self.w.imag],
        }


def x_matrix(p: XStateParams) -> np.ndarray:
    return np.array(
        [
            [p.a, 0, 0, p.w],
            [0, p.b, p.z, 0],
            [0, np.conj(p.z), p.c, 0],
            [np.conj(p.w), 0, 0, p.d],
        ],
        dtype=complex,
    )


def x_state(p: XStateParams) -> DensityMatrix:
    """Density matrix of the X form; parameters are (re)validated first."""
    if isinstance(p, XStateParams):
        p = XStateParams.create(p.a, p.b, p.c, p.d, p.z, p.w)
    else:
        p = XStateParams.create(*p)
    return DensityMatrix(x_matrix(p))


def x_params(rho) -> XStateParams:
    """Read (a, b, c, d, z, w) back off a matrix with the X sparsity pattern."""
    m = np.asarray(rho, dtype=complex)
    mask = np.eye(4, dtype=bool) | np.eye(4, dtype=bool)[::-1]
    if m.shape != (4, 4) or np.any(m[~mask] != 0):
        raise InvalidXParams("matrix does not have the X sparsity pattern")
    return XStateParams(m[0, 0].real, m[1, 1].real, m[2, 2].real, m[3, 3].real, m[1, 2], m[0, 3])


# ---------------------------------------------------------------------------
# reductions
# ---------------------------------------------------------------------------

def partial_trace(rho, dims: Sequence[int], keep: Sequence[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    ``dims`` lists the subsystem dimensions in tensor order; the kept
    subsystems retain their relative order.
    """
    m = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"bad dims {dims} for matrix of shape {m.shape}")
    if math.prod(dims) != m.shape[0]:
        raise DimensionMismatch(f"prod(dims) = {math.prod(dims)} != {m.shape[0]}")
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatch(f"keep indices {keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    t = m.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = [letters[i] for i in range(n)]
    col = [letters[n + i] if i in keep else letters[i] for i in range(n)]
    out = [letters[i] for i in keep] + [letters[n + i] for i in keep]
    reduced = np.einsum("".join(row) + "".join(col) + "->" + "".join(out), t)
    kd = math.prod(dims[i] for i in keep)
    return DensityMatrix(reduced.reshape(kd, kd))


def reduced_from_pure(psi, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of a pure state without forming the full projector."""
    psi = np.asarray(psi, dtype=complex)
    n = len(dims)
    keep = sorted(set(keep))
    rest = [i for i in range(n) if i not in keep]
    t = psi.reshape(dims).transpose(keep + rest)
    kd = math.prod(dims[i] for i in keep)
    t = t.reshape(kd, -1)
    return t @ t.conj().T


def partial_transpose(rho, subsystem: str = "B") -> np.ndarray:
    """Transpose the indices of qubit ``"A"`` or ``"B"`` of a two-qubit matrix."""
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise DimensionMismatch(f"partial transpose needs a 4x4 matrix, got {m.shape}")
    t = m.reshape(2, 2, 2, 2)  # (iA, iB, jA, jB)
    if subsystem.upper() == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem.upper() == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return t.reshape(4, 4)


def purity(rho) -> float:
    m = np.asarray(rho, dtype=complex)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))


def local_unitary(rho, ua, ub) -> DensityMatrix:
    u = kron(ua, ub)
    return DensityMatrix(u @ np.asarray(rho) @ dagger(u))


# ---------------------------------------------------------------------------
# JSON exchange format
# ---------------------------------------------------------------------------

def to_json_dict(rho) -> dict:
    m = np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise DimensionMismatch("JSON exchange format covers two-qubit (4x4) states only")
    return {
        "dim": 4,
        "basis": BASIS_STRING,
        "re": [[float(v) for v in row] for row in m.real],
        "im": [[float(v) for v in row] for row in m.imag],
    }


def from_json_dict(doc) -> DensityMatrix:
    """Parse the exchange format; raises ``ValueError`` on malformed documents."""
    if not isinstance(doc, dict):
        raise ValueError("density-matrix document must be a JSON object")
    missing = {"dim", "basis", "re", "im"} - doc.keys()
    if missing:
        raise ValueError(f"missing keys: {sorted(missing)}")
    if doc["basis"] != BASIS_STRING:
        raise ValueError(f"basis must be {BASIS_STRING!r}, got {doc['basis']!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim != 4:
        raise ValueError(f"dim must be the integer 4, got {dim!r}")
    try:
        re = np.array(doc["re"], dtype=float)
        im = np.array(doc["im"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"re/im must be numeric {dim}x{dim} arrays: {exc}") from None
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise ValueError(f"re/im must be {dim}x{dim}, got {re.shape} and {im.shape}")
    return DensityMatrix(re + 1j * im)
