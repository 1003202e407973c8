"""Small dense complex linear algebra.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.  The
non-Hermitian eigensolver is restricted to 4x4 input and is written out by
hand (balancing, Householder reduction, shifted QR); the characteristic
polynomial route in :func:`eig4_charpoly` is kept as an independent second
path and as the fallback when QR does not converge.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from . import config
from .errors import ConvergenceFailure, DimensionMismatch, NonFiniteEntry, NotHermitian

_EPS = np.finfo(float).eps


def as_matrix(m, *, square: bool = False) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry("matrix contains NaN or Inf")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry ``((i, j), (k, l))`` is ``a[i, k] * b[j, l]``."""
    a = as_matrix(a)
    b = as_matrix(b)
    (p, q), (r, s) = a.shape, b.shape
    return (a[:, None, :, None] * b[None, :, None, :]).reshape(p * r, q * s)


def hermiticity_error(h) -> float:
    h = np.asarray(h)
    return float(np.max(np.abs(h - dagger(h)))) if h.size else 0.0


def eig_hermitian(h, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    values : ndarray
        Real eigenvalues in descending order.
    vectors : ndarray
        Orthonormal eigenvectors stored as columns, ``vectors[:, k]``
        belonging to ``values[k]``.
    """
    h = as_matrix(h, square=True)
    if tol is None:
        tol = config.get().hermitian_input
    err = hermiticity_error(h)
    if err > tol:
        raise NotHermitian(f"max |h - h^dagger| = {err:.3e} exceeds {tol:.1e}")
    # symmetrize so LAPACK sees an exactly Hermitian input
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return w[::-1].copy(), v[:, ::-1].copy()


# ---------------------------------------------------------------------------
# 4x4 general eigenvalues
# ---------------------------------------------------------------------------

def _balance(a: list[list[complex]]) -> None:
    """In-place diagonal similarity scaling by powers of two."""
    n = len(a)
    radix = 2.0
    sqrdx = radix * radix
    done = False
    while not done:
        done = True
        for i in range(n):
            r = c = 0.0
            for j in range(n):
                if j != i:
                    c += abs(a[j][i].real) + abs(a[j][i].imag)
                    r += abs(a[i][j].real) + abs(a[i][j].imag)
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= sqrdx
            g = r * radix
            while c > g:
                f /= radix
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                g = 1.0 / f
                for j in range(n):
                    a[i][j] *= g
                for j in range(n):
                    a[j][i] *= f


def _hessenberg(a: list[list[complex]]) -> None:
    """In-place Householder reduction to upper Hessenberg form."""
    n = len(a)
    for k in range(n - 2):
        x = [a[i][k] for i in range(k + 1, n)]
        alpha = math.sqrt(sum(abs(v) ** 2 for v in x))
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        u = list(x)
        u[0] += phase * alpha
        unorm2 = sum(abs(v) ** 2 for v in u)
        if unorm2 == 0.0:
            continue
        # left: A <- (I - 2 u u^H / |u|^2) A on rows k+1..n-1
        for j in range(n):
            s = sum(u[i].conjugate() * a[k + 1 + i][j] for i in range(len(u)))
            s = 2.0 * s / unorm2
            for i in range(len(u)):
                a[k + 1 + i][j] -= s * u[i]
        # right: A <- A (I - 2 u u^H / |u|^2) on columns k+1..n-1
        for i in range(n):
            s = sum(a[i][k + 1 + j] * u[j] for j in range(len(u)))
            s = 2.0 * s / unorm2
            for j in range(len(u)):
                a[i][k + 1 + j] -= s * u[j].conjugate()
        for i in range(k + 2, n):
            a[i][k] = 0.0


def _eig2(a: complex, b: complex, c: complex, d: complex) -> tuple[complex, complex]:
    half_tr = 0.5 * (a + d)
    disc = cmath.sqrt(0.25 * (a - d) ** 2 + b * c)
    l1 = half_tr + disc
    l2 = half_tr - disc
    # recover the smaller root from the product to avoid cancellation
    det = a * d - b * c
    if abs(l1) >= abs(l2) and l1 != 0:
        l2 = det / l1
    elif l2 != 0:
        l1 = det / l2
    return l1, l2


def _qr_hessenberg(h: list[list[complex]], max_iter: int) -> list[complex]:
    """Eigenvalues of an upper Hessenberg matrix by shifted complex QR."""
    n = len(h)
    norm = sum(abs(h[i][j]) for i in range(n) for j in range(n)) or 1.0
    eigs: list[complex] = []
    hi = n - 1
    its = 0
    total = 0
    while hi >= 0:
        if hi == 0:
            eigs.append(h[0][0])
            break
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1][lo - 1]) + abs(h[lo][lo])
            if s == 0.0:
                s = norm
            if abs(h[lo][lo - 1]) <= _EPS * s:
                h[lo][lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs.append(h[hi][hi])
            hi -= 1
            its = 0
            continue
        if lo == hi - 1:
            eigs.extend(_eig2(h[lo][lo], h[lo][hi], h[hi][lo], h[hi][hi]))
            hi -= 2
            its = 0
            continue
        if total >= max_iter:
            raise ConvergenceFailure(f"QR did not converge in {max_iter} iterations")
        total += 1
        its += 1

        if its % 10 == 0:
            # exceptional shift to break cycles
            mu = h[hi][hi] + abs(h[hi][hi - 1].real) + abs(h[hi - 1][hi - 2].real) * 1j
        else:
            l1, l2 = _eig2(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
            mu = l1 if abs(l1 - h[hi][hi]) < abs(l2 - h[hi][hi]) else l2

        m = hi - lo + 1
        blk = [[h[lo + i][lo + j] for j in range(m)] for i in range(m)]
        for i in range(m):
            blk[i][i] -= mu
        rots = []
        for k in range(m - 1):
            x, y = blk[k][k], blk[k + 1][k]
            r = math.hypot(abs(x), abs(y))
            if r == 0.0:
                c, s = 1.0 + 0j, 0j
            else:
                c, s = x / r, y / r
            rots.append((c, s))
            cc, sc = c.conjugate(), s.conjugate()
            rk, rk1 = blk[k], blk[k + 1]
            for j in range(k, m):
                u, v = rk[j], rk1[j]
                rk[j] = cc * u + sc * v
                rk1[j] = -s * u + c * v
        for k, (c, s) in enumerate(rots):
            sc = s.conjugate()
            cc = c.conjugate()
            for i in range(min(k + 2, m)):
                u, v = blk[i][k], blk[i][k + 1]
                blk[i][k] = u * c + v * s
                blk[i][k + 1] = -u * sc + v * cc
        for i in range(m):
            blk[i][i] += mu
            for j in range(m):
                h[lo + i][lo + j] = blk[i][j]
        for i in range(lo + 2, hi + 1):
            for j in range(lo, i - 1):
                h[i][j] = 0.0
    return eigs


def eig4_qr(m, max_iter: int | None = None) -> np.ndarray:
    """Eigenvalues of a 4x4 matrix: balance, Hessenberg, shifted QR.

    Raises :class:`ConvergenceFailure` when the iteration budget is spent.
    """
    a = _as4(m)
    if max_iter is None:
        max_iter = config.get().qr_max_iter
    rows = [[complex(v) for v in row] for row in a]
    _balance(rows)
    _hessenberg(rows)
    return np.array(_qr_hessenberg(rows, max_iter), dtype=complex)


def charpoly4(m) -> np.ndarray:
    """Coefficients ``[1, c3, c2, c1, c0]`` of ``det(lambda I - m)`` (Faddeev-LeVerrier)."""
    a = _as4(m)
    n = 4
    coeffs = [1.0 + 0j]
    mk = np.zeros_like(a)
    eye = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        mk = a @ (mk + coeffs[-1] * eye)
        coeffs.append(-np.trace(mk) / k)
    return np.array(coeffs, dtype=complex)


def _polish(coeffs: np.ndarray, root: complex, steps: int = 8) -> complex:
    dcoeffs = np.polyder(coeffs)
    best, best_val = root, abs(np.polyval(coeffs, root))
    z = root
    for _ in range(steps):
        d = np.polyval(dcoeffs, z)
        if d == 0:
            break
        z = z - np.polyval(coeffs, z) / d
        val = abs(np.polyval(coeffs, z))
        if not np.isfinite(val):
            break
        if val < best_val:
            best, best_val = z, val
    return complex(best)


def eig4_charpoly(m) -> np.ndarray:
    """Eigenvalues of a 4x4 matrix as polished roots of its characteristic polynomial.

    Roots are first taken from the companion matrix (``numpy.roots``) and
    then improved by Newton steps that are kept only when they reduce the
    polynomial residual.
    """
    coeffs = charpoly4(m)
    roots = np.roots(coeffs)
    if roots.size < 4:  # leading zeros stripped: pad with zero roots
        roots = np.concatenate([roots, np.zeros(4 - roots.size, dtype=complex)])
    return np.array([_polish(coeffs, r) for r in roots], dtype=complex)


def eig4_general(m) -> np.ndarray:
    """The four eigenvalues of a complex 4x4 matrix, in no particular order.

    Uses :func:`eig4_qr` and falls back to :func:`eig4_charpoly` if the QR
    iteration does not converge within the configured budget.
    """
    try:
        return eig4_qr(m)
    except ConvergenceFailure:
        return eig4_charpoly(m)


def eig_residuals(m, values) -> np.ndarray:
    """Relative backward error ``sigma_min(m - lambda I) / ||m||_2`` per eigenvalue."""
    a = as_matrix(m, square=True)
    scale = np.linalg.norm(a, 2) or 1.0
    eye = np.eye(a.shape[0])
    return np.array(
        [np.linalg.svd(a - lam * eye, compute_uv=False)[-1] / scale for lam in values]
    )


def _as4(m) -> np.ndarray:
    a = as_matrix(m, square=True)
    if a.shape != (4, 4):
        raise DimensionMismatch(f"expected a 4x4 matrix, got shape {a.shape}")
    return a
