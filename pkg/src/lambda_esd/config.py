"""Central numerical tolerances.

Every module reads its thresholds from :func:`get`.  Values can be
overridden for a block of code with :func:`override`, or process-wide via
the ``LAMBDA_ESD_TOLERANCE`` environment variable, which sets the crossing
refinement target used by the trajectory machinery.
"""

from __future__ import annotations

import contextlib
import dataclasses
import os

ENV_VAR = "LAMBDA_ESD_TOLERANCE"


@dataclasses.dataclass(frozen=True)
class Tolerances:
    hermitian_input: float = 1e-12      # eig_hermitian precondition
    state_hermitian: float = 1e-10
    state_trace: float = 1e-10
    state_psd: float = 1e-9             # min eigenvalue floor
    pure_norm: float = 1e-12
    x_trace: float = 1e-12
    x_renormalize: float = 1e-9         # populations off by less are rescaled
    x_positivity: float = 1e-12
    eig_negative_clamp: float = 1e-9    # zeta eigenvalues >= -this are clamped
    eig_imag_reject: float = 1e-8
    qr_max_iter: int = 400
    crossing: float = 1e-10             # |lambda| target for bisection
    crossing_max_iter: int = 60
    touch: float = 1e-9
    truncation_leak: float = 1e-12


def _from_env() -> Tolerances:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return Tolerances()
    value = float(raw)
    if not value > 0:
        raise ValueError(f"{ENV_VAR} must be a positive number, got {raw!r}")
    return Tolerances(crossing=value)


_current = _from_env()


def get() -> Tolerances:
    return _current


def reload_from_env() -> Tolerances:
    global _current
    _current = _from_env()
    return _current


@contextlib.contextmanager
def override(**changes):
    """Temporarily replace selected tolerances (not thread-safe)."""
    global _current
    saved = _current
    _current = dataclasses.replace(saved, **changes)
    try:
        yield _current
    finally:
        _current = saved
