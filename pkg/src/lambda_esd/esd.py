"""Sampling Lambda(t), locating boundary crossings, and labelling trajectories.

A model is any callable ``t -> Lambda(t)``.  Crossings are strict sign
changes between samples (values within the touch tolerance count as zero),
refined by bisection.  Touches are zeros of Lambda that are not sign
changes, found by minimizing ``|Lambda|`` around small sampled minima.
"""

from __future__ import annotations

import dataclasses
import enum
from collections.abc import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from . import config
from .errors import BadRange

Model = Callable[[float], float]

_XTOL = 1e-12


class Classification(str, enum.Enum):
    ASYMPTOTIC = "Asymptotic"
    MONOTONIC_CROSSING = "MonotonicCrossing"
    PERIODIC_TOUCH = "PeriodicTouch"
    PERIODIC_CROSSING = "PeriodicCrossing"
    ALWAYS_SEPARABLE = "AlwaysSeparable"


@dataclasses.dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    lambdas: np.ndarray
    model_tag: str = ""

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        lam = np.asarray(self.lambdas, dtype=float)
        if t.ndim != 1 or t.shape != lam.shape or t.size < 2:
            raise BadRange("times and lambdas must be 1-D arrays of equal length >= 2")
        if not np.all(np.diff(t) > 0):
            raise BadRange("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "lambdas", lam)


@dataclasses.dataclass(frozen=True)
class Crossing:
    t: float
    direction: str  # "down" (into the separable side) or "up"


@dataclasses.dataclass(frozen=True)
class NegativeInterval:
    start: float
    end: float
    open: bool = False


@dataclasses.dataclass(frozen=True)
class CrossingReport:
    crossings: list[Crossing]
    negative_intervals: list[NegativeInterval]
    classification: Classification
    window_limited: bool
    touches: list[float] = dataclasses.field(default_factory=list)

    @property
    def first_crossing(self) -> float | None:
        return self.crossings[0].t if self.crossings else None

    def as_dict(self) -> dict:
        return {
            "crossings": [{"t": c.t, "direction": c.direction} for c in self.crossings],
            "negative_intervals": [
                {"start": iv.start, "end": iv.end, "open": iv.open} for iv in self.negative_intervals
            ],
            "classification": self.classification.value,
            "window_limited": self.window_limited,
        }


def sample(model: Model, t0: float, t1: float, n: int, model_tag: str = "") -> Trajectory:
    """Evaluate ``model`` on ``n`` evenly spaced times covering ``[t0, t1]``."""
    if not (np.isfinite(t0) and np.isfinite(t1)) or t0 < 0 or not t1 > t0:
        raise BadRange(f"need 0 <= t0 < t1, got t0={t0!r}, t1={t1!r}")
    if int(n) != n or n < 2:
        raise BadRange(f"need at least 2 samples, got {n!r}")
    times = np.linspace(t0, t1, int(n))
    return Trajectory(times, np.array([model(float(t)) for t in times]), model_tag)


def bisect_root(model: Model, lo: float, hi: float, f_lo: float | None = None,
                tol: float | None = None, max_iter: int | None = None,
                xtol: float = _XTOL) -> float:
    """Refine a sign change of ``model`` on ``[lo, hi]``.

    Stops once ``|model(mid)| < tol`` and the bracket is narrower than
    ``xtol`` (relative), or after ``max_iter`` halvings.  The bracket
    condition matters where Lambda is flat at the crossing.
    """
    cfg = config.get()
    tol = cfg.crossing if tol is None else tol
    max_iter = cfg.crossing_max_iter if max_iter is None else max_iter
    if f_lo is None:
        f_lo = model(lo)
    width = xtol * max(1.0, abs(hi))
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = model(mid)
        if f_mid == 0 or (abs(f_mid) < tol and hi - lo < width):
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return mid


def _signs(lam: np.ndarray, touch: float) -> np.ndarray:
    return np.where(lam > touch, 1, np.where(lam < -touch, -1, 0))


def _touches(model: Model, traj: Trajectory, signs: np.ndarray, crossings: list[Crossing],
             touch: float) -> list[float]:
    t, lam = traj.times, traj.lambdas
    mag = np.abs(lam)
    step = t[1] - t[0]
    found: list[float] = []
    for i in range(1, len(t) - 1):
        if not (mag[i] <= mag[i - 1] and mag[i] <= mag[i + 1]):
            continue
        # a sampled sign change through here is a crossing, not a touch
        if signs[i - 1] * signs[i + 1] < 0:
            continue
        res = minimize_scalar(lambda s: abs(model(s)), bounds=(t[i - 1], t[i + 1]),
                              method="bounded", options={"xatol": 1e-12})
        tm, fm = float(res.x), abs(model(float(res.x)))
        if mag[i] < fm:
            tm, fm = float(t[i]), float(mag[i])
        if fm > touch:
            continue
        if any(abs(tm - c.t) <= 2 * step for c in crossings):
            continue
        if found and abs(tm - found[-1]) <= 2 * step:
            continue
        found.append(tm)
    return found


def find_crossings(traj: Trajectory, model: Model) -> CrossingReport:
    """Locate and refine boundary crossings and touches, then classify.

    Rules: AlwaysSeparable if Lambda never exceeds the touch tolerance;
    PeriodicCrossing for two or more strict sign changes; MonotonicCrossing
    for exactly one; PeriodicTouch for zeros without sign change;
    Asymptotic otherwise.  ``window_limited`` marks labels that depend on
    behaviour outside the sampled window.
    """
    cfg = config.get()
    t, lam = traj.times, traj.lambdas
    signs = _signs(lam, cfg.touch)

    crossings: list[Crossing] = []
    prev = None  # index of last sample with a definite sign
    for i, s in enumerate(signs):
        if s == 0:
            continue
        if prev is not None and signs[prev] != s:
            root = bisect_root(model, float(t[prev]), float(t[i]), f_lo=float(lam[prev]))
            crossings.append(Crossing(root, "down" if s < 0 else "up"))
        prev = i

    intervals: list[NegativeInterval] = []
    definite = signs[signs != 0]
    start = float(t[0]) if definite.size and definite[0] < 0 else None
    for c in crossings:
        if c.direction == "down":
            start = c.t
        elif start is not None:
            intervals.append(NegativeInterval(start, c.t))
            start = None
    if start is not None:
        intervals.append(NegativeInterval(start, float(t[-1]), open=True))

    touches = _touches(model, traj, signs, crossings, cfg.touch)

    window_limited = bool(intervals and intervals[-1].open)
    if not np.any(lam > cfg.touch):
        label = Classification.ALWAYS_SEPARABLE
    elif len(crossings) >= 2:
        label = Classification.PERIODIC_CROSSING
    elif len(crossings) == 1:
        label = Classification.MONOTONIC_CROSSING
    elif touches:
        label = Classification.PERIODIC_TOUCH
        window_limited = window_limited or len(touches) < 2
    else:
        label = Classification.ASYMPTOTIC
        window_limited = True
    return CrossingReport(crossings, intervals, label, window_limited, touches)


def analyze(model: Model, t0: float, t1: float, n: int, model_tag: str = "") -> tuple[Trajectory, CrossingReport]:
    traj = sample(model, t0, t1, n, model_tag)
    return traj, find_crossings(traj, model)
