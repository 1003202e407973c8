import json
import math

import numpy as np
import pytest

from lambda_esd import config
from lambda_esd.dephasing import DephasingParams, dephase, esd_time_dephasing, lambda_dephasing_closed
from lambda_esd.ensembles import random_x_params
from lambda_esd.entanglement import lambda_distance
from lambda_esd.errors import BadRange
from lambda_esd.esd import Classification, Trajectory, analyze, bisect_root, find_crossings, sample
from lambda_esd.jc import esd_onset_jc_phi, lambda_jc_phi, lambda_jc_psi
from lambda_esd.state import XStateParams, x_state

DASHED = XStateParams.create(1 / 12, 5 / 12, 5 / 12, 1 / 12, 5 / 12)
SOLID = XStateParams.create(0, 1 / 3, 1 / 3, 1 / 3, 1 / 3)


def dephasing_pipeline(p, gamma=1.0):
    rho0 = x_state(p)
    rates = DephasingParams.equal(gamma)
    return lambda t: lambda_distance(dephase(rho0, rates, t)).lam


def phi(alpha, g=1.0):
    return lambda t: lambda_jc_phi(alpha, g, t)


def psi(alpha, g=1.0):
    return lambda t: lambda_jc_psi(alpha, g, t)


class TestSample:
    def test_constant_zero(self):
        traj = sample(lambda t: 0.0, 0.0, 3.0, 7)
        assert np.array_equal(traj.lambdas, np.zeros(7))
        assert traj.times[0] == 0.0 and traj.times[-1] == 3.0

    def test_dashed_grid(self):
        traj = sample(dephasing_pipeline(DASHED), 0.0, 5.0, 501)
        assert traj.lambdas[0] == pytest.approx(2 / 3, abs=1e-12)
        i = np.argmin(np.abs(traj.times - math.log(5)))
        assert abs(traj.lambdas[i]) <= 0.5 * 0.01 / 6 + 1e-12

    def test_psi_nonnegative(self):
        traj = sample(psi(math.pi / 6), 0.0, 2 * math.pi, 629)
        assert traj.lambdas.min() >= -1e-12

    @pytest.mark.parametrize("args", [(1.0, 1.0, 5), (2.0, 1.0, 5), (-1.0, 1.0, 5), (0.0, 1.0, 1), (0.0, np.inf, 5), (0.0, 1.0, 2.5)])
    def test_bad_range(self, args):
        with pytest.raises(BadRange):
            sample(lambda t: 0.0, *args)

    def test_trajectory_validation(self):
        with pytest.raises(BadRange):
            Trajectory(np.array([0.0, 0.0]), np.array([1.0, 1.0]))
        with pytest.raises(BadRange):
            Trajectory(np.array([0.0, 1.0]), np.array([1.0]))
        with pytest.raises(BadRange):
            Trajectory(np.array([0.0]), np.array([1.0]))


class TestBisect:
    def test_linear(self):
        root = bisect_root(lambda t: t - 0.3, 0.0, 1.0)
        assert abs(root - 0.3) < 1e-10

    def test_flat_crossing_needs_narrow_bracket(self):
        root = bisect_root(lambda t: 1e-6 * (t - 0.3), 0.0, 1.0)
        assert abs(root - 0.3) < 1e-11

    def test_iteration_cap(self):
        root = bisect_root(lambda t: 1.0 if t < 0.5 else -1.0, 0.0, 1.0, max_iter=60)
        assert abs(root - 0.5) < 1e-15


class TestGoldens:
    def test_dashed(self):
        _, rep = analyze(dephasing_pipeline(DASHED), 0.0, 5.0, 501)
        assert rep.classification is Classification.MONOTONIC_CROSSING
        assert len(rep.crossings) == 1 and rep.crossings[0].direction == "down"
        assert abs(rep.first_crossing - math.log(5)) < 1e-8
        (iv,) = rep.negative_intervals
        assert iv.open and iv.end == 5.0 and iv.start == rep.first_crossing
        assert rep.window_limited

    def test_solid(self):
        _, rep = analyze(dephasing_pipeline(SOLID), 0.0, 5.0, 501)
        assert rep.classification is Classification.ASYMPTOTIC
        assert rep.crossings == [] and rep.negative_intervals == []
        assert rep.window_limited

    def test_psi_touches(self):
        _, rep = analyze(psi(math.pi / 6), 0.0, 4 * math.pi, 1257)
        assert rep.classification is Classification.PERIODIC_TOUCH
        assert rep.crossings == []
        assert np.allclose(rep.touches, [math.pi, 3 * math.pi], atol=1e-6)

    def test_phi_crossing(self):
        _, rep = analyze(phi(math.pi / 6), 0.0, 4 * math.pi, 1257)
        assert rep.classification is Classification.PERIODIC_CROSSING
        assert [c.direction for c in rep.crossings] == ["down", "up", "down", "up"]
        assert abs(rep.first_crossing - esd_onset_jc_phi(math.pi / 6, 1.0)) < 1e-8
        for iv in rep.negative_intervals:
            assert iv.end - iv.start > 0 and not iv.open

    def test_phi_boundary_alpha(self):
        _, rep = analyze(phi(math.pi / 4), 0.0, 4 * math.pi, 1257)
        assert rep.classification is Classification.PERIODIC_TOUCH

    def test_always_separable(self):
        _, rep = analyze(lambda t: -0.5, 0.0, 1.0, 11)
        assert rep.classification is Classification.ALWAYS_SEPARABLE
        (iv,) = rep.negative_intervals
        assert iv.start == 0.0 and iv.open

    def test_product_state_is_always_separable(self):
        _, rep = analyze(phi(0.0), 0.0, 4 * math.pi, 400)
        assert rep.classification is Classification.ALWAYS_SEPARABLE

    @pytest.mark.parametrize(
        "model, window, n, label",
        [
            (dephasing_pipeline(DASHED), 5.0, 501, "MonotonicCrossing"),
            (dephasing_pipeline(SOLID), 5.0, 501, "Asymptotic"),
            (psi(math.pi / 6), 4 * math.pi, 1257, "PeriodicTouch"),
            (phi(math.pi / 6), 4 * math.pi, 1257, "PeriodicCrossing"),
            (phi(math.pi / 4), 4 * math.pi, 1257, "PeriodicTouch"),
        ],
    )
    def test_stable_under_doubling(self, model, window, n, label):
        for k in (n, 2 * n - 1):
            _, rep = analyze(model, 0.0, window, k)
            assert rep.classification.value == label

    def test_report_json_keys(self):
        _, rep = analyze(phi(math.pi / 6), 0.0, 4 * math.pi, 1257)
        doc = json.loads(json.dumps(rep.as_dict()))
        assert set(doc) == {"crossings", "negative_intervals", "classification", "window_limited"}
        assert set(doc["crossings"][0]) == {"t", "direction"}
        assert set(doc["negative_intervals"][0]) == {"start", "end", "open"}


class TestProperties:
    def test_dephasing_crossings_match_analytic(self, rng):
        checked = 0
        for _ in range(60):
            p = random_x_params(rng, w_zero=True)
            expected = esd_time_dephasing(p, 1.0)
            if expected.time is None or expected.initially_separable or expected.time > 8:
                continue
            _, rep = analyze(lambda t: lambda_dephasing_closed(p, 1.0, t), 0.0, 10.0, 201)
            assert abs(rep.first_crossing - expected.time) < 1e-8
            checked += 1
        assert checked > 10

    def test_jc_phi_first_crossing(self, rng):
        for alpha in rng.uniform(0.05, math.pi / 4 - 0.05, 30):
            _, rep = analyze(phi(alpha, 1.3), 0.0, 4 * math.pi / 1.3, 800)
            assert rep.classification is Classification.PERIODIC_CROSSING
            assert abs(rep.first_crossing - esd_onset_jc_phi(alpha, 1.3)) < 1e-8
            assert all(iv.end > iv.start for iv in rep.negative_intervals)

    def test_crossings_sorted_and_refined(self, rng):
        for alpha in rng.uniform(0.05, 0.7, 10):
            model = phi(alpha)
            _, rep = analyze(model, 0.0, 4 * math.pi, 500)
            times = [c.t for c in rep.crossings]
            assert times == sorted(times)
            assert all(abs(model(x)) < 1e-10 for x in times)
            ends = [(iv.start, iv.end) for iv in rep.negative_intervals]
            assert all(a[1] <= b[0] for a, b in zip(ends, ends[1:]))

    def test_touch_is_not_a_crossing(self):
        traj = Trajectory(np.array([0.0, 1.0, 2.0]), np.array([1.0, 0.0, 1.0]))
        rep = find_crossings(traj, lambda t: (t - 1.0) ** 2)
        assert rep.crossings == [] and rep.touches == [pytest.approx(1.0, abs=1e-6)]


class TestTolerance:
    def test_override_scopes(self):
        calls = []

        def model(t):
            calls.append(t)
            return t - 0.3

        with config.override(crossing=1e-3):
            coarse = bisect_root(model, 0.0, 1.0, xtol=1.0)
        n_coarse = len(calls)
        calls.clear()
        fine = bisect_root(model, 0.0, 1.0, xtol=1.0)
        assert abs(coarse - 0.3) < 1e-3 and abs(fine - 0.3) < 1e-10
        assert n_coarse < len(calls)

    def test_environment_variable(self, monkeypatch):
        monkeypatch.setenv(config.ENV_VAR, "1e-4")
        try:
            assert config.reload_from_env().crossing == 1e-4
        finally:
            monkeypatch.delenv(config.ENV_VAR)
            config.reload_from_env()
        assert config.get().crossing == 1e-10
